"""Moment sequences, block Hankel matrices, the scalarized Gram, and the
positive-semidefiniteness solvability check.

The data of the problem are Hermitian ``N x N`` matrices ``S_0 .. S_m``: the
power moments of a sought non-decreasing matrix function on ``[0, inf)``.
Solvability is governed by two families of block Hankel matrices: the plain
one with block ``(i, j)`` equal to ``S_{i+j}`` and the shifted one with block
``S_{i+j+1}``; the problem admits a solution exactly when every representable
matrix of both families is positive semi-definite.

Everything downstream works with the scalarized Gram: the plain block Hankel
of maximal representable order ``n = floor(m/2)`` viewed entrywise, so that
``gamma[r*N + j, t*N + k] = S_{r+t}[j, k]``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._linalg import asymmetry, herm
from .errors import NotHermitian, OrderTooHigh, SchemaError
from .io import parse_matrix

__all__ = [
    "MomentSequence",
    "BlockHankel",
    "ScalarGram",
    "SolvabilityReport",
    "moment_sequence",
    "load_moments",
    "build_gamma",
    "build_gamma_tilde",
    "scalarize",
    "check_solvable",
]

#: default relative asymmetry tolerated (and silently symmetrized) on input
DEFAULT_ATOL = 1e-12

#: default relative PSD tolerance of the solvability verdict
DEFAULT_PSD_TOL = 1e-10


@dataclass(frozen=True)
class MomentSequence:
    """A finite prefix ``S_0 .. S_m`` of Hermitian ``N x N`` moment matrices."""

    N: int
    moments: tuple

    @property
    def m(self):
        """Highest moment index."""
        return len(self.moments) - 1

    @property
    def n(self):
        """Construction order: largest n with ``S_{2n}`` available."""
        return self.m // 2

    def moment(self, p):
        return self.moments[p]

    def scale(self):
        """max(1, largest entry magnitude); reference for relative tolerances."""
        top = max((float(np.abs(S).max()) for S in self.moments), default=0.0)
        return max(1.0, top)


@dataclass(frozen=True)
class BlockHankel:
    """A block Hankel matrix of the plain (``S_{i+j}``) or shifted
    (``S_{i+j+1}``) family."""

    order: int
    entries: np.ndarray
    kind: str  # "plain" | "shifted"


@dataclass(frozen=True)
class ScalarGram:
    """The maximal plain block Hankel matrix viewed as a scalar Gram matrix.

    ``gamma[r*N + j, t*N + k] = S_{r+t}[j, k]`` for ``0 <= r, t <= n``.  The
    construction copies each entry from the same source matrix, so the shift
    identity ``gamma[a + N, b] == gamma[a, b + N]`` holds bit-for-bit.
    """

    size: int
    gamma: np.ndarray
    N: int
    n: int


@dataclass(frozen=True)
class SolvabilityReport:
    """Minimum eigenvalues of every representable Hankel matrix and the
    resulting verdict."""

    plain_min_eigs: tuple
    shifted_min_eigs: tuple
    plain_scales: tuple
    shifted_scales: tuple
    verdict: str  # "solvable" | "not solvable" | "marginal"
    psd_tol: float
    max_plain_order: int
    max_shifted_order: int

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "psd_tol": self.psd_tol,
            "plain_min_eigs": list(self.plain_min_eigs),
            "shifted_min_eigs": list(self.shifted_min_eigs),
            "plain_scales": list(self.plain_scales),
            "shifted_scales": list(self.shifted_scales),
            "max_plain_order": self.max_plain_order,
            "max_shifted_order": self.max_shifted_order,
            "note": (
                "verdict certifies positive semi-definiteness of the block "
                "Hankel matrices up to the stated orders only"
            ),
        }


def _validate_matrices(mats, N, atol):
    """Hermitian-validate and symmetrize a list of N x N arrays."""
    out = []
    for p, S in enumerate(mats):
        S = np.asarray(S, dtype=complex)
        if S.shape != (N, N):
            raise SchemaError(f"moment {p}: expected shape {(N, N)}, got {S.shape}")
        scale = max(1.0, float(np.abs(S).max()))
        asym = asymmetry(S)
        if asym > atol * scale:
            raise NotHermitian(
                f"moment {p} deviates from Hermitian symmetry by {asym:.3e} "
                f"(tolerance {atol * scale:.3e})"
            )
        if asym > 0.0:
            warnings.warn(
                f"moment {p}: symmetrized asymmetry {asym:.3e}", stacklevel=3
            )
            S = herm(S)
        out.append(S)
    return tuple(out)


def moment_sequence(matrices, N=None, atol=DEFAULT_ATOL):
    """Build a validated :class:`MomentSequence` from in-memory matrices."""
    matrices = [np.atleast_2d(np.asarray(S, dtype=complex)) for S in matrices]
    if not matrices:
        raise SchemaError("a moment sequence needs at least S_0")
    if N is None:
        N = matrices[0].shape[0]
    if N < 1:
        raise SchemaError("block size N must be >= 1")
    return MomentSequence(N=int(N), moments=_validate_matrices(matrices, N, atol))


def load_moments(raw, atol=DEFAULT_ATOL):
    """Validate a parsed moments document and return a :class:`MomentSequence`.

    Parameters
    ----------
    raw : dict
        Parsed JSON of shape ``{"N": int, "moments": [matrix, ...]}`` where a
        matrix is a row-major nested array of ``[re, im]`` pairs (bare reals
        accepted).
    atol : float
        Relative asymmetry tolerance; deviations up to ``atol * scale`` are
        symmetrized with a warning, anything larger raises.

    Raises
    ------
    SchemaError
        Malformed document.
    NotHermitian
        A moment matrix is asymmetric beyond tolerance.
    """
    if not isinstance(raw, dict):
        raise SchemaError("moments document must be a JSON object")
    if "N" not in raw or "moments" not in raw:
        raise SchemaError("moments document must have keys 'N' and 'moments'")
    N = raw["N"]
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise SchemaError("'N' must be a positive integer")
    mom_raw = raw["moments"]
    if not isinstance(mom_raw, list) or not mom_raw:
        raise SchemaError("'moments' must be a non-empty array")
    mats = [
        parse_matrix(Sj, shape=(N, N), where=f"moments[{p}]")
        for p, Sj in enumerate(mom_raw)
    ]
    return MomentSequence(N=N, moments=_validate_matrices(mats, N, atol))


def build_gamma(seq, n):
    """Plain block Hankel of order n: block ``(i, j)`` is ``S_{i+j}``."""
    if 2 * n > seq.m:
        raise OrderTooHigh(f"order {n} needs S_{2 * n} but data stop at S_{seq.m}")
    N = seq.N
    G = np.empty(((n + 1) * N, (n + 1) * N), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1):
            G[i * N : (i + 1) * N, j * N : (j + 1) * N] = seq.moments[i + j]
    return BlockHankel(order=n, entries=G, kind="plain")


def build_gamma_tilde(seq, n):
    """Shifted block Hankel of order n: block ``(i, j)`` is ``S_{i+j+1}``."""
    if 2 * n + 1 > seq.m:
        raise OrderTooHigh(f"order {n} needs S_{2 * n + 1} but data stop at S_{seq.m}")
    N = seq.N
    G = np.empty(((n + 1) * N, (n + 1) * N), dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1):
            G[i * N : (i + 1) * N, j * N : (j + 1) * N] = seq.moments[i + j + 1]
    return BlockHankel(order=n, entries=G, kind="shifted")


def scalarize(seq):
    """Scalarized Gram of the maximal representable order ``n = floor(m/2)``."""
    n = seq.n
    G = build_gamma(seq, n).entries
    return ScalarGram(size=(n + 1) * seq.N, gamma=G, N=seq.N, n=n)


def check_solvable(seq, psd_tol=DEFAULT_PSD_TOL):
    """Report minimum eigenvalues of every representable Hankel matrix.

    The verdict is ``"solvable"`` when each minimum eigenvalue clears
    ``-psd_tol * scale`` with margin ``+psd_tol * scale`` (scale is
    ``max(1, |entries|)`` of the matrix at hand), ``"marginal"`` when some
    minimum sits inside the roundoff band around zero, and
    ``"not solvable"`` when some minimum is decisively negative.
    """
    plain, p_scales = [], []
    for k in range(seq.n + 1):
        G = build_gamma(seq, k).entries
        plain.append(float(np.linalg.eigvalsh(herm(G)).min()))
        p_scales.append(max(1.0, float(np.abs(G).max())))
    shifted, s_scales = [], []
    for k in range((seq.m - 1) // 2 + 1):
        G = build_gamma_tilde(seq, k).entries
        shifted.append(float(np.linalg.eigvalsh(herm(G)).min()))
        s_scales.append(max(1.0, float(np.abs(G).max())))

    verdict = "solvable"
    for eigs, scales in ((plain, p_scales), (shifted, s_scales)):
        for ev, sc in zip(eigs, scales):
            if ev < -psd_tol * sc:
                verdict = "not solvable"
            elif ev < psd_tol * sc and verdict == "solvable":
                verdict = "marginal"

    return SolvabilityReport(
        plain_min_eigs=tuple(plain),
        shifted_min_eigs=tuple(shifted),
        plain_scales=tuple(p_scales),
        shifted_scales=tuple(s_scales),
        verdict=verdict,
        psd_tol=psd_tol,
        max_plain_order=seq.n,
        max_shifted_order=(seq.m - 1) // 2,
    )
