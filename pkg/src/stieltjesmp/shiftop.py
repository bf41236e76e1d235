"""The non-negative Hermitian shift operator and its defect subspaces.

On the representation space the data prescribe ``A xi_k = xi_{k+N}`` for
``0 <= k < n*N``; the domain is the span of the first ``n*N`` coordinate
vectors.  Because the truncated Gram may be rank-deficient, this prescription
is not automatically well defined: the least-squares solution is accepted only
when its residual is negligible, otherwise the truncated data simply do not
determine the operator and :class:`InconsistentTruncation` is raised.

Defect subspaces are computed exactly as the finite-dimensional geometry
dictates: the defect space at ``z`` is the orthogonal complement of
``(A - z) D(A)``, spanned by the projections of the first ``N`` coordinate
vectors onto that complement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import orth_cols, project
from .errors import BadPoint, InconsistentTruncation, OrderTooLow, PropertyViolated

__all__ = [
    "ShiftOperator",
    "DefectData",
    "build_shift",
    "check_nonneg_hermitian",
    "defect_subspace",
]

DEFAULT_CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True)
class ShiftOperator:
    """Matrix of the shift on its domain subspace.

    ``matrix`` acts as the operator only on vectors in the span of
    ``domain_basis``; its action elsewhere is an artifact of the
    least-squares construction and is never used.
    """

    rep: object
    domain_basis: np.ndarray  # (d, q1) orthonormal
    matrix: np.ndarray  # (d, d)
    consistency_residual: float
    N: int

    @property
    def dim(self):
        return self.rep.dim

    @property
    def domain_dim(self):
        return self.domain_basis.shape[1]


@dataclass(frozen=True)
class DefectData:
    """Range/defect decomposition at a point z off ``[0, inf)``."""

    z: complex
    range_basis: np.ndarray  # orthonormal basis of (A - z) D(A)
    y_vectors: np.ndarray  # columns xi_k - P xi_k, k < N
    defect_basis: np.ndarray  # orthonormal basis of the defect space
    index: int


def _off_positive_axis(z):
    z = complex(z)
    return not (z.imag == 0.0 and z.real >= 0.0)


def build_shift(rep, N=None, tol=DEFAULT_CONSISTENCY_TOL):
    """Solve ``A xi_k = xi_{k+N}`` on the domain span in least squares.

    Raises
    ------
    OrderTooLow
        The sequence stops at ``S_0`` or ``S_1`` (empty domain, n = 0).
    InconsistentTruncation
        The least-squares residual exceeds ``tol`` relative to the shifted
        vectors, i.e. the kernel of the domain Gram is not mapped into the
        kernel of the shifted Gram.
    """
    if N is None:
        N = rep.gram.N
    n = rep.gram.n
    if n < 1:
        raise OrderTooLow("need moments through S_2 to define the shift")
    X = rep.vectors
    dom = X[:, : n * N]
    img = X[:, N:]
    A = img @ np.linalg.pinv(dom, rcond=1e-12)
    target = np.linalg.norm(img, axis=0)
    achieved = np.linalg.norm(A @ dom - img, axis=0)
    top = float(target.max()) if target.size else 0.0
    residual = float(achieved.max()) / top if top > 0.0 else 0.0
    if residual > tol:
        raise InconsistentTruncation(
            f"shift relation residual {residual:.3e} exceeds {tol:.1e}; the "
            "degenerate truncated data do not determine the shift operator"
        )
    return ShiftOperator(
        rep=rep,
        domain_basis=orth_cols(dom),
        matrix=A,
        consistency_residual=residual,
        N=int(N),
    )


def check_nonneg_hermitian(op, trials=64, seed=0, tol=1e-9):
    """Sample Hermitian symmetry and non-negativity of A on its domain.

    For pseudo-random x, y in D(A) checks ``(Ax, y) = (x, Ay)`` and
    ``(Ax, x) >= -tol * ||x||^2``.  Deterministic given ``seed``.  Returns a
    small report dict; raises :class:`PropertyViolated` with a witness vector
    on failure.
    """
    rng = np.random.default_rng(seed)
    B = op.domain_basis
    q1 = B.shape[1]
    A = op.matrix
    if q1 == 0:
        return {"trials": 0, "max_symmetry_defect": 0.0, "min_rayleigh": 0.0}
    opnorm = max(float(np.linalg.norm(A @ B, ord=2)), 1e-300)
    max_sym = 0.0
    min_ray = np.inf
    for _ in range(int(trials)):
        cx = rng.standard_normal(q1) + 1j * rng.standard_normal(q1)
        cy = rng.standard_normal(q1) + 1j * rng.standard_normal(q1)
        x = B @ cx
        y = B @ cy
        sym = abs(np.vdot(y, A @ x) - np.vdot(A @ y, x))
        nx = float(np.linalg.norm(x)) ** 2
        ray = float(np.vdot(x, A @ x).real)
        max_sym = max(max_sym, sym / (opnorm * np.linalg.norm(x) * np.linalg.norm(y)))
        min_ray = min(min_ray, ray / nx)
        if sym > tol * opnorm * np.linalg.norm(x) * np.linalg.norm(y):
            raise PropertyViolated(
                f"Hermitian symmetry defect {sym:.3e} on the domain", witness=x
            )
        if ray < -tol * nx:
            raise PropertyViolated(
                f"negative form value {ray:.3e} for ||x||^2 = {nx:.3e}", witness=x
            )
    return {
        "trials": int(trials),
        "max_symmetry_defect": float(max_sym),
        "min_rayleigh": float(min_ray),
    }


def defect_subspace(op, z):
    """Range and defect decomposition of ``(A - z) D(A)`` at ``z``.

    ``z`` must avoid ``[0, inf)``.  Returns a :class:`DefectData` whose
    ``index`` is the dimension of the orthogonal complement of the range,
    spanned by the complement-projections of ``xi_0 .. xi_{N-1}``.
    """
    z = complex(z)
    if not _off_positive_axis(z):
        raise BadPoint(f"z = {z} lies on [0, inf)")
    d = op.dim
    B = op.domain_basis
    rng_basis = orth_cols((op.matrix - z * np.eye(d)) @ B) if B.shape[1] else np.zeros(
        (d, 0), dtype=complex
    )
    X = op.rep.vectors
    ys = []
    for k in range(min(op.N, X.shape[1])):
        xi = X[:, k]
        ys.append(xi - project(rng_basis, xi))
    Y = np.column_stack(ys) if ys else np.zeros((d, 0), dtype=complex)
    # Rank decisions for the y's are made against the scale of the coordinate
    # vectors themselves, not of Y: when the defect is trivial every y is pure
    # roundoff and must not masquerade as a direction.
    scale = float(np.linalg.norm(X, axis=0).max()) if X.size else 0.0
    if Y.size and scale > 0.0:
        kept = Y[:, np.linalg.norm(Y, axis=0) > 1e-8 * scale]
        defect = orth_cols(kept)
    else:
        defect = np.zeros((d, 0), dtype=complex)
    return DefectData(
        z=z,
        range_basis=rng_basis,
        y_vectors=Y,
        defect_basis=defect,
        index=defect.shape[1],
    )
