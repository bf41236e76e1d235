"""Boundary-parameter machinery: gamma field, Weyl function, Stieltjes-class
parameters, and the resolvent formula generating every solution.

With ``J`` an isometry onto the defect space at the base point ``-1`` and
``R_z`` the resolvent of the Friedrichs-corner extension ``t_mu``, the pair

    gamma(z) = (E + (z+1) R_z) J,
    M(z)     = (z+1) J* (E + (z+1) R_z) J,

satisfies ``M(z) - M(w)* = (z - conj(w)) gamma(w)* gamma(z)`` (so ``M`` is a
matrix Herglotz function, normalized by ``M(-1) = 0``) and maps the defect
space onto the defect space at ``z``.  Generalized resolvents are then

    R(tau, z) = R_z - gamma(z) (tau(z) + M(z) - M(0))^{-1} gamma(conj(z))*,

a bijection between admissible parameters ``tau`` and the compressions to the
representation space of resolvents of non-negative extensions (possibly in a
larger space).  Hermitian-constant parameters correspond exactly to the
extensions inside the space: ``tau = 0`` recovers the Krein corner ``t_M`` and
the ideal parameter (``tau = infinity``) recovers ``t_mu`` itself.

Admissibility is the sampled kernel test: both ``tau(z)`` and ``tau(z)/z``
must have positive semi-definite Nevanlinna kernels on upper-half-plane
sample points.  Consequences worth spelling out, because they fix all signs
downstream: constant members are the Hermitian ``tau <= 0``; rational members
``tau_0 + sum W_k / (p_k - z)`` need PSD residues ``W_k``, poles ``p_k`` on
the positive axis, and ``tau(0^-) <= 0``; a non-negative linear slope in z is
admissible (it encodes relation-type behaviour of the parameter at infinity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import asymmetry, complement, herm, min_eigh
from .errors import (
    NotIndeterminate,
    NotStieltjesClass,
    ParameterDegenerate,
    PropertyViolated,
    SchemaError,
    WeylLimitDivergent,
)
from .extensions import (
    ExtendedOperator,
    clustered_eigh,
    determinacy,
    resolvent_from_contraction,
)
from .io import parse_matrix

__all__ = [
    "GammaWeyl",
    "TauParameter",
    "build_gamma_weyl",
    "make_tau",
    "check_stieltjes_class",
    "krein_resolvent",
    "solution_transform",
    "constant_tau_of_extension",
    "extension_of_constant_tau",
    "DEFAULT_CLASS_POINTS",
]

#: default upper-half-plane sample set for the class kernel test
DEFAULT_CLASS_POINTS = (1j, 2j, 1 + 1j, -1 + 1j, 0.5 + 1.5j)

#: condition-number guard for the parameter block of the resolvent formula
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class GammaWeyl:
    """Gamma field and Weyl function data, based at ``z0 = -1``."""

    J: np.ndarray  # (d, q) isometry onto the defect space
    t_mu: np.ndarray  # Friedrichs-corner contraction
    M0: np.ndarray  # (q, q) limit of M at 0
    q: int

    @property
    def dim(self):
        return self.t_mu.shape[0]

    def r_mu(self, z):
        """Resolvent of the Friedrichs-corner extension."""
        return resolvent_from_contraction(self.t_mu, z)

    def gamma(self, z):
        return self.J + (z + 1.0) * (self.r_mu(z) @ self.J)

    def gamma_star(self, z):
        """``gamma(conj(z))*``, evaluated directly."""
        return self.J.conj().T + (z + 1.0) * (self.J.conj().T @ self.r_mu(z))

    def M(self, z):
        return (z + 1.0) * (self.J.conj().T @ self.gamma(z))


def build_gamma_weyl(ext, zero_tol=1e-9, overlap_tol=1e-10):
    """Gamma field / Weyl function of a completely indeterminate picture.

    Parameters
    ----------
    ext : ExtendedOperator or ContractionPicture
        Picture with extremal extensions whose gap has trivial kernel on the
        defect space (apply :func:`extensions.extend_ext` first otherwise).

    Raises
    ------
    NotIndeterminate
        Trivial defect (the problem is determinate) or non-trivial gap kernel.
    WeylLimitDivergent
        The Friedrichs corner has an eigenvalue at 0 whose eigenspace
        overlaps the defect space, so ``M`` has no finite limit at 0.
    """
    pic = ext.picture if isinstance(ext, ExtendedOperator) else ext
    if not pic.has_extremals:
        raise ValueError("extremal extensions not computed")
    q = pic.defect_dim
    if q == 0:
        raise NotIndeterminate("trivial defect space: the problem is determinate")
    verdict = determinacy(pic)
    if not verdict.completely_indeterminate:
        raise NotIndeterminate(
            "gap kernel is non-trivial; regularize with extend_ext first"
        )
    J = pic.defect_basis
    # M(0) from the spectral decomposition of t_mu: the eigenvalue a of the
    # extension contributes (a+1)/a J* P J, the point at infinity contributes
    # J* P J; an eigenvalue a = 0 overlapping ran J makes the limit diverge.
    M0 = np.zeros((q, q), dtype=complex)
    for ti, V in clustered_eigh(pic.t_mu):
        ov = V.conj().T @ J  # overlaps first, as in spectral_solution
        G = herm(ov.conj().T @ ov)
        if 1.0 + ti <= 1e-12:
            M0 += G
            continue
        a = (1.0 - ti) / (1.0 + ti)
        if a <= zero_tol:
            if np.linalg.norm(G) > overlap_tol:
                raise WeylLimitDivergent(
                    "Friedrichs-corner eigenvalue at 0 overlaps the defect "
                    f"space (weight {np.linalg.norm(G):.3e}); M(0) diverges"
                )
            continue
        M0 += (a + 1.0) / a * G
    return GammaWeyl(J=J, t_mu=pic.t_mu, M0=herm(M0), q=q)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class TauParameter:
    """A parameter of the resolvent formula.

    ``ideal_basis`` spans the relation part (the whole space for the pure
    ideal parameter); ``tau0``/``poles`` describe the finite part acting on
    the complementary subspace in its own coordinates:
    ``tau(z) = tau0 + sum_k W_k / (p_k - z)``.
    """

    kind: str  # "constant" | "rational" | "infinite" | "mixed"
    hdim: int | None
    ideal_basis: np.ndarray | None
    tau0: np.ndarray | None
    poles: tuple
    class_ok: bool | None = None
    class_min_eig: float | None = None

    @property
    def finite_dim(self):
        if self.kind == "infinite":
            return 0
        return self.tau0.shape[0]

    @property
    def is_ideal(self):
        return self.kind == "infinite" or self.finite_dim == 0

    def inclusion(self, q):
        """Isometry of the finite-part subspace into C^q."""
        if self.hdim is not None and self.hdim != q:
            raise SchemaError(
                f"parameter lives on C^{self.hdim}, the defect space is C^{q}"
            )
        if self.kind == "infinite":
            return np.zeros((q, 0), dtype=complex)
        if self.ideal_basis is None or self.ideal_basis.shape[1] == 0:
            return np.eye(q, dtype=complex)
        return complement(self.ideal_basis, q)

    def value(self, z):
        """Finite part ``tau(z)`` in its own coordinates."""
        if self.kind == "infinite":
            return np.zeros((0, 0), dtype=complex)
        V = self.tau0.astype(complex).copy()
        for p, W in self.poles:
            V = V + W / (p - z)
        return V

    def describe(self):
        doc = {"type": self.kind}
        if self.kind == "constant":
            doc["matrix"] = self.tau0
        elif self.kind in ("rational", "mixed"):
            doc["tau0"] = self.tau0
            doc["poles"] = [{"p": p, "W": W} for p, W in self.poles]
        return doc


def _parse_hermitian(obj, where, psd=False):
    M = parse_matrix(obj, where=where)
    if M.shape[0] != M.shape[1]:
        raise SchemaError(f"{where}: must be square")
    scale = max(1.0, float(np.abs(M).max()))
    if asymmetry(M) > 1e-12 * scale:
        raise SchemaError(f"{where}: not Hermitian within tolerance")
    M = herm(M)
    if psd and min_eigh(M) < -1e-12 * scale:
        raise SchemaError(f"{where}: not positive semi-definite within tolerance")
    return M


def make_tau(
    spec,
    hdim=None,
    require_class=False,
    sample_points=DEFAULT_CLASS_POINTS,
    class_tol=1e-9,
):
    """Build a validated :class:`TauParameter` from a parsed description.

    Accepted shapes::

        {"type": "infinite"}
        {"type": "constant", "matrix": [[...]]}
        {"type": "rational", "tau0": [[...]], "poles": [{"p": x, "W": [[...]]}]}
        {"type": "mixed", "ideal_subspace": [[...], ...], <finite part>}

    The finite part of a mixed parameter acts on the orthogonal complement of
    ``ideal_subspace`` in its own coordinates.  Class membership (the sampled
    kernel test) is always computed and attached; it is enforced only when
    ``require_class`` is set, in which case failing parameters raise
    :class:`NotStieltjesClass`.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise SchemaError("tau description must be an object with a 'type'")
    kind = spec["type"]
    if kind not in ("infinite", "constant", "rational", "mixed"):
        raise SchemaError(f"unknown tau type {kind!r}")

    if kind == "infinite":
        return TauParameter(
            kind=kind,
            hdim=hdim,
            ideal_basis=None,
            tau0=None,
            poles=(),
            class_ok=True,
            class_min_eig=0.0,
        )

    ideal = None
    if kind == "mixed":
        vecs = spec.get("ideal_subspace")
        if not isinstance(vecs, list) or not vecs:
            raise SchemaError("mixed tau needs a non-empty 'ideal_subspace'")
        cols = []
        for i, v in enumerate(vecs):
            row = parse_matrix([v], where=f"ideal_subspace[{i}]")
            cols.append(row.ravel())
        raw = np.column_stack(cols)
        from ._linalg import orth_cols

        ideal = orth_cols(raw)
        if ideal.shape[1] != raw.shape[1]:
            raise SchemaError("ideal_subspace vectors are linearly dependent")
        hdim = raw.shape[0] if hdim is None else hdim
        if raw.shape[0] != hdim:
            raise SchemaError("ideal_subspace vectors have the wrong length")

    if kind == "constant":
        tau0 = _parse_hermitian(spec.get("matrix"), "constant tau matrix")
        poles = ()
        hdim = tau0.shape[0] if hdim is None else hdim
        if tau0.shape[0] != hdim:
            raise SchemaError("constant tau matrix has the wrong size")
    else:
        fin_dim = None
        if ideal is not None:
            fin_dim = hdim - ideal.shape[1]
        tau0_raw = spec.get("tau0")
        poles_raw = spec.get("poles", [])
        if tau0_raw is None and not poles_raw:
            raise SchemaError("rational tau needs 'tau0' and/or 'poles'")
        if not isinstance(poles_raw, list):
            raise SchemaError("'poles' must be an array")
        poles = []
        for i, p in enumerate(poles_raw):
            if not isinstance(p, dict) or "p" not in p or "W" not in p:
                raise SchemaError(f"pole {i} must have keys 'p' and 'W'")
            pos = p["p"]
            if not isinstance(pos, (int, float)) or isinstance(pos, bool):
                raise SchemaError(f"pole {i}: 'p' must be a real number")
            if pos == 0.0:
                raise SchemaError(f"pole {i}: a pole at 0 is not admissible")
            W = _parse_hermitian(p["W"], f"pole {i} residue", psd=True)
            if fin_dim is None:
                fin_dim = W.shape[0]
            if W.shape[0] != fin_dim:
                raise SchemaError(f"pole {i}: residue size mismatch")
            poles.append((float(pos), W))
        if tau0_raw is not None:
            tau0 = _parse_hermitian(tau0_raw, "tau0")
            if fin_dim is None:
                fin_dim = tau0.shape[0]
            if tau0.shape[0] != fin_dim:
                raise SchemaError("tau0 size mismatch")
        else:
            tau0 = np.zeros((fin_dim, fin_dim), dtype=complex)
        poles = tuple(poles)
        if hdim is None:
            hdim = fin_dim + (ideal.shape[1] if ideal is not None else 0)
        expect = hdim - (ideal.shape[1] if ideal is not None else 0)
        if fin_dim != expect:
            raise SchemaError(
                f"finite part has size {fin_dim}, expected {expect} for the "
                "declared spaces"
            )

    tau = TauParameter(
        kind=kind,
        hdim=hdim,
        ideal_basis=ideal,
        tau0=tau0,
        poles=poles,
    )
    ok, worst = check_stieltjes_class(tau, sample_points, tol=class_tol)
    tau = TauParameter(
        kind=kind,
        hdim=hdim,
        ideal_basis=ideal,
        tau0=tau0,
        poles=poles,
        class_ok=ok,
        class_min_eig=worst,
    )
    if require_class and not ok:
        raise NotStieltjesClass(
            f"parameter fails the sampled kernel test (worst eigenvalue "
            f"{worst:.3e})",
            worst_eig=worst,
        )
    return tau


def _kernel_min_eig(fun, pts, dim):
    """Smallest eigenvalue of the sampled Nevanlinna kernel of ``fun``."""
    vals = [np.atleast_2d(fun(z)) for z in pts]
    m = len(pts) * dim
    K = np.zeros((m, m), dtype=complex)
    # row block j carries the conjugated slot: K[(j,b),(i,a)] =
    # (G(z_i) - G(z_j)*)[b,a] / (z_i - conj(z_j)), positive semi-definite
    # exactly when G is a Herglotz function.
    for j in range(len(pts)):
        for i in range(len(pts)):
            blk = (vals[i] - vals[j].conj().T) / (pts[i] - np.conj(pts[j]))
            K[j * dim : (j + 1) * dim, i * dim : (i + 1) * dim] = blk
    K = herm(K)
    w = np.linalg.eigvalsh(K)
    return float(w.min()), float(np.abs(w).max())


def check_stieltjes_class(tau, sample_points=DEFAULT_CLASS_POINTS, tol=1e-9):
    """Sampled kernel test for admissibility of a parameter.

    Builds, over the sample points and a basis of finite-part directions, the
    Nevanlinna kernels of ``z -> tau(z)/z`` and of ``tau`` itself, and passes
    iff both have smallest eigenvalue at least ``-tol`` (relative to the
    kernel scale).  A parameter with empty finite part passes vacuously.

    ``tau`` may be a :class:`TauParameter` or a bare callable
    ``z -> matrix`` (any matrix-valued function can be probed this way).

    Returns ``(passed, worst_min_eig)``.
    """
    if callable(tau) and not isinstance(tau, TauParameter):
        value = lambda z: np.atleast_2d(np.asarray(tau(z), dtype=complex))
        dim = value(1j).shape[0]
    else:
        if tau.is_ideal:
            return True, 0.0
        value = tau.value
        dim = tau.finite_dim
    pts = [complex(z) for z in sample_points]
    if any(z.imag <= 0 for z in pts):
        raise ValueError("class sample points must lie in the upper half-plane")
    worst = np.inf
    ok = True
    for fun in (lambda z: value(z) / z, value):
        lo, scale = _kernel_min_eig(fun, pts, dim)
        worst = min(worst, lo)
        if lo < -tol * max(1.0, scale):
            ok = False
    return ok, float(worst)


# ---------------------------------------------------------------------------
# the resolvent formula


def krein_resolvent(gw, tau, z):
    """Generalized resolvent ``R_z - gamma(z) K(z)^{-1} gamma(conj(z))*``.

    ``K(z)`` is the finite-part compression of ``tau(z) + M(z) - M(0)``; its
    inverse is embedded by zero on the relation part, so the pure ideal
    parameter returns the Friedrichs-corner resolvent unchanged.
    """
    z = complex(z)
    if tau.is_ideal:
        return gw.r_mu(z)
    inc = tau.inclusion(gw.q)
    if inc.shape[1] == 0:
        return gw.r_mu(z)
    Mp = gw.M(z) - gw.M0
    K1 = tau.value(z) + inc.conj().T @ Mp @ inc
    if np.linalg.cond(K1) > CONDITION_LIMIT:
        raise ParameterDegenerate(
            f"parameter block at z = {z} has condition above {CONDITION_LIMIT:.0e}"
        )
    Kinv = inc @ np.linalg.inv(K1) @ inc.conj().T
    return gw.r_mu(z) - gw.gamma(z) @ Kinv @ gw.gamma_star(z)


def solution_transform(gw, tau, rep, N, z):
    """Matrix Stieltjes transform of the solution attached to ``tau``."""
    Xi0 = rep.vectors[:, :N]
    return Xi0.conj().T @ krein_resolvent(gw, tau, z) @ Xi0


# ---------------------------------------------------------------------------
# canonical correspondence helpers


def constant_tau_of_extension(gw, t, probes=(0.7j, 1.9j, -0.6 + 0.8j), tol=1e-7):
    """Hermitian constant parameter reproducing a contractive extension.

    Solves the resolvent formula for the parameter at several probe points
    and checks the results agree (they must, for an extension inside the
    space).  Raises :class:`ParameterDegenerate` when the extension touches
    the Friedrichs corner (ideal parameter) or the solve is inconsistent.
    """
    taus = []
    for z in probes:
        diff = gw.r_mu(z) - resolvent_from_contraction(t, z)
        g = gw.gamma(z)
        gs = gw.gamma_star(z)
        Kinv = np.linalg.pinv(g) @ diff @ np.linalg.pinv(gs)
        scale = max(float(np.linalg.norm(gw.r_mu(z))), 1.0)
        if np.linalg.norm(Kinv) < 1e-13 * scale:
            raise ParameterDegenerate(
                "extension coincides with the Friedrichs corner; the "
                "parameter is the ideal element"
            )
        if np.linalg.cond(Kinv) > CONDITION_LIMIT:
            raise ParameterDegenerate(
                "extension agrees with the Friedrichs corner on a subspace; "
                "the parameter has an ideal part"
            )
        taus.append(np.linalg.inv(Kinv) - (gw.M(z) - gw.M0))
    mean = herm(sum(taus) / len(taus))
    spread = max(float(np.abs(t_ - mean).max()) for t_ in taus)
    if spread > tol * max(1.0, float(np.abs(mean).max())):
        raise ParameterDegenerate(
            f"solved parameter varies by {spread:.3e} across probe points"
        )
    return mean


def extension_of_constant_tau(gw, tau, probe=0.6j, checks=(1.7j, -0.8 + 0.9j), tol=1e-7):
    """Contractive extension whose resolvent the formula returns for ``tau``.

    Valid for parameters without z-dependence (constant, ideal, or mixed with
    constant finite part): these correspond to extensions inside the space.
    The recovered matrix is verified Hermitian, contractive, and consistent
    with the formula at the check points.
    """
    if tau.poles:
        raise ValueError("only constant/ideal parameters define an in-space extension")
    if tau.is_ideal:
        return gw.t_mu.copy()
    z = complex(probe)
    R = krein_resolvent(gw, tau, z)
    d = R.shape[0]
    I = np.eye(d, dtype=complex)
    t = np.linalg.solve((1.0 + z) * R + I, (1.0 - z) * R - I)
    if asymmetry(t) > tol * max(1.0, float(np.abs(t).max())):
        raise PropertyViolated("recovered extension is not Hermitian", witness=t)
    t = herm(t)
    if float(np.linalg.norm(t, 2)) > 1.0 + tol:
        raise PropertyViolated("recovered extension is not a contraction", witness=t)
    for zc in checks:
        err = np.abs(
            krein_resolvent(gw, tau, zc) - resolvent_from_contraction(t, zc)
        ).max()
        if err > tol:
            raise PropertyViolated(
                f"recovered extension mismatches the formula at z = {zc} "
                f"({err:.3e})",
                witness=t,
            )
    return t
