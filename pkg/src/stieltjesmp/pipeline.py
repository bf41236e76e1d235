"""End-to-end orchestration: moments in, analyzed operator picture and
solution measures out.

This is the layer the command-line tool and the demos drive; each stage is a
thin composition of the module-level operations so intermediate objects stay
inspectable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hankel
from .errors import MomentProblemError, NotIndeterminate, WeylLimitDivergent
from .extensions import (
    cayley,
    determinacy,
    extend_ext,
    extremal_extensions,
    spectral_solution,
)
from .gns import build_space
from .krein import (
    build_gamma_weyl,
    constant_tau_of_extension,
    extension_of_constant_tau,
    krein_resolvent,
    solution_transform,
)
from .shiftop import build_shift
from .solutions import perron_invert, verify_moments

__all__ = ["Tolerances", "Analysis", "analyze", "solve_tau_grid", "solve_with_tau"]


@dataclass(frozen=True)
class Tolerances:
    psd_tol: float = 1e-10
    rank_tol: float = 1e-10
    consistency_tol: float = 1e-8
    det_tol: float | None = None
    ker_tol: float = 1e-9
    rtol: float = 1e-8
    invert_rtol: float = 1e-3


@dataclass(frozen=True)
class Analysis:
    """Everything the pipeline derives from a moment sequence."""

    seq: object
    solvability: object
    gram: object
    rep: object
    shift: object
    picture: object  # with extremal extensions
    verdict: object
    extended: object | None = None  # ExtendedOperator, indeterminate case only
    gamma_weyl: object | None = None
    gamma_weyl_error: str | None = None

    @property
    def N(self):
        return self.seq.N

    def require_gamma_weyl(self):
        if self.gamma_weyl is None:
            raise WeylLimitDivergent(
                self.gamma_weyl_error or "no boundary data (determinate problem)"
            )
        return self.gamma_weyl


def analyze(seq, tols=Tolerances()):
    """Run the construction through the determinacy decision.

    For indeterminate problems the regularized picture and the boundary data
    (gamma field / Weyl function) are attached; a divergent Weyl limit is
    recorded rather than raised so that callers needing only the verdict
    still succeed.
    """
    solv = hankel.check_solvable(seq, tols.psd_tol)
    gram = hankel.scalarize(seq)
    rep = build_space(gram, tols.rank_tol)
    shift = build_shift(rep, tol=tols.consistency_tol)
    pic = extremal_extensions(cayley(shift))
    verdict = determinacy(pic, det_tol=tols.det_tol, ker_tol=tols.ker_tol)
    extended = None
    gw = None
    gw_error = None
    if not verdict.determinate:
        extended = extend_ext(pic, ker_tol=tols.ker_tol)
        try:
            gw = build_gamma_weyl(extended)
        except (WeylLimitDivergent, NotIndeterminate) as exc:
            gw_error = str(exc)
    return Analysis(
        seq=seq,
        solvability=solv,
        gram=gram,
        rep=rep,
        shift=shift,
        picture=pic,
        verdict=verdict,
        extended=extended,
        gamma_weyl=gw,
        gamma_weyl_error=gw_error,
    )


def _gated(analysis, meas, rtol, exact):
    """Attach the verification report; refuse silently-broken measures."""
    report = verify_moments(meas, analysis.seq, upto=2 * analysis.seq.n, rtol=rtol)
    return {"measure": meas, "verification": report, "exact": exact}


def unique_solution(analysis, tols=Tolerances()):
    """Solution of a determinate problem (spectral measure of the unique
    non-negative extension)."""
    if not analysis.verdict.determinate:
        raise MomentProblemError("problem is not determinate")
    meas = spectral_solution(analysis.picture.t_mu, analysis.rep, analysis.N)
    return _gated(analysis, meas, tols.rtol, exact=True)


def solve_tau_grid(analysis, count, tols=Tolerances()):
    """Canonical solutions along the extension segment.

    Emits ``count`` measures from the contractive extensions
    ``t_mu + s (t_M - t_mu)`` at ``s = (j+1)/count``; the Krein corner
    (``s = 1``) is included, and the Friedrichs corner is approached but
    excluded because its measure carries mass at infinity and cannot
    reproduce the top moment.  Each entry reports the Hermitian-constant
    parameter its extension corresponds to.
    """
    pic = analysis.extended.picture if analysis.extended else analysis.picture
    out = []
    for j in range(int(count)):
        s = (j + 1) / count
        t = pic.t_mu + s * (pic.t_M - pic.t_mu)
        meas = spectral_solution(t, analysis.rep, analysis.N)
        entry = _gated(analysis, meas, tols.rtol, exact=True)
        entry["s"] = s
        if analysis.gamma_weyl is not None:
            try:
                entry["tau_constant"] = constant_tau_of_extension(
                    analysis.gamma_weyl, t
                )
            except MomentProblemError:
                entry["tau_constant"] = None
        out.append(entry)
    return out


def solve_with_tau(
    analysis,
    tau,
    tols=Tolerances(),
    grid=None,
    eps_schedule=(1e-2, 1e-3, 1e-4),
    n_grid=2001,
):
    """Solution attached to one parameter.

    Parameters without z-dependence go through the exact spectral route (the
    corresponding extension lives inside the representation space); rational
    parameters are evaluated through the resolvent formula and inverted, and
    the resulting measure is marked approximate.
    """
    gw = analysis.require_gamma_weyl()
    if not tau.poles:
        t = extension_of_constant_tau(gw, tau)
        meas = spectral_solution(t, analysis.rep, analysis.N)
        return _gated(analysis, meas, tols.rtol, exact=True)

    def sampler(z):
        return solution_transform(gw, tau, analysis.rep, analysis.N, z)

    if grid is None:
        # generous default support window: the Friedrichs-corner atoms plus
        # the parameter's poles bound where solution atoms can appear
        w = np.linalg.eigvalsh(gw.t_mu)
        w = w[1.0 + w > 1e-9]
        top = float(((1.0 - w) / (1.0 + w)).max()) if w.size else 1.0
        top = max(top, max((p for p, _ in tau.poles), default=0.0))
        grid = (-0.5, 2.5 * top + 5.0)
    meas = perron_invert(
        sampler,
        grid=grid,
        eps_schedule=eps_schedule,
        atom_tol=tols.invert_rtol,
        n_grid=n_grid,
    )
    return _gated(analysis, meas, tols.invert_rtol, exact=False)


def resolvent(analysis, tau, z):
    """Generalized resolvent for a parameter (indeterminate problems)."""
    return krein_resolvent(analysis.require_gamma_weyl(), tau, z)
