"""Band-structure tables: per-point spectral diagnostics on a real grid.

Every real lambda is in the spectrum; the table records with which
multiplicity it is covered: the discriminant rho, the count of unimodular
multipliers (one or three), and the Lyapunov values of the branches, with
branch labels continued consistently along the grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import multipliers as mult
from .coeffs import PeriodicCoefficients
from .discriminant import rho_formula_scale, rho_trace_formula
from .monodromy import PropagationOverflowError, SpectralParameter, propagate
from .util import parallel_map, uniform_grid

FLAG_NEAR_BRANCH_POINT = mult.FLAG_NEAR_BRANCH_POINT
FLAG_AMBIGUOUS_MATCH = mult.FLAG_AMBIGUOUS_MATCH
FLAG_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BandPoint:
    """Diagnostics at one real lambda.

    multiplicity is 3 exactly when rho <= 0, else 1; points where rho is
    within the degeneracy tolerance of zero are flagged near-branch-point
    (both classifications are unreliable there by construction, so the
    consistency invariant multiplicity == on_circle_count holds off the
    flagged set).  lyapunov_branches lists all three Lyapunov values in
    branch-label order with branch_on_circle marking the unimodular ones;
    lyapunov_real_branches keeps just those values, clipped into [-1, 1].
    """

    lam: float
    rho: Optional[float] = None
    multiplicity: Optional[int] = None
    on_circle_count: Optional[int] = None
    lyapunov_branches: Optional[tuple[complex, complex, complex]] = None
    branch_on_circle: Optional[tuple[bool, bool, bool]] = None
    lyapunov_real_branches: tuple[float, ...] = ()
    flags: frozenset[str] = frozenset()
    error: Optional[str] = None


def _assemble(
    lam: float,
    ms: mult.MultiplierSet,
    rho: float,
    circle_tol: Optional[float],
    degeneracy_rtol: float,
) -> BandPoint:
    tol = mult.circle_tolerance(ms.taus, circle_tol)
    on_circle = tuple(bool(abs(abs(tau) - 1.0) <= tol) for tau in ms.taus)

    flags = set(ms.flags)
    if abs(rho) <= degeneracy_rtol * rho_formula_scale(ms.trace):
        flags.add(FLAG_NEAR_BRANCH_POINT)
    if ms.classification is mult.Classification.DEGENERATE:
        flags.add(FLAG_DEGENERATE)

    real_branches = tuple(
        float(min(1.0, max(-1.0, delta.real)))
        for delta, unimod in zip(ms.lyapunov, on_circle)
        if unimod
    )
    return BandPoint(
        lam=lam,
        rho=rho,
        multiplicity=3 if rho <= 0 else 1,
        on_circle_count=int(sum(on_circle)),
        lyapunov_branches=ms.lyapunov,
        branch_on_circle=on_circle,
        lyapunov_real_branches=real_branches,
        flags=frozenset(flags),
    )


def band_point(
    c: PeriodicCoefficients,
    lam: float,
    circle_tol: Optional[float] = None,
    degeneracy_rtol: float = 1e-9,
) -> BandPoint:
    """Diagnostics at a single point (branch order as solved, not continued)."""
    lam = float(lam)
    try:
        m = propagate(c, SpectralParameter.from_lambda(lam))
    except PropagationOverflowError as exc:
        return BandPoint(lam=lam, error=str(exc))
    rho = rho_trace_formula(m.trace_T)
    ms = mult.multiplier_set(lam, m.trace_T, circle_tol=circle_tol)
    return _assemble(lam, ms, rho, circle_tol, degeneracy_rtol)


def scan_real_axis(
    c: PeriodicCoefficients,
    interval: tuple[float, float],
    points: int,
    circle_tol: Optional[float] = None,
    degeneracy_rtol: float = 1e-9,
) -> list[BandPoint]:
    """Uniform-grid scan: one period-map evaluation per point.

    Branch labels are continued along the grid (anchored at the largest
    lambda by the free-case asymptotics), so column j of the Lyapunov data
    follows one branch.  The grid is deliberately not adaptive; refinement
    around sign changes of rho belongs to the interval finder in the
    discriminant module.  Propagation overflow at extreme lambda is
    recorded on the affected row and the scan continues.
    """
    grid = uniform_grid(float(interval[0]), float(interval[1]), points)

    def eval_point(lam: float):
        lam = float(lam)
        try:
            m = propagate(c, SpectralParameter.from_lambda(lam))
        except PropagationOverflowError as exc:
            return lam, None, str(exc)
        rho = rho_trace_formula(m.trace_T)
        ms = mult.multiplier_set(lam, m.trace_T, circle_tol=circle_tol)
        return lam, (ms, rho), None

    evaluated = parallel_map(eval_point, grid)

    good = [(lam, ms_rho) for lam, ms_rho, err in evaluated if err is None]
    if good:
        continued = mult.continue_branches(
            [lam for lam, _ in good], [ms for _, (ms, _) in good]
        )
    else:
        continued = []

    out: list[BandPoint] = []
    pos = 0
    for lam, ms_rho, err in evaluated:
        if err is not None:
            out.append(BandPoint(lam=lam, error=err))
            continue
        _, rho = ms_rho
        out.append(_assemble(lam, continued[pos], rho, circle_tol, degeneracy_rtol))
        pos += 1
    return out


def multiplicity_is_locally_constant(points: list[BandPoint]) -> bool:
    """True when multiplicity only changes across flagged or error rows."""
    prev: Optional[int] = None
    for pt in points:
        if pt.error is not None or pt.flags:
            prev = None
            continue
        if prev is not None and pt.multiplicity != prev:
            return False
        prev = pt.multiplicity
    return True
