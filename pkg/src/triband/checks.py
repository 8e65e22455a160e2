"""Self-verification suites behind the `verify` CLI command.

Every suite exercises an exact structural identity or a proved bound on a
sampled grid and reports the worst residual against a fixed threshold.
The suites are deliberately redundant with the unit tests: they run against
user-supplied coefficients, where no precomputed expected values exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import multipliers as mult
from .coeffs import PeriodicCoefficients, zero_coefficients
from .discriminant import rho_product_formula, rho_trace_formula
from .floquet import char_real_function, count_in_disk
from .freecase import free_case, free_trace
from .monodromy import (
    SpectralParameter,
    char_poly,
    free_diagonalizer,
    picard_monodromy,
    propagate,
    propagate_pair,
)
from ._linalg import det3, spectral_norm
from .util import hausdorff_distance

# bound checks allow machine-epsilon slack: several are equalities at
# isolated points (e.g. |T| = 3 exp(z0) in the free case at lambda = 0)
_BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    detail: str = ""

    def __post_init__(self) -> None:
        # numpy scalars leak in from the grids; keep the record JSON-clean
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "worst", float(self.worst))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name}: worst {self.worst:.3e} "
            f"(threshold {self.threshold:.3e}) {self.detail}".rstrip()
        )


def _real_grid(lo: float = -500.0, hi: float = 500.0, n: int = 60) -> np.ndarray:
    grid = np.linspace(lo, hi, n)
    return grid[grid != 0.0]


def check_determinant_identity(c: PeriodicCoefficients) -> CheckResult:
    worst = 0.0
    for lam in _real_grid():
        m = propagate(c, SpectralParameter.from_lambda(float(lam)))
        worst = max(worst, m.det_residual)
    return CheckResult("determinant-identity", worst <= 1e-9, worst, 1e-9)


def check_symplectic_identity(c: PeriodicCoefficients) -> CheckResult:
    worst = 0.0
    for lam in _real_grid(n=40):
        m = propagate(c, SpectralParameter.from_lambda(float(lam)))
        worst = max(worst, m.symplectic_residual)
    rng = np.random.default_rng(20240817)
    for _ in range(10):
        lam = complex(rng.uniform(-350, 350), rng.uniform(-350, 350))
        m, m_bar = propagate_pair(c, lam)
        worst = max(worst, m.symplectic_residual, m_bar.symplectic_residual)
    return CheckResult("symplectic-identity", worst <= 1e-8, worst, 1e-8)


def check_char_poly_identity(c: PeriodicCoefficients) -> CheckResult:
    """det(M - tau) against the trace form of the cubic, complex lambda included."""
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        lam = complex(rng.uniform(-200, 200), rng.uniform(-200, 200))
        m, m_bar = propagate_pair(c, lam)
        tau = complex(rng.normal(), rng.normal())
        direct = complex(det3(np.asarray(m.M, dtype=complex) - tau * np.eye(3)))
        poly = char_poly(m, tau, paired=m_bar)
        worst = max(worst, abs(direct - poly) / (1.0 + abs(direct)))
    return CheckResult("characteristic-polynomial", worst <= 1e-8, worst, 1e-8)


def check_free_trace(grid_size: int = 4) -> CheckResult:
    """Propagated trace against the closed form, zero coefficients, |lam| <= 1e6."""
    c = zero_coefficients(grid_size)
    worst = 0.0
    for lam in np.linspace(-1e6, 1e6, 80):
        if lam == 0.0:
            continue
        T = propagate(c, SpectralParameter.from_lambda(float(lam))).trace_T
        T0 = free_trace(float(lam))
        worst = max(worst, abs(T - T0) / abs(T0))
    return CheckResult("free-case-trace", worst <= 1e-10, worst, 1e-10)


def check_discriminant_consistency(c: PeriodicCoefficients) -> CheckResult:
    worst = 0.0
    for lam in _real_grid(n=80):
        T = propagate(c, SpectralParameter.from_lambda(float(lam))).trace_T
        rt = rho_trace_formula(T)
        rp = rho_product_formula(mult.solve_multipliers(T, np.conj(T)))
        scale = 1.0 + abs(rt)
        worst = max(worst, abs(rt - rp.real) / scale, abs(rp.imag) / scale * 1e2)
    # the 1e2 factor folds the tighter imaginary-part threshold (1e-8
    # against 1e-6) into a single worst number
    return CheckResult("discriminant-consistency", worst <= 1e-6, worst, 1e-6)


def check_trace_bounds(c: PeriodicCoefficients) -> CheckResult:
    """|T| <= 3 e^{z0+kappa} everywhere; perturbation bounds for |lambda| >= 1.

    The perturbation bounds are |T - T0| <= 3 kappa e^{z0+kappa} / |z| and,
    in the frame that diagonalizes the free system, a matching bound on the
    full matrix deviation from the diagonal free propagator.
    """
    worst = 0.0
    kappa = c.kappa
    for lam in _real_grid(n=50):
        param = SpectralParameter.from_lambda(float(lam))
        m = propagate(c, param)
        cap = 3.0 * math.exp(param.z0 + kappa)
        worst = max(worst, abs(m.trace_T) / cap)
        if abs(param.lam) >= 1.0:
            dev_cap = 3.0 * kappa * math.exp(param.z0 + kappa) / abs(param.z)
            if kappa > 0:
                worst = max(worst, abs(m.trace_T - free_trace(param.lam)) / dev_cap)
            V, V_inv, B = free_diagonalizer(param)
            frame = V_inv @ np.asarray(m.M, dtype=complex) @ V
            diag_free = np.diag(np.exp(1j * param.z * np.diag(B)))
            if kappa > 0:
                matrix_cap = kappa * math.exp(param.z0 + kappa) / abs(param.z)
                worst = max(worst, spectral_norm(frame - diag_free) / matrix_cap)
    return CheckResult(
        "growth-bounds", worst <= 1.0 + _BOUND_SLACK, worst, 1.0,
        detail="(ratios to the proved caps)",
    )


def check_picard_agreement(c: PeriodicCoefficients, tol: float = 1e-10) -> CheckResult:
    worst = 0.0
    for lam in np.linspace(-100.0, 100.0, 9):
        param = SpectralParameter.from_lambda(float(lam))
        m_exp = propagate(c, param)
        m_ser = picard_monodromy(c, param, tol=tol)
        diff = np.abs(
            np.asarray(m_exp.M, dtype=complex) - np.asarray(m_ser.M, dtype=complex)
        ).max()
        worst = max(worst, float(diff))
    threshold = max(1e-8, 10.0 * tol)
    return CheckResult("series-vs-steps", worst <= threshold, worst, threshold)


def check_free_closed_forms(grid_size: int = 4) -> CheckResult:
    """Solved multipliers and both discriminant routes against the closed forms."""
    c = zero_coefficients(grid_size)
    worst = 0.0
    for lam in np.linspace(-900.0, 900.0, 40):
        if lam == 0.0:
            continue
        ref = free_case(float(lam))
        T = propagate(c, SpectralParameter.from_lambda(float(lam))).trace_T
        taus = mult.solve_multipliers(T, np.conj(T))
        worst = max(worst, hausdorff_distance(tuple(taus), ref.taus0))
        rt = rho_trace_formula(ref.T0)
        worst = max(worst, abs(rt - ref.rho0.real) / (1.0 + abs(rt)))
    return CheckResult("free-case-closed-forms", worst <= 1e-8, worst, 1e-8)


def check_multiplier_symmetry(c: PeriodicCoefficients) -> CheckResult:
    """Invariance of the multiplier set under tau -> 1/conj(tau), real lambda."""
    worst = 0.0
    for lam in _real_grid(n=60):
        T = propagate(c, SpectralParameter.from_lambda(float(lam))).trace_T
        taus = mult.solve_multipliers(T, np.conj(T))
        worst = max(worst, hausdorff_distance(tuple(taus), tuple(1.0 / np.conj(taus))))
    return CheckResult("multiplier-symmetry", worst <= 1e-8, worst, 1e-8)


def check_reduction_identity(c: PeriodicCoefficients) -> CheckResult:
    """det(M - e^{ik}) == 2i e^{3ik/2} F(k, lambda) on the real axis."""
    worst = 0.0
    for k in (0.0, 0.3, 1.0, math.pi, 5.0):
        for lam in np.linspace(-150.0, 150.0, 16):
            m = propagate(c, SpectralParameter.from_lambda(float(lam)))
            direct = complex(
                det3(np.asarray(m.M, dtype=complex) - np.exp(1j * k) * np.eye(3))
            )
            reduced = 2j * np.exp(1.5j * k) * char_real_function(k, m.trace_T)
            worst = max(worst, abs(direct - reduced) / (1.0 + abs(direct)))
    return CheckResult("determinant-reduction", worst <= 1e-8, worst, 1e-8)


def check_root_counts(c: PeriodicCoefficients, N: int = 5) -> CheckResult:
    """Exact root counts in the two canonical disks (2N+1 and 2N roots).

    The exact counts are guaranteed only above an unquantified
    coefficient-dependent index threshold; for strong coefficients a
    mismatch at small N is a regime problem, not a solver bug.
    """
    detail = []
    ok = True
    worst = 0.0
    for k in (0.3, 2.0):
        res = count_in_disk(c, k, N)
        ok = ok and res.count == res.expected and res.reliable
        worst = max(worst, float(abs(res.count - res.expected)))
        detail.append(f"k={k}: {res.count}/{res.expected}")
    return CheckResult(
        "root-counting", ok, worst, 0.0, detail="(" + ", ".join(detail) + ")"
    )


def run_verify(c: PeriodicCoefficients) -> list[CheckResult]:
    return [
        check_determinant_identity(c),
        check_symplectic_identity(c),
        check_char_poly_identity(c),
        check_free_trace(),
        check_discriminant_consistency(c),
        check_trace_bounds(c),
        check_picard_agreement(c),
        check_free_closed_forms(),
        check_multiplier_symmetry(c),
        check_reduction_identity(c),
        check_root_counts(c),
    ]
