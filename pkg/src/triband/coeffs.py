"""Periodic coefficient pairs (p, q) as step functions on one period.

The coefficient model is piecewise constant on a uniform grid over [0, 1):
cell i carries the values (p_i, q_i) on [i/N, (i+1)/N).  This keeps the
per-cell propagation exact (a constant-matrix exponential) and asks nothing
of the coefficients beyond integrability.  Smooth coefficients should be
sampled at cell midpoints; the sampling error is the caller's business.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np


def _validated_samples(values: Any, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PeriodicCoefficients:
    """Real 1-periodic p, q stored as per-cell constants.

    kappa is the L1 norm of |p| + |q| over one period, evaluated exactly
    for the step-function model: (1/N) * sum_i (|p_i| + |q_i|).  It is the
    single scalar that enters every perturbation bound.
    """

    p_samples: np.ndarray
    q_samples: np.ndarray
    grid_size: int = field(init=False)
    kappa: float = field(init=False)

    def __post_init__(self) -> None:
        p = _validated_samples(self.p_samples, "p_samples")
        q = _validated_samples(self.q_samples, "q_samples")
        if p.shape != q.shape:
            raise ValueError(
                f"p and q must have equal length, got {p.size} and {q.size}"
            )
        object.__setattr__(self, "p_samples", p)
        object.__setattr__(self, "q_samples", q)
        object.__setattr__(self, "grid_size", int(p.size))
        object.__setattr__(self, "kappa", float(np.mean(np.abs(p) + np.abs(q))))

    @classmethod
    def from_constants(cls, p0: float, q0: float, grid_size: int) -> "PeriodicCoefficients":
        """Constant coefficients p = p0, q = q0 on a grid of the given size."""
        if grid_size < 1:
            raise ValueError("grid_size must be at least 1")
        p0 = float(p0)
        q0 = float(q0)
        if not (np.isfinite(p0) and np.isfinite(q0)):
            raise ValueError("coefficient constants must be finite")
        return cls(np.full(grid_size, p0), np.full(grid_size, q0))

    @classmethod
    def from_samples(cls, p_samples: Any, q_samples: Any) -> "PeriodicCoefficients":
        return cls(np.asarray(p_samples, dtype=float), np.asarray(q_samples, dtype=float))

    def cell_values(self, i: int) -> tuple[float, float]:
        """Constant values (p_i, q_i) on cell [i/N, (i+1)/N)."""
        if not 0 <= i < self.grid_size:
            raise IndexError(f"cell index {i} out of range [0, {self.grid_size})")
        return float(self.p_samples[i]), float(self.q_samples[i])

    @property
    def p_at_zero(self) -> float:
        """p(0), the value used when conjugating to the classical period map."""
        return float(self.p_samples[0])

    @property
    def is_zero(self) -> bool:
        return self.kappa == 0.0


def zero_coefficients(grid_size: int = 4) -> PeriodicCoefficients:
    """The free case p = q = 0 (any grid size is exact here)."""
    return PeriodicCoefficients.from_constants(0.0, 0.0, grid_size)


def parse_coefficients(obj: dict) -> PeriodicCoefficients:
    """Build coefficients from a decoded JSON object.

    Two layouts are accepted (field names are fixed):
      {"grid_size": N, "p": [...], "q": [...]}
      {"p_const": x, "q_const": y, "grid_size": N}
    """
    if not isinstance(obj, dict):
        raise ValueError("coefficient file must hold a JSON object")
    if "p_const" in obj or "q_const" in obj:
        for key in ("p_const", "q_const", "grid_size"):
            if key not in obj:
                raise ValueError(f"constant-coefficient object is missing {key!r}")
        return PeriodicCoefficients.from_constants(
            obj["p_const"], obj["q_const"], int(obj["grid_size"])
        )
    for key in ("grid_size", "p", "q"):
        if key not in obj:
            raise ValueError(f"coefficient object is missing {key!r}")
    c = PeriodicCoefficients.from_samples(obj["p"], obj["q"])
    if c.grid_size != int(obj["grid_size"]):
        raise ValueError(
            f"grid_size {obj['grid_size']} does not match sample length {c.grid_size}"
        )
    return c


def load_coefficients(path: str | Path) -> PeriodicCoefficients:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_coefficients(json.load(fh))
