"""Finite empirical measures: sorted supports with uniform weights.

These carry finite-volume eigenvalue lists and sampled distributions; the CDF is
the right-continuous step function with mass 1/n at every support point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class EmpiricalMeasure:
    support: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.sort(np.asarray(self.support, dtype=float))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("support must be a nonempty 1-d array")
        object.__setattr__(self, "support", arr)

    def __repr__(self):  # pragma: no cover
        return f"EmpiricalMeasure(n={self.size}, range=[{self.support[0]}, {self.support[-1]}])"

    @property
    def size(self) -> int:
        return int(self.support.size)

    def cdf(self, energy):
        """Fraction of mass in (-inf, energy]; accepts scalars or arrays."""
        e = np.asarray(energy, dtype=float)
        out = np.searchsorted(self.support, e, side="right") / self.size
        return float(out) if np.isscalar(energy) or e.ndim == 0 else out

    def cdf_left(self, energy):
        """Left limit of the CDF, i.e. fraction of mass in (-inf, energy)."""
        e = np.asarray(energy, dtype=float)
        out = np.searchsorted(self.support, e, side="left") / self.size
        return float(out) if np.isscalar(energy) or e.ndim == 0 else out

    def mass(self, lo: float, hi: float) -> float:
        """Mass of the half-open interval (lo, hi]."""
        return float(self.cdf(hi) - self.cdf(lo))

    def negated(self) -> "EmpiricalMeasure":
        return EmpiricalMeasure(-self.support)

    # -- serialization ------------------------------------------------------

    def to_csv_text(self) -> str:
        """One support value per line, 17 significant digits."""
        return "\n".join(format(v, ".17g") for v in self.support) + "\n"

    @classmethod
    def from_csv_text(cls, text: str) -> "EmpiricalMeasure":
        vals = [float(line) for line in text.splitlines() if line.strip() and not line.startswith("#")]
        return cls(np.array(vals))

    def to_json_obj(self) -> dict:
        return {"count": self.size, "weight": 1.0 / self.size, "support": self.support.tolist()}


def ks_distance(m1: EmpiricalMeasure, m2: EmpiricalMeasure) -> float:
    """Exact sup-norm distance between two empirical CDFs."""
    pts = np.union1d(m1.support, m2.support)
    d_right = np.max(np.abs(m1.cdf(pts) - m2.cdf(pts)))
    d_left = np.max(np.abs(m1.cdf_left(pts) - m2.cdf_left(pts)))
    return float(max(d_right, d_left))
