"""Parameter containers for the signal space and common derived ratios."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SignalSpaceParams:
    """Defining quantities of the signal space under study.

    omega:   one-sided angular bandwidth in rad/s (> 0)
    t_obs:   observation window length in seconds (> 0)
    energy:  energy budget E, signals satisfy integral |f|^2 <= E (> 0)
    eps:     noise / resolution radius epsilon (> 0)
    delta:   allowed error-region fraction, 0 <= delta < 1; delta = 0
             means no decoding-error volume is tolerated
    """

    omega: float
    t_obs: float
    energy: float
    eps: float
    delta: float = 0.0

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not (self.t_obs > 0 and math.isfinite(self.t_obs)):
            raise ValueError(f"t_obs must be positive and finite, got {self.t_obs}")
        if not (self.energy > 0 and math.isfinite(self.energy)):
            raise ValueError(f"energy must be positive and finite, got {self.energy}")
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise ValueError(f"eps must be positive and finite, got {self.eps}")
        if not (0.0 <= self.delta < 1.0):
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")

    @property
    def nominal_dimension(self) -> float:
        """Time-bandwidth product Omega*T/pi, the nominal dimensionality."""
        return self.omega * self.t_obs / math.pi

    @property
    def snr(self) -> float:
        """Energy-to-noise-power ratio E/eps^2."""
        return self.energy / self.eps**2

    @property
    def sqrt_snr(self) -> float:
        return math.sqrt(self.energy) / self.eps


@dataclass(frozen=True)
class DofQuery:
    """Accuracy query for the degrees-of-freedom counter.

    mu may be any positive level; mu >= sqrt(energy) simply yields zero
    degrees of freedom rather than an error.
    """

    energy: float
    mu: float

    def __post_init__(self):
        if not (self.energy > 0 and math.isfinite(self.energy)):
            raise ValueError(f"energy must be positive and finite, got {self.energy}")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be positive and finite, got {self.mu}")
