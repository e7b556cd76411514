"""Field generators: the ring-singularity test function and seeded random
fields with prescribed tensor-coefficient decay."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import UnitGridField, sample_grid
from .errors import DomainError
from .tensor_ops import synthesize_basis

FIGURE_ALPHAS = (4e-1, 4e-2, 4e-3)


@dataclass(frozen=True)
class RingFieldSpec:
    alpha: float
    radius: float = 0.3
    grid_level: int = 9

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.radius < math.sqrt(2):
            raise DomainError(f"radius must lie in (0, sqrt 2), got {self.radius}")
        if self.grid_level < 0:
            raise DomainError(f"negative grid level {self.grid_level}")


def ring_function(alpha: float, radius: float = 0.3):
    """``(r - |z|)^alpha`` inside the circle, ``(1 - r/|z|)^alpha`` outside, 0 on it."""
    def f(x, y):
        z = np.hypot(x, y)
        inside = np.clip(radius - z, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            outside = np.clip(1.0 - radius / z, 0.0, None)
        return np.where(z < radius, inside**alpha, np.where(z > radius, outside**alpha, 0.0))
    return f


def generate_ring(spec: RingFieldSpec) -> UnitGridField:
    L = spec.grid_level
    return sample_grid(ring_function(spec.alpha, spec.radius), L, L)


def decay_field(L: int, Lp: int, rate: float, seed: int, exact: bool = True,
                mean: float = 0.0) -> UnitGridField:
    """Synthesise a field whose wavelet-wavelet coefficients at ``(j, j')`` have
    magnitude ``2^(-(j+j') rate)`` (``exact``) or uniform in ``[0, 1]`` times
    that.  Signs are random; one-axis detail coefficients follow ``2^(-j rate)``.
    """
    if L < 1 or Lp < 1:
        raise DomainError("decay fields need at least two cells per axis")
    rng = np.random.default_rng(seed)

    def draw(shape, s):
        mag = np.ones(shape) if exact else rng.uniform(0.0, 1.0, shape)
        return rng.choice([-1.0, 1.0], size=shape) * mag * 2.0 ** (-s * rate)

    N, Np = L - 1, Lp - 1
    omega_ws0 = [draw((2**j, 1), j) for j in range(N + 1)]
    omega_sw0 = [draw((1, 2**jp), jp) for jp in range(Np + 1)]
    alpha = [[draw((2**j, 2**jp), j + jp) for jp in range(Np + 1)] for j in range(N + 1)]
    return UnitGridField(synthesize_basis(mean, omega_ws0, omega_sw0, alpha))


def uniform_field(L: int, Lp: int, seed: int, low: float = -1.0, high: float = 1.0) -> UnitGridField:
    rng = np.random.default_rng(seed)
    return UnitGridField(rng.uniform(low, high, (2**L, 2**Lp)))
