"""Chaotic carrier generation.

Two maps are available, both with the arcsine invariant density:

* ``chebyshev2``: ``x -> 1 - 2 x**2`` on ``[-1, 1]``; mean 0, variance 1/2.
* ``logistic``: ``x -> 4 x (1 - x)`` on ``[0, 1]``; mean 1/2, variance 1/8.

Samples are centred and scaled with these analytic moments, so the
long-run per-sample energy equals the requested target without any
per-frame renormalisation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ConfigurationError, InvalidSeedError

MapKind = Literal["chebyshev2", "logistic"]

_MAP_KINDS = ("chebyshev2", "logistic")
# Fibonacci hashing constant; odd, so seed -> state is a bijection mod 2**64.
_SEED_MULTIPLIER = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ChaosConfig:
    map_kind: MapKind = "chebyshev2"
    seed: int = 1
    burn_in: int = 1000

    def __post_init__(self) -> None:
        if self.map_kind not in _MAP_KINDS:
            raise ConfigurationError(f"unknown map kind {self.map_kind!r}")
        if self.burn_in < 0:
            raise ConfigurationError("burn_in must be >= 0")


@dataclass(frozen=True)
class ChaoticSequence:
    samples: np.ndarray = field(repr=False)
    target_energy: float

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def energy(self) -> float:
        """Empirical per-sample energy."""
        return float(np.mean(self.samples**2))


def seed_to_unit(seed: int) -> float:
    """Map a 64-bit seed to a point of ``[0, 1)`` with 53-bit resolution."""
    h = (int(seed) * _SEED_MULTIPLIER) & _MASK64
    return (h >> 11) * 2.0**-53


def initial_state(map_kind: MapKind, seed: int) -> float:
    u = seed_to_unit(seed)
    return 2.0 * u - 1.0 if map_kind == "chebyshev2" else u


def _step(map_kind: str, x):
    if map_kind == "chebyshev2":
        return 1.0 - 2.0 * x * x
    return 4.0 * x * (1.0 - x)


def _center_scale(map_kind: str, target_energy: float) -> tuple[float, float]:
    if map_kind == "chebyshev2":
        return 0.0, math.sqrt(target_energy / 0.5)
    return 0.5, math.sqrt(target_energy / 0.125)


def generate(config: ChaosConfig, length: int, target_energy: float = 1.0) -> ChaoticSequence:
    """Iterate the configured map and return ``length`` normalised samples.

    Raises
    ------
    InvalidSeedError
        If the orbit sits on (or collapses onto) a fixed point of the map.
    """
    if length < 1:
        raise ConfigurationError("length must be >= 1")
    if not target_energy > 0:
        raise ConfigurationError("target_energy must be > 0")

    kind = config.map_kind
    x = initial_state(kind, config.seed)
    out = np.empty(length)
    for _ in range(config.burn_in):
        nxt = _step(kind, x)
        if nxt == x:
            raise InvalidSeedError(f"seed {config.seed} reaches fixed point {x!r} during burn-in")
        x = nxt
    for k in range(length):
        nxt = _step(kind, x)
        if nxt == x:
            raise InvalidSeedError(f"seed {config.seed} reaches fixed point {x!r}")
        out[k] = x
        x = nxt
    center, scale = _center_scale(kind, target_energy)
    return ChaoticSequence((out - center) * scale, float(target_energy))


def carrier_batch(rng: np.random.Generator, count: int, length: int,
                  target_energy: float = 1.0, map_kind: MapKind = "chebyshev2") -> np.ndarray:
    """Draw ``count`` independent carrier segments, shape ``(count, length)``.

    Initial states are sampled from the invariant density (``cos(pi u)`` or
    its logistic conjugate), so no burn-in is needed.
    """
    u = rng.random(count)
    if map_kind == "chebyshev2":
        x = np.cos(np.pi * u)
    else:
        x = np.sin(0.5 * np.pi * u) ** 2
    out = np.empty((count, length))
    for k in range(length):
        out[:, k] = x
        x = _step(map_kind, x)
    center, scale = _center_scale(map_kind, target_energy)
    return (out - center) * scale
