"""Nakagami-m block-fading multipath channel with AWGN.

Tap powers are drawn as ``Gamma(m, Omega_i/m)`` and the tap gain is the
square root, which is Nakagami-m with spread ``Omega_i``.  Delays are whole
samples.  Noise is real Gaussian with variance ``N0/2`` per sample.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class FadingProfile:
    m: float = 1.0
    paths: int = 2
    omegas: tuple[float, ...] = ()
    delays: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise ConfigurationError("Nakagami m must be > 0")
        if self.paths < 1:
            raise ConfigurationError("need at least one path")
        omegas = tuple(float(o) for o in self.omegas) or (1.0 / self.paths,) * self.paths
        delays = tuple(int(d) for d in self.delays) or tuple(range(self.paths))
        if len(omegas) != self.paths or len(delays) != self.paths:
            raise ConfigurationError("omegas and delays need one entry per path")
        if any(o <= 0 for o in omegas) or abs(sum(omegas) - 1.0) > 1e-12:
            raise ConfigurationError("path powers must be positive and sum to 1")
        # one m for every path, so equal powers are the only uniform-scale profile
        if max(omegas) - min(omegas) > 1e-12:
            raise ConfigurationError("Omega_i/m must be equal across paths")
        if delays[0] != 0 or any(b <= a for a, b in zip(delays, delays[1:])):
            raise ConfigurationError("delays must start at 0 and strictly increase")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "delays", delays)

    @property
    def max_delay(self) -> int:
        return self.delays[-1]


@dataclass(frozen=True)
class ChannelRealization:
    gains: np.ndarray = field(repr=False)
    delays: tuple[int, ...]
    block_length: int = 0

    @property
    def taps(self) -> list[tuple[float, int]]:
        return list(zip(self.gains.tolist(), self.delays))


def draw_gains(profile: FadingProfile, rng: np.random.Generator, shape=()) -> np.ndarray:
    """Nakagami tap gains with shape ``shape + (paths,)``."""
    size = tuple(np.atleast_1d(shape)) if shape != () else ()
    scale = np.asarray(profile.omegas) / profile.m
    power = rng.standard_gamma(profile.m, size=size + (profile.paths,)) * scale
    return np.sqrt(power)


def draw_realization(profile: FadingProfile, rng: np.random.Generator,
                     block_length: int = 0) -> ChannelRealization:
    return ChannelRealization(draw_gains(profile, rng), profile.delays, block_length)


def apply_taps(signal: np.ndarray, gains: np.ndarray, delays) -> np.ndarray:
    """Noiseless multipath output, batched: ``signal (..., N)``, ``gains (..., L)``.

    Delayed copies are zero-padded at the head and truncated at the tail.
    """
    signal = np.asarray(signal, dtype=float)
    n = signal.shape[-1]
    if delays[-1] > n:
        raise ConfigurationError("signal shorter than the largest delay")
    gains = np.asarray(gains, dtype=float)
    lead = np.broadcast_shapes(signal.shape[:-1], gains.shape[:-1])
    out = np.zeros(lead + (n,))
    for i, d in enumerate(delays):
        g = gains[..., i, None]
        if d == 0:
            out += g * signal
        else:
            out[..., d:] += g * signal[..., :n - d]
    return out


def propagate(signal: np.ndarray, realization: ChannelRealization, path_loss: float,
              noise_psd: float, rng: np.random.Generator | None = None) -> np.ndarray:
    """``sqrt(path_loss) * sum_i alpha_i s[j - tau_i] + n_j``."""
    out = np.sqrt(path_loss) * apply_taps(signal, realization.gains, realization.delays)
    if noise_psd > 0:
        if rng is None:
            raise ConfigurationError("an rng is required when noise_psd > 0")
        out = out + rng.normal(0.0, np.sqrt(noise_psd / 2.0), size=out.shape)
    return out
