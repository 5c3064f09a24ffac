"""DCSK framing, the differential correlator and the GML multi-user detector.

Everything is discrete time with one sample per chip period; a bit spans
``2*beta`` samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, FramingError
from .spreading import WalshMatrix


@dataclass(frozen=True)
class DecisionStatistic:
    value: float
    user: int = 1
    symbol: int = 0

    @property
    def bit(self) -> int:
        # exact zero decides 0
        return int(self.value > 0)


def dcsk_modulate(bits, carrier: np.ndarray, beta: int) -> np.ndarray:
    """Reference segment followed by ``(2b - 1)`` times the reference, per bit.

    ``carrier`` must supply at least ``beta`` samples per bit; bit ``l`` uses
    samples ``l*beta : (l+1)*beta``.
    """
    if beta < 1:
        raise ConfigurationError("beta must be >= 1")
    bits = np.asarray(bits, dtype=int).reshape(-1)
    carrier = np.asarray(carrier, dtype=float)
    need = beta * len(bits)
    if carrier.shape[-1] < need:
        raise ConfigurationError(f"carrier has {carrier.shape[-1]} samples, need {need}")
    ref = carrier[:need].reshape(len(bits), beta)
    data = (2 * bits - 1)[:, None] * ref
    return np.concatenate([ref, data], axis=1).reshape(-1)


def dcsk_correlate(received: np.ndarray, beta: int, symbol: int = 0) -> DecisionStatistic:
    """Correlate the data half of one frame against its reference half."""
    received = np.asarray(received, dtype=float)
    if received.shape != (2 * beta,):
        raise FramingError(f"expected a frame of {2 * beta} samples, got {received.shape}")
    return DecisionStatistic(float(received[beta:] @ received[:beta]), 1, symbol)


def dcsk_demodulate(received: np.ndarray, beta: int) -> np.ndarray:
    received = np.asarray(received, dtype=float)
    if received.size % (2 * beta):
        raise FramingError("waveform is not a whole number of frames")
    frames = received.reshape(-1, 2, beta)
    z = np.einsum("ij,ij->i", frames[:, 0], frames[:, 1])
    return (z > 0).astype(int)


def gml_statistics(received: np.ndarray, walsh_matrix: WalshMatrix) -> np.ndarray:
    """``E_{u,1} - E_{u,0}`` for every user, batched over leading axes.

    ``received`` has shape ``(..., 2U*f)``.  Each length-f segment is
    weighted by the Walsh row, the weighted segments are summed into one
    segment and its energy taken.  Returns shape ``(..., U)``.
    """
    received = np.asarray(received, dtype=float)
    chips = walsh_matrix.order
    n = received.shape[-1]
    if n % chips:
        raise FramingError(f"symbol length {n} is not a multiple of {chips} chips")
    seg = received.reshape(received.shape[:-1] + (chips, n // chips))
    despread = np.einsum("kc,...cf->...kf", walsh_matrix.rows.astype(float), seg)
    energy = np.einsum("...kf,...kf->...k", despread, despread)
    return energy[..., 0::2] - energy[..., 1::2]


def gml_detect(received: np.ndarray, u: int, walsh_matrix: WalshMatrix, f: int,
               symbol: int = 0) -> DecisionStatistic:
    """GML decision statistic of user ``u`` for one received symbol."""
    walsh_matrix.user_rows(u)
    received = np.asarray(received, dtype=float)
    if received.shape != (walsh_matrix.order * f,):
        raise FramingError(
            f"expected {walsh_matrix.order} x {f} samples, got {received.shape}")
    value = gml_statistics(received, walsh_matrix)[u - 1]
    return DecisionStatistic(float(value), u, symbol)
