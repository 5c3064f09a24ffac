"""Walsh-Hadamard codes and multi-user symbol composition."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvalidOrderError, InvalidUserError


@dataclass(frozen=True)
class WalshMatrix:
    rows: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.rows.shape[0]

    @property
    def users(self) -> int:
        return self.order // 2

    def row(self, k: int) -> np.ndarray:
        """1-based row ``w_k``."""
        return self.rows[k - 1]

    def user_rows(self, u: int) -> tuple[int, int]:
        """1-based row indices (bit 1, bit 0) held by user ``u``."""
        if not 1 <= u <= self.users:
            raise InvalidUserError(f"user {u} outside 1..{self.users}")
        return 2 * u - 1, 2 * u


def walsh(order: int) -> WalshMatrix:
    """Sylvester-ordered Walsh-Hadamard matrix of the given order."""
    if order < 2 or order & (order - 1):
        raise InvalidOrderError(f"order must be a power of two >= 2, got {order}")
    h = np.array([[1]], dtype=np.int8)
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return WalshMatrix(h)


def segment_length(two_beta: int, users: int) -> int:
    """Carrier segment length ``f = 2*beta / (2U)``."""
    chips = 2 * users
    if users < 1 or two_beta % chips:
        raise ConfigurationError(f"2*beta={two_beta} is not divisible by 2U={chips}")
    return two_beta // chips


def compose_user_signal(u: int, bit: int, carrier: np.ndarray, walsh_matrix: WalshMatrix,
                        two_beta: int | None = None) -> np.ndarray:
    """Repeat the carrier segment 2U times, scaling copy i by ``w_{2u-bit, i}``."""
    carrier = np.asarray(carrier, dtype=float)
    f = carrier.shape[-1]
    chips = walsh_matrix.order
    if two_beta is not None and f * chips != two_beta:
        raise ConfigurationError(f"segment length {f} x {chips} chips != 2*beta={two_beta}")
    r1, r0 = walsh_matrix.user_rows(u)
    code = walsh_matrix.row(r1 if bit else r0).astype(float)
    return (code[:, None] * carrier[None, :]).reshape(-1)


def compose_batch(bits: np.ndarray, carriers: np.ndarray, walsh_matrix: WalshMatrix) -> np.ndarray:
    """Vectorised composition and superposition of all users.

    ``bits`` has shape ``(B, U)``, ``carriers`` ``(B, U, f)``; returns the
    per-user waveforms ``(B, U, 2U*f)``.  Summing over axis 1 gives the
    synchronous superposition seen by a receiver.
    """
    bits = np.asarray(bits)
    nblk, nusers = bits.shape
    users = np.arange(nusers)
    # 0-based row: bit 1 -> 2u, bit 0 -> 2u+1
    row_idx = 2 * users[None, :] + (1 - bits)
    codes = walsh_matrix.rows[row_idx].astype(float)  # (B, U, 2U)
    wave = codes[..., :, None] * carriers[..., None, :]
    return wave.reshape(nblk, nusers, -1)
