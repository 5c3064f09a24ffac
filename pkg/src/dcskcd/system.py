"""NC, CC and CD topologies built from the modem and channel pieces.

Energy convention
-----------------
``E_b`` is the transmit energy of one bit period of the whole multi-access
frame, shared evenly by the ``n`` users.  Per user-bit this gives

* NC: ``E_b / n`` on the single source-destination link;
* CD: ``E_b / (2 n M_D)`` on each S-D antenna channel, ``E_b / (2 n M_R)`` on
  each S-R channel and ``E_b / (2 n M_R M_D)`` on each R-D antenna pair;
* CC: the CD (1, 1) budget, with the partner user acting as the relay.

These are the per-channel SNR scales used by the analytic link budget, so
simulation and theory share one definition of the x axis.

Noise power spectral density is fixed at ``N0 = 1``; ``ebn0_db = inf``
switches noise off.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .chaos import MapKind, carrier_batch
from .channel import FadingProfile, apply_taps, draw_gains
from .errors import ConfigurationError, UnsupportedConfigurationError
from .modem import gml_statistics
from .spreading import compose_batch, segment_length, walsh

TOPOLOGIES = ("NC", "CC", "CD")
PROTOCOLS = ("EF", "DF")
IDLE = -1


@dataclass(frozen=True)
class SystemConfig:
    topology: str = "CD"
    protocol: str = "EF"
    users: int = 2
    m_r: int = 1
    m_d: int = 1
    d_sd: float = 1.0
    d_sr: float = 1.0
    d_rd: float = 1.0
    fading: FadingProfile = field(default_factory=FadingProfile)
    two_beta: int = 128
    ebn0_db: float = 10.0
    map_kind: MapKind = "chebyshev2"
    # test hook: DF relay never forwards
    force_relay_idle: bool = False

    def __post_init__(self) -> None:
        if self.topology not in TOPOLOGIES:
            raise ConfigurationError(f"topology must be one of {TOPOLOGIES}")
        if self.protocol not in PROTOCOLS:
            raise ConfigurationError(f"protocol must be one of {PROTOCOLS}")
        if self.users < 1:
            raise ConfigurationError("users must be >= 1")
        if self.topology == "CC" and self.users != 2:
            raise UnsupportedConfigurationError("CC is defined for exactly 2 users")
        if self.m_r < 1 or self.m_d < 1:
            raise ConfigurationError("antenna counts must be >= 1")
        if min(self.d_sd, self.d_sr, self.d_rd) <= 0:
            raise ConfigurationError("distances must be > 0")
        if self.two_beta < 2 or self.two_beta % 2:
            raise ConfigurationError("two_beta must be a positive even integer")
        if self.topology != "CC":
            segment_length(self.two_beta, self.users)
        if self.fading.max_delay >= self.segment_length:
            raise ConfigurationError("path delays must be shorter than one carrier segment")

    @property
    def segment_length(self) -> int:
        """Carrier segment length f used by every transmission of this topology."""
        if self.topology == "CC":
            # CC users are half-duplex and take turns, so every frame is a
            # conventional single-user DCSK frame.
            return self.two_beta // 2
        return self.two_beta // (2 * self.users)

    @property
    def ebn0(self) -> float:
        return 10.0 ** (self.ebn0_db / 10.0) if math.isfinite(self.ebn0_db) else math.inf

    def with_ebn0(self, ebn0_db: float) -> "SystemConfig":
        return replace(self, ebn0_db=float(ebn0_db))


@dataclass(frozen=True)
class EnergyAudit:
    """Transmit energy allocation in units of E_b, per bit period."""
    slot1_total: float
    slot2_total: float
    per_user_slot1: float
    per_user_slot2: float
    per_sd_channel: float
    per_sr_channel: float
    per_rd_channel: float

    @property
    def total(self) -> float:
        return self.slot1_total + self.slot2_total


def energy_audit(config: SystemConfig) -> EnergyAudit:
    n = config.users
    if config.topology == "NC":
        return EnergyAudit(1.0, 0.0, 1.0 / n, 0.0, 1.0 / n, 0.0, 0.0)
    m_r, m_d = (1, 1) if config.topology == "CC" else (config.m_r, config.m_d)
    half = 0.5
    return EnergyAudit(
        slot1_total=half,
        slot2_total=half,
        per_user_slot1=half / n,
        per_user_slot2=half / n,
        per_sd_channel=half / (n * m_d),
        per_sr_channel=half / (n * m_r),
        # all users together, one R-D antenna pair
        per_rd_channel=half / (m_r * m_d),
    )


@dataclass
class SlotTranscript:
    slot1_destination: np.ndarray
    slot1_relay: np.ndarray | None
    slot2_destination: np.ndarray | None
    relay_decisions: np.ndarray | None


@dataclass
class BlockResult:
    decisions: np.ndarray
    statistics: np.ndarray
    relay_bits: np.ndarray | None = None
    transcript: SlotTranscript | None = None

    def errors(self, true_bits: np.ndarray) -> int:
        return int(np.count_nonzero(self.decisions != true_bits))


class _Link:
    """Per-user-bit amplitudes and noise level for one configuration."""

    def __init__(self, config: SystemConfig):
        eb = config.ebn0 if math.isfinite(config.ebn0) else 1.0
        self.noise_std = 0.0 if math.isinf(config.ebn0) else math.sqrt(0.5)
        audit = energy_audit(config)
        tb = config.two_beta
        if config.topology == "NC":
            self.sd = math.sqrt(eb * audit.per_sd_channel / tb)
            self.sr = self.rd = 0.0
        else:
            n = config.users
            m_r, m_d = (1, 1) if config.topology == "CC" else (config.m_r, config.m_d)
            self.sd = math.sqrt(eb * audit.per_sd_channel / tb) / config.d_sd
            self.sr = math.sqrt(eb * audit.per_sr_channel / tb) / config.d_sr
            self.rd = math.sqrt(eb * 0.5 / (n * m_r * m_d) / tb) / config.d_rd

    def noise(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.noise_std == 0.0:
            return np.zeros(shape)
        return rng.normal(0.0, self.noise_std, size=shape)


def _superpose(waves: np.ndarray, gains: np.ndarray, delays, amp: float, link: _Link,
               rng: np.random.Generator) -> np.ndarray:
    """Faded copies summed over the user axis (1) plus one noise draw per antenna."""
    sig = amp * apply_taps(waves, gains, delays).sum(axis=1)
    return sig + link.noise(rng, sig.shape)


def run_blocks(config: SystemConfig, bits: np.ndarray, rng: np.random.Generator,
               record: bool = False) -> BlockResult:
    """Simulate ``B`` independent blocks of one symbol per user.

    ``bits`` has shape ``(B, n)``.  Fading is redrawn for every block and
    every slot.  Returns destination decisions of shape ``(B, n)``.
    """
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 2 or bits.shape[1] != config.users:
        raise ConfigurationError(f"bits must have shape (B, {config.users})")
    if config.topology == "NC":
        return _run_nc(config, bits, rng, record)
    if config.topology == "CC":
        return _run_cc(config, bits, rng, record)
    return _run_cd(config, bits, rng, record)


def run_block(config: SystemConfig, true_bits, rng: np.random.Generator,
              record: bool = False) -> BlockResult:
    """Single-block convenience wrapper around :func:`run_blocks`."""
    res = run_blocks(config, np.asarray(true_bits, dtype=np.int64)[None, :], rng, record)
    res.decisions = res.decisions[0]
    res.statistics = res.statistics[0]
    if res.relay_bits is not None:
        res.relay_bits = res.relay_bits[0]
    if res.transcript is not None:
        t = res.transcript
        res.transcript = SlotTranscript(
            t.slot1_destination[0],
            None if t.slot1_relay is None else t.slot1_relay[0],
            None if t.slot2_destination is None else t.slot2_destination[0],
            None if t.relay_decisions is None else t.relay_decisions[0],
        )
    return res


def run_cc_block(config: SystemConfig, true_bits, rng: np.random.Generator,
                 record: bool = False) -> BlockResult:
    if config.topology != "CC" or config.users != 2:
        raise UnsupportedConfigurationError("run_cc_block needs topology CC with 2 users")
    return run_block(config, true_bits, rng, record)


def _carriers(config: SystemConfig, rng: np.random.Generator, nblk: int, nusers: int) -> np.ndarray:
    f = config.segment_length
    return carrier_batch(rng, nblk * nusers, f, 1.0, config.map_kind).reshape(nblk, nusers, f)


def _run_nc(config, bits, rng, record):
    nblk, n = bits.shape
    w = walsh(2 * n)
    link = _Link(config)
    fad = config.fading
    waves = compose_batch(bits, _carriers(config, rng, nblk, n), w)
    gains = draw_gains(fad, rng, (nblk, n))
    rx = _superpose(waves, gains, fad.delays, link.sd, link, rng)
    z = gml_statistics(rx, w)
    tr = SlotTranscript(rx[:, None, :], None, None, None) if record else None
    return BlockResult((z > 0).astype(np.int64), z, None, tr)


def _relay_plan(config: SystemConfig, bits: np.ndarray, relay_dec: np.ndarray) -> np.ndarray:
    """Bits the relay forwards, ``IDLE`` where it stays silent.

    EF forwards the true bits.  DF forwards a user's bit only when the relay
    decoded it correctly (genie check per user and block).
    """
    if config.protocol == "EF":
        return bits.copy()
    ok = relay_dec == bits
    if config.force_relay_idle:
        ok[:] = False
    return np.where(ok, bits, IDLE)


def _combine(z1: np.ndarray, z2: np.ndarray, active: np.ndarray) -> np.ndarray:
    # slot-1 only where the relay was silent for that user
    return np.where(active, (z1 + z2) / math.sqrt(2.0), z1)


def _run_cd(config, bits, rng, record):
    nblk, n = bits.shape
    m_r, m_d = config.m_r, config.m_d
    w = walsh(2 * n)
    link = _Link(config)
    fad = config.fading

    # slot 1: every user broadcasts; destination and relay hear the superposition
    waves = compose_batch(bits, _carriers(config, rng, nblk, n), w)[:, :, None, :]
    g_sd = draw_gains(fad, rng, (nblk, n, m_d))
    g_sr = draw_gains(fad, rng, (nblk, n, m_r))
    rx_d1 = _superpose(waves, g_sd, fad.delays, link.sd, link, rng)   # (B, M_D, N)
    rx_r1 = _superpose(waves, g_sr, fad.delays, link.sr, link, rng)   # (B, M_R, N)
    z1 = gml_statistics(rx_d1, w).sum(axis=1)
    relay_dec = (gml_statistics(rx_r1, w).sum(axis=1) > 0).astype(np.int64)

    # slot 2: every relay antenna sends X_RA + X_RB on a fresh carrier at the
    # same time, so the copies add in the air at each destination antenna
    fwd = _relay_plan(config, bits, relay_dec)
    active = fwd != IDLE
    relay_waves = compose_batch(np.where(active, fwd, 0), _carriers(config, rng, nblk, n), w)
    relay_tx = (relay_waves * active[:, :, None]).sum(axis=1)           # (B, N)
    g_rd = draw_gains(fad, rng, (nblk, m_r, m_d))
    sig = link.rd * apply_taps(relay_tx[:, None, None, :], g_rd, fad.delays).sum(axis=1)
    rx_d2 = sig + link.noise(rng, sig.shape)                           # (B, M_D, N)
    z2 = gml_statistics(rx_d2, w).sum(axis=1)

    z = _combine(z1, z2, active)
    tr = SlotTranscript(rx_d1, rx_r1, rx_d2, relay_dec) if record else None
    return BlockResult((z > 0).astype(np.int64), z, fwd, tr)


def _run_cc(config, bits, rng, record):
    nblk, n = bits.shape
    w = walsh(2)
    link = _Link(config)
    fad = config.fading
    partner = np.array([1, 0])

    # slot 1, in two turns: user u is heard by the destination and its partner
    waves = compose_batch(bits.reshape(-1, 1), _carriers(config, rng, nblk * n, 1), w)
    waves = waves.reshape(nblk, n, 1, -1)
    g_sd = draw_gains(fad, rng, (nblk, n, 1))
    g_sp = draw_gains(fad, rng, (nblk, n, 1))
    rx_d1 = link.sd * apply_taps(waves, g_sd, fad.delays)[:, :, 0]
    rx_d1 = rx_d1 + link.noise(rng, rx_d1.shape)                        # (B, n, N)
    rx_p1 = link.sr * apply_taps(waves, g_sp, fad.delays)[:, :, 0]
    rx_p1 = rx_p1 + link.noise(rng, rx_p1.shape)
    z1 = gml_statistics(rx_d1, w)[..., 0]
    partner_dec = (gml_statistics(rx_p1, w)[..., 0] > 0).astype(np.int64)

    # slot 2: the partner of user u forwards u's bit in its own turn
    fwd = _relay_plan(config, bits, partner_dec)
    active = fwd != IDLE
    fwaves = compose_batch(np.where(active, fwd, 0).reshape(-1, 1),
                           _carriers(config, rng, nblk * n, 1), w).reshape(nblk, n, -1)
    fwaves = fwaves * active[:, :, None]
    g_pd = draw_gains(fad, rng, (nblk, n))
    rx_d2 = link.rd * apply_taps(fwaves, g_pd, fad.delays)
    rx_d2 = rx_d2 + link.noise(rng, rx_d2.shape)
    z2 = gml_statistics(rx_d2, w)[..., 0]

    z = _combine(z1, z2, active)
    tr = SlotTranscript(rx_d1, rx_p1, rx_d2, partner_dec[:, partner]) if record else None
    return BlockResult((z > 0).astype(np.int64), z, fwd, tr)
