"""Reproducible BER estimation.

Bits are simulated in fixed-size chunks of blocks.  Chunk ``k`` of grid point
``p`` draws all of its randomness from a Philox generator keyed by
``(master_seed, p, k)``, so a chunk's outcome does not depend on which worker
runs it or when.  Chunks are accumulated in index order and the estimate stops
at the first chunk where the stopping rule is met; chunks computed beyond that
point by other workers are discarded.  The result is therefore identical for
any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Sequence

import numpy as np

from . import analytic
from .errors import (ConfigurationError, DcskError, PrecisionError,
                     UnsupportedConfigurationError)
from .system import SystemConfig, run_blocks

CHUNK_BLOCKS = 256


@dataclass(frozen=True)
class StoppingRule:
    min_errors: int = 100
    max_bits: int = 10**8
    confidence: float = 0.95
    chunk_blocks: int = CHUNK_BLOCKS

    def __post_init__(self) -> None:
        if self.min_errors < 1:
            raise ConfigurationError("min_errors must be >= 1")
        if self.max_bits < 1:
            raise ConfigurationError("max_bits must be >= 1")
        if not 0 < self.confidence < 1:
            raise ConfigurationError("confidence must lie in (0, 1)")
        if self.chunk_blocks < 1:
            raise ConfigurationError("chunk_blocks must be >= 1")


@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    bits: int
    errors: int
    ber: float
    ci_low: float
    ci_high: float
    upper_bound_only: bool = False


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ConfigurationError("trials must be positive")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = errors / trials
    z2n = z * z / trials
    centre = (p + z2n / 2) / (1 + z2n)
    half = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return min(lo, p), max(hi, p)


def chunk_rng(master_seed: int, point_index: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(point_index, chunk_index))
    return np.random.Generator(np.random.Philox(seq))


def simulate_chunk(config: SystemConfig, master_seed: int, point_index: int,
                   chunk_index: int, blocks: int) -> tuple[int, int]:
    """Bit errors and bit count of one chunk."""
    rng = chunk_rng(master_seed, point_index, chunk_index)
    bits = rng.integers(0, 2, size=(blocks, config.users))
    res = run_blocks(config, bits, rng)
    return res.errors(bits), bits.size


def _chunk_sizes(config: SystemConfig, rule: StoppingRule):
    per_block = config.users
    max_blocks = -(-rule.max_bits // per_block)
    k = 0
    while k * rule.chunk_blocks < max_blocks:
        yield k, min(rule.chunk_blocks, max_blocks - k * rule.chunk_blocks)
        k += 1


def estimate_ber(config: SystemConfig, rule: StoppingRule | None = None,
                 master_seed: int = 0, workers: int = 1, point_index: int = 0,
                 executor: ProcessPoolExecutor | None = None) -> BerPoint:
    rule = rule or StoppingRule()
    if rule.max_bits < config.two_beta:
        raise ConfigurationError("max_bits must be at least one spreading period")
    chunks = _chunk_sizes(config, rule)
    errors = bits = 0
    own = None
    if workers > 1 and executor is None:
        own = executor = ProcessPoolExecutor(max_workers=workers)
    try:
        done = False
        while not done:
            wave = [c for _, c in zip(range(max(workers, 1)), chunks)]
            if not wave:
                break
            if executor is None:
                results = (simulate_chunk(config, master_seed, point_index, k, b) for k, b in wave)
            else:
                futs = [executor.submit(simulate_chunk, config, master_seed, point_index, k, b)
                        for k, b in wave]
                results = (f.result() for f in futs)
            for e, n in results:
                errors += e
                bits += n
                if errors >= rule.min_errors or bits >= rule.max_bits:
                    done = True
                    break
    finally:
        if own is not None:
            own.shutdown(cancel_futures=True)
    lo, hi = wilson_interval(errors, bits, rule.confidence)
    return BerPoint(config.ebn0_db, bits, errors, errors / bits, lo, hi, errors == 0)


def analytic_ber(config: SystemConfig, kind: str = "exact") -> float:
    """Exact or closed-form BER matching the simulated configuration."""
    if kind not in ("exact", "approx"):
        raise ConfigurationError(f"unknown analytic kind {kind!r}")
    fp = config.fading
    if math.isinf(config.ebn0_db):
        raise ConfigurationError("analytic BER needs a finite Eb/N0")
    f = config.segment_length
    if config.topology == "NC":
        per_user = config.ebn0_db - 10 * math.log10(config.users)
        fn = analytic.exact_ber_nc if kind == "exact" else analytic.approx_ber_nc
        return fn(per_user, fp.m, fp.paths, f)
    m_r, m_d = (1, 1) if config.topology == "CC" else (config.m_r, config.m_d)
    budget = analytic.LinkBudget.from_parameters(
        config.ebn0_db, fp.m, fp.paths, config.users, m_r, m_d,
        config.d_sd, config.d_sr, config.d_rd)
    table = {
        ("exact", "EF"): analytic.exact_ber_cd_ef,
        ("exact", "DF"): analytic.exact_ber_cd_df,
        ("approx", "EF"): analytic.approx_ber_cd_ef,
        ("approx", "DF"): analytic.approx_ber_cd_df,
    }
    return table[kind, config.protocol](budget, f)


@dataclass
class BerCurve:
    label: str
    config: SystemConfig
    ebn0_db: list[float]
    points: list[BerPoint | None]
    exact: list[float | None]
    approx: list[float | None]
    failures: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def sweep(template: SystemConfig, grid: Sequence[float], rule: StoppingRule | None = None,
          master_seed: int = 0, workers: int = 1, overlays: Sequence[str] = ("exact", "approx"),
          simulate: bool = True, label: str = "") -> BerCurve:
    """One BER point per grid value with optional analytic overlays.

    A point whose simulation or analytic evaluation fails is left empty and
    reported in ``failures``; the remaining points are still computed.
    Unsupported closed forms leave the overlay empty and add a warning.
    """
    grid = [float(x) for x in grid]
    if not grid:
        raise ConfigurationError("empty Eb/N0 grid")
    curve = BerCurve(label, template, grid, [], [], [])
    executor = ProcessPoolExecutor(max_workers=workers) if simulate and workers > 1 else None
    try:
        for idx, db in enumerate(grid):
            cfg = template.with_ebn0(db)
            point = None
            if simulate:
                try:
                    point = estimate_ber(cfg, rule, master_seed, workers, idx, executor)
                except DcskError as exc:
                    curve.failures.append(f"{label or 'curve'} @ {db!r} dB simulation: {exc}")
            curve.points.append(point)
            for kind, dest in (("exact", curve.exact), ("approx", curve.approx)):
                value = None
                if kind in overlays:
                    try:
                        value = analytic_ber(cfg, kind)
                    except UnsupportedConfigurationError as exc:
                        msg = f"{label or 'curve'}: {kind} overlay unavailable ({exc})"
                        if msg not in curve.warnings:
                            curve.warnings.append(msg)
                    except (PrecisionError, DcskError) as exc:
                        curve.failures.append(f"{label or 'curve'} @ {db!r} dB {kind}: {exc}")
                dest.append(value)
    finally:
        if executor is not None:
            executor.shutdown()
    return curve
