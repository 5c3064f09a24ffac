"""Frozen experiment presets, one per figure of the evaluation.

Changing any parameter of a preset means adding a new name, so CSV files
produced under one name stay comparable across versions.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .channel import FadingProfile
from .system import SystemConfig


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    curves: tuple[tuple[str, SystemConfig], ...]
    grid: tuple[float, ...]
    simulate: bool = True
    overlays: tuple[str, ...] = ("exact", "approx")


def ebn0_grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    n = int(round((stop - start) / step))
    return tuple(round(start + k * step, 10) for k in range(n + 1))


_BASE = SystemConfig(topology="CD", protocol="EF", users=2, m_r=1, m_d=1,
                     fading=FadingProfile(m=1.0, paths=2), two_beta=128)


def _cfg(**kw) -> SystemConfig:
    fading = FadingProfile(m=kw.pop("m", 1.0), paths=kw.pop("paths", 2))
    return replace(_BASE, fading=fading, **kw)


def _fig6(protocol: str) -> tuple[tuple[str, SystemConfig], ...]:
    return (
        (f"cd_{protocol.lower()}", _cfg(protocol=protocol)),
        (f"cc_{protocol.lower()}", _cfg(topology="CC", protocol=protocol)),
        ("nc", _cfg(topology="NC")),
    )


def _fig7():
    out = []
    for m in (0.5, 0.8, 1.0, 2.0):
        for protocol in ("EF", "DF"):
            out.append((f"m{m:g}_{protocol.lower()}", _cfg(protocol=protocol, m=m)))
    return tuple(out)


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset("fig6a", "NC, CC and CD with EF relaying; (1,1), 1:1:1, m=1, L=2, 2beta=128",
               _fig6("EF"), ebn0_grid(0, 20, 2)),
        Preset("fig6b", "NC, CC and CD with DF relaying; (1,1), 1:1:1, m=1, L=2, 2beta=128",
               _fig6("DF"), ebn0_grid(0, 20, 2)),
        Preset("fig7", "CD EF versus DF for m in {0.5, 0.8, 1, 2}",
               _fig7(), ebn0_grid(0, 24, 2)),
        Preset("fig8", "CD DF for several (M_R, M_D) pairs, 1:1:1",
               tuple((f"mr{a}_md{b}", _cfg(protocol="DF", m_r=a, m_d=b))
                     for a, b in ((1, 1), (2, 1), (2, 2), (3, 2))),
               ebn0_grid(0, 20, 2)),
        Preset("fig9", "CD DF with (2,2) for distance ratios 1:0.8:0.4 and 1:1:1",
               (("d1_0.8_0.4", _cfg(protocol="DF", m_r=2, m_d=2, d_sr=0.8, d_rd=0.4)),
                ("d1_1_1", _cfg(protocol="DF", m_r=2, m_d=2))),
               ebn0_grid(0, 16, 2)),
        Preset("fig10", "CD DF with (2,2) for 2beta in {64, 128, 256}",
               tuple((f"sf{sf}", _cfg(protocol="DF", m_r=2, m_d=2, two_beta=sf))
                     for sf in (64, 128, 256)),
               ebn0_grid(0, 16, 2)),
        Preset("fig11", "CD DF exact curves for M_R = 1..6 with M_D = 2",
               tuple((f"mr{k}", _cfg(protocol="DF", m_r=k, m_d=2)) for k in range(1, 7)),
               ebn0_grid(0, 24, 2), simulate=False, overlays=("exact",)),
        Preset("fig12a", "NC exact versus closed form for L in {2, 4, 8}",
               tuple((f"l{L}", _cfg(topology="NC", paths=L)) for L in (2, 4, 8)),
               ebn0_grid(0, 30, 2), simulate=False),
        Preset("fig12b", "CD EF exact versus closed form for L in {2, 4, 8}",
               tuple((f"l{L}", _cfg(paths=L)) for L in (2, 4, 8)),
               ebn0_grid(0, 24, 2), simulate=False),
    )
}
