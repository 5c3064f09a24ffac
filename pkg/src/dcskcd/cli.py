"""Command line driver: config parsing, presets and CSV output.

Config files are flat ``key = value`` documents.  ``#`` starts a comment and
``[section]`` headers are accepted but carry no meaning.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from .channel import FadingProfile
from .errors import DcskError
from .montecarlo import BerCurve, StoppingRule, sweep
from .presets import PRESETS, Preset, ebn0_grid
from .system import SystemConfig

CSV_HEADER = "ebn0_db,ber_sim,ci_low,ci_high,bits,errors,ber_exact,ber_approx"

# key -> (converter, help text); defaults come from SystemConfig / StoppingRule
_LINK_KEYS = {
    "topology": (str.upper, "NC, CC or CD (required without preset)"),
    "protocol": (str.upper, "EF or DF (default EF)"),
    "users": (int, "number of users n (default 2)"),
    "m_r": (int, "relay antennas (default 1)"),
    "m_d": (int, "destination antennas (default 1)"),
    "d_sd": (float, "source-destination distance (default 1)"),
    "d_sr": (float, "source-relay distance (default 1)"),
    "d_rd": (float, "relay-destination distance (default 1)"),
    "m": (float, "Nakagami shape (default 1)"),
    "paths": (int, "number of paths L (default 2)"),
    "omegas": (lambda s: tuple(float(x) for x in s.split(",")), "path powers, comma separated"),
    "delays": (lambda s: tuple(int(x) for x in s.split(",")), "path delays in samples"),
    "two_beta": (int, "spreading factor 2beta (default 128)"),
    "map": (str.lower, "chaotic map: chebyshev2 or logistic"),
}
_RUN_KEYS = {
    "ebn0_start": (float, "first Eb/N0 in dB (required without preset)"),
    "ebn0_stop": (float, "last Eb/N0 in dB (required without preset)"),
    "ebn0_step": (float, "Eb/N0 step in dB (required without preset)"),
    "min_errors": (int, "errors per point before stopping (default 100)"),
    "max_bits": (int, "bit cap per point (default 1e8)"),
    "seed": (int, "master seed (default 0)"),
    "overlays": (lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
                 "analytic columns: exact, approx, or none"),
    "simulate": (lambda s: _parse_bool(s), "run Monte Carlo (default true)"),
    "workers": (int, "worker processes (default 1)"),
    "preset": (str, "start from a named preset"),
}
REQUIRED = ("topology", "ebn0_start", "ebn0_stop", "ebn0_step")


class ParseError(DcskError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _parse_bool(s: str) -> bool:
    low = s.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


@dataclass
class ExperimentSpec:
    name: str
    curves: list[tuple[str, SystemConfig]]
    grid: tuple[float, ...]
    rule: StoppingRule = field(default_factory=StoppingRule)
    seed: int = 0
    overlays: tuple[str, ...] = ("exact", "approx")
    simulate: bool = True
    workers: int = 1


def spec_from_preset(preset: Preset, seed: int = 0, rule: StoppingRule | None = None,
                     workers: int = 1) -> ExperimentSpec:
    return ExperimentSpec(preset.name, list(preset.curves), preset.grid,
                          rule or StoppingRule(), seed, preset.overlays,
                          preset.simulate, workers)


def parse_config(text: str) -> ExperimentSpec:
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value, got {raw.strip()!r}", no)
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        table = _LINK_KEYS if key in _LINK_KEYS else _RUN_KEYS if key in _RUN_KEYS else None
        if table is None:
            raise ParseError(f"unknown key {key!r}", no)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", no)
        try:
            values[key] = table[key][0](val)
        except ValueError as exc:
            raise ParseError(f"bad value for {key}: {exc}", no) from None
        lines[key] = no

    def fail(msg: str, key: str | None = None):
        raise ParseError(msg, lines.get(key) if key else None)

    overlays = values.get("overlays", ("exact", "approx"))
    if overlays == ("none",):
        overlays = ()
    for o in overlays:
        if o not in ("exact", "approx"):
            fail(f"unknown overlay {o!r}", "overlays")
    try:
        rule = StoppingRule(min_errors=values.get("min_errors", 100),
                            max_bits=values.get("max_bits", 10**8))
    except DcskError as exc:
        fail(str(exc), "min_errors" if "min_errors" in values else "max_bits")
    workers = values.get("workers", 1)
    if workers < 1:
        fail("workers must be >= 1", "workers")
    seed = values.get("seed", 0)
    if seed < 0:
        fail("seed must be non-negative", "seed")

    if "preset" in values:
        name = values["preset"]
        if name not in PRESETS:
            fail(f"unknown preset {name!r}; see list-presets", "preset")
        frozen = [k for k in values if k in _LINK_KEYS or k.startswith("ebn0_")]
        if frozen:
            fail(f"preset parameters are frozen; {frozen[0]!r} cannot be overridden", frozen[0])
        spec = spec_from_preset(PRESETS[name], seed, rule, workers)
        if "overlays" in values:
            spec.overlays = overlays
        if "simulate" in values:
            spec.simulate = values["simulate"]
        return spec

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        fail("missing required keys: " + ", ".join(missing))
    step = values["ebn0_step"]
    if not step > 0:
        fail("ebn0_step must be > 0", "ebn0_step")
    if values["ebn0_stop"] < values["ebn0_start"]:
        fail("ebn0_stop must not be below ebn0_start", "ebn0_stop")
    grid = ebn0_grid(values["ebn0_start"], values["ebn0_stop"], step)

    try:
        fkw = {k: values[k] for k in ("m", "paths", "omegas", "delays") if k in values}
        if "omegas" in fkw and "paths" not in fkw:
            fkw["paths"] = len(fkw["omegas"])
        fading = FadingProfile(**fkw)
        skw = {k: values[k] for k in ("topology", "protocol", "users", "m_r", "m_d",
                                       "d_sd", "d_sr", "d_rd", "two_beta") if k in values}
        if "map" in values:
            skw["map_kind"] = values["map"]
        config = SystemConfig(fading=fading, **skw)
    except DcskError as exc:
        raise ParseError(f"invalid configuration: {exc}") from None
    return ExperimentSpec("run", [(config.topology.lower(), config)], grid, rule, seed,
                          tuple(overlays), values.get("simulate", True), workers)


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x)) if isinstance(x, float) else str(x)


def write_csv(curve: BerCurve, out: TextIO) -> None:
    rows = sorted(range(len(curve.ebn0_db)), key=lambda i: curve.ebn0_db[i])
    out.write(CSV_HEADER + "\n")
    for i in rows:
        p = curve.points[i]
        sim = ([p.ber, p.ci_low, p.ci_high, p.bits, p.errors] if p is not None
               else [None] * 5)
        cells = [curve.ebn0_db[i], *sim, curve.exact[i], curve.approx[i]]
        out.write(",".join(_fmt(c) for c in cells) + "\n")


def run_spec(spec: ExperimentSpec, out: Path | None, err: TextIO | None = None,
             simulate: bool | None = None) -> int:
    """Run every curve, write CSVs, return the process exit status."""
    simulate = spec.simulate if simulate is None else simulate
    err = sys.stderr if err is None else err
    status = 0
    multi = len(spec.curves) > 1
    for label, config in spec.curves:
        curve = sweep(config, spec.grid, spec.rule, spec.seed, spec.workers,
                      spec.overlays, simulate, label)
        for w in curve.warnings:
            print(f"warning: {w}", file=err)
        for f in curve.failures:
            print(f"error: {f}", file=err)
        if curve.failures:
            status = 1
        if out is None:
            if multi:
                sys.stdout.write(f"# {label}\n")
            write_csv(curve, sys.stdout)
            continue
        target = out.with_name(f"{out.stem}_{label}{out.suffix or '.csv'}") if multi else out
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            write_csv(curve, fh)
        print(f"wrote {target}", file=err)
    return status


def _help_epilog() -> str:
    rows = [f"  {k:<11} {h}" for k, (_, h) in {**_LINK_KEYS, **_RUN_KEYS}.items()]
    return "config keys:\n" + "\n".join(rows)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dcskcd", description="BER experiments for cooperative multi-user DCSK",
        epilog=_help_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("run", "simulate a config file"),
                           ("analytic-only", "evaluate analytic curves of a config file")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", type=Path)
        p.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
    p = sub.add_parser("preset", help="run a named preset")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None,
                   help="CSV path stem; multi-curve presets append _<curve>")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-bits", type=int, default=10**8)
    sub.add_parser("list-presets", help="show preset names")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for p in PRESETS.values():
                print(f"{p.name:<8} {p.description}")
            return 0
        if args.command == "preset":
            rule = StoppingRule(min_errors=args.min_errors, max_bits=args.max_bits)
            spec = spec_from_preset(PRESETS[args.name], args.seed, rule, args.workers)
            out = args.out if args.out is not None else Path(f"{args.name}.csv")
            return run_spec(spec, out)
        spec = parse_config(args.config.read_text(encoding="utf-8"))
        if args.command == "analytic-only":
            if not spec.overlays:
                spec.overlays = ("exact", "approx")
            return run_spec(spec, args.out, simulate=False)
        return run_spec(spec, args.out)
    except DcskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
