import subprocess
import sys

import pytest

from dcskcd.cli import CSV_HEADER, ParseError, main, parse_config
from dcskcd.presets import PRESETS

BASIC = """
# two-user cooperative link
[link]
topology = CD
protocol = DF
m_r = 2
m_d = 1
two_beta = 64
[sweep]
ebn0_start = 0
ebn0_stop = 4
ebn0_step = 2
min_errors = 20
seed = 3
"""


def test_parse_basic():
    spec = parse_config(BASIC)
    (label, cfg), = spec.curves
    assert cfg.topology == "CD" and cfg.protocol == "DF" and cfg.m_r == 2
    assert cfg.two_beta == 64
    assert spec.grid == (0.0, 2.0, 4.0)
    assert spec.rule.min_errors == 20 and spec.seed == 3


def test_empty_document_lists_required():
    with pytest.raises(ParseError) as exc:
        parse_config("")
    for key in ("topology", "ebn0_start", "ebn0_stop", "ebn0_step"):
        assert key in str(exc.value)


@pytest.mark.parametrize("text,line", [
    ("topology = CD\ncolour = red\n", 2),
    ("topology = CD\nusers = two\n", 2),
    ("topology = CD\n\nm_r\n", 3),
    ("topology = CD\ntopology = NC\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_config(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_invariant_violation():
    with pytest.raises(ParseError):
        parse_config("topology = CD\nusers = 3\nebn0_start=0\nebn0_stop=1\nebn0_step=1\n")


def test_preset_config():
    spec = parse_config("preset = fig6a\nseed = 9\n")
    assert spec.seed == 9
    label, cfg = spec.curves[0]
    assert (cfg.topology, cfg.protocol, cfg.m_r, cfg.m_d) == ("CD", "EF", 1, 1)
    assert (cfg.d_sd, cfg.d_sr, cfg.d_rd) == (1.0, 1.0, 1.0)
    assert (cfg.fading.m, cfg.fading.paths, cfg.two_beta, cfg.users) == (1.0, 2, 128, 2)
    with pytest.raises(ParseError):
        parse_config("preset = fig6a\nm_r = 2\n")


def test_fig11_preset():
    p = PRESETS["fig11"]
    assert [c.m_r for _, c in p.curves] == [1, 2, 3, 4, 5, 6]
    assert all(c.m_d == 2 and c.protocol == "DF" and c.two_beta == 128 for _, c in p.curves)


def test_run_writes_csv(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text(BASIC)
    out = tmp_path / "a.csv"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    text = out.read_bytes().decode()
    lines = text.split("\n")
    assert lines[0] == CSV_HEADER and lines[-1] == ""
    assert "\r" not in text
    rows = [l.split(",") for l in lines[1:-1]]
    assert [float(r[0]) for r in rows] == [0.0, 2.0, 4.0]
    for r in rows:
        assert int(r[5]) >= 20 and r[6] != "" and r[7] == ""
        assert float(r[2]) <= float(r[1]) <= float(r[3])


def test_run_twice_byte_identical(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text(BASIC)
    a, b = tmp_path / "1.csv", tmp_path / "2.csv"
    main(["run", str(cfg), "--out", str(a)])
    main(["run", str(cfg), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_round_trip_precision(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("topology = NC\nebn0_start = 1\nebn0_stop = 1\nebn0_step = 1\n")
    out = tmp_path / "x.csv"
    main(["analytic-only", str(cfg), "--out", str(out)])
    row = out.read_text().splitlines()[1].split(",")
    from dcskcd.montecarlo import analytic_ber
    from dcskcd.system import SystemConfig
    assert float(row[6]) == analytic_ber(SystemConfig(topology="NC", ebn0_db=1.0))
    assert row[1:6] == [""] * 5


def test_unsupported_approx_warns(tmp_path, capsys):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("topology = CD\nm_r = 2\nebn0_start = 10\nebn0_stop = 10\n"
                   "ebn0_step = 1\nsimulate = false\n")
    out = tmp_path / "o.csv"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    assert "warning" in capsys.readouterr().err
    assert out.read_text().splitlines()[1].endswith(",")


def test_precision_failure_exit(tmp_path, monkeypatch, capsys):
    from dcskcd import montecarlo
    from dcskcd.errors import PrecisionError

    def boom(cfg, kind="exact"):
        raise PrecisionError("no convergence")

    monkeypatch.setattr(montecarlo, "analytic_ber", boom)
    cfg = tmp_path / "a.cfg"
    cfg.write_text("topology = NC\nebn0_start = 3\nebn0_stop = 3\nebn0_step = 1\n")
    assert main(["analytic-only", str(cfg), "--out", str(tmp_path / "o.csv")]) == 1
    assert "3.0" in capsys.readouterr().err


def test_bad_config_exit(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("nope = 1\n")
    assert main(["run", str(cfg)]) == 2


def test_preset_multi_curve_files(tmp_path):
    out = tmp_path / "f12.csv"
    assert main(["preset", "fig12b", "--out", str(out)]) == 0
    for L in (2, 4, 8):
        assert (tmp_path / f"f12_l{L}.csv").exists()


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    names = capsys.readouterr().out
    for n in PRESETS:
        assert n in names


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "dcskcd.cli", "--help"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "ebn0_start" in res.stdout and "min_errors" in res.stdout
