import csv
import io
import json
import subprocess
import sys

import pytest

from bspr import NetworkConfig
from bspr.cli import main
from bspr.report import build_report
from bspr.sweeps import SweepSpec, render_sweep

FIG5 = {
    "relay_count": 8,
    "source_to_relay": [0.0125, 0.025, 0.0375, 0.05, 0.0625, 0.075, 0.0875, 0.1],
    "relay_to_dest": 0.3,
}


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# bspr-sweep v1")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


@pytest.fixture
def fig5_file(tmp_path):
    path = tmp_path / "fig5.json"
    path.write_text(json.dumps(FIG5))
    return path


def test_fig3_sweep(tmp_path):
    out = tmp_path / "fig3.csv"
    assert main(["sweep", "fig3", "--p", "0.1", "--k-max", "20", "-o", str(out)]) == 0
    rows = {int(r["relay_count"]): float(r["forwarding_rate"]) for r in read_csv(out)}
    assert len(rows) == 20
    assert all(rows[k] < rows[k + 1] for k in range(1, 20))
    # six-decimal output: K=16 prints as 0.999895, K=17 reaches 0.9999
    assert rows[16] == pytest.approx(0.999895)
    assert rows[17] >= 0.9999


def test_fig4_sweep(tmp_path):
    out = tmp_path / "fig4.csv"
    assert main(["sweep", "fig4", "--ps", "0.05", "--pd", "0.3", "--k-max", "12", "-o", str(out)]) == 0
    rows = read_csv(out)
    assert [r["verdict"] for r in rows] == ["known"] * 6 + ["unknown"] * 6
    for r in rows:
        assert float(r["decoding_rate"]) <= float(r["cutset_bound"]) + 1e-6
        assert float(r["forwarding_rate"]) <= float(r["cutset_bound"]) + 1e-6


def test_fig5_sweep(tmp_path, fig5_file):
    out = tmp_path / "fig5.csv"
    assert main(["sweep", "fig5", "--config", str(fig5_file), "-o", str(out)]) == 0
    rows = {int(r["decode_size"]): r for r in read_csv(out)}
    assert float(rows[0]["hybrid_rate"]) == pytest.approx(0.52, abs=0.005)
    assert float(rows[4]["hybrid_rate"]) == pytest.approx(0.71, abs=0.005)
    assert int(rows[4]["decode_bitmask"]) == 0b1111
    assert max(rows, key=lambda n: float(rows[n]["hybrid_rate"])) == 4


def test_custom_sweep(tmp_path, fig5_file):
    out = tmp_path / "custom.csv"
    assert main(["sweep", "custom", "--config", str(fig5_file), "-o", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 8
    last = rows[-1]
    assert float(last["hybrid_rate"]) == pytest.approx(0.713603, abs=1e-6)
    for r in rows:
        assert float(r["hybrid_rate"]) <= float(r["cutset_bound"]) + 1e-6


def test_sweeps_are_byte_identical(tmp_path, fig5_file):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        main(["sweep", "fig5", "--config", str(fig5_file), "-o", str(out)])
    assert a.read_bytes() == b.read_bytes()


def test_report_json(tmp_path, fig5_file, capsys):
    out = tmp_path / "rep.json"
    rc = main(["report", str(fig5_file), "--simulate", "trials=20000", "seed=5", "decoder=ml", "--json", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "hybrid rate: 0.713603" in text
    data = json.loads(out.read_text())
    assert NetworkConfig.from_dict(data["config"]) == NetworkConfig.from_dict(FIG5)
    assert data["hybrid"]["decode_set"] == [1, 2, 3, 4]
    assert data["decoding"]["subset"] == [1, 2, 3, 4, 5, 6]
    assert data["simulation"]["seed"] == 5 and data["simulation"]["decoder"]["kind"] == "ml"
    # report and fig5 sweep agree
    sweep = render_sweep(SweepSpec("fig5", config=NetworkConfig.from_dict(FIG5))).splitlines()[2:]
    for line in sweep:
        size, rate, mask = line.split(",")
        part = data["hybrid"]["by_size"][size]
        assert part["rate"] == pytest.approx(float(rate), abs=5e-7)
        assert part["decode_bitmask"] == int(mask)
    bound = data["cutset"]["bound"]
    for value in (data["forwarding_rate"], data["decoding"]["rate"], data["hybrid"]["rate"]):
        assert 0.0 <= value <= bound + 1e-9 <= 1.0 + 1e-9


def test_report_single_relay(tmp_path, capsys):
    path = tmp_path / "k1.json"
    path.write_text(json.dumps({"relay_count": 1, "source_to_relay": [0.05], "relay_to_dest": [0.3]}))
    assert main(["report", str(path), "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"]["known"]
    assert data["verdict"]["capacity"] == pytest.approx(0.118709, abs=5e-7)


def test_report_noiseless():
    rep = build_report(NetworkConfig.homogeneous(3, 0.0, 0.0)).to_dict()
    assert rep["cutset"]["bound"] == 1.0
    assert rep["forwarding_rate"] == 1.0
    assert rep["decoding"]["rate"] == 1.0
    assert rep["hybrid"]["rate"] == 1.0
    assert not rep["verdict"]["known"]


def test_report_cap_overrun_is_per_quantity():
    cfg = NetworkConfig(5, (0.01, 0.02, 0.03, 0.04, 0.05), (0.1, 0.2, 0.3, 0.4, 0.45))
    rep = build_report(cfg, cap=3, brute_force_cap=3)
    assert "forwarding_rate" in rep.failures and "cutset" in rep.failures
    assert rep.decoding is not None and rep.verdict is not None
    assert rep.hybrid is not None and rep.hybrid["exhaustive"] is False


def test_report_is_reproducible(tmp_path, fig5_file):
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    for out in outs:
        main(["report", str(fig5_file), "--simulate", "trials=5000", "seed=9", "--json", str(out)])
    assert outs[0].read_bytes() == outs[1].read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "fig3", "--p", "0.7", "--k-max", "3"],
        ["sweep", "fig3", "--k-max", "3"],
        ["sweep", "fig4", "--ps", "0.05", "--k-max", "3"],
        ["sweep", "fig5"],
        ["report", "/nonexistent/config.json"],
    ],
)
def test_invalid_input_exit_code(argv):
    assert main(argv) == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "bogus"])
    assert exc.value.code == 1


def test_invalid_config_names_field(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"relay_count": 2, "source_to_relay": [0.1, 0.9], "relay_to_dest": 0.1}))
    assert main(["report", str(path)]) == 1
    assert "source_to_relay[1]" in capsys.readouterr().err


def test_bad_simulate_option(fig5_file, capsys):
    assert main(["report", str(fig5_file), "--simulate", "trials=abc"]) == 1
    assert main(["report", str(fig5_file), "--simulate", "decoder=viterbi"]) == 1


def test_unwritable_output(fig5_file):
    assert main(["sweep", "fig5", "--config", str(fig5_file), "-o", "/nonexistent/dir/out.csv"]) == 1


def test_cap_exceeded_exit_code(tmp_path):
    path = tmp_path / "big.json"
    k = 22
    path.write_text(json.dumps({"relay_count": k, "source_to_relay": [0.001 * i for i in range(1, k + 1)], "relay_to_dest": 0.3}))
    assert main(["sweep", "custom", "--config", str(path), "--k-min", "21", "-o", str(tmp_path / "o.csv")]) == 3


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "bspr.cli", "sweep", "fig3", "--p", "0.2", "--k-max", "3"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[1] == "p,relay_count,forwarding_rate"
    assert len(proc.stdout.splitlines()) == 5
