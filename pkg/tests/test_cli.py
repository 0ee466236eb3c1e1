import json
import subprocess
import sys

import pytest

from anonmesh.cli import main
from anonmesh.geodata import load_dataset


def run_cli(*args) -> int:
    return main([str(a) for a in args])


def read(path) -> str:
    return path.read_text(encoding="utf-8")


# -- generate ---------------------------------------------------------------------


def test_generate_complete_csv(tmp_path, capsys):
    out = tmp_path / "mesh.csv"
    assert run_cli("generate", "complete", 51, "--seed", 1, "--out", out) == 0
    d = load_dataset(str(out))
    assert len(d) == 51
    assert "wrote 51 points" in capsys.readouterr().out


def test_generate_zero_points(tmp_path):
    out = tmp_path / "empty.csv"
    assert run_cli("generate", "uniform", 0, "--out", out) == 0
    assert len(load_dataset(str(out))) == 0


def test_generate_deterministic_bytes(tmp_path):
    out = tmp_path / "a.csv"
    run_cli("generate", "uniform", 25, "--seed", 9, "--extent", 12_000, "--out", out)
    first = out.read_bytes()
    run_cli("generate", "uniform", 25, "--seed", 9, "--extent", 12_000, "--out", out)
    assert out.read_bytes() == first


def test_generate_writes_manifest(tmp_path):
    out = tmp_path / "m.csv"
    run_cli("generate", "complete", 5, "--out", out)
    manifest = json.loads(read(tmp_path / "m.csv.manifest.json"))
    assert manifest["tool"] == "anonmesh"
    assert manifest["command"] == "generate"
    assert manifest["seeds"] == [0]
    assert read(out).startswith("# manifest: m.csv.manifest.json\n")


# -- preprocess --------------------------------------------------------------------


def test_preprocess_counts(tmp_path, capsys):
    src = tmp_path / "raw.csv"
    # two points 100 m apart (second dropped), one 300 m away, one far island
    deg100 = 100.0 / 111_194.9266
    src.write_text(
        "lat,lon\n"
        f"0.0,0.0\n"
        f"0.0,{deg100}\n"
        f"0.0,{3 * deg100}\n"
        f"0.0,1.0\n",
        encoding="utf-8",
    )
    out = tmp_path / "proc.csv"
    assert run_cli("preprocess", "--input", src, "--profile", "lora-subghz",
                   "--out", out) == 0
    assert capsys.readouterr().out.strip().splitlines()[-1] == "total=4 close=3 cc=2"
    d = load_dataset(str(out))
    assert len(d) == 2


def test_preprocess_empty_input_warns(tmp_path, capsys):
    src = tmp_path / "empty.csv"
    src.write_text("lat,lon\n", encoding="utf-8")
    out = tmp_path / "proc.csv"
    assert run_cli("preprocess", "--input", src, "--out", out) == 0
    captured = capsys.readouterr()
    assert "no gateways left" in captured.err
    assert "total=0 close=0 cc=0" in captured.out
    assert len(load_dataset(str(out))) == 0


def test_preprocess_missing_input(tmp_path, capsys):
    assert run_cli("preprocess", "--input", tmp_path / "nope.csv",
                   "--out", tmp_path / "x.csv") == 1
    assert "error:" in capsys.readouterr().err


def test_preprocess_parse_error_names_line(tmp_path, capsys):
    src = tmp_path / "bad.csv"
    src.write_text("lat,lon\n95.0,0.0\n", encoding="utf-8")
    assert run_cli("preprocess", "--input", src, "--out", tmp_path / "x.csv") == 1
    assert ":2:" in capsys.readouterr().err


# -- metrics -----------------------------------------------------------------------


def test_metrics_complete_mesh_row(tmp_path, capsys):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "complete", 51, "--seed", 3, "--out", data)
    out = tmp_path / "metrics.json"
    csv_out = tmp_path / "metrics.csv"
    assert run_cli("metrics", "--input", data, "--profile", "lora-subghz",
                   "--max-hops", 3, "--out", out, "--csv", csv_out) == 0
    doc = json.loads(read(out))
    assert doc["avg_anonymity_set"] == 50.0
    assert doc["min_anonymity_set"] == 50
    assert doc["avg_effective_set"] == pytest.approx(50.0, abs=1e-6)
    assert doc["avg_node2node_paths"] == 2402.0
    assert doc["avg_unique_paths"] == 50.0
    assert doc["manifest"]["command"] == "metrics"
    lines = read(csv_out).splitlines()
    assert lines[1] == "avg_anon,min_anon,avg_eff,min_eff,avg_n2n,avg_unique"
    printed = capsys.readouterr().out
    assert "50,50,50,50,2402,50" in printed


def test_metrics_per_gateway_rows(tmp_path):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "complete", 7, "--out", data)
    out = tmp_path / "m.json"
    assert run_cli("metrics", "--input", data, "--max-hops", 2,
                   "--per-gateway", "--out", out) == 0
    doc = json.loads(read(out))
    assert len(doc["per_gateway"]) == 7


def test_metrics_enumeration_cap_guidance(tmp_path, capsys, monkeypatch):
    import anonmesh.cli as cli_mod
    from anonmesh.errors import EnumerationLimitError

    def explode(*a, **k):
        raise EnumerationLimitError("too many paths")

    monkeypatch.setattr(cli_mod.anonymity, "full_report", explode)
    data = tmp_path / "mesh.csv"
    run_cli("generate", "complete", 5, "--out", data)
    assert run_cli("metrics", "--input", data, "--out", tmp_path / "m.json") == 1
    assert "lower --max-hops" in capsys.readouterr().err


# -- simulate -----------------------------------------------------------------------


def _sim_config(tmp_path, extra: str = ""):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(
        "sim.runs = 2\n"
        "sim.duration_s = 40\n"
        "sim.base_seed = 7\n"
        "protocol.max_hops = 2\n"
        "protocol.bias_enabled = false\n" + extra,
        encoding="utf-8",
    )
    return cfg


def test_simulate_runs_and_outputs(tmp_path, capsys):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 15, "--extent", 8000, "--seed", 2, "--out", data)
    capsys.readouterr()
    out = tmp_path / "r.json"
    csv_out = tmp_path / "r.csv"
    assert run_cli("simulate", "--input", data, "--config", _sim_config(tmp_path),
                   "--out", out, "--csv", csv_out) == 0
    doc = json.loads(read(out))
    assert len(doc["runs"]) == 2
    assert doc["runs"][0]["seed"] == 7
    assert {"client", "origin", "output", "hops", "tls_delay_s", "upload_s"} == set(
        doc["runs"][0]["sessions"][0]
    )
    table = capsys.readouterr().out
    assert table.startswith("clients,mean_tls_s,mean_upload_s,sessions")
    lines = read(csv_out).splitlines()
    assert lines[1] == "client_count,run,client,origin,output,hops,tls_delay_s,upload_s"


def test_simulate_client_sweep(tmp_path):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 15, "--extent", 8000, "--seed", 2, "--out", data)
    out = tmp_path / "sweep.json"
    assert run_cli("simulate", "--input", data, "--config", _sim_config(tmp_path),
                   "--clients", "1,3", "--runs", 1, "--out", out) == 0
    doc = json.loads(read(out))
    assert [c["client_count"] for c in doc["campaigns"]] == [1, 3]


def test_simulate_hop0_mean_and_default_runs(tmp_path, capsys):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "complete", 4, "--out", data)
    cfg = tmp_path / "h0.cfg"
    cfg.write_text("sim.duration_s = 2\nsim.payload_bytes = 0\n", encoding="utf-8")
    out = tmp_path / "h0.json"
    capsys.readouterr()
    assert run_cli("simulate", "--input", data, "--config", cfg, "--max-hops", 0,
                   "--out", out) == 0
    doc = json.loads(read(out))
    assert len(doc["runs"]) == 30  # campaign default
    summary = capsys.readouterr().out.splitlines()[1]
    assert summary.startswith("1,0.2,")  # hop-0 TLS mean is exactly 2x wan delay


def test_simulate_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("sim.warp_speed = 9\n", encoding="utf-8")
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 10, "--extent", 5000, "--out", data)
    assert run_cli("simulate", "--input", data, "--config", cfg) == 1
    assert "sim.warp_speed" in capsys.readouterr().err


def test_simulate_deterministic_bytes(tmp_path):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 12, "--extent", 8000, "--seed", 5, "--out", data)
    out = tmp_path / "x.json"
    run_cli("simulate", "--input", data, "--config", _sim_config(tmp_path), "--out", out)
    first = out.read_bytes()
    run_cli("simulate", "--input", data, "--config", _sim_config(tmp_path), "--out", out)
    assert out.read_bytes() == first


# -- distance -----------------------------------------------------------------------


def test_distance_csv(tmp_path, capsys):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 20, "--extent", 8000, "--seed", 4, "--out", data)
    out = tmp_path / "d.csv"
    assert run_cli("distance", "--input", data, "--max-hops", "0,1,2",
                   "--samples", 400, "--seed", 6, "--out", out) == 0
    lines = read(out).splitlines()
    assert lines[0].startswith("# manifest:")
    assert lines[1] == "max_hops,mean_m,stddev_m,n"
    assert len(lines) == 5
    assert lines[2].startswith("0,0,0,400")


def test_distance_deterministic_bytes(tmp_path):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 20, "--extent", 8000, "--seed", 4, "--out", data)
    out = tmp_path / "a.csv"
    run_cli("distance", "--input", data, "--max-hops", "1,2",
            "--samples", 300, "--seed", 8, "--out", out)
    first = out.read_bytes()
    run_cli("distance", "--input", data, "--max-hops", "1,2",
            "--samples", 300, "--seed", 8, "--out", out)
    assert out.read_bytes() == first


def test_distance_default_sample_count(tmp_path):
    data = tmp_path / "mesh.csv"
    run_cli("generate", "uniform", 5, "--extent", 2000, "--seed", 1, "--out", data)
    out = tmp_path / "d.csv"
    assert run_cli("distance", "--input", data, "--max-hops", "1", "--out", out) == 0
    assert read(out).splitlines()[2].endswith(",10000")


# -- process-level smoke -----------------------------------------------------------


def test_module_entrypoint_help():
    proc = subprocess.run(
        [sys.executable, "-m", "anonmesh", "--help"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    assert "generate" in proc.stdout
