import csv
import json

import pytest

from stagsim.cli import CSV_COLUMNS, main

RUN_MANIFEST = """
campaign: run
seed: 42
policy:
  kind: epsilon-greedy
  epsilon: 1/128
opponent:
  p: 0.81
  q: 0.36
game:
  b: 2
run:
  rounds: 120
  replicates: 6
  trace_window: 40
"""


def write_manifest(tmp_path, text, name="manifest.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def read_rows(out_dir):
    with (out_dir / "result.csv").open() as fh:
        return list(csv.DictReader(fh))


def test_run_campaign_writes_single_row_and_meta(tmp_path, capsys):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 1
    row = rows[0]
    assert list(row) == CSV_COLUMNS
    assert row["campaign"] == "run"
    assert row["policy"] == "epsilon-greedy"
    assert row["epsilon"] == "0.0078125"
    assert row["c"] == "" and row["prior"] == "" and row["window"] == ""
    assert 0.0 <= float(row["I"]) <= 1.0
    meta = json.loads((out / "meta.json").read_text())
    assert meta["master_seed"] == "42"
    assert meta["engine_version"]
    assert meta["manifest"]["opponent"] == {"p": 0.81, "q": 0.36}
    assert "wall_clock_seconds" in meta


def test_rerun_is_byte_identical(tmp_path):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--manifest", str(manifest), "--out", str(out_a)]) == 0
    assert main(["run", "--manifest", str(manifest), "--out", str(out_b)]) == 0
    assert (out_a / "result.csv").read_bytes() == (out_b / "result.csv").read_bytes()


def test_worker_count_does_not_change_results(tmp_path):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    out_a, out_b = tmp_path / "w1", tmp_path / "w4"
    assert main(["run", "--manifest", str(manifest), "--out", str(out_a), "--workers", "1"]) == 0
    assert main(["run", "--manifest", str(manifest), "--out", str(out_b), "--workers", "4"]) == 0
    assert (out_a / "result.csv").read_bytes() == (out_b / "result.csv").read_bytes()


def test_strategy_sweep_row_count(tmp_path):
    text = RUN_MANIFEST.replace("campaign: run", "campaign: sweep-pq")
    text += "grids:\n  p: [0.0, 0.5, 1.0]\n  q: [0.0, 0.5, 1.0]\n"
    manifest = write_manifest(tmp_path, text)
    out = tmp_path / "out"
    assert main(["sweep-pq", "--manifest", str(manifest), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 9
    assert [(row["p"], row["q"]) for row in rows][:3] == [
        ("0", "0"), ("0", "0.5"), ("0", "1"),
    ]
    assert all(row["b"] == "2" for row in rows)


def test_benefit_sweep_rows_follow_grid(tmp_path):
    text = RUN_MANIFEST.replace("campaign: run", "campaign: sweep-b")
    text += "grids:\n  b: {start: 0, stop: 1, step: 0.5}\n"
    manifest = write_manifest(tmp_path, text)
    out = tmp_path / "out"
    assert main(["sweep-b", "--manifest", str(manifest), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert [row["b"] for row in rows] == ["0", "0.5", "1"]


def test_tune_records_best_value(tmp_path):
    text = RUN_MANIFEST.replace("campaign: run", "campaign: tune")
    text += "grids:\n  epsilon: [1/256, 1/16]\n"
    manifest = write_manifest(tmp_path, text)
    out = tmp_path / "out"
    assert main(["tune", "--manifest", str(manifest), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert [row["epsilon"] for row in rows] == ["0.00390625", "0.0625"]
    meta = json.loads((out / "meta.json").read_text())
    assert meta["tuned_parameter"] == "epsilon"
    assert meta["best_value"] in (1 / 256, 1 / 16)


def test_time_course_emits_one_row_per_window(tmp_path):
    text = RUN_MANIFEST.replace("campaign: run", "campaign: time-course")
    manifest = write_manifest(tmp_path, text)
    out = tmp_path / "out"
    assert main(["time-course", "--manifest", str(manifest), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert [row["window"] for row in rows] == ["0", "1", "2"]
    assert all(row["stderr_I"] == "" for row in rows)


def test_traces_written_and_consistent(tmp_path):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    out = tmp_path / "out"
    code = main(
        ["run", "--manifest", str(manifest), "--out", str(out), "--emit-traces"]
    )
    assert code == 0
    trace_files = sorted((out / "traces").glob("replicate_*.csv"))
    assert len(trace_files) == 6
    with trace_files[0].open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 120
    assert rows[0]["round"] == "1"
    for row in rows:
        action, opponent, reward = row["action"], row["opponent_action"], row["reward"]
        if action == "D":
            assert reward == "3"
        elif opponent == "C":
            assert reward == "5"
        else:
            assert reward == "0"


def test_campaign_mismatch_fails(tmp_path, capsys):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    assert main(["sweep-b", "--manifest", str(manifest), "--out", str(tmp_path / "o")]) == 1
    assert "mismatch" in capsys.readouterr().err


def test_invalid_manifest_is_single_line_error(tmp_path, capsys):
    manifest = write_manifest(tmp_path, RUN_MANIFEST.replace("q: 0.36", "q: 1.36"))
    assert main(["run", "--manifest", str(manifest), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert err.startswith("simcli: error:")
    assert err.strip().count("\n") == 0


def test_missing_manifest_file(tmp_path, capsys):
    assert main(["run", "--manifest", str(tmp_path / "nope.yaml")]) == 1
    assert "cannot read manifest" in capsys.readouterr().err


def test_no_output_dir_anywhere_fails(tmp_path, capsys):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    assert main(["run", "--manifest", str(manifest)]) == 1
    assert "output" in capsys.readouterr().err


def test_env_seed_used_when_manifest_has_none(tmp_path, monkeypatch):
    text = RUN_MANIFEST.replace("seed: 42\n", "")
    manifest = write_manifest(tmp_path, text)
    out = tmp_path / "out"
    monkeypatch.setenv("SIMCLI_SEED", "42")
    assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == 0
    meta = json.loads((out / "meta.json").read_text())
    assert meta["master_seed"] == "42"


def test_env_seed_reproduces_manifest_seed(tmp_path, monkeypatch):
    manifest_seeded = write_manifest(tmp_path, RUN_MANIFEST, "seeded.yaml")
    out_a = tmp_path / "a"
    assert main(["run", "--manifest", str(manifest_seeded), "--out", str(out_a)]) == 0

    manifest_bare = write_manifest(
        tmp_path, RUN_MANIFEST.replace("seed: 42\n", ""), "bare.yaml"
    )
    out_b = tmp_path / "b"
    monkeypatch.setenv("SIMCLI_SEED", "42")
    assert main(["run", "--manifest", str(manifest_bare), "--out", str(out_b)]) == 0
    assert (out_a / "result.csv").read_bytes() == (out_b / "result.csv").read_bytes()


def test_seed_in_both_places_is_an_error(tmp_path, monkeypatch, capsys):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    monkeypatch.setenv("SIMCLI_SEED", "7")
    assert main(["run", "--manifest", str(manifest), "--out", str(tmp_path / "o")]) == 1
    assert "both" in capsys.readouterr().err


def test_no_seed_at_all_is_an_error(tmp_path, capsys):
    manifest = write_manifest(tmp_path, RUN_MANIFEST.replace("seed: 42\n", ""))
    assert main(["run", "--manifest", str(manifest), "--out", str(tmp_path / "o")]) == 1
    assert "seed" in capsys.readouterr().err


def test_partial_outputs_removed_on_failure(tmp_path, monkeypatch):
    manifest = write_manifest(tmp_path, RUN_MANIFEST)
    out = tmp_path / "out"

    import stagsim.cli as cli_module

    def boom(*args, **kwargs):
        raise RuntimeError("disk full")

    monkeypatch.setattr(cli_module.json, "dump", boom)
    assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == 2
    assert not (out / "result.csv").exists()
    assert not (out / "meta.json").exists()
