import pytest

from simfigures.cli import main

from conftest import sweep_pq_rows


def heatmap_inputs(write_csv):
    grid = [0.0, 0.5, 1.0]
    paths = []
    for policy, eps, c in (
        ("epsilon-greedy", "0.0078125", ""),
        ("ucb1", "", "4"),
        ("thompson", "", ""),
    ):
        rows = sweep_pq_rows(policy, grid, grid, lambda p, q: p, epsilon=eps, c=c)
        paths.append(str(write_csv(rows, name=f"{policy}.csv")))
    return paths


def test_cli_renders_heatmap_from_multiple_csvs(write_csv, tmp_path, capsys):
    paths = heatmap_inputs(write_csv)
    out = tmp_path / "fig.png"
    assert main(["pq-heatmap", "--csv", *paths, "--out", str(out)]) == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_cli_accepts_marker_and_threshold_flags(write_csv, tmp_path):
    paths = heatmap_inputs(write_csv)
    out = tmp_path / "fig.png"
    code = main(
        ["pq-heatmap", "--csv", *paths, "--out", str(out),
         "--no-threshold", "--marker", "0.5,0.25"]
    )
    assert code == 0
    assert out.exists()


def test_cli_reports_schema_errors_single_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    assert main(["b-sweep", "--csv", str(bad), "--out", str(tmp_path / "x.png")]) == 1
    err = capsys.readouterr().err
    assert err.startswith("figures: error:")
    assert err.strip().count("\n") == 0


def test_cli_rejects_bad_marker(write_csv, tmp_path):
    paths = heatmap_inputs(write_csv)
    with pytest.raises(SystemExit) as excinfo:  # argparse usage error
        main(
            ["pq-heatmap", "--csv", *paths, "--out", str(tmp_path / "x.png"),
             "--marker", "2,0.5"]
        )
    assert excinfo.value.code == 2
