import pytest

from simfigures.data import (
    FigureDataError,
    load_results,
    policies_in_order,
    rectangular_grid,
    require_unit_interval,
    single_value,
)

from conftest import sweep_pq_rows


def test_loads_well_formed_rows(write_csv):
    path = write_csv(sweep_pq_rows("ucb1", [0.0, 1.0], [0.0, 1.0], lambda p, q: p * q))
    rows = load_results([path])
    assert len(rows) == 4
    assert rows[0].policy == "ucb1"
    assert rows[0].b == 2.0
    assert rows[0].epsilon is None


def test_concatenates_multiple_files(write_csv):
    a = write_csv(sweep_pq_rows("ucb1", [0.0], [0.0], lambda p, q: 0.5))
    b = write_csv(sweep_pq_rows("thompson", [0.0], [0.0], lambda p, q: 0.5))
    rows = load_results([a, b])
    assert {row.policy for row in rows} == {"ucb1", "thompson"}


def test_header_mismatch_is_hard_error(write_csv):
    path = write_csv([], header=["policy", "I"])
    with pytest.raises(FigureDataError, match="schema"):
        load_results([path])


def test_missing_file_is_hard_error(tmp_path):
    with pytest.raises(FigureDataError, match="cannot read"):
        load_results([tmp_path / "missing.csv"])


def test_no_data_rows_is_error(write_csv):
    path = write_csv([])
    with pytest.raises(FigureDataError, match="no data rows"):
        load_results([path])


def test_non_numeric_cell_is_error(write_csv):
    rows = sweep_pq_rows("ucb1", [0.0], [0.0], lambda p, q: 0.5)
    rows[0]["I"] = "high"
    path = write_csv(rows)
    with pytest.raises(FigureDataError, match="non-numeric"):
        load_results([path])


def test_unit_interval_enforced(write_csv):
    rows = sweep_pq_rows("ucb1", [0.0], [0.0], lambda p, q: 1.5)
    loaded = load_results([write_csv(rows)])
    with pytest.raises(FigureDataError, match="outside"):
        require_unit_interval(loaded)


def test_empty_index_column_is_error(write_csv):
    rows = sweep_pq_rows("ucb1", [0.0], [0.0], lambda p, q: 0.5)
    rows[0]["I"] = ""
    loaded = load_results([write_csv(rows)])
    with pytest.raises(FigureDataError, match="empty"):
        require_unit_interval(loaded)


def test_policy_panel_order(write_csv):
    rows = (
        sweep_pq_rows("thompson", [0.0], [0.0], lambda p, q: 0.5)
        + sweep_pq_rows("epsilon-greedy", [0.0], [0.0], lambda p, q: 0.5)
        + sweep_pq_rows("ucb1", [0.0], [0.0], lambda p, q: 0.5)
    )
    loaded = load_results([write_csv(rows)])
    assert policies_in_order(loaded) == ["epsilon-greedy", "ucb1", "thompson"]


def test_rectangular_grid_roundtrip(write_csv):
    rows = sweep_pq_rows("ucb1", [0.0, 0.5, 1.0], [0.0, 1.0], lambda p, q: p)
    loaded = load_results([write_csv(rows)])
    p_values, q_values, matrix = rectangular_grid(loaded, "test")
    assert p_values == [0.0, 0.5, 1.0]
    assert q_values == [0.0, 1.0]
    assert matrix == [[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]]


def test_non_rectangular_grid_rejected(write_csv):
    rows = sweep_pq_rows("ucb1", [0.0, 1.0], [0.0, 1.0], lambda p, q: 0.5)[:-1]
    loaded = load_results([write_csv(rows)])
    with pytest.raises(FigureDataError, match="rectangular"):
        rectangular_grid(loaded, "test")


def test_duplicate_grid_point_rejected(write_csv):
    rows = sweep_pq_rows("ucb1", [0.5], [0.5], lambda p, q: 0.5) * 2
    loaded = load_results([write_csv(rows)])
    with pytest.raises(FigureDataError, match="duplicate"):
        rectangular_grid(loaded, "test")


def test_single_value_extraction(write_csv):
    rows = sweep_pq_rows("ucb1", [0.0, 1.0], [0.0], lambda p, q: 0.5, b="3")
    loaded = load_results([write_csv(rows)])
    assert single_value(loaded, "b", "test") == 3.0
    with_mixed = loaded + load_results(
        [write_csv(sweep_pq_rows("ucb1", [0.5], [0.5], lambda p, q: 0.5, b="4"))]
    )
    with pytest.raises(FigureDataError, match="one 'b' value"):
        single_value(with_mixed, "b", "test")
