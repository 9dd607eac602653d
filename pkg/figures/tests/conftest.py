import csv

import pytest

SCHEMA = [
    "campaign", "policy", "epsilon", "c", "prior", "p", "q", "b",
    "rounds", "replicates", "window", "I", "I_R", "stderr_I",
]


@pytest.fixture
def write_csv(tmp_path):
    """Write schema-compliant result rows; values default to empty."""

    counter = {"n": 0}

    def _write(rows, name=None, header=None):
        counter["n"] += 1
        path = tmp_path / (name or f"result_{counter['n']}.csv")
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header or SCHEMA)
            for row in rows:
                writer.writerow([row.get(col, "") for col in SCHEMA])
        return path

    return _write


def sweep_pq_rows(policy, p_values, q_values, value_fn, epsilon="", c="", b="2"):
    rows = []
    for p in p_values:
        for q in q_values:
            rows.append(
                {
                    "campaign": "sweep-pq", "policy": policy,
                    "epsilon": epsilon, "c": c,
                    "p": f"{p:g}", "q": f"{q:g}", "b": b,
                    "rounds": "2000", "replicates": "500",
                    "I": f"{value_fn(p, q):.6g}", "I_R": "0.5", "stderr_I": "0.01",
                }
            )
    return rows
