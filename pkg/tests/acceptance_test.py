import csv
import json

import pytest

from pcsim.cli import main


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def at_time(rows, t):
    return min(rows, key=lambda row: abs(float(row["t"]) - t))


@pytest.mark.slow
def test_default_relax_run_reaches_dark_pcs(tmp_path):
    out = tmp_path / "out"
    assert main(["relax_me", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    rows = read_csv(out / "series.csv")

    # Γt = 2000
    assert float(at_time(rows, 200.0)["purity"]) == pytest.approx(0.9997, abs=5e-4)
    assert max(abs(float(row["pol_re"])) for row in rows) < 1e-9
    assert max(abs(float(row["q_mean"]) - 1.0) for row in rows) < 1e-6
    assert max(float(row["leak"]) for row in rows) < 1e-6

    assert summary["steady_state"] is True
    assert summary["target"] == {"xi": [2.0, 0.0], "q": 1}
    final = summary["final"]
    assert final["purity"] >= 0.999
    assert final["purity"] == pytest.approx(0.9997, abs=5e-4)
    assert final["fidelity_pcs"] >= 0.99
    assert final["off_support"] < 0.01
    assert final["q_mean"] == pytest.approx(1.0, abs=1e-6)
    assert final["fluorescence_rate"] < 1e-3

    snapshot = read_csv(out / "pnm_gt2000.csv")
    off_support = sum(float(row["p"]) for row in snapshot if int(row["n"]) - int(row["m"]) != 1)
    assert off_support < 0.01
