import csv
import io

from conley.bench import BenchRow, BenchReport, run_benchmark
from conley.randgen import coarsen_to, triangle_soup
from helpers import annulus


def test_tiny_run_and_formats():
    K, F, _ = annulus()
    S = triangle_soup(10, 20, seed=3)
    G, _ = coarsen_to(S, 0.05, seed=3)
    report = run_benchmark([("annulus", K, F), ("soup", S, G)], repetitions=2)
    assert [r.name for r in report.rows] == ["annulus", "soup"]
    r = report.rows[0]
    assert r.size == 11 and r.max_dim == 2 and abs(r.avg_dim - 9 / 11) < 1e-12
    assert r.status == "ok" and r.conmat_s > 0 and r.connectmat_s > 0
    md = report.to_markdown().splitlines()
    assert md[0].startswith("| Instance |") and "Speed Up" in md[0]
    assert md[2].startswith("| annulus | 11 | 2 / 0.818 | 0.072727 |")
    rows = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert rows[1]["instance"] == "soup" and rows[1]["status"] == "ok"


def test_speedup_rounding():
    row = BenchRow("x", 1, 0, 0.0, 0.0, connectmat_s=2.6, conmat_s=1.0)
    assert row.speedup == 3 and abs(row.ratio() - 2.6) < 1e-12
    assert BenchRow("x", 1, 0, 0.0, 0.0, None, None, "timeout").speedup is None
    text = BenchReport([BenchRow("x", 1, 0, 0.0, 0.0, None, None, "timeout")]).to_markdown()
    assert "timeout / timeout" in text and "n/a" in text


def test_timeout_marks_the_row():
    S = triangle_soup(20, 200, seed=1)
    G, _ = coarsen_to(S, 0.01, seed=1)
    report = run_benchmark([("soup", S, G)], repetitions=1, timeout=0.0)
    assert report.rows[0].status == "timeout"
    assert list(csv.DictReader(io.StringIO(report.to_csv())))[0]["speedup"] == ""
