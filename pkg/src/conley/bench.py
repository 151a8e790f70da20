"""Timing ConMat against ConnectMat on the same filtered boundary matrix."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass
from typing import Sequence

from .complex import InvariantError, SimplicialComplex
from .morse import filtered_order, minimum_morse_decomposition
from .mvf import MultivectorField, connection_probability
from .reduce import ReductionTimeout, conmat, connectmat
from .z2matrix import boundary_matrix


@dataclass
class BenchRow:
    name: str
    size: int
    max_dim: int
    avg_dim: float
    probability: float
    connectmat_s: float | None
    conmat_s: float | None
    status: str = "ok"

    @property
    def speedup(self) -> int | None:
        if self.connectmat_s is None or not self.conmat_s:
            return None
        return round(self.connectmat_s / self.conmat_s)

    def ratio(self) -> float | None:
        if self.connectmat_s is None or not self.conmat_s:
            return None
        return self.connectmat_s / self.conmat_s


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def to_markdown(self) -> str:
        out = ["| Instance | |K| | Max / Avg Dim | Probability | ConnectMat / ConMat | Speed Up |",
               "|---|---:|---|---:|---|---:|"]
        for r in self.rows:
            out.append(f"| {r.name} | {r.size:,} | {r.max_dim} / {r.avg_dim:.3f} | {r.probability:.6f} "
                       f"| {_fmt_time(r.connectmat_s, r.status)} / {_fmt_time(r.conmat_s, r.status)} "
                       f"| {_fmt_speedup(r)} |")
        return "\n".join(out) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "size", "max_dim", "avg_dim", "probability",
                    "connectmat_s", "conmat_s", "speedup", "status"])
        for r in self.rows:
            w.writerow([r.name, r.size, r.max_dim, f"{r.avg_dim:.3f}", f"{r.probability:.6f}",
                        "" if r.connectmat_s is None else f"{r.connectmat_s:.6f}",
                        "" if r.conmat_s is None else f"{r.conmat_s:.6f}",
                        "" if r.speedup is None else r.speedup, r.status])
        return buf.getvalue()


def _fmt_time(t: float | None, status: str) -> str:
    if t is None:
        return status
    if t < 1:
        return f"{t * 1000:.3f}ms"
    return f"{t:.2f}s"


def _fmt_speedup(r: BenchRow) -> str:
    s = r.speedup
    return "n/a" if s is None else f"≈ {s}"


def _time(fn, A, repetitions: int, timeout: float | None):
    times, result = [], None
    for _ in range(repetitions):
        deadline = None if timeout is None else time.perf_counter() + timeout
        t0 = time.perf_counter()
        result = fn(A, check=False, deadline=deadline)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def cross_validate(cm1, cm2, md) -> None:
    """Both matrices must be valid connection matrices with the same Betti numbers."""
    cm1.check_invariants(md)
    cm2.check_invariants(md)
    b1, b2 = cm1.betti_numbers(), cm2.betti_numbers()
    if b1 != b2:
        raise InvariantError(f"Betti numbers disagree: conmat {b1} vs connectmat {b2}")


def run_benchmark(instances: Sequence[tuple[str, SimplicialComplex, MultivectorField]],
                  repetitions: int = 3, timeout: float | None = None,
                  validate: bool = True) -> BenchReport:
    """Time both reductions on each instance; matrix construction is not timed."""
    rows = []
    for name, K, field in instances:
        md = minimum_morse_decomposition(K, field)
        A = boundary_matrix(K, filtered_order(K, md), track_chains=False)
        if validate:
            A.check_invariants(md=md)
        dims = K.dims
        row = BenchRow(name, len(K), max(dims), sum(dims) / len(K),
                       float(connection_probability(field)), None, None)
        try:
            row.conmat_s, (A1, cm1) = _time(conmat, A, repetitions, timeout)
            row.connectmat_s, (_, cm2) = _time(connectmat, A, repetitions, timeout)
        except ReductionTimeout:
            row.status = "timeout"
            rows.append(row)
            continue
        if validate:
            if not A1.is_upper_triangular():
                raise InvariantError(f"{name}: conmat output is not upper triangular")
            cross_validate(cm1, cm2, md)
        rows.append(row)
    return BenchReport(rows)
