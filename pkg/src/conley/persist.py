"""Persistence of Morse decompositions filtered by a Lyapunov function."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .complex import InvariantError, SimplicialComplex
from .morse import FilteredOrder, MorseDecomposition, filtered_order
from .reduce import ConnectionMatrix, _reduce_plain, conmat
from .z2matrix import boundary_matrix, iter_bits

INF = math.inf


@dataclass(frozen=True)
class LyapunovFunction:
    """One value per poset element, i.e. constant on each Morse set."""

    values: tuple[float, ...]

    def __call__(self, p: int) -> float:
        return self.values[p]

    def check(self, md: MorseDecomposition) -> None:
        if len(self.values) != len(md):
            raise InvariantError(
                f"Lyapunov function has {len(self.values)} values for {len(md)} Morse sets")
        for p in range(len(md)):
            for q in md.below[p]:
                if self.values[q] > self.values[p]:
                    raise InvariantError(
                        f"not Lyapunov: Morse set {q} <= {p} but f({q})={self.values[q]} > f({p})={self.values[p]}")

    @classmethod
    def from_simplex_values(cls, md: MorseDecomposition, values: Sequence[float]) -> "LyapunovFunction":
        out = []
        for p, m in enumerate(md.sets):
            vals = {values[s] for s in m}
            if len(vals) != 1:
                raise InvariantError(f"not Lyapunov: f is not constant on Morse set {p}")
            out.append(vals.pop())
        return cls(tuple(out))

    def to_json(self) -> dict:
        return {"values": list(self.values)}

    @classmethod
    def from_json(cls, data, md: MorseDecomposition) -> "LyapunovFunction":
        """Accepts ``{"values": [...]}`` or ``{"values": {"p": value}}``."""
        vals = data.get("values") if isinstance(data, dict) else None
        if isinstance(vals, Mapping):
            try:
                table = {int(k): float(v) for k, v in vals.items()}
            except ValueError as exc:
                raise ValueError(f"malformed Lyapunov JSON: {exc}") from None
            missing = [p for p in range(len(md)) if p not in table]
            if missing:
                raise ValueError(f"Lyapunov JSON has no value for Morse set {missing[0]}")
            vals = [table[p] for p in range(len(md))]
        elif not isinstance(vals, list):
            raise ValueError("Lyapunov JSON needs a 'values' list or map")
        return cls(tuple(float(v) for v in vals))


def downset_function(md: MorseDecomposition) -> LyapunovFunction:
    """Each Morse set gets the number of simplices in its downset."""
    sizes = [len(m) for m in md.sets]
    return LyapunovFunction(tuple(
        float(sum(sizes[q] for q in iter_bits(d))) for d in md.downsets))


def f_compatible_order(md: MorseDecomposition, f: LyapunovFunction) -> tuple[int, ...]:
    """Linear extension sorted by ``f``; ties keep the default extension's order."""
    f.check(md)
    rank = md.rank
    return tuple(sorted(range(len(md)), key=lambda p: (f(p), rank[p])))


@dataclass(frozen=True, order=True)
class Bar:
    dim: int
    birth: float
    death: float

    @property
    def length(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class Barcode:
    bars: tuple[Bar, ...]

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def finite(self, dim: int | None = None) -> list[Bar]:
        return [b for b in self.bars if b.death != INF and (dim is None or b.dim == dim)]

    def infinite(self, dim: int | None = None) -> list[Bar]:
        return [b for b in self.bars if b.death == INF and (dim is None or b.dim == dim)]

    def multiset(self) -> Counter:
        return Counter(self.bars)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dim", "birth", "death"])
        for b in sorted(self.bars):
            w.writerow([b.dim, _fmt(b.birth), _fmt(b.death)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Barcode":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["dim", "birth", "death"]:
            raise ValueError("barcode CSV must start with header 'dim,birth,death'")
        bars = []
        for lineno, row in enumerate(rows[1:], start=2):
            try:
                d, b, e = row
                bars.append(Bar(int(d), float(b), float(e)))
            except ValueError:
                raise ValueError(f"line {lineno}: malformed bar {row!r}") from None
        return cls(tuple(sorted(bars)))

    def to_svg(self, log_scale: bool = False, width: int = 640, bar_height: int = 8) -> str:
        return _barcode_svg(self, log_scale, width, bar_height)


def _fmt(x: float) -> str:
    if x == INF:
        return "inf"
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _pairs_to_bars(cols: list[int], dims: Sequence[int], value: Sequence[float],
                   same_block: Sequence[int], keep_zero: bool) -> Barcode:
    """Bars from a completely reduced matrix.

    Pairs whose two ends lie in the same block (Morse set) are dropped;
    zero columns that are not pivots give infinite bars.
    """
    pivots = set()
    bars = []
    for j, c in enumerate(cols):
        if not c:
            continue
        i = c.bit_length() - 1
        pivots.add(i)
        if same_block[i] == same_block[j]:
            continue
        if value[i] == value[j] and not keep_zero:
            continue
        bars.append(Bar(dims[i], value[i], value[j]))
    for j, c in enumerate(cols):
        if not c and j not in pivots:
            bars.append(Bar(dims[j], value[j], INF))
    return Barcode(tuple(sorted(bars)))


def morse_persistence(K: SimplicialComplex, md: MorseDecomposition, f: LyapunovFunction,
                      keep_zero: bool = False, order: FilteredOrder | None = None) -> Barcode:
    """Barcode of the filtration of ``K`` by Morse-set blocks in f-compatible order.

    ``order`` may replace the default order by any P-filtered order whose
    blocks have non-decreasing ``f``.
    """
    if order is None:
        order = filtered_order(K, md, linear_ext=f_compatible_order(md, f))
    else:
        f.check(md)
        vals = [f(p) for p in order.linear_ext]
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise InvariantError("order is not f-compatible")
    A = boundary_matrix(K, order, track_chains=False)
    cols = _reduce_plain(list(A.cols))
    return _pairs_to_bars(cols, A.dims, [f(g) for g in A.grading], A.grading, keep_zero)


def conley_persistence(cm: ConnectionMatrix, f: LyapunovFunction, keep_zero: bool = False) -> Barcode:
    """Barcode of a Conley complex filtered by ``f``.

    ``cm`` must come from a matrix ordered along an f-compatible extension.
    """
    cols = _reduce_plain(list(cm.cols))
    return _pairs_to_bars(cols, cm.dims, [f(g) for g in cm.grading], cm.grading, keep_zero)


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    witness: Bar | None = None

    def __bool__(self) -> bool:
        return self.equal


def persistence_equivalence_check(K: SimplicialComplex, md: MorseDecomposition,
                                  f: LyapunovFunction) -> EquivalenceReport:
    full = morse_persistence(K, md, f)
    order = filtered_order(K, md, linear_ext=f_compatible_order(md, f))
    _, cm = conmat(boundary_matrix(K, order, track_chains=False), check=False)
    conley = conley_persistence(cm, f)
    a, b = full.multiset(), conley.multiset()
    if a == b:
        return EquivalenceReport(True)
    diff = (a - b) + (b - a)
    return EquivalenceReport(False, min(diff))


# -- bottleneck distance ----------------------------------------------------

def bottleneck_distance(X: Barcode, Y: Barcode) -> float:
    """Exact bottleneck distance, maximised over dimensions.

    Infinite bars are matched among themselves by birth; a mismatch in their
    count gives ``inf``.
    """
    dims = {b.dim for b in X} | {b.dim for b in Y}
    best = 0.0
    for d in dims:
        xi = sorted(b.birth for b in X.infinite(d))
        yi = sorted(b.birth for b in Y.infinite(d))
        if len(xi) != len(yi):
            return INF
        for a, b in zip(xi, yi):
            best = max(best, abs(a - b))
        best = max(best, _bottleneck_finite(
            [(b.birth, b.death) for b in X.finite(d)], [(b.birth, b.death) for b in Y.finite(d)]))
    return best


def _bottleneck_finite(P: list[tuple[float, float]], Q: list[tuple[float, float]]) -> float:
    n, m = len(P), len(Q)
    if n == 0 and m == 0:
        return 0.0
    # left: P then diagonal copies of Q; right: Q then diagonal copies of P
    N = n + m
    cost = np.full((N, N), 0.0)
    for i, (b, d) in enumerate(P):
        for j, (b2, d2) in enumerate(Q):
            cost[i, j] = max(abs(b - b2), abs(d - d2))
        cost[i, m:] = INF
        cost[i, m + i] = (d - b) / 2
    for j, (b2, d2) in enumerate(Q):
        cost[n:, j] = INF
        cost[n + j, j] = (d2 - b2) / 2
    candidates = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect(cost <= candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _perfect(adj: np.ndarray) -> bool:
    match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    return bool((match >= 0).all())


# -- SVG --------------------------------------------------------------------

_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]


def _barcode_svg(bc: Barcode, log_scale: bool, width: int, bar_height: int) -> str:
    bars = sorted(bc.bars, key=lambda b: (b.dim, b.birth, b.death))
    finite_vals = [v for b in bars for v in (b.birth, b.death) if v != INF]
    lo = min(finite_vals, default=0.0)
    hi = max(finite_vals, default=1.0)
    if log_scale:
        def x(v: float) -> float:
            return math.log1p(max(v - lo, 0.0))
        span = x(hi) or 1.0
    else:
        def x(v: float) -> float:
            return v - lo
        span = (hi - lo) or 1.0
    margin, label_w = 10, 40
    plot_w = width - 2 * margin - label_w - 20
    height = 2 * margin + len(bars) * (bar_height + 4)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for k, b in enumerate(bars):
        y = margin + k * (bar_height + 4)
        x0 = margin + label_w + plot_w * x(b.birth) / span
        x1 = width - margin if b.death == INF else margin + label_w + plot_w * x(b.death) / span
        color = _COLORS[b.dim % len(_COLORS)]
        out.append(f'<text x="{margin}" y="{y + bar_height}" font-size="{bar_height}">H{b.dim}</text>')
        out.append(f'<rect x="{x0:.2f}" y="{y}" width="{max(x1 - x0, 1.0):.2f}" '
                   f'height="{bar_height}" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def load_lyapunov(path, md: MorseDecomposition) -> LyapunovFunction:
    with open(path) as fh:
        return LyapunovFunction.from_json(json.load(fh), md)


def random_lyapunov(md: MorseDecomposition, rng, max_step: int = 3) -> LyapunovFunction:
    """Random monotone integer values: each set sits ``0..max_step`` above its highest lower set."""
    vals = [0.0] * len(md)
    for p in md.linear_ext:
        base = max((vals[q] for q in md.below[p]), default=0.0)
        vals[p] = base + float(rng.integers(0, max_step + 1))
    return LyapunovFunction(tuple(vals))

