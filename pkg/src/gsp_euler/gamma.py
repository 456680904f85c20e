"""Exact decomposition counts per tree node and the Euler-tour total.

For every node ``u`` we store ``gamma_u(k)``: the number of
(s,t)-decompositions of the node's subgraph that contain exactly ``k``
source-sink paths.  Tables are filled bottom-up with the parallel, series
and dangling recurrences, and the tour count is a weighted sum over the
root table.  All arithmetic is on Python integers; the series and dangling
terms are rational expressions that must come out integral, which is
checked on every evaluation.
"""

from __future__ import annotations

import gc
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import ArithmeticIntegrityError, InputError, LegalityError
from .tree import DANGLING, LEAF, PARALLEL, SERIES, DecompTree, check_legal


@dataclass(frozen=True)
class Kappa:
    """Feasible path counts: ``parity, parity + 2, ..., top``."""

    parity: int
    top: int

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.parity, self.top + 1, 2))

    def __len__(self) -> int:
        return max(0, (self.top - self.parity) // 2 + 1)

    def __contains__(self, k) -> bool:
        return isinstance(k, int) and self.parity <= k <= self.top and (k - self.parity) % 2 == 0


def kappa(d_s: int, d_t: int) -> Kappa:
    parity = d_s % 2
    top = min(d_s, d_t)
    if (top - parity) % 2:
        top -= 1
    return Kappa(parity, top)


@dataclass
class GammaTable:
    d_s: int
    d_t: int
    values: List[int]  # values[i] = gamma(parity + 2 i)
    kappa: Kappa = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.kappa = kappa(self.d_s, self.d_t)

    def __getitem__(self, k: int) -> int:
        kap = self.kappa
        if k not in kap:
            return 0
        return self.values[(k - kap.parity) // 2]

    def items(self) -> Iterator[Tuple[int, int]]:
        return zip(self.kappa, self.values)

    def nonzero(self) -> List[Tuple[int, int]]:
        return [(k, v) for k, v in self.items() if v]

    def as_dict(self) -> Dict[int, int]:
        return dict(self.items())

    @property
    def bits(self) -> int:
        return sum(v.bit_length() for v in self.values)


def gamma_leaf() -> GammaTable:
    return GammaTable(1, 1, [1])


class PrecompTables:
    """Factorials and powers of two up to the maximum degree, plus memoised
    combination factors (they depend only on small degree arguments)."""

    def __init__(self, delta: int):
        self.delta = delta
        self.fact = [1] * (delta + 1)
        for j in range(1, delta + 1):
            self.fact[j] = self.fact[j - 1] * j
        self.pow2 = [1 << j for j in range(delta + 1)]
        self._series: Dict[Tuple[int, int, int, int], int] = {}
        self._dangling: Dict[Tuple[int, int], int] = {}

    def _f(self, n: int) -> int:
        if n > self.delta:
            raise ArithmeticIntegrityError(f"factorial argument {n} exceeds max degree {self.delta}")
        return self.fact[n]

    def _p2(self, n: int) -> int:
        if n > self.delta:
            # only reachable through a misuse of the formulas
            raise ArithmeticIntegrityError(f"power-of-two exponent {n} exceeds max degree {self.delta}")
        return self.pow2[n]

    def _exact(self, num: int, den: int, what: str) -> int:
        q, r = divmod(num, den)
        if r or q < 0:
            raise ArithmeticIntegrityError(f"{what}: {num}/{den} is not a non-negative integer")
        return q

    def series_factor(self, k: int, k1: int, k2: int, junction: int) -> int:
        """Decompositions with ``k`` paths built from one fixed pair (C1, C2).

        ``junction`` is the degree of the merged vertex, d1(t) + d2(s').
        """
        key = (k, k1, k2, junction)
        hit = self._series.get(key)
        if hit is not None:
            return hit
        half = junction // 2
        pairs = (k1 + k2) // 2
        if pairs == 0:
            value = 0  # middle loops with nowhere to attach
        else:
            e = half - (k1 + k2 - k)
            f = self._f
            num = f(k1) * f(k2) * f(half - 1)
            den = f(k) * f((k1 - k) // 2) * f((k2 - k) // 2) * f(pairs - 1)
            if e >= 0:
                num *= self._p2(e)
            else:
                den *= self._p2(-e)
            value = self._exact(num, den, f"series term k={k} k1={k1} k2={k2} J={junction}")
        self._series[key] = value
        return value

    def dangling_factor(self, k2: int, d2_t: int) -> int:
        """Ways to close a dangling child's decomposition into source loops."""
        key = (k2, d2_t)
        hit = self._dangling.get(key)
        if hit is not None:
            return hit
        if k2 == 0:
            value = 0
        else:
            f = self._f
            e = d2_t // 2 - k2
            num = f(k2) * f(d2_t // 2 - 1)
            den = f(k2 // 2) * f(k2 // 2 - 1)
            if e >= 0:
                num *= self._p2(e)
            else:
                den *= self._p2(-e)
            value = self._exact(num, den, f"dangling term k2={k2} d2(t')={d2_t}")
        self._dangling[key] = value
        return value


def series_D(d1_t: int, d2_s: int, k1: int, k2: int) -> int:
    """Middle-loop degree budget left at the series junction."""
    value = d1_t + d2_s - k1 - k2
    if value < 0 or value % 2:
        raise ValueError(f"D({k1},{k2}) = {value} for degrees ({d1_t},{d2_s})")
    return value


def _pre_for(*tables: GammaTable, pre: Optional[PrecompTables] = None) -> PrecompTables:
    if pre is not None:
        return pre
    return PrecompTables(max(max(t.d_s, t.d_t) for t in tables) * 2)


def gamma_parallel(L: GammaTable, R: GammaTable, k: int) -> int:
    kr = R.kappa
    return sum(v * R[k - k1] for k1, v in L.nonzero() if (k - k1) in kr)


def parallel_terms(L: GammaTable, R: GammaTable, k: int) -> List[Tuple[int, int, int]]:
    kr = R.kappa
    return [(k1, k - k1, v * R[k - k1]) for k1, v in L.nonzero() if (k - k1) in kr]


def series_terms(L: GammaTable, R: GammaTable, k: int,
                 pre: Optional[PrecompTables] = None) -> List[Tuple[int, int, int]]:
    """Per-(k1, k2) summands of the series recurrence, each an exact integer."""
    pre = _pre_for(L, R, pre=pre)
    junction = L.d_t + R.d_s
    out = []
    for k1, v1 in L.nonzero():
        if k1 < k:
            continue
        for k2, v2 in R.nonzero():
            if k2 < k:
                continue
            f = pre.series_factor(k, k1, k2, junction)
            if f:
                out.append((k1, k2, v1 * v2 * f))
    return out


def gamma_series(L: GammaTable, R: GammaTable, k: int, pre: Optional[PrecompTables] = None) -> int:
    return sum(term for _, _, term in series_terms(L, R, k, pre))


def dangling_terms(L: GammaTable, R: GammaTable, k: int,
                   pre: Optional[PrecompTables] = None) -> List[Tuple[int, int, int]]:
    """Per-k2 summands of the dangling recurrence (left count is fixed at k)."""
    g1 = L[k]
    if not g1:
        return []
    pre = _pre_for(L, R, pre=pre)
    out = []
    for k2, v2 in R.nonzero():
        f = pre.dangling_factor(k2, R.d_t)
        if f:
            out.append((k, k2, g1 * v2 * f))
    return out


def gamma_dangling(L: GammaTable, R: GammaTable, k: int, pre: Optional[PrecompTables] = None) -> int:
    return sum(term for _, _, term in dangling_terms(L, R, k, pre))


def combine(kind: str, L: GammaTable, R: GammaTable, pre: PrecompTables) -> GammaTable:
    if kind == PARALLEL:
        d_s, d_t = L.d_s + R.d_s, L.d_t + R.d_t
        kap = kappa(d_s, d_t)
        values = [gamma_parallel(L, R, k) for k in kap]
    elif kind == SERIES:
        d_s, d_t = L.d_s, R.d_t
        kap = kappa(d_s, d_t)
        values = _series_values(L, R, kap, pre)
    elif kind == DANGLING:
        d_s, d_t = L.d_s + R.d_s, L.d_t
        kap = kappa(d_s, d_t)
        # the sum over the dangling child does not depend on k
        inner = sum(v2 * pre.dangling_factor(k2, R.d_t) for k2, v2 in R.nonzero())
        values = [L[k] * inner for k in kap]
    else:
        raise ValueError(kind)
    return GammaTable(d_s, d_t, values)


def _series_values(L: GammaTable, R: GammaTable, kap: Kappa, pre: PrecompTables) -> List[int]:
    junction = L.d_t + R.d_s
    left = L.nonzero()
    right = R.nonzero()
    products = {(k1, k2): v1 * v2 for k1, v1 in left for k2, v2 in right}
    values = []
    for k in kap:
        total = 0
        for (k1, k2), prod in products.items():
            if k1 >= k and k2 >= k:
                f = pre.series_factor(k, k1, k2, junction)
                if f:
                    total += prod * f
        values.append(total)
    return values


@contextmanager
def _gc_paused():
    # The tables hold no reference cycles; on large trees the collector's
    # repeated scans of the growing heap cost more than the arithmetic.
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def build_tables(tree: DecompTree, pre: Optional[PrecompTables] = None) -> List[GammaTable]:
    """Gamma tables for every node, indexed by node id (post-order)."""
    with _gc_paused():
        return _build_tables(tree, pre)


def _build_tables(tree: DecompTree, pre: Optional[PrecompTables]) -> List[GammaTable]:
    report = check_legal(tree)
    if not report.legal:
        bad = report.first_failure
        raise LegalityError(f"tree is not legal: node {bad.node_id} ({bad.kind}) violates {bad.condition}: {bad.detail}")
    if pre is None:
        pre = PrecompTables(tree.max_degree())
    tables: List[Optional[GammaTable]] = [None] * len(tree.nodes)
    leaf = gamma_leaf()
    for node in tree.nodes:
        if node.kind == LEAF:
            tables[node.id] = leaf
        else:
            tables[node.id] = combine(node.kind, tables[node.left.id], tables[node.right.id], pre)
    return tables


def tour_weight(k: int, d_s: int, d_t: int, pre: Optional[PrecompTables] = None) -> int:
    """Euler tours consistent with any one decomposition having ``k`` paths."""
    if d_s % 2 or d_t % 2 or k % 2 or d_s < 2 or d_t < 2 or not 0 <= k <= min(d_s, d_t):
        raise InputError(f"tour weight needs even k <= min(d_s, d_t) and even degrees, got k={k}, d=({d_s},{d_t})")
    if k == 0:
        return 0
    if pre is None:
        pre = PrecompTables(max(d_s, d_t))
    f = pre.fact
    h = k // 2 - 1
    num = f[k - 1] * pre.pow2[(d_s + d_t) // 2 - k] * f[d_s // 2 - 1] * f[d_t // 2 - 1]
    return pre._exact(num, f[h] * f[h], f"tour weight k={k}")


def _require_eulerian(tree: DecompTree):
    root = tree.root
    if root.d_s % 2 or root.d_t % 2:
        raise LegalityError(
            f"graph is not Eulerian (terminal degrees {root.d_s},{root.d_t}); "
            "graph admits no Euler tour count"
        )


def count_tours(tree: DecompTree, tables: Optional[List[GammaTable]] = None,
                pre: Optional[PrecompTables] = None) -> int:
    """Exact number of Euler tours (up to rotation and reversal)."""
    if pre is None:
        pre = PrecompTables(tree.max_degree())
    if tables is None:
        tables = build_tables(tree, pre)
    _require_eulerian(tree)
    root = tables[tree.root.id]
    return sum(tour_weight(k, root.d_s, root.d_t, pre) * v for k, v in root.items() if v)


def table_bits(tables: Sequence[GammaTable]) -> int:
    """Total bit length of all stored gamma values."""
    return sum(t.bits for t in tables)
