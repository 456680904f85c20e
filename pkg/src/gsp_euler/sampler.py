"""Exactly uniform sampling of Euler tours of a GSP multigraph.

A draw works in three passes over the decomposition tree:

1. pick the number of source-sink paths at the root, weighted by the
   number of tours each such decomposition class carries;
2. walk top-down choosing the children's path counts in proportion to
   the exact summands of the counting recurrences;
3. walk bottom-up building a uniformly random decomposition of every
   node's subgraph by combining the children's decompositions with a
   uniformly random combination tuple.

The root decomposition is finally expanded into a tour with a uniformly
random tour tuple.  All randomness is discrete over Python integers.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import LegalityError
from .gamma import (
    GammaTable,
    PrecompTables,
    build_tables,
    dangling_terms,
    parallel_terms,
    series_terms,
)
from .multigraph import Multigraph, walk_vertices
from .tree import DANGLING, LEAF, PARALLEL, SERIES, DecompTree, realize_terminals

Trail = Tuple[int, ...]
EulerTour = Tuple[int, ...]


# -- trails ------------------------------------------------------------------

def reverse_trail(trail: Sequence[int]) -> Trail:
    return tuple(-d for d in reversed(trail))


def normalize_trail(trail: Sequence[int]) -> Trail:
    """Lower-labelled end first; a single edge is kept in stored direction."""
    trail = tuple(trail)
    if len(trail) == 1:
        return (abs(trail[0]),)
    if abs(trail[0]) > abs(trail[-1]):
        return reverse_trail(trail)
    return trail


def orient_from(g: Multigraph, trail: Trail, v: int) -> Trail:
    """The trail read starting at endpoint ``v``."""
    if g.tail(trail[0]) == v:
        return trail
    rev = reverse_trail(trail)
    if g.tail(rev[0]) != v:
        raise ValueError(f"vertex {v} is not an endpoint of trail {trail}")
    return rev


@dataclass
class Decomposition:
    """An (s,t)-decomposition: paths, source loops and sink loops."""

    s: int
    t: int
    paths: List[Trail] = field(default_factory=list)
    s_loops: List[Trail] = field(default_factory=list)
    t_loops: List[Trail] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.paths)

    @property
    def trails(self) -> List[Trail]:
        return self.paths + self.s_loops + self.t_loops

    def signature(self) -> Tuple[Trail, ...]:
        return tuple(sorted(self.trails))

    def edge_count(self) -> int:
        return sum(len(tr) for tr in self.trails)


def leaf_decomposition(label: int, s: int, t: int) -> Decomposition:
    return Decomposition(s, t, paths=[(label,)])


# -- random tuples -------------------------------------------------------------

@dataclass
class SeriesTuple:
    pi1: List[int]
    pi2: List[int]
    x: List[int]
    sigma: List[int]
    b: List[int]


@dataclass
class DanglingTuple:
    pi2: List[int]
    x: List[int]
    sigma: List[int]
    b: List[int]


@dataclass
class TourTuple:
    pi: List[int]
    tau: List[int]
    sigma: List[int]
    x: List[int]
    y: List[int]
    b: List[int]


def random_permutation(rng: random.Random, n: int) -> List[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def random_composition(rng: random.Random, total: int, parts: int) -> List[int]:
    """Uniform vector of ``parts`` non-negative integers summing to ``total``.

    Stars and bars: choose the ``parts - 1`` bar positions among
    ``total + parts - 1`` slots.
    """
    if parts == 0:
        if total:
            raise ValueError("cannot split a positive total into zero parts")
        return []
    bars = sorted(rng.sample(range(total + parts - 1), parts - 1))
    out, prev = [], -1
    for pos in bars:
        out.append(pos - prev - 1)
        prev = pos
    out.append(total + parts - 1 - prev - 1)
    return out


def random_signs(rng: random.Random, n: int) -> List[int]:
    return [1 if rng.getrandbits(1) else -1 for _ in range(n)]


def weighted_index(rng: random.Random, weights: Sequence[int]) -> int:
    """Index drawn with probability weights[i] / sum(weights), exactly."""
    total = sum(weights)
    if total <= 0:
        raise ValueError("weights have no positive mass")
    r = rng.randrange(total)
    for i, w in enumerate(weights):
        if r < w:
            return i
        r -= w
    raise AssertionError("unreachable")


# -- combinations --------------------------------------------------------------

def _insert_loops(pairs, loops, tup_x, tup_sigma, tup_b) -> List[Trail]:
    """Join each (A, B) pair, placing the ordered loops at the junctions."""
    if len(tup_x) != len(pairs) or sum(tup_x) != len(loops):
        raise ValueError("composition vector does not match junctions/loops")
    if sorted(tup_sigma) != list(range(len(loops))) or len(tup_b) != len(loops):
        raise ValueError("loop permutation or sign vector has the wrong shape")
    ordered = []
    for idx, sign in zip(tup_sigma, tup_b):
        loop = loops[idx]
        ordered.append(loop if sign > 0 else reverse_trail(loop))
    out = []
    pos = 0
    for (a, b), count in zip(pairs, tup_x):
        middle = ordered[pos:pos + count]
        pos += count
        trail = a + sum(middle, ()) + b
        out.append(normalize_trail(trail))
    return out


def combine_parallel(C1: Decomposition, C2: Decomposition) -> Decomposition:
    if (C1.s, C1.t) != (C2.s, C2.t):
        raise ValueError("parallel operands must share terminals")
    e1 = {abs(d) for tr in C1.trails for d in tr}
    if any(abs(d) in e1 for tr in C2.trails for d in tr):
        raise ValueError("parallel operands share an edge")
    return Decomposition(C1.s, C1.t, C1.paths + C2.paths, C1.s_loops + C2.s_loops,
                         C1.t_loops + C2.t_loops)


def combine_series(g: Multigraph, C1: Decomposition, C2: Decomposition, k: int,
                   tup: SeriesTuple) -> Decomposition:
    """Join two decompositions at the shared vertex t1 = s2.

    The first ``k`` entries of the path permutations are concatenated into
    new source-sink paths; the rest pair up consecutively into new loops at
    the outer terminals.  The loops sitting at the junction are spliced into
    the junction occurrences as directed by ``x``, ``sigma`` and ``b``.
    """
    s, j, t = C1.s, C1.t, C2.t
    if C2.s != j:
        raise ValueError("series operands are not joined")
    k1, k2 = C1.k, C2.k
    if not (k <= k1 and k <= k2 and (k1 - k) % 2 == 0 and (k2 - k) % 2 == 0):
        raise ValueError(f"cannot build {k} paths from {k1} and {k2}")
    if sorted(tup.pi1) != list(range(k1)) or sorted(tup.pi2) != list(range(k2)):
        raise ValueError("path permutations have the wrong shape")
    p1 = [orient_from(g, p, s) for p in C1.paths]
    p2 = [orient_from(g, p, j) for p in C2.paths]
    pi1, pi2 = tup.pi1, tup.pi2
    pairs = [(p1[pi1[i]], p2[pi2[i]]) for i in range(k)]
    n_st = len(pairs)
    pairs += [(p1[pi1[i]], reverse_trail(p1[pi1[i + 1]])) for i in range(k, k1, 2)]
    n_ss = len(pairs)
    pairs += [(reverse_trail(p2[pi2[i]]), p2[pi2[i + 1]]) for i in range(k, k2, 2)]
    joined = _insert_loops(pairs, C1.t_loops + C2.s_loops, tup.x, tup.sigma, tup.b)
    return Decomposition(
        s, t,
        paths=joined[:n_st],
        s_loops=C1.s_loops + joined[n_st:n_ss],
        t_loops=C2.t_loops + joined[n_ss:],
    )


def combine_dangling(g: Multigraph, C1: Decomposition, C2: Decomposition,
                     tup: DanglingTuple) -> Decomposition:
    """Turn the dangling child's decomposition into loops at the shared source."""
    s, w = C2.s, C2.t
    if C1.s != s:
        raise ValueError("dangling operands do not share a source")
    k2 = C2.k
    if k2 % 2 or sorted(tup.pi2) != list(range(k2)):
        raise ValueError("path permutation has the wrong shape")
    p2 = [orient_from(g, p, s) for p in C2.paths]
    pi2 = tup.pi2
    pairs = [(p2[pi2[i]], reverse_trail(p2[pi2[i + 1]])) for i in range(0, k2, 2)]
    joined = _insert_loops(pairs, C2.t_loops, tup.x, tup.sigma, tup.b)
    return Decomposition(
        C1.s, C1.t,
        paths=list(C1.paths),
        s_loops=C1.s_loops + C2.s_loops + joined,
        t_loops=list(C1.t_loops),
    )


def random_series_tuple(rng: random.Random, C1: Decomposition, C2: Decomposition, k: int) -> SeriesTuple:
    k1, k2 = C1.k, C2.k
    loops = len(C1.t_loops) + len(C2.s_loops)
    return SeriesTuple(
        pi1=random_permutation(rng, k1),
        pi2=random_permutation(rng, k2),
        x=random_composition(rng, loops, (k1 + k2) // 2),
        sigma=random_permutation(rng, loops),
        b=random_signs(rng, loops),
    )


def random_dangling_tuple(rng: random.Random, C2: Decomposition) -> DanglingTuple:
    loops = len(C2.t_loops)
    return DanglingTuple(
        pi2=random_permutation(rng, C2.k),
        x=random_composition(rng, loops, C2.k // 2),
        sigma=random_permutation(rng, loops),
        b=random_signs(rng, loops),
    )


# -- tours ---------------------------------------------------------------------

def canonical_tour(darts: Sequence[int]) -> EulerTour:
    """Least form over rotations and reversals.

    Labels are distinct, so the least form starts with edge 1 traversed
    forwards; only one rotation of one direction qualifies.
    """
    seq = tuple(darts)
    if 1 not in seq:
        seq = reverse_trail(seq)
    i = seq.index(1)
    return seq[i:] + seq[:i]


def format_tour_edges(tour: EulerTour) -> str:
    return ",".join(f"{abs(d)}:{'+' if d > 0 else '-'}" for d in tour)


def format_tour_vertices(g: Multigraph, tour: EulerTour) -> str:
    return " ".join(str(v) for v in walk_vertices(g, tour))


def random_tour_tuple(rng: random.Random, C: Decomposition) -> TourTuple:
    k = C.k
    ks, kt = len(C.s_loops), len(C.t_loops)
    return TourTuple(
        pi=random_permutation(rng, k - 1),
        tau=random_permutation(rng, ks),
        sigma=random_permutation(rng, kt),
        x=random_composition(rng, ks, k // 2),
        y=random_composition(rng, kt, k // 2),
        b=random_signs(rng, ks + kt),
    )


def decomposition_to_tour(g: Multigraph, C: Decomposition, tup: TourTuple) -> EulerTour:
    """Expand a root decomposition into one of its consistent tours.

    The path with the lowest-labelled source edge goes first, source to
    sink; the others follow in ``pi`` order with alternating directions.
    Source loops go after the even positions and sink loops after the odd
    ones, distributed by ``x``/``y``, ordered by ``tau``/``sigma`` and
    directed by ``b``.
    """
    k = C.k
    if k < 2:
        raise ValueError("a decomposition without source-sink paths yields no tour")
    ks, kt = len(C.s_loops), len(C.t_loops)
    if (len(tup.pi) != k - 1 or len(tup.x) != k // 2 or len(tup.y) != k // 2
            or sum(tup.x) != ks or sum(tup.y) != kt or len(tup.b) != ks + kt):
        raise ValueError("tour tuple has the wrong shape")
    paths = sorted((orient_from(g, p, C.s) for p in C.paths), key=lambda p: abs(p[0]))
    first, rest = paths[0], paths[1:]
    order = [first] + [rest[i] for i in tup.pi]
    s_loops = [C.s_loops[i] for i in tup.tau]
    t_loops = [C.t_loops[i] for i in tup.sigma]
    s_loops = [lp if sgn > 0 else reverse_trail(lp) for lp, sgn in zip(s_loops, tup.b[:ks])]
    t_loops = [lp if sgn > 0 else reverse_trail(lp) for lp, sgn in zip(t_loops, tup.b[ks:])]
    out: List[int] = []
    si = ti = 0
    for pos, path in enumerate(order, 1):
        out.extend(path if pos % 2 else reverse_trail(path))
        slot = (pos + 1) // 2 - 1
        if pos % 2:  # now at t
            for lp in t_loops[ti:ti + tup.y[slot]]:
                out.extend(lp)
            ti += tup.y[slot]
        else:  # back at s
            for lp in s_loops[si:si + tup.x[slot]]:
                out.extend(lp)
            si += tup.x[slot]
    return canonical_tour(out)


# -- driver --------------------------------------------------------------------

def derive_rng(seed: int, index: int) -> random.Random:
    """Independent stream for sample ``index`` of a batch seeded with ``seed``."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=16).digest()
    return random.Random(int.from_bytes(digest, "big"))


def root_k_weights(table: GammaTable, pre: PrecompTables) -> List[Tuple[int, int]]:
    """(k, weight) pairs proportional to the tour mass of each path count.

    The per-k factor is (k-1)! / ((k/2-1)!)^2 * 2^-k * gamma(k); the 2^-k is
    cleared by the common factor 2^kmax so every weight is an integer.
    """
    items = [(k, v) for k, v in table.items() if v and k >= 2]
    if not items:
        return []
    kmax = max(k for k, _ in items)
    f = pre.fact
    out = []
    for k, v in items:
        h = k // 2 - 1
        w, r = divmod(f[k - 1], f[h] * f[h])
        assert r == 0
        out.append((k, w * (1 << (kmax - k)) * v))
    return out


def sample_root_k(table: GammaTable, rng: random.Random, pre: Optional[PrecompTables] = None) -> int:
    if pre is None:
        pre = PrecompTables(max(table.d_s, table.d_t))
    weights = root_k_weights(table, pre)
    if not weights:
        raise LegalityError("no Euler tour exists")
    return weights[weighted_index(rng, [w for _, w in weights])][0]


def sample_split(kind: str, L: GammaTable, R: GammaTable, k: int, rng: random.Random,
                 pre: Optional[PrecompTables] = None) -> Tuple[int, int]:
    """Children's path counts, proportional to the recurrence summands."""
    if pre is None:
        pre = PrecompTables(2 * max(L.d_s, L.d_t, R.d_s, R.d_t))
    if kind == PARALLEL:
        terms = parallel_terms(L, R, k)
    elif kind == SERIES:
        terms = series_terms(L, R, k, pre)
    elif kind == DANGLING:
        terms = dangling_terms(L, R, k, pre)
    else:
        raise ValueError(kind)
    if not terms:
        raise ValueError(f"no decomposition with {k} paths at this {kind} node")
    k1, k2, _ = terms[weighted_index(rng, [w for _, _, w in terms])]
    return k1, k2


class TourSampler:
    """Reusable sampler: realizes the tree and builds the tables once."""

    def __init__(self, tree: DecompTree, tables: Optional[List[GammaTable]] = None):
        self.tree = tree
        self.pre = PrecompTables(tree.max_degree())
        self.tables = tables if tables is not None else build_tables(tree, self.pre)
        root = tree.root
        if root.d_s % 2 or root.d_t % 2:
            raise LegalityError("graph is not Eulerian; no Euler tours to sample")
        self.graph, self.terminals = realize_terminals(tree)

    def sample_decomposition(self, rng: random.Random) -> Decomposition:
        tree, tables, pre = self.tree, self.tables, self.pre
        ks: List[Optional[int]] = [None] * len(tree.nodes)
        ks[tree.root.id] = sample_root_k(tables[tree.root.id], rng, pre)
        for node in reversed(tree.nodes):
            if node.is_leaf:
                continue
            k1, k2 = sample_split(node.kind, tables[node.left.id], tables[node.right.id],
                                  ks[node.id], rng, pre)
            ks[node.left.id], ks[node.right.id] = k1, k2
        decs: List[Optional[Decomposition]] = [None] * len(tree.nodes)
        g = self.graph
        for node in tree.nodes:
            s, t = self.terminals[node.id]
            if node.kind == LEAF:
                dec = leaf_decomposition(node.lo, s, t)
            else:
                C1, C2 = decs[node.left.id], decs[node.right.id]
                decs[node.left.id] = decs[node.right.id] = None
                if node.kind == PARALLEL:
                    dec = combine_parallel(C1, C2)
                elif node.kind == SERIES:
                    k = ks[node.id]
                    dec = combine_series(g, C1, C2, k, random_series_tuple(rng, C1, C2, k))
                else:
                    dec = combine_dangling(g, C1, C2, random_dangling_tuple(rng, C2))
            assert dec.k == ks[node.id]
            assert len(dec.trails) == (node.d_s + node.d_t) // 2
            decs[node.id] = dec
        return decs[tree.root.id]

    def sample(self, rng: random.Random) -> EulerTour:
        dec = self.sample_decomposition(rng)
        return decomposition_to_tour(self.graph, dec, random_tour_tuple(rng, dec))

    def sample_many(self, seed: int, n: int) -> List[EulerTour]:
        return [self.sample(derive_rng(seed, i)) for i in range(n)]


def sample_tour(tree: DecompTree, seed: int) -> EulerTour:
    return TourSampler(tree).sample(derive_rng(seed, 0))
