"""Brute-force ground truth for small graphs.

Nothing here uses the decomposition tree or the counting recurrences: tours
and (s,t)-decompositions are enumerated directly on the multigraph by
backtracking.  The results are used to check the engine and the sampler.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, Iterable, List, Sequence, Set, Tuple

from .errors import OracleBoundError
from .multigraph import Multigraph

DEFAULT_BOUND = 12
HARD_CAP = 14

Trail = Tuple[int, ...]
Signature = Tuple[Trail, ...]


def _check_bound(g: Multigraph, bound: int):
    if bound > HARD_CAP:
        raise OracleBoundError(f"oracle bound {bound} exceeds hard cap {HARD_CAP}")
    if g.m > bound:
        raise OracleBoundError(f"graph has {g.m} edges, oracle bound is {bound}")


def _reverse(darts: Sequence[int]) -> Tuple[int, ...]:
    return tuple(-d for d in reversed(darts))


def _key(darts: Sequence[int]):
    # '+' sorts before '-' for the same label.
    return [(abs(d), d < 0) for d in darts]


def brute_canonical(darts: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically least form over all rotations and both directions."""
    darts = tuple(darts)
    best = None
    for seq in (darts, _reverse(darts)):
        for i in range(len(seq)):
            cand = seq[i:] + seq[:i]
            if best is None or _key(cand) < _key(best):
                best = cand
    return best


def normalize(trail: Sequence[int]) -> Trail:
    """Orient a trail so its first edge has the lower label."""
    trail = tuple(trail)
    if len(trail) == 1:
        return (abs(trail[0]),)
    if abs(trail[0]) > abs(trail[-1]):
        return _reverse(trail)
    return trail


@dataclass
class TourCensus:
    tours: Set[Tuple[int, ...]] = field(default_factory=set)

    @property
    def count(self) -> int:
        return len(self.tours)


@dataclass
class DecompCensus:
    by_k: Dict[int, Set[Signature]] = field(default_factory=dict)

    def gamma(self, k: int) -> int:
        return len(self.by_k.get(k, ()))

    def table(self) -> Dict[int, int]:
        return {k: len(v) for k, v in sorted(self.by_k.items())}


def enumerate_tours(g: Multigraph, bound: int = DEFAULT_BOUND) -> TourCensus:
    """All Euler tours of ``g`` up to rotation and reversal.

    Walks start with edge 1 in its stored direction; every completed closed
    walk is canonicalised, so class identity never depends on the anchor.
    """
    _check_bound(g, bound)
    census = TourCensus()
    if not g.is_eulerian():
        return census
    out = g.incident()
    used = [False] * (g.m + 1)
    start = g.tail(1)
    walk = [1]
    used[1] = True

    def extend(v):
        if len(walk) == g.m:
            if v == start:
                census.tours.add(brute_canonical(walk))
            return
        for d in out[v]:
            if not used[abs(d)]:
                used[abs(d)] = True
                walk.append(d)
                extend(g.head(d))
                walk.pop()
                used[abs(d)] = False

    extend(g.head(1))
    return census


def enumerate_decompositions(g: Multigraph, bound: int = DEFAULT_BOUND) -> DecompCensus:
    """All (s,t)-decompositions of ``g``, bucketed by number of s-t paths.

    Each trail starts at the lowest-labelled unused edge at ``s`` (then
    ``t``), runs through non-terminal vertices and stops on reaching a
    terminal.  Full partitions are deduplicated by signature.
    """
    _check_bound(g, bound)
    s, t = g.s, g.t
    out = g.incident()
    used = [False] * (g.m + 1)
    trails: List[Trail] = []
    seen: Set[Signature] = set()
    census = DecompCensus()

    def record():
        sig = tuple(sorted(normalize(tr) for tr in trails))
        if sig in seen:
            return
        seen.add(sig)
        k = sum(1 for tr in trails if {g.tail(tr[0]), g.head(tr[-1])} == {s, t})
        census.by_k.setdefault(k, set()).add(sig)

    def next_start():
        for x in (s, t):
            for d in out[x]:
                if not used[abs(d)]:
                    return d
        return None

    def grow(current: List[int], v: int, remaining: int):
        if v == s or v == t:
            trails.append(tuple(current))
            start_new(remaining)
            trails.pop()
            return
        for d in out[v]:
            if not used[abs(d)]:
                used[abs(d)] = True
                current.append(d)
                grow(current, g.head(d), remaining - 1)
                current.pop()
                used[abs(d)] = False

    def start_new(remaining: int):
        if remaining == 0:
            record()
            return
        d = next_start()
        if d is None:
            return  # leftover edges form circuits avoiding s and t
        used[abs(d)] = True
        grow([d], g.head(d), remaining - 1)
        used[abs(d)] = False

    start_new(g.m)
    return census


def validate_tour(g: Multigraph, tour: Iterable[int]) -> bool:
    """True iff ``tour`` is a closed walk using every edge exactly once."""
    darts = list(tour)
    if len(darts) != g.m or g.m == 0:
        return False
    if any(not isinstance(d, int) or d == 0 or abs(d) > g.m for d in darts):
        return False
    labels = [abs(d) for d in darts]
    if sorted(labels) != list(range(1, g.m + 1)):
        return False
    for a, b in zip(darts, darts[1:] + darts[:1]):
        if g.head(a) != g.tail(b):
            return False
    return True


def induced_decomposition(g: Multigraph, tour: Sequence[int]) -> Signature:
    """The unique decomposition consistent with a tour: cut it at s and t."""
    darts = list(tour)
    terminals = (g.s, g.t)
    i = next(i for i, d in enumerate(darts) if g.tail(d) in terminals)
    darts = darts[i:] + darts[:i]
    pieces, current = [], []
    for d in darts:
        current.append(d)
        if g.head(d) in terminals:
            pieces.append(normalize(current))
            current = []
    return tuple(sorted(pieces))


def tuple_count(k: int, d_s: int, d_t: int) -> int:
    """Number of (pi, tau, sigma, x, y, b) tuples for one decomposition.

    Permutations of k-1 paths and of each loop family, compositions of the
    loop counts into k/2 slots, and a direction per loop.  Zero for k = 0.
    """
    if k == 0:
        return 0
    ks, kt = (d_s - k) // 2, (d_t - k) // 2
    return (
        factorial(k - 1) * factorial(ks) * factorial(kt)
        * comb(d_s // 2 - 1, k // 2 - 1) * comb(d_t // 2 - 1, k // 2 - 1)
        * 2 ** (ks + kt)
    )


def tours_per_decomposition(g: Multigraph, bound: int = DEFAULT_BOUND) -> Dict[Signature, int]:
    """For every decomposition, how many enumerated tours induce it."""
    census = enumerate_tours(g, bound)
    return Counter(induced_decomposition(g, tour) for tour in census.tours)
