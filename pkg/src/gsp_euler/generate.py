"""Tree generators: exhaustive small trees and random legal Eulerian trees."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

from .tree import DANGLING, LEAF, PARALLEL, SERIES, DecompTree, Node, check_legal, parse_tree


@lru_cache(maxsize=None)
def _tree_strings(n: int) -> Tuple[str, ...]:
    if n == 1:
        return ("B",)
    out = []
    for i in range(1, n):
        for a in _tree_strings(i):
            for b in _tree_strings(n - i):
                for op in (SERIES, PARALLEL, DANGLING):
                    out.append(f"{op}({a},{b})")
    return tuple(out)


def all_trees(max_leaves: int, min_leaves: int = 1) -> Iterator[DecompTree]:
    """Every binary shape with every operator assignment, smallest first."""
    for n in range(min_leaves, max_leaves + 1):
        for text in _tree_strings(n):
            yield parse_tree(text)


def legal_eulerian_trees(max_leaves: int) -> Iterator[DecompTree]:
    for tree in all_trees(max_leaves):
        report = check_legal(tree)
        if report.legal and report.root_eulerian:
            yield tree


# Series keeps terminal degrees where they are; parallel and dangling raise
# them, so they are drawn less often to stay clear of the degree cap.
_OP_WEIGHTS = {SERIES: 6, PARALLEL: 3, DANGLING: 2}


class _Part:
    __slots__ = ("node", "d_s", "d_t")

    def __init__(self, node, d_s, d_t):
        self.node, self.d_s, self.d_t = node, d_s, d_t

    @property
    def eulerian(self):
        return self.d_s % 2 == 0 and self.d_t % 2 == 0


def random_tree(m: int, rng: Optional[random.Random] = None, max_degree: int = 32,
                eulerian: bool = True, max_tries: int = 200) -> DecompTree:
    """A random legal tree with ``m`` leaves and vertex degrees <= ``max_degree``.

    Built bottom-up: start from ``m`` single edges and repeatedly merge two
    random parts with a random operation that keeps the result legal and
    within the degree cap.  Merging random pairs gives trees of logarithmic
    expected depth.  With ``eulerian=True`` the root is Eulerian, which needs
    ``m >= 2``.
    """
    if rng is None:
        rng = random.Random()
    if m < 1 or (eulerian and m < 2):
        raise ValueError("need m >= 2 for an Eulerian tree (m >= 1 otherwise)")
    if max_degree < 4:
        raise ValueError("max_degree must be at least 4")
    for _ in range(max_tries):
        tree = _try_random_tree(m, rng, max_degree, eulerian)
        if tree is not None:
            return tree
    raise RuntimeError(f"could not build a random tree with m={m}, max_degree={max_degree}")


def _options(a: _Part, b: _Part, cap: int) -> List[str]:
    ops = []
    if a.d_s + b.d_s <= cap and a.d_t + b.d_t <= cap:
        ops.append(PARALLEL)
    if a.d_t % 2 == b.d_s % 2 and a.d_t + b.d_s <= cap:
        ops.append(SERIES)
    if b.eulerian and a.d_s + b.d_s <= cap:
        ops.append(DANGLING)
    return ops


def _pick(a: _Part, b: _Part, cap: int, rng: random.Random, soft: bool) -> Optional[str]:
    # Parallel and dangling only ever raise terminal degrees; in soft mode
    # their result must stay within half the cap.
    ops = _options(a, b, cap)
    if soft:
        ops = [op for op in ops if op == SERIES or max(_merge_degrees(op, a, b)) <= cap // 2]
    if not ops:
        return None
    return rng.choices(ops, [_OP_WEIGHTS[op] for op in ops])[0]


def _merge_degrees(op: str, a: _Part, b: _Part) -> Tuple[int, int]:
    if op == PARALLEL:
        return a.d_s + b.d_s, a.d_t + b.d_t
    if op == SERIES:
        return a.d_s, b.d_t
    return a.d_s + b.d_s, a.d_t


def _merge(op: str, a: _Part, b: _Part) -> _Part:
    return _Part(Node(op, a.node, b.node), *_merge_degrees(op, a, b))


def _random_pair(parts, cap, rng, tries=50):
    for _ in range(tries):
        i, j = rng.sample(range(len(parts)), 2)
        op = _pick(parts[i], parts[j], cap, rng, True)
        if op:
            return i, j, op
    return None


def _scan_pairs(parts, cap, rng, soft):
    n = len(parts)
    pairs = [(i, j) for i in range(n) for j in range(n)
             if i != j and _pick(parts[i], parts[j], cap, rng, soft)]
    if not pairs:
        return None
    i, j = rng.choice(pairs)
    return i, j, _pick(parts[i], parts[j], cap, rng, soft)


def _try_random_tree(m: int, rng: random.Random, cap: int, eulerian: bool) -> Optional[DecompTree]:
    # One edge is held back to fix the root parity at the end.
    leaves = [Node(LEAF) for _ in range(m - 1 if eulerian else m)]
    parts = [_Part(leaf, 1, 1) for leaf in leaves]
    while len(parts) > 1:
        found = _random_pair(parts, cap, rng) or _scan_pairs(parts, cap, rng, True) \
            or _scan_pairs(parts, cap, rng, False)
        if found is None:
            return None
        i, j, op = found
        merged = _merge(op, parts[i], parts[j])
        hi, lo = max(i, j), min(i, j)
        parts[lo] = merged
        parts[hi] = parts[-1]
        parts.pop()
    root = parts[0]
    if eulerian:
        if root.eulerian:
            # subdividing an edge keeps every degree parity
            leaf = rng.choice(leaves)
            leaf.kind, leaf.left, leaf.right = SERIES, Node(LEAF), Node(LEAF)
        else:
            if root.d_s + 1 > cap or root.d_t + 1 > cap:
                return None
            leaf = _Part(Node(LEAF), 1, 1)
            root = _merge(PARALLEL, root, leaf) if rng.random() < 0.5 else _merge(PARALLEL, leaf, root)
    return DecompTree(root.node)
