"""Best-effort recognition of GSP multigraphs.

The recognizer reduces the graph with three rules until a single edge
between the terminals remains:

* parallel super-edges between the same two vertices merge (``P``);
* a non-terminal vertex with exactly two super-edges is contracted (``S``);
* a non-terminal vertex with a single super-edge is a pendant block; it is
  detached and remembered at its attachment vertex, to be hung there with
  ``D`` once that vertex's role is known.

Super-edges are kept unoriented until the end, when the tree is emitted
from the source outwards.  Any tree returned is verified against the input,
so a result is always correct; failure does not prove the graph is not GSP.
"""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Dict, List, Optional, Set, Tuple

from .errors import RecognitionError
from .multigraph import Multigraph
from .tree import DANGLING, LEAF, PARALLEL, SERIES, DecompTree, Node, parse_tree, realize

# Graphs up to this size also get a search for a tree whose leaf order
# reproduces the input's edge labels.
LABEL_ORDER_LIMIT = 40


class _Edge:
    __slots__ = ("label", "low")

    def __init__(self, label):
        self.label = label
        self.low = label


class _Par:
    __slots__ = ("c1", "c2", "low")

    def __init__(self, c1, c2):
        self.c1, self.c2 = c1, c2
        self.low = min(c1.low, c2.low)


class _Ser:
    __slots__ = ("x", "mid", "c1", "c2", "decos", "low")

    def __init__(self, x, mid, c1, c2, decos):
        # c1 joins x to mid, c2 joins mid to the other end
        self.x, self.mid, self.c1, self.c2, self.decos = x, mid, c1, c2, decos
        self.low = min([c1.low, c2.low] + [d.low for d in decos])


class _Pendant:
    __slots__ = ("root", "body", "decos", "low")

    def __init__(self, root, body, decos):
        # body joins root to a vertex that has nothing else but ``decos``
        self.root, self.body, self.decos = root, body, decos
        self.low = min([body.low] + [d.low for d in decos])


def _reduce(g: Multigraph):
    s, t = g.s, g.t
    ends: Dict[int, Tuple[int, int]] = {}
    comp: Dict[int, object] = {}
    adj: Dict[int, Set[int]] = defaultdict(set)
    decos: Dict[int, list] = defaultdict(list)
    next_id = 0

    def add(a, b, c):
        nonlocal next_id
        eid = next_id
        next_id += 1
        ends[eid], comp[eid] = (a, b), c
        adj[a].add(eid)
        adj[b].add(eid)
        return eid

    def remove(eid):
        a, b = ends.pop(eid)
        adj[a].discard(eid)
        adj[b].discard(eid)
        return comp.pop(eid)

    def other(eid, v):
        a, b = ends[eid]
        return b if a == v else a

    for label, u, v in g.edges:
        add(u, v, _Edge(label))

    queue = deque(g.vertices)
    queued = set(queue)
    alive = set(g.vertices)

    def push(v):
        if v in alive and v not in queued:
            queued.add(v)
            queue.append(v)

    while queue:
        v = queue.popleft()
        queued.discard(v)
        if v not in alive:
            continue
        # merge parallel super-edges at v
        by_nbr: Dict[int, List[int]] = defaultdict(list)
        for eid in adj[v]:
            by_nbr[other(eid, v)].append(eid)
        for w, eids in by_nbr.items():
            if len(eids) > 1:
                eids.sort(key=lambda e: comp[e].low)
                merged = remove(eids[0])
                for e in eids[1:]:
                    merged = _Par(merged, remove(e))
                add(v, w, merged)
                push(w)
        if v in (s, t):
            continue
        incident = sorted(adj[v])
        if len(incident) == 1:
            eid = incident[0]
            a = other(eid, v)
            body = remove(eid)
            decos[a].append(_Pendant(a, body, decos.pop(v, [])))
            alive.discard(v)
            push(a)
        elif len(incident) == 2:
            e1, e2 = incident
            x, y = other(e1, v), other(e2, v)
            c1, c2 = remove(e1), remove(e2)
            alive.discard(v)
            add(x, y, _Ser(x, v, c1, c2, decos.pop(v, [])))
            push(x)
            push(y)

    if alive != {s, t}:
        raise RecognitionError(
            f"reduction stuck with {len(alive)} vertices left "
            f"(no parallel pair, degree-2 or pendant vertex to reduce)"
        )
    if len(ends) != 1:
        raise RecognitionError("terminals are not joined by a single reduced edge")
    if decos.get(t):
        raise RecognitionError("a pendant block hangs at the sink; dangling composition attaches only at the source")
    (eid,) = ends
    return comp[eid], decos.get(s, [])


def _emit(top, src: int, root_decos) -> Tuple[str, List[int]]:
    """Tree text for the reduced structure, oriented from ``src``."""
    out: List[str] = []
    labels: List[int] = []
    stack: list = []

    def dangle(main, src_v, pend_list):
        # D(...D(main, p1)..., pk) with every pendant rooted at src_v
        pend_list = sorted(pend_list, key=lambda p: p.low)
        items: list = ["D("] * len(pend_list) + [(main, src_v)]
        for p in pend_list:
            items += [",", ("pend", p), ")"]
        return items

    stack.extend(reversed(dangle(top, src, root_decos)))
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        c, v = item
        if c == "pend":
            p = v
            if not p.decos:
                stack.append((p.body, p.root))
            else:
                # body from the attachment vertex, then the far-side pendants
                # chained from their shared root
                ds = sorted(p.decos, key=lambda d: d.low)
                chain: list = ["D("] * (len(ds) - 1) + [("pend", ds[0])]
                for d in ds[1:]:
                    chain += [",", ("pend", d), ")"]
                items = ["S(", (p.body, p.root), ","] + chain + [")"]
                stack.extend(reversed(items))
            continue
        if isinstance(c, _Edge):
            out.append(LEAF)
            labels.append(c.label)
        elif isinstance(c, _Par):
            a, b = sorted((c.c1, c.c2), key=lambda n: n.low)
            stack.extend(reversed(["P(", (a, v), ",", (b, v), ")"]))
        elif isinstance(c, _Ser):
            first, second = (c.c1, c.c2) if v == c.x else (c.c2, c.c1)
            items = ["S(", (first, v), ","] + dangle(second, c.mid, c.decos) + [")"]
            stack.extend(reversed(items))
        else:
            raise AssertionError(type(c))
    return "".join(out), labels


def _verify(g: Multigraph, tree: DecompTree, labels: List[int]) -> bool:
    """Check realize(tree) matches g under the leaf -> label bijection."""
    if sorted(labels) != list(range(1, g.m + 1)) or tree.m != g.m:
        return False
    h = realize(tree)
    phi = {h.s: g.s, h.t: g.t}
    adj: Dict[int, List[int]] = defaultdict(list)
    for i, (_, u, v) in enumerate(h.edges):
        adj[u].append(i)
        adj[v].append(i)
    queue = deque([h.s, h.t])
    while queue:
        x = queue.popleft()
        for i in adj[x]:
            _, u, v = h.edges[i]
            y = v if u == x else u
            gu, gv = g.endpoints(labels[i])
            if phi[x] == gu:
                target = gv
            elif phi[x] == gv:
                target = gu
            else:
                return False
            if y in phi:
                if phi[y] != target:
                    return False
            else:
                phi[y] = target
                queue.append(y)
    if len(set(phi.values())) != len(phi):
        return False
    for i, (_, u, v) in enumerate(h.edges):
        if sorted((phi[u], phi[v])) != sorted(g.endpoints(labels[i])):
            return False
    return True


def _interval_parse(g: Multigraph) -> Optional[DecompTree]:
    """Search for a tree whose i-th leaf is edge i (exact, small graphs only).

    Every subtree realizes a contiguous label range whose vertices other
    than its two terminals have no edges outside the range.
    """
    m = g.m
    lo: Dict[int, int] = {}
    hi: Dict[int, int] = {}
    for label, u, v in g.edges:
        for x in (u, v):
            lo[x] = min(lo.get(x, label), label)
            hi[x] = max(hi.get(x, label), label)
    vsets: Dict[Tuple[int, int], frozenset] = {}

    def verts(i, j):
        key = (i, j)
        vs = vsets.get(key)
        if vs is None:
            vs = frozenset(x for l in range(i, j + 1) for x in g.endpoints(l))
            vsets[key] = vs
        return vs

    def boundary(i, j):
        return {x for x in verts(i, j) if lo[x] < i or hi[x] > j or x in (g.s, g.t)}

    memo: Dict[Tuple[int, int, int, int], Optional[Node]] = {}

    def solve(i, j, a, b):
        key = (i, j, a, b)
        if key in memo:
            return memo[key]
        memo[key] = None
        vs = verts(i, j)
        result = None
        if a != b and a in vs and b in vs and boundary(i, j) <= {a, b}:
            if i == j:
                if set(g.endpoints(i)) == {a, b}:
                    result = Node(LEAF)
            else:
                for k in range(i, j):
                    common = verts(i, k) & verts(k + 1, j)
                    if a in common and b in common:
                        l, r = solve(i, k, a, b), None
                        if l is not None:
                            r = solve(k + 1, j, a, b)
                        if l is not None and r is not None:
                            result = Node(PARALLEL, l, r)
                            break
                    if len(common) == 1:
                        (c,) = common
                        if c not in (a, b) and a in verts(i, k) and b in verts(k + 1, j):
                            l = solve(i, k, a, c)
                            r = solve(k + 1, j, c, b) if l is not None else None
                            if l is not None and r is not None:
                                result = Node(SERIES, l, r)
                                break
                        if c == a:
                            l = solve(i, k, a, b)
                            if l is not None:
                                for w in sorted(verts(k + 1, j) - {a}):
                                    r = solve(k + 1, j, a, w)
                                    if r is not None:
                                        result = Node(DANGLING, l, r)
                                        break
                                if result is not None:
                                    break
        memo[key] = result
        return result

    root = solve(1, m, g.s, g.t)
    return None if root is None else DecompTree(root)


def recognize_with_labels(g: Multigraph) -> Tuple[DecompTree, List[int]]:
    """Recognize ``g``; also return the original label of each leaf in order."""
    top, root_decos = _reduce(g)
    text, labels = _emit(top, g.s, root_decos)
    tree = parse_tree(text)
    identity = list(range(1, g.m + 1))
    if labels != identity and g.m <= LABEL_ORDER_LIMIT:
        faithful = _interval_parse(g)
        if faithful is not None and _verify(g, faithful, identity):
            return faithful, identity
    if not _verify(g, tree, labels):
        raise RecognitionError("internal: reduced tree does not realize the input graph")
    return tree, labels


def recognize(g: Multigraph) -> DecompTree:
    """A decomposition tree realizing ``g`` (same terminals, edges up to relabelling).

    Raises RecognitionError when the reduction gets stuck; that happens for
    every non-GSP graph and possibly for some GSP ones.
    """
    return recognize_with_labels(g)[0]
