"""Labeled undirected multigraphs with a distinguished source and sink.

Edges carry labels ``1..m``.  A traversal of an edge is encoded as a signed
integer ("dart"): ``+e`` walks edge ``e`` from its stored ``u`` to ``v`` and
``-e`` walks it back from ``v`` to ``u``.  Trails and tours elsewhere in the
package are tuples of darts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import InputError

Edge = Tuple[int, int, int]  # (label, u, v)


@dataclass(frozen=True)
class Multigraph:
    """Connected loopless multigraph with terminals ``s`` and ``t``.

    ``edges[i]`` is the edge labelled ``i + 1``.  Instances are immutable and
    validated on construction.
    """

    edges: Tuple[Edge, ...]
    s: int
    t: int
    _degree: Dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple(sorted((int(l), int(u), int(v)) for l, u, v in self.edges))
        object.__setattr__(self, "edges", edges)
        labels = [e[0] for e in edges]
        if labels != list(range(1, len(edges) + 1)):
            raise InputError("edge labels must be exactly 1..m with no repeats")
        if self.s == self.t:
            raise InputError("source and sink must be distinct")
        deg: Dict[int, int] = {self.s: 0, self.t: 0}
        for label, u, v in edges:
            if u == v:
                raise InputError(f"edge {label} is a self-loop")
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        object.__setattr__(self, "_degree", deg)
        if not self._connected():
            raise InputError("graph is not connected")

    @classmethod
    def from_edges(cls, pairs: Iterable[Tuple[int, int]], s: int, t: int) -> "Multigraph":
        """Build a graph labelling ``pairs`` 1..m in the given order."""
        return cls(tuple((i + 1, u, v) for i, (u, v) in enumerate(pairs)), s, t)

    def _connected(self) -> bool:
        adj: Dict[int, List[int]] = {v: [] for v in self._degree}
        for _, u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.s}
        queue = deque([self.s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> List[int]:
        return sorted(self._degree)

    def degree(self, v: int) -> int:
        try:
            return self._degree[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def max_degree(self) -> int:
        return max(self._degree.values())

    def is_eulerian(self) -> bool:
        return all(d % 2 == 0 for d in self._degree.values())

    def odd_vertices(self) -> List[int]:
        return sorted(v for v, d in self._degree.items() if d % 2)

    def is_legal(self) -> bool:
        odd = self.odd_vertices()
        return not odd or sorted(odd) == sorted((self.s, self.t))

    def endpoints(self, label: int) -> Tuple[int, int]:
        _, u, v = self.edges[label - 1]
        return u, v

    def tail(self, dart: int) -> int:
        u, v = self.endpoints(abs(dart))
        return u if dart > 0 else v

    def head(self, dart: int) -> int:
        u, v = self.endpoints(abs(dart))
        return v if dart > 0 else u

    def incident(self) -> Dict[int, List[int]]:
        """Map vertex -> darts leaving it, ordered by edge label."""
        out: Dict[int, List[int]] = {v: [] for v in self._degree}
        for label, u, v in self.edges:
            out[u].append(label)
            out[v].append(-label)
        return out

    def canonical(self) -> "Multigraph":
        """Renumber vertices: s=0, t=1, then by first appearance in label order."""
        ids = {self.s: 0, self.t: 1}
        for _, u, v in self.edges:
            for x in (u, v):
                if x not in ids:
                    ids[x] = len(ids)
        return Multigraph(tuple((l, ids[u], ids[v]) for l, u, v in self.edges), 0, 1)

    def edge_multiset(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted((u, v))) for _, u, v in self.edges)


def degree(g: Multigraph, v: int) -> int:
    return g.degree(v)


def is_eulerian(g: Multigraph) -> bool:
    return g.is_eulerian()


def is_legal(g: Multigraph) -> bool:
    return g.is_legal()


def walk_vertices(g: Multigraph, darts: Sequence[int]) -> List[int]:
    """Vertex sequence visited by a dart sequence, including the final vertex."""
    if not darts:
        return []
    out = [g.tail(darts[0])]
    for d in darts:
        out.append(g.head(d))
    return out


# -- text format -----------------------------------------------------------

def format_graph(g: Multigraph) -> str:
    lines = [f"terminals {g.s} {g.t}"]
    lines.extend(f"edge {l} {u} {v}" for l, u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Multigraph:
    """Parse the line-oriented graph format (``terminals``/``edge`` lines)."""
    terminals = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "terminals" and len(parts) == 3:
                if terminals is not None:
                    raise InputError(f"line {lineno}: duplicate terminals line")
                terminals = (int(parts[1]), int(parts[2]))
            elif parts[0] == "edge" and len(parts) == 4:
                edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
            else:
                raise InputError(f"line {lineno}: unrecognised line {line!r}")
        except ValueError:
            raise InputError(f"line {lineno}: expected integers in {line!r}") from None
    if terminals is None:
        raise InputError("missing 'terminals' line")
    if not edges:
        raise InputError("graph has no edges")
    return Multigraph(tuple(edges), *terminals)
