"""Binary decomposition trees for generalized series-parallel graphs.

A tree has ``B`` leaves (single edges) and internal nodes ``S`` (series),
``P`` (parallel) and ``D`` (dangling).  Leaves are labelled ``1..m`` from
left to right, and each node caches the degrees of its terminals in the
subgraph it realizes.

Everything here is iterative so that trees with ~1e5 leaves (and
correspondingly deep spines) do not hit the recursion limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import TreeSyntaxError
from .multigraph import Multigraph

LEAF, SERIES, PARALLEL, DANGLING = "B", "S", "P", "D"
_OPS = (SERIES, PARALLEL, DANGLING)


class Node:
    __slots__ = ("kind", "left", "right", "id", "d_s", "d_t", "lo", "hi")

    def __init__(self, kind: str, left: "Node" = None, right: "Node" = None):
        if kind == LEAF:
            if left is not None or right is not None:
                raise ValueError("a leaf has no children")
        elif kind in _OPS:
            if left is None or right is None:
                raise ValueError(f"operator {kind} needs two children")
        else:
            raise ValueError(f"unknown node kind {kind!r}")
        self.kind = kind
        self.left = left
        self.right = right
        self.id = -1
        self.d_s = self.d_t = 0
        self.lo = self.hi = 0

    @property
    def is_leaf(self) -> bool:
        return self.kind == LEAF

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __repr__(self):
        return f"Node({self.kind}, id={self.id}, edges={self.lo}..{self.hi}, deg=({self.d_s},{self.d_t}))"


def B() -> Node:
    return Node(LEAF)


def S(a: Node, b: Node) -> Node:
    return Node(SERIES, a, b)


def P(a: Node, b: Node) -> Node:
    return Node(PARALLEL, a, b)


def D(a: Node, b: Node) -> Node:
    return Node(DANGLING, a, b)


def _postorder(root: Node) -> List[Node]:
    out = []
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.is_leaf or expanded:
            out.append(node)
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return out


class DecompTree:
    """A decomposition tree with post-order node ids and filled degree caches.

    ``nodes`` lists every node in post-order, so children always precede
    their parent and ``nodes[-1]`` is the root.
    """

    def __init__(self, root: Node):
        self.root = root
        self.nodes = _postorder(root)
        label = 0
        for i, node in enumerate(self.nodes):
            node.id = i
            if node.is_leaf:
                label += 1
                node.lo = node.hi = label
            else:
                node.lo, node.hi = node.left.lo, node.right.hi
        self.m = label
        propagate_degrees(self)

    def __len__(self):
        return len(self.nodes)

    def __str__(self):
        return serialize_tree(self)

    def __repr__(self):
        text = serialize_tree(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"DecompTree({text!r})"

    def __eq__(self, other):
        return isinstance(other, DecompTree) and serialize_tree(self) == serialize_tree(other)

    def __hash__(self):
        return hash(serialize_tree(self))

    def leaves(self) -> List[Node]:
        return [n for n in self.nodes if n.is_leaf]

    def max_degree(self) -> int:
        """Maximum vertex degree of the realized graph, read from the caches."""
        best = max(self.root.d_s, self.root.d_t)
        for node in self.nodes:
            if node.kind == SERIES:
                best = max(best, node.left.d_t + node.right.d_s)
            elif node.kind == DANGLING:
                best = max(best, node.right.d_t)
        return best


def propagate_degrees(tree: DecompTree) -> DecompTree:
    """Fill the terminal-degree caches bottom-up (leaf: 1,1)."""
    for node in tree.nodes:
        kind = node.kind
        if kind == LEAF:
            node.d_s, node.d_t = 1, 1
        elif kind == SERIES:
            node.d_s, node.d_t = node.left.d_s, node.right.d_t
        elif kind == PARALLEL:
            node.d_s = node.left.d_s + node.right.d_s
            node.d_t = node.left.d_t + node.right.d_t
        else:
            node.d_s = node.left.d_s + node.right.d_s
            node.d_t = node.left.d_t
    return tree


# -- text format -------------------------------------------------------------

def _strip_comments(text: str) -> str:
    return "\n".join(
        ("" if line.lstrip().startswith("#") else line) for line in text.splitlines()
    )


def parse_tree(text: str) -> DecompTree:
    """Parse ``tree := "B" | ("S"|"P"|"D") "(" tree "," tree ")"``.

    Whitespace is ignored and lines starting with ``#`` are comments.
    Errors carry the character offset where parsing failed.
    """
    text = _strip_comments(text)
    n = len(text)
    pos = 0
    stack: List[list] = []  # frames: [kind, children, open position]

    def skip(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    while True:
        pos = skip(pos)
        if pos >= n:
            raise TreeSyntaxError("unexpected end of input, expected a tree", pos)
        c = text[pos]
        if c in _OPS:
            start = pos
            pos = skip(pos + 1)
            if pos >= n or text[pos] != "(":
                raise TreeSyntaxError(f"expected '(' after {c}", pos)
            stack.append([c, [], start])
            pos += 1
            continue
        if c != LEAF:
            raise TreeSyntaxError(f"unexpected character {c!r}, expected B, S, P or D", pos)
        pos += 1
        node = Node(LEAF)
        # Attach the finished subtree, closing as many frames as it completes.
        while True:
            if not stack:
                pos = skip(pos)
                if pos != n:
                    raise TreeSyntaxError("trailing characters after tree", pos)
                return DecompTree(node)
            frame = stack[-1]
            frame[1].append(node)
            pos = skip(pos)
            if len(frame[1]) == 1:
                if pos >= n or text[pos] != ",":
                    raise TreeSyntaxError(
                        f"operator {frame[0]} at position {frame[2]} expects two operands; expected ','",
                        pos,
                    )
                pos += 1
                break
            if pos >= n or text[pos] != ")":
                raise TreeSyntaxError(f"expected ')' closing operator {frame[0]}", pos)
            pos += 1
            stack.pop()
            node = Node(frame[0], frame[1][0], frame[1][1])


def serialize_tree(tree) -> str:
    root = tree.root if isinstance(tree, DecompTree) else tree
    out = []
    stack = [root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.is_leaf:
            out.append(LEAF)
        else:
            out.append(item.kind + "(")
            stack.extend((")", item.right, ",", item.left))
    return "".join(out)


# -- realization -------------------------------------------------------------

def realize_terminals(tree: DecompTree) -> Tuple[Multigraph, List[Tuple[int, int]]]:
    """Realize the tree and report each node's terminals in the result.

    Returns the canonical graph (s=0, t=1, other vertices numbered by first
    appearance in label order) and a list indexed by node id of ``(s_u, t_u)``.
    Leaf edges are stored oriented from the leaf's source to its sink.
    """
    terms: List[Optional[Tuple[int, int]]] = [None] * len(tree.nodes)
    edges = []
    fresh = 2
    stack = [(tree.root, 0, 1)]
    while stack:
        node, a, b = stack.pop()
        terms[node.id] = (a, b)
        kind = node.kind
        if kind == LEAF:
            edges.append((node.lo, a, b))
        elif kind == SERIES:
            j = fresh
            fresh += 1
            stack.append((node.right, j, b))
            stack.append((node.left, a, j))
        elif kind == PARALLEL:
            stack.append((node.right, a, b))
            stack.append((node.left, a, b))
        else:
            w = fresh
            fresh += 1
            stack.append((node.right, a, w))
            stack.append((node.left, a, b))
    edges.sort()
    ids = {0: 0, 1: 1}
    for _, u, v in edges:
        for x in (u, v):
            if x not in ids:
                ids[x] = len(ids)
    g = Multigraph(tuple((l, ids[u], ids[v]) for l, u, v in edges), 0, 1)
    return g, [(ids[a], ids[b]) for a, b in terms]


def realize(tree: DecompTree) -> Multigraph:
    return realize_terminals(tree)[0]


def subtree(node: Node) -> DecompTree:
    """A fresh tree for the subgraph under ``node`` (leaves relabelled from 1)."""
    return DecompTree(copy_nodes(node))


def copy_nodes(root: Node) -> Node:
    memo = {}
    for node in _postorder(root):
        if node.is_leaf:
            memo[id(node)] = Node(LEAF)
        else:
            memo[id(node)] = Node(node.kind, memo[id(node.left)], memo[id(node.right)])
    return memo[id(root)]


# -- legality ----------------------------------------------------------------

@dataclass
class NodeStatus:
    node_id: int
    kind: str
    legal: bool
    eulerian: bool
    condition: Optional[str] = None  # violated condition: s1, s2, p1 or d1
    detail: str = ""


@dataclass
class LegalityReport:
    legal: bool
    root_eulerian: bool
    nodes: List[NodeStatus] = field(default_factory=list)

    @property
    def first_failure(self) -> Optional[NodeStatus]:
        """The first illegal node in post-order; its children are legal, so
        the failure is local to it."""
        for status in self.nodes:
            if not status.legal:
                return status
        return None


def check_legal(tree: DecompTree) -> LegalityReport:
    """Apply the composition legality rules node by node.

    Leaves are always legal.  Series needs both children legal (s1) and
    matching parity at the joined vertex (s2); parallel needs both children
    legal (p1); dangling needs a legal left child and an Eulerian legal
    right child (d1).
    """
    legal = [False] * len(tree.nodes)
    statuses = []
    for node in tree.nodes:
        eulerian = node.d_s % 2 == 0 and node.d_t % 2 == 0
        i = node.id
        if node.is_leaf:
            legal[i] = True
            statuses.append(NodeStatus(i, node.kind, True, False))
            continue
        l, r = node.left, node.right
        kids_ok = legal[l.id] and legal[r.id]
        cond, detail, ok = None, "", True
        if node.kind == SERIES:
            parity_ok = l.d_t % 2 == r.d_s % 2
            if kids_ok:
                # For legal children, s2 is the same as the source-parity
                # precondition of the series recurrence.
                assert parity_ok == (l.d_s % 2 == r.d_s % 2)
            if not parity_ok:
                ok, cond = False, "s2"
                detail = f"local: d(t1)={l.d_t} and d(s2)={r.d_s} differ in parity"
            elif not kids_ok:
                ok, cond, detail = False, "s1", "child subgraph illegal"
        elif node.kind == PARALLEL:
            if not kids_ok:
                ok, cond, detail = False, "p1", "child subgraph illegal"
        else:
            right_eulerian = r.d_s % 2 == 0 and r.d_t % 2 == 0
            if not right_eulerian:
                ok, cond = False, "d1"
                detail = f"local: right operand not Eulerian (degrees {r.d_s},{r.d_t})"
            elif not kids_ok:
                ok, cond, detail = False, "d1", "child subgraph illegal"
        legal[i] = ok
        statuses.append(NodeStatus(i, node.kind, ok, eulerian, cond, detail))
    root = tree.root
    return LegalityReport(
        legal=legal[root.id],
        root_eulerian=root.d_s % 2 == 0 and root.d_t % 2 == 0,
        nodes=statuses,
    )
