"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 input format or unreadable file,
3 illegal tree or non-Eulerian graph, 4 recognition failure,
5 internal arithmetic assertion or failed self-check.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import (
    ArithmeticIntegrityError,
    InputError,
    LegalityError,
    OracleBoundError,
    RecognitionError,
)
from .gamma import GammaTable, PrecompTables, build_tables, count_tours, kappa
from .multigraph import format_graph, parse_graph
from .oracle import DEFAULT_BOUND, HARD_CAP, enumerate_decompositions, enumerate_tours
from .recognize import recognize
from .sampler import TourSampler, derive_rng, format_tour_edges, format_tour_vertices
from .tree import DecompTree, parse_tree, realize, serialize_tree

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_LEGALITY = 3
EXIT_RECOGNITION = 4
EXIT_INTERNAL = 5

SEED_LIMIT = 1 << 64

TableHook = Callable[[List[GammaTable]], List[GammaTable]]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for input format here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    path: str
    seed: Optional[int] = None
    samples: int = 1
    bound: int = DEFAULT_BOUND
    emit: str = "edges"

    def __post_init__(self):
        if self.seed is not None and not 0 <= self.seed < SEED_LIMIT:
            raise UsageError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.samples < 1:
            raise UsageError(f"--samples must be positive, got {self.samples}")
        if not 1 <= self.bound <= HARD_CAP:
            raise UsageError(f"--max-edges must be between 1 and {HARD_CAP}, got {self.bound}")
        if self.emit not in ("edges", "vertices"):
            raise UsageError(f"--emit must be edges or vertices, got {self.emit}")
        if self.command == "sample" and self.seed is None:
            raise UsageError("sample requires --seed")


def read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_tree(path: str) -> DecompTree:
    return parse_tree(read_input(path))


# -- commands ------------------------------------------------------------------

def cmd_count(cfg: RunConfig) -> List[str]:
    return [str(count_tours(load_tree(cfg.path)))]


def cmd_sample(cfg: RunConfig) -> List[str]:
    sampler = TourSampler(load_tree(cfg.path))
    out = []
    for i in range(cfg.samples):
        tour = sampler.sample(derive_rng(cfg.seed, i))
        if cfg.emit == "edges":
            out.append(format_tour_edges(tour))
        else:
            out.append(format_tour_vertices(sampler.graph, tour))
    return out


def verify_tree(tree: DecompTree, bound: int,
                table_hook: Optional[TableHook] = None) -> Tuple[bool, List[str]]:
    """Cross-check the engine against the brute-force oracle.

    ``table_hook`` may rewrite the engine's tables before they are compared;
    tests use it to plant a wrong value.
    """
    if tree.m > bound:
        raise OracleBoundError(f"tree has {tree.m} edges, --max-edges is {bound}")
    pre = PrecompTables(tree.max_degree())
    tables = build_tables(tree, pre)
    if table_hook is not None:
        tables = table_hook(tables)
    g = realize(tree)
    root = tables[tree.root.id]
    checks = []
    if g.is_eulerian():
        engine = count_tours(tree, tables, pre)
    else:
        engine = 0
    checks.append(("count", engine, enumerate_tours(g, bound).count))
    census = enumerate_decompositions(g, bound)
    ks = sorted(set(kappa(root.d_s, root.d_t)) | set(census.by_k))
    for k in ks:
        checks.append((f"gamma({k})", root[k], census.gamma(k)))
    lines = []
    ok = True
    for name, got, want in checks:
        good = got == want
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'} {name} {got}={want}")
    failed = sum(1 for _, got, want in checks if got != want)
    lines.append(f"{'PASS' if ok else 'FAIL'} {len(checks) - failed}/{len(checks)} checks")
    return ok, lines


def cmd_verify(cfg: RunConfig, table_hook: Optional[TableHook] = None) -> Tuple[bool, List[str]]:
    return verify_tree(load_tree(cfg.path), cfg.bound, table_hook)


def cmd_realize(cfg: RunConfig) -> List[str]:
    return [format_graph(realize(load_tree(cfg.path))).rstrip("\n")]


def cmd_recognize(cfg: RunConfig) -> List[str]:
    g = parse_graph(read_input(cfg.path))
    return [serialize_tree(recognize(g))]


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gsp-euler", description="Count and sample Euler tours of GSP multigraphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="print the exact number of Euler tours")
    p.add_argument("tree_file", help="decomposition tree file, '-' for stdin")

    p = sub.add_parser("sample", help="draw uniformly random Euler tours")
    p.add_argument("tree_file")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed (required)")
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--emit", choices=("edges", "vertices"), default="edges")

    p = sub.add_parser("verify", help="cross-check the counts against brute force")
    p.add_argument("tree_file")
    p.add_argument("--max-edges", type=int, default=DEFAULT_BOUND,
                   help=f"refuse trees with more edges (at most {HARD_CAP})")

    p = sub.add_parser("realize", help="print the multigraph built by a tree")
    p.add_argument("tree_file")

    p = sub.add_parser("recognize", help="find a decomposition tree for a multigraph file")
    p.add_argument("graph_file")
    return parser


def _config(args) -> RunConfig:
    path = getattr(args, "tree_file", None) or getattr(args, "graph_file", None)
    return RunConfig(
        command=args.command,
        path=path,
        seed=getattr(args, "seed", None),
        samples=getattr(args, "samples", 1),
        bound=getattr(args, "max_edges", DEFAULT_BOUND),
        emit=getattr(args, "emit", "edges"),
    )


def run(argv: Optional[Sequence[str]] = None, table_hook: Optional[TableHook] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        status = EXIT_OK
        if cfg.command == "verify":
            ok, lines = cmd_verify(cfg, table_hook)
            status = EXIT_OK if ok else EXIT_INTERNAL
        else:
            lines = {
                "count": cmd_count,
                "sample": cmd_sample,
                "realize": cmd_realize,
                "recognize": cmd_recognize,
            }[cfg.command](cfg)
    except (UsageError, OracleBoundError) as exc:
        print(f"gsp-euler: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"gsp-euler: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LegalityError as exc:
        print(f"gsp-euler: {exc}", file=sys.stderr)
        return EXIT_LEGALITY
    except RecognitionError as exc:
        print(f"gsp-euler: recognition failed: {exc}", file=sys.stderr)
        return EXIT_RECOGNITION
    except (ArithmeticIntegrityError, AssertionError) as exc:
        print(f"gsp-euler: internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write("".join(line + "\n" for line in lines))
    return status


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
