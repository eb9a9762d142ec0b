"""Command-line interface and the instance file format.

File format::

    fvs <n> <m> <k>
    u v            (m lines, 1-indexed, u <= v, u == v is a loop)

Edges are written sorted, one line per copy, so equal instances serialise to
equal bytes.  A no-instance kernel is the single line ``NO``.
"""

from __future__ import annotations

import argparse
import gc
import sys
import time
from pathlib import Path
from typing import Sequence, TextIO

from .engine import MODES, NonPlanarInput, kernelize
from .generators import gen_corpus_small, gen_grid, gen_planted_planar, gen_tight, grid_for_size
from .multigraph import Instance, MultiGraph
from .oracle import ORACLE_MAX_N, OracleBudgetError, is_fvs, min_fvs

NO_LINE = "NO"


class ParseError(ValueError):
    """Malformed instance or solution file; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, msg: str) -> None:
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(lineno, f"expected {count} fields, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(lineno, f"non-integer field in {line.strip()!r}") from None


def parse_instance(text: str) -> Instance:
    """Parse the instance format. Blank trailing lines are ignored."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError(1, "empty input")
    head = lines[0].split()
    if not head or head[0] != "fvs":
        raise ParseError(1, "header must start with 'fvs'")
    n, m, k = _ints(" ".join(head[1:]), 1, 3)
    if n < 0 or m < 0:
        raise ParseError(1, "n and m must be non-negative")
    if len(lines) - 1 < m:
        raise ParseError(len(lines) + 1, f"missing edge line: header declares {m} edges")
    if len(lines) - 1 > m:
        raise ParseError(m + 2, f"unexpected line: header declares {m} edges")
    g = MultiGraph.from_edges(n, ())
    for i, line in enumerate(lines[1:], start=2):
        u, v = _ints(line, i, 2)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(i, f"vertex id out of range 1..{n}")
        g.add_edge(u - 1, v - 1)
    return Instance(g, k)


def serialize_instance(inst: Instance) -> str:
    """Canonical text: vertices renumbered 1..n in ascending handle order."""
    g = inst.graph
    idx = {v: i + 1 for i, v in enumerate(g.vertices())}
    rows = []
    for u, v, m in g.edges():
        a, b = sorted((idx[u], idx[v]))
        rows.extend([(a, b)] * m)
    rows.sort()
    out = [f"fvs {g.num_vertices()} {len(rows)} {inst.k}"]
    out.extend(f"{a} {b}" for a, b in rows)
    return "\n".join(out) + "\n"


def serialize_outcome(inst: Instance, is_no: bool) -> str:
    return NO_LINE + "\n" if is_no else serialize_instance(inst)


def parse_solution(text: str, n: int) -> list[int]:
    """Whitespace-separated 1-indexed vertex ids; returns 0-indexed handles."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(lineno, f"non-integer vertex id {tok!r}") from None
            if not 1 <= v <= n:
                raise ParseError(lineno, f"vertex id {v} out of range 1..{n}")
            out.append(v - 1)
    return out


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- commands ---------------------------------------------------------------


def cmd_kernelize(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.input))
    if inst.k < 0:
        _write(args.output, NO_LINE + "\n")
        return 0
    out = kernelize(inst, mode=args.mode, ell=args.ell, check_planarity=args.check_planarity_euler)
    _write(args.output, serialize_outcome(out.instance, out.is_no))
    if args.trace:
        for line in out.trace.lines():
            print(line, file=sys.stderr)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.input))
    sol = min_fvs(inst.graph, max_n=args.max_n)
    ids = " ".join(str(v + 1) for v in sorted(sol.vertices))
    verdict = "YES" if sol.size <= inst.k else "NO"
    sys.stdout.write(f"{verdict}\nmin_fvs {sol.size}\nsolution {ids}".rstrip() + "\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.input))
    sol = parse_solution(_read(args.solution), inst.graph.num_vertices())
    if not is_fvs(inst.graph, sol):
        print("REJECTED: remaining graph is not a forest")
        return 1
    size = len(set(sol))
    note = "within" if size <= inst.k else "exceeds"
    print(f"ACCEPTED size {size} ({note} k={inst.k})")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "corpus":
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        ks = range(args.k, args.k + 1) if args.k is not None else range(0, args.max_n + 1)
        for i, inst in enumerate(gen_corpus_small(args.max_n, args.max_mult, ks)):
            (out / f"{i:07d}.fvs").write_text(serialize_instance(inst))
        return 0
    if kind == "tight":
        inst = gen_tight(args.m)
    elif kind == "planted":
        inst = gen_planted_planar(args.k, args.size_factor, args.seed)
    else:
        inst = gen_grid(args.rows, args.cols, args.k)
    _write(args.output, serialize_instance(inst))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    print("n,vertices,kernel_vertices,seconds")
    for n in sizes:
        best = float("inf")
        for _ in range(args.repeat):
            inst = grid_for_size(n)
            gc.collect()
            gc.disable()
            try:
                t0 = time.perf_counter()
                out = kernelize(inst, mode=args.mode, ell=args.ell)
                best = min(best, time.perf_counter() - t0)
            finally:
                gc.enable()
        print(f"{n},{inst.graph.num_vertices()},{out.instance.graph.num_vertices()},{best:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fvskernel", description="Feedback vertex set kernels for planar multigraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernelize", help="reduce an instance to a kernel")
    k.add_argument("--ell", type=int, choices=(5, 6), default=5)
    k.add_argument("--mode", choices=MODES, default="incremental")
    k.add_argument(
        "--check-planarity-euler",
        action="store_true",
        help="reject inputs whose simple graph has more than 3|V|-6 edges; planarity is otherwise trusted",
    )
    k.add_argument("--trace", action="store_true", help="write one line per rule application to stderr")
    k.add_argument("input")
    k.add_argument("output", nargs="?")
    k.set_defaults(func=cmd_kernelize)

    s = sub.add_parser("solve", help="exact decision and witness for small instances")
    s.add_argument("--max-n", type=int, default=ORACLE_MAX_N)
    s.add_argument("input")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a claimed feedback vertex set")
    v.add_argument("input")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate instances")
    gsub = g.add_subparsers(dest="kind", required=True)
    t = gsub.add_parser("tight")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("output", nargs="?")
    c = gsub.add_parser("corpus", help="one file per instance in the OUT directory")
    c.add_argument("--max-n", type=int, required=True)
    c.add_argument("--max-mult", type=int, required=True)
    c.add_argument("--k", type=int, help="single budget (default: every k in 0..max-n)")
    c.add_argument("output")
    pl = gsub.add_parser("planted")
    pl.add_argument("--k", type=int, required=True)
    pl.add_argument("--size-factor", type=float, default=4.0)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("output", nargs="?")
    gr = gsub.add_parser("grid")
    gr.add_argument("--rows", type=int, required=True)
    gr.add_argument("--cols", type=int, required=True)
    gr.add_argument("--k", type=int)
    gr.add_argument("output", nargs="?")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="size,runtime CSV on grid inputs")
    b.add_argument("--sizes", required=True)
    b.add_argument("--mode", choices=MODES, default="incremental")
    b.add_argument("--ell", type=int, choices=(5, 6), default=5)
    b.add_argument("--repeat", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None, stderr: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    err = stderr or sys.stderr
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=err)
        return 2
    except OracleBudgetError as e:
        print(f"error: budget exceeded: {e}", file=err)
        return 3
    except (NonPlanarInput, ValueError, OSError) as e:
        print(f"error: {e}", file=err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
