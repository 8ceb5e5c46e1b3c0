"""Batch command-line entry point: deterministic experiment drivers, format
conversion, artifact audits, and golden-file emission.

Exit codes: 0 success, 1 invalid input, 2 resource-budget refusal,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .blowup import BlowupSpec, forbidden_lengths, sample_blowup, verify_family_free
from .containers import encode_coloured, graph_container_step, iterate_containers
from .graphs import Graph, GraphError, RngSpec, gnm, k_of_graph, read_edge_list, write_edge_list
from .kst import KstError, KstParams, build_good_kst, dump_pairs, k_of_graph_kst
from .oracle import BudgetExceeded, count_free_graphs, enumerate_cycles, is_free
from .params import analysis_params, relaxed_params
from .randturan import SweepPlan, run_sweep, rows_to_table
from .supersat import SupersatError, dump_hypergraph, is_cycle_edge_set, read_hypergraph, build_good_hypergraph

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_INVARIANT = 3


class InvariantViolation(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Run manifests


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    seed: Optional[int]
    inputs: dict  # path -> sha256 of contents
    version: str

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _manifest(args: argparse.Namespace, input_paths: list[str]) -> RunManifest:
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "command") and v is not None
    }
    return RunManifest(
        command=args.command,
        parameters=params,
        seed=getattr(args, "seed", None),
        inputs={p: _digest(p) for p in input_paths},
        version=__version__,
    )


def _emit(args: argparse.Namespace, text: str, input_paths: list[str]) -> None:
    """Write the result to --out (plus a manifest sidecar) or stdout."""
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
        Path(out + ".manifest.json").write_text(
            _manifest(args, input_paths).to_json()
        )
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _load_graph(path: str) -> Graph:
    return read_edge_list(Path(path).read_text())


def _params_for(args: argparse.Namespace, k: float, n: int):
    """Relaxed constants when --delta is given (desk scale), else the
    analysis constants; --epsilon-schedule overrides the schedule."""
    ell = args.ell
    if getattr(args, "delta", None) is not None:
        p = relaxed_params(ell, k, n, delta=args.delta)
    else:
        p = analysis_params(ell, k, n)
    sched = getattr(args, "epsilon_schedule", None)
    if sched:
        eps = tuple(float(x) for x in sched.split(","))
        if len(eps) != ell:
            raise GraphError(f"epsilon schedule needs {ell} entries")
        p = dataclasses.replace(p, eps_schedule=eps)
    return p


# ---------------------------------------------------------------------------
# Subcommands


def cmd_enumerate_cycles(args) -> int:
    g = _load_graph(args.graph)
    cs = enumerate_cycles(g, args.ell, cap=args.budget)
    if cs.truncated:
        print("cycle enumeration hit the budget cap", file=sys.stderr)
        return EXIT_BUDGET
    lines = [" ".join(str(e) for e in c) for c in cs.cycles]
    _emit(args, "\n".join(lines) + ("\n" if lines else ""), [args.graph])
    return EXIT_OK


def cmd_free_count(args) -> int:
    count = count_free_graphs(args.n, args.ell)
    _emit(args, f"{count}\n", [])
    return EXIT_OK


def _instance_graph(args) -> tuple[Graph, list[str]]:
    """Host graph: --graph file, or a seeded G(n,m) with m = k * n^(1+1/ell)."""
    if args.graph:
        return _load_graph(args.graph), [args.graph]
    if args.n is None or args.k is None:
        raise GraphError("need --graph, or --n and --k with --seed")
    if args.seed is None:
        raise GraphError("random instance generation requires --seed")
    m = round(args.k * args.n ** (1 + 1 / args.ell))
    return gnm(args.n, m, RngSpec(seed=args.seed, label=args.command)), []


def cmd_build_supersat(args) -> int:
    g, inputs = _instance_graph(args)
    k = args.k if args.k is not None else k_of_graph(g, args.ell)
    params = _params_for(args, k, g.n)
    target = args.budget if args.budget else math.ceil(params.cycle_target())
    h, report = build_good_hypergraph(g, params, target=target, strategy=args.strategy)
    problems = h.audit()
    if problems:
        for p in problems:
            print(f"audit: {p}", file=sys.stderr)
        return EXIT_INVARIANT
    text = dump_hypergraph(h)
    _emit(args, text, inputs)
    print(
        f"hyperedges={report.edges} target={report.target} "
        f"met={report.target_met} stalled={report.stalled}"
    )
    return EXIT_OK


def cmd_containers(args) -> int:
    g = _load_graph(args.graph)
    params = _params_for(args, k_of_graph(g, args.ell), g.n)
    delta = args.delta if args.delta is not None else params.delta
    step = graph_container_step(
        g, params, container_delta=delta, tau=delta, supersat_target=args.budget
    )
    text = dump_containers(g.n, step.containers)
    _emit(args, text, [args.graph])
    print(f"containers={len(step.containers)} no_cycles={step.no_cycles}")
    return EXIT_OK


def cmd_iterate(args) -> int:
    params = relaxed_params(
        args.ell, args.k, args.n, delta=args.delta if args.delta is not None else 0.5
    )
    tree = iterate_containers(
        args.n,
        args.ell,
        args.k,
        params,
        container_delta=params.delta,
        tau=params.delta,
    )
    leaves = tree.leaves()
    if args.out:
        text = dump_containers(args.n, tuple(nd.graph for nd in leaves))
        _emit(args, text, [])
    print(
        f"nodes={len(tree.nodes)} leaves={len(leaves)} "
        f"max_leaf_edges={tree.max_leaf_edges()}"
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    g = _load_graph(args.graph)
    if not is_free(g, args.ell):
        raise GraphError(f"input graph contains a cycle of length {2 * args.ell}")
    params = relaxed_params(
        args.ell,
        max(k_of_graph(g, args.ell), 1.0),
        g.n,
        delta=args.delta if args.delta is not None else 0.5,
    )
    enc = encode_coloured(
        g, params, k_stop=args.k, container_delta=params.delta, tau=params.delta
    )
    lines = [f"{g.n} {len(enc.fingerprints)}"]
    for fp in enc.fingerprints:
        lines.append(" ".join(f"{u}-{v}" for u, v in sorted(fp)))
    _emit(args, "\n".join(lines) + "\n", [args.graph])
    cert = enc.certificate_graph(g.n)
    print(f"levels={len(enc.fingerprints)} certificate_edges={cert.m} "
          f"final_edges={enc.final_graph.m}")
    return EXIT_OK


def cmd_blowup(args) -> int:
    base = _load_graph(args.graph)
    spec = BlowupSpec(base=base, b=args.b)
    g = sample_blowup(spec, RngSpec(seed=args.seed, label="blowup"))
    ok, witness = verify_family_free(g, forbidden_lengths(args.ell))
    if not ok:
        print(f"blow-up contains a forbidden cycle: {witness}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(args, write_edge_list(g), [args.graph])
    print(f"n={g.n} m={g.m} verified_free=True")
    return EXIT_OK


def cmd_sweep(args) -> int:
    plan = SweepPlan(
        ell=args.ell,
        n_grid=tuple(int(x) for x in args.n.split(",")),
        p_grid=tuple(float(x) for x in args.p.split(",")),
        trials=args.trials,
        rng=RngSpec(seed=args.seed, label="sweep"),
    )
    rows = run_sweep(plan)
    _emit(args, rows_to_table(rows), [])
    return EXIT_OK


def cmd_kst_build(args) -> int:
    g = _load_graph(args.graph)
    params = KstParams(
        s=args.s,
        t=args.t,
        k=k_of_graph_kst(g, args.s),
        n=g.n,
        delta=args.delta if args.delta is not None else 1.0,
    )
    target = args.budget if args.budget else math.ceil(params.edge_target())
    h, report = build_good_kst(g, params, target=target, strategy=args.strategy)
    problems = h.audit()
    if problems:
        for p in problems:
            print(f"audit: {p}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(args, dump_pairs(h), [args.graph])
    print(
        f"pairs={report.edges} target={report.target} "
        f"met={report.target_met} stalled={report.stalled}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Container dump format: header "n count", then per container a line "m"
# followed by m edge lines "u v".


def dump_containers(n: int, containers) -> str:
    lines = [f"{n} {len(containers)}"]
    for g in containers:
        lines.append(str(g.m))
        for u, v in g.edges:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def read_containers(text: str) -> tuple[int, list[Graph]]:
    from .graphs import build_graph

    lines = [ln for ln in text.splitlines() if ln.strip()]
    n, count = (int(x) for x in lines[0].split())
    out, pos = [], 1
    for _ in range(count):
        m = int(lines[pos])
        pos += 1
        pairs = []
        for _ in range(m):
            u, v = (int(x) for x in lines[pos].split())
            pairs.append((u, v))
            pos += 1
        out.append(build_graph(n, pairs))
    if pos != len(lines):
        raise GraphError("trailing lines in container dump")
    return n, out


# ---------------------------------------------------------------------------
# audit: re-verify dumped artifacts


def _sniff_kind(path: str, text: str) -> str:
    suffix = Path(path).suffix
    by_ext = {
        ".edges": "edges",
        ".hg": "hypergraph",
        ".containers": "containers",
        ".pairs": "pairs",
    }
    if suffix in by_ext:
        return by_ext[suffix]
    if "|" in text.splitlines()[0 if len(text.splitlines()) == 1 else 1]:
        return "pairs"
    raise GraphError(f"cannot infer artifact kind of {path}; use --kind")


def _audit_file(path: str, kind: str, args) -> list[str]:
    text = Path(path).read_text()
    problems: list[str] = []
    if kind == "edges":
        g = read_edge_list(text)
        if not g.consistent():
            problems.append("edge list fails graph consistency")
        return problems

    if kind == "hypergraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, ell, count = (int(x) for x in lines[0].split())
        body = lines[1:]
        if len(body) != count:
            problems.append("hyperedge count mismatch with header")
        seen = set()
        max_eid = n * (n - 1) // 2
        for ln in body:
            ids = tuple(int(x) for x in ln.split())
            if len(ids) != 2 * ell or len(set(ids)) != 2 * ell:
                problems.append(f"line {ln!r} is not a {2 * ell}-set")
            if any(e < 0 or e >= max_eid for e in ids):
                problems.append(f"line {ln!r} has an out-of-range edge id")
            if ids in seen:
                problems.append(f"duplicate hyperedge {ln!r}")
            seen.add(ids)
        if args.graph:
            host = _load_graph(args.graph)
            for ln in body:
                ids = [int(x) for x in ln.split()]
                if not is_cycle_edge_set(host, ids, 2 * ell):
                    problems.append(f"{ln!r} is not a cycle in the host graph")
            if args.delta is not None and not problems:
                k = args.k if args.k is not None else k_of_graph(host, ell)
                params = relaxed_params(ell, k, host.n, delta=args.delta)
                try:
                    h = read_hypergraph(text, host, params)
                    problems.extend(h.audit())
                except SupersatError as exc:
                    problems.append(str(exc))
        return problems

    if kind == "containers":
        n, graphs = read_containers(text)
        for i, g in enumerate(graphs):
            if not g.consistent():
                problems.append(f"container {i} fails graph consistency")
        return problems

    if kind == "pairs":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        s, t, count = (int(x) for x in lines[0].split())
        body = lines[1:]
        if len(body) != count:
            problems.append("pair count mismatch with header")
        host = _load_graph(args.graph) if args.graph else None
        seen = set()
        for ln in body:
            left, _, right = ln.partition("|")
            S = tuple(int(x) for x in left.split())
            T = tuple(int(x) for x in right.split())
            if len(S) != s or len(T) != t:
                problems.append(f"pair {ln!r} has wrong class sizes")
            if set(S) & set(T):
                problems.append(f"pair {ln!r} has intersecting classes")
            if (S, T) in seen:
                problems.append(f"duplicate pair {ln!r}")
            seen.add((S, T))
            if host is not None and not all(
                host.has_edge(min(u, v), max(u, v)) for u in S for v in T
            ):
                problems.append(f"pair {ln!r} is not complete bipartite in host")
        return problems

    raise GraphError(f"unknown artifact kind {kind!r}")


def cmd_audit(args) -> int:
    failures = 0
    for path in args.files:
        text = Path(path).read_text()
        kind = args.kind or _sniff_kind(path, text)
        problems = _audit_file(path, kind, args)
        status = "ok" if not problems else "FAIL"
        print(f"{path}: {kind} {status}")
        for p in problems:
            print(f"  {p}", file=sys.stderr)
        failures += len(problems)
    return EXIT_OK if failures == 0 else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# Parser and dispatch


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cyclecontainers")
    p.add_argument("--workers", type=int, default=1,
                   help="worker count (runs are deterministic regardless)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        sp = sub.add_parser(name, **kw)
        sp.set_defaults(func=func, command=name)
        return sp

    sp = add("enumerate-cycles", cmd_enumerate_cycles)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--out")

    sp = add("free-count", cmd_free_count)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--out")

    sp = add("build-supersat", cmd_build_supersat)
    sp.add_argument("--graph")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--epsilon-schedule")
    sp.add_argument("--strategy", choices=("exhaustive", "paper"), default="exhaustive")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--out")

    sp = add("containers", cmd_containers)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--out")

    sp = add("iterate", cmd_iterate)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--out")

    sp = add("encode", cmd_encode)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--out")

    sp = add("blowup", cmd_blowup)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")

    sp = add("sweep", cmd_sweep)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--n", required=True, help="comma-separated n grid")
    sp.add_argument("--p", required=True, help="comma-separated p grid")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")

    sp = add("kst-build", cmd_kst_build)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--strategy", choices=("exhaustive", "greedy"), default="exhaustive")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--out")

    sp = add("audit", cmd_audit)
    sp.add_argument("files", nargs="+")
    sp.add_argument("--kind", choices=("edges", "hypergraph", "containers", "pairs"))
    sp.add_argument("--graph", help="host graph for full invariant checks")
    sp.add_argument("--delta", type=float)
    sp.add_argument("--k", type=float)
    sp.add_argument("--ell", type=int)

    return p


def cli_dispatch(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0,) else 0
    if getattr(args, "workers", 1) < 1:
        print("--workers must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphError, FileNotFoundError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SupersatError, KstError, AssertionError, InvariantViolation) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(cli_dispatch())
