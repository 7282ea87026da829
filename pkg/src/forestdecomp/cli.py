"""Command-line front end.

Exit codes: 0 success or true, 1 false or witness found, 2 input error,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .decomposer import InvariantBreach, KfDecomposition, SearchBudgetExceeded, constructive_decompose, exact_decompose
from .decomposer.constructive import DomainError
from .density import check_feasible, check_ndt_bound, check_sparse, find_overfull, fractional_arboricity
from .discharging import audit_instance
from .forests import decompose_k_forests, is_forest, validate_kfd
from .graphio import GraphFile, GraphParseError, format_graph, parse_graph, resolve_instance_caps
from .harness import EnumSpec, sharpness_scan, verify_ndt
from .multigraph import Instance

__all__ = ["parse_graph", "format_graph", "emit_decomposition", "parse_decomposition", "main"]

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BREACH = 0, 1, 2, 3


class InputError(Exception):
    pass


def _set(a) -> str:
    return ",".join(map(str, sorted(a)))


def emit_decomposition(dec: KfDecomposition, inst: Instance) -> tuple[str, bool]:
    """``u v copy class`` lines in canonical order, then ``ok`` or ``invalid <reason>``."""
    lines = [f"{u} {v} {i} {name}" for (u, v, i), name in dec.copies()]
    problems = validate_kfd(inst, dec)
    lines.append("ok" if not problems else f"invalid {problems[0]}")
    return "\n".join(lines) + "\n", not problems


def parse_decomposition(text: str, k: int) -> KfDecomposition:
    """Read ``u v copy class`` lines; trailing status lines and comments are ignored."""
    classes: list[set] = [set() for _ in range(k + 1)]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "ok" or line.startswith("invalid"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise InputError(f"line {lineno}: expected 'u v copy class'")
        try:
            u, v, i = (int(p) for p in parts[:3])
        except ValueError:
            raise InputError(f"line {lineno}: expected integers") from None
        name = parts[3]
        if name == "D":
            c = k
        elif name.startswith("F") and name[1:].isdigit() and 1 <= int(name[1:]) <= k:
            c = int(name[1:]) - 1
        else:
            raise InputError(f"line {lineno}: unknown class {name!r}")
        classes[c].add((min(u, v), max(u, v), i))
    return KfDecomposition(tuple(frozenset(c) for c in classes[:k]), frozenset(classes[k]))


def _read(path: str) -> GraphFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_graph(text)
    except GraphParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _kd(args, gf: GraphFile, need_d: bool = True) -> tuple[int, int]:
    k = args.k if args.k is not None else (gf.params[0] if gf.params else None)
    d = getattr(args, "d", None)
    if d is None and gf.params:
        d = gf.params[1]
    if k is None or (need_d and d is None):
        raise InputError("k and d must be given by --k/--d or a 'params' line")
    if k < 1 or (need_d and d < 1):
        raise InputError("k and d must be positive")
    return k, d


def _instance(args, gf: GraphFile) -> Instance:
    k, d = _kd(args, gf)
    f = resolve_instance_caps(gf, d)
    if any(c > d for c in f):
        raise InputError(f"capacity above d={d}")
    return Instance(gf.graph, k, d, f)


def cmd_arb(args) -> int:
    g = _read(args.file).graph
    if g.num_edges == 0:
        raise InputError("fractional arboricity is undefined for an edgeless graph")
    value, witness = fractional_arboricity(g)
    print(f"arb={value} witness={_set(witness)}")
    return EXIT_OK


def cmd_check(args) -> int:
    gf = _read(args.file)
    g = gf.graph
    if args.what == "overfull":
        k, _ = _kd(args, gf, need_d=False)
        witness = find_overfull(g, k)
        if witness is None:
            print("verdict=none")
            return EXIT_OK
        print(f"verdict=overfull witness={_set(witness)} edges={g.induced_edge_count(witness)}")
        return EXIT_FALSE
    if args.what == "feasible":
        ok, rep = check_feasible(_instance(args, gf))
    else:
        k, d = _kd(args, gf)
        ok, rep = (check_ndt_bound if args.what == "ndt" else check_sparse)(g, k, d)
    if ok:
        print("verdict=true")
        return EXIT_OK
    print(f"verdict=false witness={_set(rep.witness)} value={rep.value}")
    return EXIT_FALSE


def cmd_forests(args) -> int:
    gf = _read(args.file)
    k, _ = _kd(args, gf, need_d=False)
    res = decompose_k_forests(gf.graph, k)
    if isinstance(res, frozenset):
        print(f"witness={_set(res)} edges={gf.graph.induced_edge_count(res)}")
        return EXIT_FALSE
    for i, cls in enumerate(res.classes):
        for u, v, c in sorted(cls):
            print(f"{u} {v} {c} F{i + 1}")
    if all(is_forest(gf.graph, cls) for cls in res.classes):
        print("ok")
        return EXIT_OK
    print("invalid class is not a forest")
    return EXIT_BREACH


def cmd_decompose(args) -> int:
    inst = _instance(args, _read(args.file))
    trace = None
    if args.mode == "exact":
        dec = exact_decompose(inst)
        if dec is None:
            print("none")
            return EXIT_FALSE
        dec = dec.canonical()
    else:
        try:
            dec, trace = constructive_decompose(inst)
        except DomainError as exc:
            raise InputError(str(exc)) from None
    text, ok = emit_decomposition(dec, inst)
    sys.stdout.write(text)
    if args.trace and trace is not None:
        for step in trace:
            print(f"# {step.describe()}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_verify_decomposition(args) -> int:
    inst = _instance(args, _read(args.graph))
    try:
        with open(args.decomposition, encoding="utf-8") as fh:
            dec = parse_decomposition(fh.read(), inst.k)
    except OSError as exc:
        raise InputError(f"{args.decomposition}: {exc.strerror}") from None
    text, ok = emit_decomposition(dec, inst)
    print(text.splitlines()[-1])
    return EXIT_OK if ok else EXIT_FALSE


def cmd_discharge(args) -> int:
    rep = audit_instance(_instance(args, _read(args.file)))
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.conserved else EXIT_BREACH


def _spec(args) -> EnumSpec:
    if args.max_n < 1:
        raise InputError("--max-n must be positive")
    mult = args.max_mult if args.max_mult is not None else args.k + 1
    return EnumSpec(max_vertices=args.max_n, max_multiplicity=mult, connected=True, overfull_k=args.k)


def cmd_verify(args) -> int:
    if args.k < 1 or args.d < 1:
        raise InputError("k and d must be positive")
    rep = verify_ndt(args.k, args.d, _spec(args), jobs=args.jobs)
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.ok else EXIT_FALSE


def cmd_sharpness(args) -> int:
    if args.k < 1 or args.d < 1:
        raise InputError("k and d must be positive")
    rep = sharpness_scan(args.k, args.d, _spec(args))
    print("\n".join(rep.lines()))
    return EXIT_FALSE if rep.violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestdecomp", description="Forest decompositions of small multigraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def kd(sp, d=True):
        sp.add_argument("--k", type=int)
        if d:
            sp.add_argument("--d", type=int)

    sp = sub.add_parser("arb", help="exact fractional arboricity and a densest set")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_arb)

    sp = sub.add_parser("check", help="test a density hypothesis")
    sp.add_argument("file")
    sp.add_argument("--what", choices=["ndt", "sparse", "feasible", "overfull"], required=True)
    kd(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("forests", help="split into k forests or report a dense set")
    sp.add_argument("file")
    kd(sp, d=False)
    sp.set_defaults(func=cmd_forests)

    sp = sub.add_parser("decompose", help="(k,f)-decomposition")
    sp.add_argument("file")
    kd(sp)
    sp.add_argument("--mode", choices=["exact", "constructive"], default="constructive")
    sp.add_argument("--trace", action="store_true", help="append the reduction trace as comments")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("verify-decomposition", help="validate a decomposition file")
    sp.add_argument("graph")
    sp.add_argument("decomposition")
    kd(sp)
    sp.set_defaults(func=cmd_verify_decomposition)

    sp = sub.add_parser("discharge", help="audit the discharging rules on an instance")
    sp.add_argument("file")
    kd(sp)
    sp.set_defaults(func=cmd_discharge)

    for name, func, help_ in (("verify", cmd_verify, "check the theorem on all small graphs"),
                              ("sharpness", cmd_sharpness, "densest-looking graphs without a decomposition")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--max-n", type=int, required=True)
        sp.add_argument("--max-mult", type=int)
        if name == "verify":
            sp.add_argument("--jobs", type=int, default=1)
        sp.set_defaults(func=func)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except InvariantBreach as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        trace = getattr(exc, "trace", None)
        if trace is not None:
            print(trace.format(), file=sys.stderr)
        return EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
