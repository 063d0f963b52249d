"""Command-line front end.

Exit codes: 0 success, 1 unexpected internal error, 2 bad input,
3 the requested result does not apply to this flow, 4 the two section
computations disagree.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Any

from . import homological
from .errors import CrossCheckError, NotApplicableError
from .exactla import IntMatrix
from .fgab import FgAbGroup
from .flowcalc import (
    FlowDescriptor,
    Solenoid,
    SolenoidSubgroupKm,
    all_sections_realizable_torus,
    analyze,
    cohomology_circle,
    free_extension_shapes,
    full_torsion,
    realizable_finite_section_torus,
    solenoid_section_catalog,
    torsion_subgroup,
    torus_modular_rank,
    zd_in_solenoid,
)
from .sections import (
    CoveringEndo,
    LoopMatrix,
    random_instance,
    section_via_cohomotopy,
    section_via_monodromy,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_NOT_APPLICABLE, EXIT_CROSS_CHECK = 0, 1, 2, 3, 4

FUNCTORS = {
    "hom": homological.hom,
    "ext": homological.ext,
    "tor": homological.tor,
    "tensor": homological.tensor,
}


class InputError(ValueError):
    pass


def _int_matrix(data: Any, rows: int | None = None, what: str = "matrix") -> IntMatrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError(f"{what} must be a list of rows")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in data for x in r):
        raise InputError(f"{what} entries must be integers")
    widths = {len(r) for r in data}
    if len(widths) > 1:
        raise InputError(f"{what} is ragged")
    if rows is not None and len(data) != rows:
        raise InputError(f"{what} has {len(data)} rows, expected {rows}")
    return IntMatrix(len(data), widths.pop() if widths else 0, tuple(x for r in data for x in r))


def descriptor_from_json(doc: Any) -> FlowDescriptor:
    if not isinstance(doc, dict):
        raise InputError("flow descriptor must be a JSON object")
    x_rank = doc.get("x_rank")
    if not isinstance(x_rank, int) or isinstance(x_rank, bool) or x_rank < 0:
        raise InputError("x_rank must be a nonnegative integer")
    gens = _int_matrix(doc.get("image_gens", [[] for _ in range(x_rank)]), x_rank, "image_gens")
    flags = doc.get("flags", {})
    known = {"simply_connected", "topologically_free", "no_finite_abelian_quotients"}
    if not isinstance(flags, dict) or not set(flags) <= known:
        raise InputError(f"flags must be an object with keys among {sorted(known)}")
    if not all(isinstance(v, bool) for v in flags.values()):
        raise InputError("flag values must be booleans")
    return FlowDescriptor(x_rank, gens, **flags)


def descriptor_to_json(fd: FlowDescriptor) -> dict:
    return {
        "x_rank": fd.x_rank,
        "image_gens": [list(fd.image_gens.row(i)) for i in range(fd.x_rank)],
        "flags": {
            "simply_connected": fd.simply_connected,
            "topologically_free": fd.topologically_free,
            "no_finite_abelian_quotients": fd.no_finite_abelian_quotients,
        },
    }


def _load_json(path: str | None) -> Any:
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _parse_json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON: {exc}") from exc


def _group(text: str) -> FgAbGroup:
    try:
        return FgAbGroup.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _or_none(fn, *args):
    try:
        return fn(*args)
    except NotApplicableError:
        return None


def cmd_analyze(args) -> dict:
    fd = descriptor_from_json(_load_json(args.input))
    rep = analyze(fd)
    h = _or_none(cohomology_circle, fd)
    tors = _or_none(full_torsion, fd)
    shapes = _or_none(free_extension_shapes, fd)
    return {
        "n": rep.n,
        "m": rep.m,
        "d": list(rep.divisors),
        "free_cycle": rep.has_free_cycle,
        "H_F": None if h is None else h.render(),
        "torsion": None if tors is None else tors.render(),
        "B_in_Z": None if shapes is None else shapes[0].render(),
        "F_in_G": None if shapes is None else shapes[1].render(),
    }


def cmd_torsion(args) -> dict:
    fd = descriptor_from_json(_load_json(args.input))
    if args.k is None or args.k < 1:
        raise InputError("--k must be a positive integer")
    return {"k": args.k, "tor_k": str(torsion_subgroup(fd, args.k))}


def _realize_torus(fd: FlowDescriptor, k: int, group: str | None) -> dict:
    if group is None:
        return {"fibre": f"torus:{k}", "query": "all_sections", "realizable": all_sections_realizable_torus(fd, k)}
    K = _group(group)
    if not K.is_finite():
        raise InputError("--group must be finite for a torus fibre")
    out = {"fibre": f"torus:{k}", "group": str(K)}
    if fd.simply_connected:
        # Z_d^j inside T^k
        if len(set(K.torsion)) > 1:
            raise NotApplicableError("simply connected criterion covers groups of the form Z_d^j only")
        if len(K.torsion) > k:
            return {**out, "query": "modular_rank", "realizable": False}
        if K.is_trivial():
            return {**out, "query": "modular_rank", "realizable": True}
        ok = torus_modular_rank(fd, len(K.torsion), K.torsion[0])
        return {**out, "query": "modular_rank", "realizable": ok}
    return {**out, "query": "finite_section", "realizable": realizable_finite_section_torus(fd, k, K)}


def _realize_solenoid(fd: FlowDescriptor, p: Solenoid, group: str | None) -> dict:
    out: dict = {"fibre": f"solenoid:{p}"}
    if group is None or group == "whole":
        return {**out, "query": "minimal_extension", "realizable": solenoid_section_catalog(fd, SolenoidSubgroupKm.whole())}
    if group.startswith("pr:"):
        try:
            m, k = (int(x) for x in group[3:].split(","))
            K = SolenoidSubgroupKm(m, k)
        except ValueError as exc:
            raise InputError(f"bad solenoid subgroup {group!r}, expected pr:m,k") from exc
        return {**out, "group": group, "query": "catalog", "realizable": solenoid_section_catalog(fd, K)}
    K = _group(group)
    if K.free_rank or len(K.torsion) != 1:
        raise InputError("solenoid queries take 'whole', 'pr:m,k' or a cyclic group Z_d")
    return {**out, "group": str(K), "query": "contains_cyclic", "contains": zd_in_solenoid(p, K.torsion[0])}


def cmd_realize(args) -> dict:
    fd = descriptor_from_json(_load_json(args.input))
    spec = args.fibre or ""
    kind, _, rest = spec.partition(":")
    if kind == "torus":
        try:
            k = int(rest)
        except ValueError as exc:
            raise InputError(f"bad torus fibre {spec!r}") from exc
        if k < 1:
            raise InputError("torus dimension must be positive")
        return _realize_torus(fd, k, args.group)
    if kind == "solenoid":
        try:
            p = Solenoid.parse(rest)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return _realize_solenoid(fd, p, args.group)
    raise InputError(f"unknown fibre spec {spec!r}; use torus:k or solenoid:prefix;cycle")


def _section_record(c: CoveringEndo, xi: LoopMatrix) -> dict:
    a = section_via_monodromy(c, xi)
    b = section_via_cohomotopy(c, xi)
    return {"monodromy": str(a), "cohomotopy": str(b), "agree": a == b}


def cmd_section(args) -> dict | list:
    if args.random is not None:
        rng = random.Random(int(os.environ.get("FLOWCOH_SEED", "0")))
        out = []
        for _ in range(args.random):
            c, xi = random_instance(rng)
            rec = _section_record(c, xi)
            out.append({"A": [list(c.A.row(i)) for i in range(c.g)],
                        "M": [list(xi.M.row(i)) for i in range(xi.g)], **rec})
        if not all(r["agree"] for r in out):
            raise CrossCheckError(json.dumps(out, ensure_ascii=False))
        return out
    if args.A is None or args.M is None:
        raise InputError("section needs --A and --M, or --random N")
    a = _int_matrix(_parse_json_arg(args.A, "--A"), what="A")
    m = _int_matrix(_parse_json_arg(args.M, "--M"), what="M")
    try:
        c = CoveringEndo(a)
        xi = LoopMatrix(m)
        rec = _section_record(c, xi)
    except CrossCheckError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not rec["agree"]:
        raise CrossCheckError(json.dumps(rec, ensure_ascii=False))
    return rec


def cmd_algebra(args) -> dict:
    return {
        "functor": args.functor,
        "A": str(_group(args.A)),
        "B": str(_group(args.B)),
        "result": str(FUNCTORS[args.functor](_group(args.A), _group(args.B))),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flowcoh", description="Cohomology of group extensions of minimal flows.")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    g.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    fmt.set_defaults(pretty=False)
    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("--input", metavar="PATH", help="flow descriptor JSON file ('-' or omitted: stdin)")

    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("analyze", parents=[fmt, inp], help="ranks, divisors, cohomology and inclusion shapes")
    s.set_defaults(func=cmd_analyze)
    s = sub.add_parser("torsion", parents=[fmt, inp], help="k-torsion of the circle cohomology")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_torsion)
    s = sub.add_parser("realize", parents=[fmt, inp], help="section realizability")
    s.add_argument("--fibre", required=True, metavar="SPEC", help="torus:k or solenoid:prefix;cycle")
    s.add_argument("--group", metavar="SPEC", help="e.g. Z_2+Z_4, whole, pr:m,k")
    s.set_defaults(func=cmd_realize)
    s = sub.add_parser("section", parents=[fmt], help="section of a torus extension by a finite covering")
    s.add_argument("--A", metavar="JSON", help="covering matrix as a list of rows")
    s.add_argument("--M", metavar="JSON", help="loop matrix as a list of rows")
    s.add_argument("--random", type=int, metavar="N", help="check N random instances (seed from FLOWCOH_SEED)")
    s.set_defaults(func=cmd_section)
    s = sub.add_parser("algebra", parents=[fmt], help="hom, ext, tor or tensor of two groups")
    s.add_argument("functor", choices=sorted(FUNCTORS))
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(func=cmd_algebra)
    return p


def render(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, ensure_ascii=False, indent=2)
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        doc = args.func(args)
    except NotApplicableError as exc:
        print(f"flowcoh: not applicable: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except CrossCheckError as exc:
        print(f"flowcoh: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSS_CHECK
    except ValueError as exc:
        print(f"flowcoh: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"flowcoh: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    print(render(doc, args.pretty))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
