"""Command-line interface: group inspection, counting tables, orbit and
reduction reports, state construction, maximization, and the verification
suites, with text, JSON (schema ``symorb/1``) and DOT output.

Every JSON report embeds the run manifest, keys are sorted, and floats are
rendered at 12 significant digits, so identical invocations produce
byte-identical reports.  Output files are written only after a command has
fully succeeded.  Exit codes: 0 success, 1 verification failure, 2 invalid
input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import Optional

from . import __version__
from .combinatorics import burnside_count, gupta_dihedral_count, shevelev_cyclic_count, tau
from .errors import InvalidInputError, ResourceLimitError
from .grouptheory import (
    PointPartition,
    characters,
    conjugacy_classes,
    cyclic_normalizer,
    normal_subgroups,
    normalizer,
    point_orbits,
)
from .optimize import MaxOptions, maximize, verify_theorem1, verify_theorem2
from .orbits import enumerate_orbits, orbit_diagram_dot, partition_diagram_dot, reduction_report
from .perm import PermGroup, Subset, parse_group_spec, preset
from .quantum import Measure, bell_state, ghz_state, is_invariant, w_state, weave_state

SCHEMA = "symorb/1"


def _round_floats(obj, digits: int = 12):
    if isinstance(obj, float):
        if obj == 0 or not math.isfinite(obj):
            return 0.0 if obj == 0 else obj
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def _emit(payload: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".symorb-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(payload)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def _json_report(manifest: dict, body: dict) -> str:
    doc = {"schema": SCHEMA, "version": __version__, "manifest": manifest, **body}
    return json.dumps(_round_floats(doc), sort_keys=True, indent=2) + "\n"


def _parse_range(text: str, low: int, high: int) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise InvalidInputError(f"bad integer range {text!r}") from exc
    if lo > hi or lo < low or hi > high:
        raise InvalidInputError(f"range {text!r} outside {low}..{high}")
    return list(range(lo, hi + 1))


def _parse_subset(text: str, n: int) -> Subset:
    try:
        labels = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InvalidInputError(f"bad subset {text!r}") from exc
    return Subset(labels, n=n)


def _group_from_args(args) -> PermGroup:
    return parse_group_spec(args.group, n=getattr(args, "n", None))


def _measure_from_args(args, x: Subset) -> Measure:
    kind = args.measure
    if kind == "concurrence":
        return Measure.concurrence()
    if kind == "negativity":
        part = getattr(args, "part", None)
        if part:
            return Measure.negativity(_parse_subset(part, n=max(x)))
        return Measure.negativity(list(x)[: max(1, len(x) // 2)])
    if kind == "entropy":
        return Measure.entropy()
    raise InvalidInputError(f"unknown measure {kind!r}")


def _opts_from_args(args) -> MaxOptions:
    return MaxOptions(
        restarts=args.restarts,
        max_iterations=args.iterations,
        convergence_tol=args.tol,
        seed=args.seed,
        threads=args.threads,
    )


def _manifest(args, command: str, **params) -> dict:
    return {
        "command": command,
        "group": getattr(args, "group", None),
        "parameters": params,
        "format": getattr(args, "format", "text"),
        "out": getattr(args, "out", None),
        "seed": getattr(args, "seed", None),
    }


def _group_normalizer(G: PermGroup) -> PermGroup:
    if G.name and G.name.startswith("C") and G.name[1:].isdigit():
        return cyclic_normalizer(G.n)
    return normalizer(G)


# --- subcommands -------------------------------------------------------------


def cmd_group(args) -> int:
    G = _group_from_args(args)
    classes = conjugacy_classes(G)
    subs = normal_subgroups(G)
    N = _group_normalizer(G)
    body = {
        "group": {
            "name": G.name,
            "n": G.n,
            "order": G.order(),
            "generators": [g.cycle_string() for g in G.generators],
            "transitive": G.is_transitive(),
        },
        "conjugacy_class_sizes": sorted(len(c) for c in classes),
        "normal_subgroups": [
            {
                "order": H.order(),
                "generators": [g.cycle_string() for g in H.generators],
            }
            for H in subs
        ],
        "normalizer": {
            "order": N.order(),
            "generators": [g.cycle_string() for g in N.generators],
        },
        "character_count": len(characters(G)),
    }
    manifest = _manifest(args, "group", n=G.n)
    if args.format == "json":
        _emit(_json_report(manifest, body), args.out)
    else:
        lines = [
            f"group {G.name or args.group}: order {G.order()} on {G.n} labels",
            f"  generators: {' '.join(g.cycle_string() for g in G.generators)}",
            f"  transitive: {G.is_transitive()}",
            f"  conjugacy class sizes: {body['conjugacy_class_sizes']}",
            f"  normal subgroup orders: {[h['order'] for h in body['normal_subgroups']]}",
            f"  normalizer order: {N.order()}",
            f"  one-dimensional characters: {body['character_count']}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_count(args) -> int:
    G = _group_from_args(args)
    ms = _parse_range(args.m, 0, G.n) if args.m else list(range(G.n + 1))
    rows = []
    for m in ms:
        burnside = burnside_count(G, m)
        formula = None
        consistent = None
        if G.name and G.name.startswith("D") and G.name[1:].isdigit():
            formula = gupta_dihedral_count(G.n, m)
            consistent = formula == burnside
        elif G.name and G.name.startswith("C") and G.name[1:].isdigit():
            result = shevelev_cyclic_count(G.n, m)
            formula = result.value
            consistent = result.consistent
        rows.append(
            {
                "n": G.n,
                "m": m,
                "group": G.name or args.group,
                "burnside": burnside,
                "formula": formula,
                "consistent": consistent,
            }
        )
    manifest = _manifest(args, "count", m=args.m)
    if args.format == "json":
        _emit(_json_report(manifest, {"table": rows}), args.out)
    else:
        lines = [f"{'m':>3}  {'burnside':>9}  {'formula':>8}  consistent"]
        for r in rows:
            lines.append(
                f"{r['m']:>3}  {r['burnside']:>9}  {str(r['formula']):>8}  {r['consistent']}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_orbits(args) -> int:
    G = _group_from_args(args)
    ms = _parse_range(args.m, 0, G.n)
    if len(ms) != 1:
        raise InvalidInputError("orbits takes a single m")
    part = enumerate_orbits(G, ms[0])
    manifest = _manifest(args, "orbits", m=ms[0])
    if args.dot or args.format == "dot":
        _emit(partition_diagram_dot(part), args.out)
    elif args.format == "json":
        _emit(_json_report(manifest, {"orbits": part.to_json()}), args.out)
    else:
        lines = [f"X_{ms[0]} under {G.name or args.group}: {part.count} orbits"]
        for rep, members in part.orbits:
            lines.append(
                f"  rep {{{','.join(map(str, rep))}}} size {len(members)}: "
                + " ".join("{" + ",".join(map(str, x)) + "}" for x in members)
            )
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_reduce(args) -> int:
    G = _group_from_args(args)
    ms = _parse_range(args.m, 0, G.n)
    if len(ms) != 1:
        raise InvalidInputError("reduce takes a single m")
    report = reduction_report(G, ms[0])
    manifest = _manifest(args, "reduce", m=ms[0], dot=bool(args.dot))
    if args.dot or args.format == "dot":
        _emit(orbit_diagram_dot(report), args.out)
        return 0
    if args.format == "json":
        _emit(_json_report(manifest, {"reduction": report.to_json()}), args.out)
    else:
        counts = report.pipeline()
        lines = [
            f"reduction pipeline for {G.name or args.group}, m={ms[0]}:",
            f"  |X_m| = {counts[0]}  ->  |X_m/G| = {counts[1]}  ->  "
            f"|X_m/N_G| = {counts[2]}  ->  unique = {counts[3]}",
        ]
        reducible = report.reducible_orbits()
        reps = report.g_orbits.reps()
        for ci, cls in enumerate(report.normalizer_classes):
            marks = [
                "{%s}%s" % (",".join(map(str, reps[i])), "*" if i in reducible else "")
                for i in cls
            ]
            lines.append(f"  class {ci}: " + " ".join(marks))
        lines.append("  (* = reducible to a normal-subgroup block by Theorem 2)")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_state(args) -> int:
    kind = args.kind
    if kind == "bell":
        psi = bell_state()
    elif kind == "w":
        psi = w_state(args.n)
    elif kind == "ghz":
        psi = ghz_state(args.n, args.d)
    elif kind == "weave":
        if not args.blocks or not args.inner:
            raise InvalidInputError("weave needs --inner and --blocks")
        blocks = [
            tuple(int(v) for v in blk.replace(",", " ").split())
            for blk in args.blocks.split(";")
        ]
        labels = sorted(v for blk in blocks for v in blk)
        n = len(labels)
        if labels != list(range(1, n + 1)):
            raise InvalidInputError("blocks must partition 1..n")
        size = len(blocks[0])
        if args.inner == "bell":
            inner = bell_state()
        elif args.inner == "w":
            inner = w_state(size)
        elif args.inner == "ghz":
            inner = ghz_state(size, args.d)
        else:
            raise InvalidInputError(f"unknown inner state {args.inner!r}")
        partition = PointPartition(n, tuple(tuple(sorted(b)) for b in blocks))
        psi = weave_state(inner, partition, n)
    else:
        raise InvalidInputError(f"unknown construction {kind!r}")
    body = {"state": psi.to_json()}
    if args.group:
        G = parse_group_spec(args.group, n=psi.n)
        chi = is_invariant(psi, G)
        body["invariant_under"] = args.group if chi is not None else None
        body["character_trivial"] = bool(chi.is_trivial) if chi is not None else None
    manifest = _manifest(args, "state", kind=kind, n=getattr(args, "n", None))
    _emit(_json_report(manifest, body), args.out)
    return 0


def cmd_maximize(args) -> int:
    G = _group_from_args(args)
    x = _parse_subset(args.x, G.n)
    measure = _measure_from_args(args, x)
    opts = _opts_from_args(args)
    result = maximize(G, args.d, measure, x, opts)
    body = {
        "maximize": {
            "value": result.value,
            "x": list(x),
            "measure": measure.kind,
            "sector": result.diagnostics["sector"],
            "restart_values": result.diagnostics["restart_values"],
            "evaluations": result.diagnostics["evaluations"],
            "witness": result.witness.to_json(),
        }
    }
    manifest = _manifest(
        args, "maximize", x=list(x), d=args.d, measure=measure.kind,
        restarts=opts.restarts,
    )
    if args.format == "json":
        _emit(_json_report(manifest, body), args.out)
    else:
        _emit(
            f"max {measure.kind} at x={{{','.join(map(str, x))}}} over "
            f"{G.name or args.group} sectors: {result.value:.9f} "
            f"(sector {result.diagnostics['sector']})\n",
            args.out,
        )
    return 0


_THEOREM2_SCENARIOS = {
    "c4-bell": ("C4", 2, (1, 3), (1, 3)),
    "o6-bell": ("O6", 2, (1, 2), (1, 2)),
    "cube-tetra": ("O8", 24, (1, 3, 6, 8), (1, 3)),
}


def _scenario_subgroup(G: PermGroup, order: int, block: tuple[int, ...]) -> PermGroup:
    for H in normal_subgroups(G):
        if H.order() == order and block in point_orbits(H).blocks:
            return H
    raise InvalidInputError(f"no normal subgroup of order {order} with block {block}")


def cmd_verify(args) -> int:
    opts = _opts_from_args(args)
    if args.which == "formulas":
        ns = _parse_range(args.nrange, 3, 16)
        rows = []
        gupta_ok = True
        for n in ns:
            D = preset(f"D{n}")
            C = preset(f"C{n}")
            for m in range(n + 1):
                gup = gupta_dihedral_count(n, m)
                bd = burnside_count(D, m)
                shev = shevelev_cyclic_count(n, m)
                gupta_ok &= gup == bd
                rows.append(
                    {
                        "n": n,
                        "m": m,
                        "gupta": gup,
                        "dihedral_burnside": bd,
                        "gupta_consistent": gup == bd,
                        "shevelev_printed": shev.value,
                        "cyclic_burnside": shev.burnside,
                        "shevelev_consistent": shev.consistent,
                    }
                )
        tau_ok = all(
            burnside_count(cyclic_normalizer(n), 2) == tau(n) - 1 for n in ns
        )
        passed = gupta_ok and tau_ok
        body = {
            "formulas": {
                "rows": rows,
                "gupta_all_consistent": gupta_ok,
                "tau_identity_holds": tau_ok,
                "passed": passed,
            }
        }
        manifest = _manifest(args, "verify", which="formulas", n=args.nrange)
        if args.format == "json":
            _emit(_json_report(manifest, body), args.out)
        else:
            bad = [r for r in rows if not r["shevelev_consistent"]]
            _emit(
                f"gupta == burnside for all n in {ns[0]}..{ns[-1]}: {gupta_ok}\n"
                f"|X_2/N_Cn| == tau(n)-1 for all n: {tau_ok}\n"
                f"shevelev printed formula disagreements: {len(bad)} of {len(rows)}\n"
                f"verdict: {'PASS' if passed else 'FAIL'} "
                "(Burnside is authoritative; printed-formula rows are recorded)\n",
                args.out,
            )
        return 0 if passed else 1

    if args.which == "theorem1":
        if not args.group:
            raise InvalidInputError("verify theorem1 needs --group")
        G = _group_from_args(args)
        m = _parse_range(args.m, 0, G.n)[0] if args.m else 2
        x_probe = Subset(range(1, m + 1))
        measure = _measure_from_args(args, x_probe)
        report = verify_theorem1(G, args.d, measure, m, opts)
        manifest = _manifest(args, "verify", which="theorem1", m=m, d=args.d)
        if args.format == "json":
            _emit(_json_report(manifest, {"theorem1": report}), args.out)
        else:
            lines = [f"theorem 1 on {G.name or args.group}, m={m}, {measure.kind}:"]
            for c in report["classes"]:
                lines.append(
                    f"  class {c['class']} reps {c['reps']}: values "
                    + " ".join(f"{v:.6f}" for v in c["values"])
                    + f" spread {c['spread']:.2e} {'ok' if c['pass'] else 'FAIL'}"
                )
            for t in report["transport"]:
                if "residual" in t:
                    lines.append(
                        f"  transport {t['from']}->{t['to']}: residual "
                        f"{t['residual']:.2e} {'ok' if t['pass'] else 'FAIL'}"
                    )
            lines.append(f"verdict: {'PASS' if report['passed'] else 'FAIL'}")
            _emit("\n".join(lines) + "\n", args.out)
        return 0 if report["passed"] else 1

    if args.which == "theorem2":
        names = (
            list(_THEOREM2_SCENARIOS) if args.scenario == "all" else [args.scenario]
        )
        reports = {}
        passed = True
        for name in names:
            if name not in _THEOREM2_SCENARIOS:
                raise InvalidInputError(
                    f"unknown scenario {name!r}; choose from "
                    f"{sorted(_THEOREM2_SCENARIOS)} or 'all'"
                )
            gname, horder, block, x = _THEOREM2_SCENARIOS[name]
            G = preset(gname)
            H = _scenario_subgroup(G, horder, block)
            report = verify_theorem2(
                G, H, block, x, args.d, Measure.concurrence(), opts
            )
            reports[name] = report
            passed &= report["passed"]
        manifest = _manifest(args, "verify", which="theorem2", scenario=args.scenario)
        if args.format == "json":
            _emit(_json_report(manifest, {"theorem2": reports}), args.out)
        else:
            lines = []
            for name, report in reports.items():
                lines.append(
                    f"theorem 2 [{name}]: lhs={report['lhs']:.6f} "
                    f"rhs={report['rhs']:.6f} gap={report['gap']:.2e} "
                    f"weave={report['weave_residual']:.2e} "
                    f"invariant={report['woven_invariant']} "
                    f"{'PASS' if report['passed'] else 'FAIL'}"
                )
            _emit("\n".join(lines) + "\n", args.out)
        return 0 if passed else 1

    raise InvalidInputError(f"unknown verification {args.which!r}")


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symorb",
        description="distinct entanglements under permutation symmetry groups",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_m=False):
        p.add_argument("--format", choices=("text", "json", "dot"), default="text")
        p.add_argument("--out", default=None, help="write output to this file")
        if with_m:
            p.add_argument("--m", default=None, help="party count m or range like 2..4")

    def optimizer_flags(p):
        p.add_argument("--d", type=int, default=2, help="local dimension")
        p.add_argument("--measure", default="concurrence",
                       choices=("concurrence", "negativity", "entropy"))
        p.add_argument("--part", default=None,
                       help="negativity bipartition labels, e.g. 1,3")
        p.add_argument("--seed", type=int, default=2024)
        p.add_argument("--restarts", type=int, default=16)
        p.add_argument("--iterations", type=int, default=800)
        p.add_argument("--tol", type=float, default=1e-6)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("group", help="orders, classes, normal subgroups, normalizer")
    p.add_argument("group", help="preset name (C8, D6, T4, O6, O8, I12) or cycles")
    p.add_argument("--n", type=int, default=None, help="label count for cycle specs")
    common(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("count", help="distinct entanglement counts")
    p.add_argument("group")
    p.add_argument("--n", type=int, default=None)
    common(p, with_m=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("orbits", help="explicit orbit enumeration")
    p.add_argument("group")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--dot", action="store_true", help="emit DOT diagrams")
    common(p, with_m=True)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("reduce", help="full reduction pipeline report")
    p.add_argument("group")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--dot", action="store_true", help="emit DOT diagrams")
    common(p, with_m=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("state", help="build W/GHZ/Bell/weave states")
    p.add_argument("kind", choices=("w", "ghz", "bell", "weave"))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--inner", default=None, help="weave block state: w|ghz|bell")
    p.add_argument("--blocks", default=None, help='weave blocks, e.g. "1,3;2,4"')
    p.add_argument("--group", default=None, help="also report invariance under this group")
    common(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("maximize", help="maximize a measure over the invariant sectors")
    p.add_argument("group")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--x", required=True, help="subset labels, e.g. 1,3")
    optimizer_flags(p)
    common(p)
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("verify", help="theorem and formula verification suites")
    p.add_argument("which", choices=("theorem1", "theorem2", "formulas"))
    p.add_argument("--group", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", default=None)
    p.add_argument("--nrange", default="3..16", help="n range for formulas")
    p.add_argument("--scenario", default="all",
                   help="theorem2 scenario: c4-bell, o6-bell, cube-tetra, all")
    optimizer_flags(p)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
