"""Command-line workbench over the library.

One subcommand per capability: orbit and subgroup dumps, the certified
cycle search, admissibility queries, the dense-words and coset-hit
experiments, the two growth-statement drivers, and batch execution of a
JSON config.  Machine output is JSON (one canonical line) or flattened
CSV check rows.  Exit codes: 0 nothing failed (skips included), 1 a
check FAILed, 2 usage or config problem, 3 a budget abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .admissibility import is_admissible, verify_lemma_admissible_compositions
from .dynamics import build_graph, iterate_trajectory, semigroup_orbit
from .errors import BudgetExceeded, ConfigError
from .fields import PrimeFieldCtx, is_prime
from .graphmetrics import dense_words_search, recount_L, shortest_cycle_through_zero
from .harness import (
    FAIL,
    ExperimentSpec,
    _json_safe,
    run_batch,
    run_spec,
)
from .poly import Polynomial
from .subgroups import SubgroupDescriptor, membership_stats, subgroup_from_orbit


def _comma_ints(flag: str, example: str):
    def parse(text: str):
        try:
            parts = tuple(int(tok.strip()) for tok in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"{flag} expects comma-separated integers, e.g. {example!r}"
            ) from None
        if not parts:
            raise argparse.ArgumentTypeError(f"{flag} must not be empty")
        return parts

    return parse


_poly_arg = _comma_ints("--poly", "1,0,1")


def _ctx_from_args(args) -> PrimeFieldCtx:
    if args.p is None:
        raise ConfigError("field 'p': required")
    if args.p < 3 or not is_prime(args.p):
        raise ConfigError(f"field 'p': expected an odd prime, got {args.p}")
    return PrimeFieldCtx(args.p)


def _polys_from_args(ctx, args):
    if not args.poly:
        raise ConfigError("field 'poly': at least one --poly is required")
    return tuple(Polynomial(ctx, list(cs)) for cs in args.poly)


def _emit(obj, args) -> None:
    text = json.dumps(_json_safe(obj), sort_keys=False, separators=(",", ":"))
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_report(report, args) -> int:
    if getattr(args, "format", "jsonl") == "csv":
        rows = [
            [0, report.kind, c.name, c.status, _json_safe(c.hypothesis_held), _json_safe(c.lhs), _json_safe(c.rhs)]
            for c in report.checks
        ]
        if getattr(args, "out", None):
            with open(args.out, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(("spec_index", "kind", "check", "status", "hypothesis_held", "lhs", "rhs"))
                w.writerows(rows)
        else:
            w = csv.writer(sys.stdout)
            w.writerow(("spec_index", "kind", "check", "status", "hypothesis_held", "lhs", "rhs"))
            w.writerows(rows)
    else:
        _emit(report.to_obj(canonical=True), args)
    return 1 if any(c.status == FAIL for c in report.checks) else 0


# --- subcommands -----------------------------------------------------------


def _cmd_orbit(args) -> int:
    ctx = _ctx_from_args(args)
    fs = _polys_from_args(ctx, args)
    orbit = semigroup_orbit(fs, args.u, args.N)
    obj = {
        "p": args.p,
        "generators": [list(f.coeffs) for f in fs],
        "u": args.u,
        "N": args.N,
        "V": len(orbit.elements),
        "v_profile": list(orbit.v_profile),
        "layer_sizes": [len(layer) for layer in orbit.layers],
    }
    if len(orbit.elements) <= 10_000:
        obj["elements"] = sorted(orbit.elements)
        obj["layers"] = [list(layer) for layer in orbit.layers]
    else:
        obj["elements_omitted"] = True
    obj["trajectories"] = [
        {
            "generator": list(f.coeffs),
            "s": rec.s,
            "t": rec.t,
            "cycle_len": rec.cycle_len,
            "period": rec.period,
        }
        for f, rec in ((f, iterate_trajectory(f, args.u)) for f in fs)
    ]
    _emit(obj, args)
    return 0


def _cmd_subgroup(args) -> int:
    ctx = _ctx_from_args(args)
    fs = _polys_from_args(ctx, args)
    orbit = semigroup_orbit(fs, args.u, args.N)
    G = subgroup_from_orbit(orbit)
    if args.subgroup_order is not None:
        if (args.p - 1) % args.subgroup_order:
            raise ConfigError(
                f"field 'subgroup_order': {args.subgroup_order} does not divide p-1 = {args.p - 1}"
            )
        target = SubgroupDescriptor(ctx, args.subgroup_order)
    else:
        target = G
    stats = membership_stats(orbit, target)
    _emit(
        {
            "p": args.p,
            "generators": [list(f.coeffs) for f in fs],
            "u": args.u,
            "N": args.N,
            "V": stats.V,
            "G": G.order,
            "subgroup_order": target.order,
            "T": stats.T,
            "rho": stats.rho,
        },
        args,
    )
    return 0


def _cmd_cycle0(args) -> int:
    ctx = _ctx_from_args(args)
    fs = _polys_from_args(ctx, args)
    res = shortest_cycle_through_zero(
        fs, degree_cap=args.degree_cap, length_cap=args.length_cap, seed=args.seed
    )
    host_degree = getattr(res.host, "m", 1) if res.host is not None else None
    obj = {
        "p": args.p,
        "generators": [list(f.coeffs) for f in fs],
        "exact": res.exact,
        "length": res.length,
        "found_length": res.found_length,
        "lower_bound": res.lower_bound,
        "subgraph_lower_bound": res.subgraph_lower_bound,
        "skipped": res.skipped,
        "degree_cap": res.degree_cap,
        "length_cap": res.length_cap,
        "host_degree": host_degree,
    }
    if res.witness is not None:
        to_int = getattr(res.host, "to_int", int)
        obj["witness"] = [
            {"source": to_int(st.source), "target": to_int(st.target), "label": st.label, "forward": st.forward}
            for st in res.witness
        ]
    _emit(obj, args)
    return 0


def _cmd_admissible(args) -> int:
    ctx = _ctx_from_args(args)
    fs = _polys_from_args(ctx, args)
    if args.h is None:
        w = is_admissible(fs, seed=args.seed)
        _emit(
            {
                "p": args.p,
                "generators": [list(f.coeffs) for f in fs],
                "admissible": w.admissible,
                "failing_indices": list(w.failing_indices),
                "witnesses": [None if g is None else list(g.coeffs) for g in w.witnesses],
            },
            args,
        )
        return 0
    rep = verify_lemma_admissible_compositions(
        fs, args.h, degree_cap=args.degree_cap, length_cap=args.length_cap, seed=args.seed
    )
    _emit(
        {
            "p": args.p,
            "generators": [list(f.coeffs) for f in fs],
            "h": args.h,
            "status": rep.status,
            "severity": rep.severity,
            "reason": rep.reason,
            "certified_c0_floor": rep.certified_c0_floor,
            "family_size": rep.family_size,
            "failing_indices": None if rep.failing_indices is None else list(rep.failing_indices),
        },
        args,
    )
    return 1 if rep.status == "FAIL" else 0


def _cmd_dense_lemma(args) -> int:
    if args.poly:
        ctx = _ctx_from_args(args)
        fs = _polys_from_args(ctx, args)
        for name in ("u", "N", "h", "ell"):
            if getattr(args, name) is None:
                raise ConfigError(f"field '{name}': required in single-instance mode")
        A = list(range(args.p)) if args.A is None else list(args.A)
        graph = build_graph(fs, ctx)
        res = dense_words_search(graph, args.u, A, args.N, args.h, args.ell)
        rc = recount_L(graph, args.u, A, args.N, res.words)
        failed = rc != res.L or (res.hypothesis_met and not res.bound_holds)
        _emit(
            {
                "p": args.p,
                "generators": [list(f.coeffs) for f in fs],
                "u": args.u,
                "N": args.N,
                "h": args.h,
                "ell": args.ell,
                "A_size": len(A),
                "words": [list(w.labels) for w in res.words],
                "L": res.L,
                "recount": rc,
                "A_N": res.A_N,
                "nu": res.nu,
                "hypothesis_met": res.hypothesis_met,
                "derived_bound": res.derived_bound,
                "bound_holds": res.bound_holds,
            },
            args,
        )
        return 1 if failed else 0
    spec = ExperimentSpec(
        kind="dense", trials=args.trials, seed=args.seed, max_p=args.max_p, max_k=args.max_k
    )
    return _emit_report(run_spec(spec), args)


def _cmd_vyugin(args) -> int:
    if args.degrees is None:
        raise ConfigError("field 'degrees': required, e.g. --degrees 2,2")
    spec = ExperimentSpec(
        kind="vyugin",
        p=args.p,
        degrees=args.degrees,
        trials=args.trials,
        seed=args.seed,
        budget=args.budget,
    )
    return _emit_report(run_spec(spec), args)


def _cmd_thm1(args) -> int:
    spec = ExperimentSpec(
        kind="thm1",
        p=args.p,
        polys=args.poly or (),
        u=args.u,
        N=args.N,
        eps=args.eps,
        repetitions=args.repetitions,
        seed=args.seed,
    )
    return _emit_report(run_spec(spec), args)


def _cmd_thm2(args) -> int:
    spec = ExperimentSpec(
        kind="thm2",
        p=args.p,
        polys=args.poly or (),
        u=args.u,
        N=args.N,
        eps=args.eps,
        subgroup_order=args.subgroup_order,
        subgroup_window=args.subgroup_window,
        repetitions=args.repetitions,
        seed=args.seed,
    )
    return _emit_report(run_spec(spec), args)


def _cmd_batch(args) -> int:
    return run_batch(args.config, out=args.out, fmt=args.format)


# --- parser ----------------------------------------------------------------


def _add_common(sp, *, polys=True, orbit=False, caps=False, fmt=False):
    sp.add_argument("--p", type=int, default=None, help="prime modulus")
    if polys:
        sp.add_argument(
            "--poly",
            action="append",
            type=_poly_arg,
            default=None,
            help="generator coefficients, low degree first; repeatable ('1,0,1' is X^2+1)",
        )
    if orbit:
        sp.add_argument("--u", type=int, default=None, help="orbit start point")
        sp.add_argument("--N", type=int, default=None, help="orbit depth")
    if caps:
        sp.add_argument("--degree-cap", dest="degree_cap", type=int, default=6)
        sp.add_argument("--length-cap", dest="length_cap", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=str, default=None, help="write output here instead of stdout")
    if fmt:
        sp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fporbits",
        description="orbits of polynomial semigroups over prime fields: subgroups, cycles, counting bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("orbit", help="layered semigroup orbit and per-generator trajectories")
    _add_common(sp, orbit=True)
    sp.set_defaults(func=_cmd_orbit)

    sp = sub.add_parser("subgroup", help="smallest subgroup containing the orbit; T and rho")
    _add_common(sp, orbit=True)
    sp.add_argument("--subgroup-order", dest="subgroup_order", type=int, default=None)
    sp.set_defaults(func=_cmd_subgroup)

    sp = sub.add_parser("cycle0", help="certified shortest cycle through 0 in the closure multigraph")
    _add_common(sp, caps=True)
    sp.set_defaults(func=_cmd_cycle0)

    sp = sub.add_parser("admissible", help="admissibility witness; with --h, the composed-family pipeline")
    _add_common(sp, caps=True)
    sp.add_argument("--h", type=int, default=None, help="composition depth for the pipeline")
    sp.set_defaults(func=_cmd_admissible)

    sp = sub.add_parser("dense-lemma", help="dense-words bound: random trials, or one instance with --poly")
    _add_common(sp, orbit=True, fmt=True)
    sp.add_argument("--h", type=int, default=None)
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--A", type=_comma_ints("--A", "0,1,4"), default=None, help="target set (default: all residues)")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--max-p", dest="max_p", type=int, default=500)
    sp.add_argument("--max-k", dest="max_k", type=int, default=3)
    sp.set_defaults(func=_cmd_dense_lemma)

    sp = sub.add_parser("vyugin", help="joint coset-hit counts against the derived bound")
    _add_common(sp, polys=False, fmt=True)
    sp.add_argument("--degrees", type=_comma_ints("--degrees", "2,2"), default=None)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--budget", type=int, default=10**7)
    sp.set_defaults(func=_cmd_vyugin)

    sp = sub.add_parser("thm1", help="orbit growth report: trivial bound, growth ratio, threshold status")
    _add_common(sp, orbit=True, fmt=True)
    sp.add_argument("--eps", type=str, default="1/2")
    sp.add_argument("--repetitions", type=int, default=1)
    sp.set_defaults(func=_cmd_thm1)

    sp = sub.add_parser("thm2", help="intersection report: rho, proof parameters, trend statistic")
    _add_common(sp, orbit=True, fmt=True)
    sp.add_argument("--eps", type=str, default="1/2")
    sp.add_argument("--repetitions", type=int, default=1)
    sp.add_argument("--subgroup-order", dest="subgroup_order", type=int, default=None)
    sp.add_argument(
        "--subgroup-window",
        dest="subgroup_window",
        type=_comma_ints("--subgroup-window", "2,100"),
        default=None,
    )
    sp.set_defaults(func=_cmd_thm2)

    sp = sub.add_parser("batch", help="run every spec in a JSON config; JSONL stream plus CSV summary")
    sp.add_argument("--config", type=str, required=True)
    sp.add_argument("--out", type=str, default=None)
    sp.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    sp.set_defaults(func=_cmd_batch)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
