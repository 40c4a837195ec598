"""Command-line front end.

Subcommands: `gen` writes a random problem instance; `approx` runs the
lattice approximation; `reduce svp|sivp|cvp` runs a full reduction through a
chosen oracle; `oracle svp|cvp|sivp` runs the reference enumeration directly
on the instance basis; `verify` replays the verification suite on an approx
output; `stats coprime-gap|perturbation` runs the statistics experiments.

Every report embeds the configuration and seed that produced it, all
integers are serialized as decimal strings, and identical invocations
produce byte-identical output.  Exit status is 0 only when every check or
computation succeeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import serialize
from .approximate import MODE_SMALL_N, MODE_STRICT, SAInstance, sa_approximate
from .enumeration import DEFAULT_BUDGET, enum_closest, enum_shortest, enum_successive
from .errors import LatticeError
from .instances import GeneralInstance, random_instance
from .linalg import NormKind, bareiss_det
from .oracles import ORACLE_MODES
from .reductions import reduce_cvp, reduce_sivp, reduce_svp
from .verify import (
    check_bitlength,
    check_covolume,
    check_entry_inflation,
    check_gap_preserved,
    check_minkowski,
    check_opnorm_sandwich,
    perturbation_stats,
    sa_ball_candidates,
)
from .numtheory import coprime_gap_experiment
from .linalg import Vector, centered_frac
from fractions import Fraction as _F


def _parse_gamma(text: str) -> tuple[int, int]:
    f = serialize.parse_rat(text)
    return f.numerator, f.denominator


def _parse_mode(text: str) -> str:
    return {"strict": MODE_STRICT, "small-n": MODE_SMALL_N, "small_n": MODE_SMALL_N}[text]


def _add_instance_args(p: argparse.ArgumentParser, with_target_flag: bool = True):
    p.add_argument("--in", dest="in_path", help="instance JSON file")
    p.add_argument("--n", type=int, help="dimension (when generating)")
    p.add_argument("--k", type=int, help="entry magnitude bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", default="1/1", help="approximation factor a/b")
    p.add_argument("--norm", default="l2", choices=["l1", "l2", "linf"])
    if with_target_flag:
        p.add_argument("--with-target", action="store_true", help="generate a rational target")


def _load_instance(args, need_target: bool = False) -> GeneralInstance:
    if args.in_path:
        import json

        with open(args.in_path) as fh:
            inst = GeneralInstance.from_dict(json.load(fh))
    else:
        if args.n is None or args.k is None:
            raise LatticeError("either --in or both --n and --k are required")
        with_target = need_target or getattr(args, "with_target", False)
        inst = random_instance(
            args.n,
            args.k,
            args.seed,
            gamma=_parse_gamma(args.gamma),
            norm=NormKind.from_str(args.norm),
            with_target=with_target,
        )
    if need_target and inst.target is None:
        raise LatticeError("this subcommand needs an instance with a target")
    return inst


def _config_echo(args, subcommand: str) -> dict:
    skip = {"func", "in_path", "out"}
    cfg = {"subcommand": subcommand}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None or callable(value):
            continue
        cfg[key] = value
    if getattr(args, "in_path", None):
        cfg["in"] = args.in_path
    return cfg


def _emit(args, payload: dict | list) -> None:
    if isinstance(payload, list):
        text = serialize.dump_jsonl(payload)
    else:
        text = serialize.dumps(payload)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    inst = _load_instance(args)
    _emit(args, inst.to_dict())
    return 0


def _cmd_approx(args) -> int:
    inst = _load_instance(args)
    sa = sa_approximate(inst, _parse_mode(args.mode), include_trace=not args.no_trace)
    payload = {
        "config": _config_echo(args, "approx"),
        "instance": inst.to_dict(),
        "sa": sa.to_dict(),
    }
    _emit(args, payload)
    return 0


def _cmd_reduce(args) -> int:
    inst = _load_instance(args, need_target=args.problem == "cvp")
    mode = _parse_mode(args.mode)
    kwargs = dict(mode=mode, oracle_mode=args.oracle, budget=args.budget)
    if args.problem == "svp":
        result = reduce_svp(inst, **kwargs)
    elif args.problem == "sivp":
        result = reduce_sivp(inst, **kwargs)
    else:
        result = reduce_cvp(inst, **kwargs)
    payload = result.to_dict(inst)
    payload["config"] = _config_echo(args, f"reduce {args.problem}")
    _emit(args, payload)
    return 0


def _cmd_oracle(args) -> int:
    inst = _load_instance(args, need_target=args.problem == "cvp")
    budget = args.budget
    if args.problem == "svp":
        r = enum_shortest(inst.m, inst.norm, budget)
        body = {
            "optimal": serialize.rat_str(r.value),
            "coeffs": [serialize.int_str(c) for c in r.coeffs],
            "vector": serialize.rat_vector_json(r.vector),
        }
    elif args.problem == "sivp":
        sm = enum_successive(inst.m, inst.norm, budget)
        body = {
            "minima": [serialize.rat_str(v) for v in sm.values],
            "witnesses": [serialize.rat_vector_json(w) for w in sm.witnesses],
        }
    else:
        r = enum_closest(inst.m, inst.target, inst.norm, budget)
        body = {
            "distance": serialize.rat_str(r.value),
            "coeffs": [serialize.int_str(c) for c in r.coeffs],
            "vector": serialize.rat_vector_json(r.vector),
        }
    payload = {"config": _config_echo(args, f"oracle {args.problem}"), "problem": args.problem}
    payload.update(body)
    _emit(args, payload)
    return 0


def _cmd_verify(args) -> int:
    import json

    with open(args.in_path) as fh:
        data = json.load(fh)
    inst = GeneralInstance.from_dict(data["instance"])
    sa = SAInstance.from_dict(data["sa"])
    reports = [
        check_entry_inflation(sa, inst),
        check_bitlength(sa, inst),
        check_opnorm_sandwich(inst, sa),
    ]
    q = sa.q
    p = Vector(int(_F(e) * q) for e in sa.x)
    reports.append(check_covolume(q, p, context={"source": "sa_basis"}))
    sv = enum_shortest(inst.m, inst.norm, args.budget)
    reports.append(check_minkowski(inst.m, sv.value, inst.norm))
    if inst.n <= args.gap_dimension_cap:
        from .oracles import OracleContext, sap_oracle

        ctx = OracleContext(norm=inst.norm, mode="exact", m=inst.m, sa=sa, budget=args.budget)
        ans = sap_oracle(inst.gamma_fraction, sa.x, ctx)
        y = centered_frac(sa.x.scale(ans.coefficients[0]))
        gdeg = 2 if inst.norm is NormKind.L2 else 1
        radius = ans.optimal * inst.gamma_fraction**gdeg
        candidates = sa_ball_candidates(inst, sa, radius)
        reports.append(check_gap_preserved(inst, sa, y, candidates))
    lines = [r.to_dict() for r in reports]
    for line in lines:
        line["config"] = _config_echo(args, "verify")
    _emit(args, lines)
    all_passed = all(r.passed for r in reports)
    print(
        f"verify: {sum(r.passed for r in reports)}/{len(reports)} checks passed",
        file=sys.stderr,
    )
    return 0 if all_passed else 1


def _cmd_stats(args) -> int:
    if args.experiment == "coprime-gap":
        hist = coprime_gap_experiment(args.samples, args.bit_size, args.seed)
    else:
        hist = perturbation_stats(args.runs, args.n, args.k, args.seed, _parse_mode(args.mode))
    payload = hist.to_dict()
    payload["config"] = _config_echo(args, f"stats {args.experiment}")
    _emit(args, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="salattice", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    _add_instance_args(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("approx", help="approximate the instance lattice")
    _add_instance_args(p)
    p.add_argument("--mode", default="strict", choices=["strict", "small-n", "small_n"])
    p.add_argument("--no-trace", action="store_true", help="drop the construction trace")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("reduce", help="run a reduction through an oracle")
    p.add_argument("problem", choices=["svp", "sivp", "cvp"])
    _add_instance_args(p)
    p.add_argument("--mode", default="strict", choices=["strict", "small-n", "small_n"])
    p.add_argument("--oracle", default="exact", choices=list(ORACLE_MODES))
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("oracle", help="reference enumeration directly on the instance")
    p.add_argument("problem", choices=["svp", "cvp", "sivp"])
    _add_instance_args(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="run the verification suite on an approx output")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--gap-dimension-cap", type=int, default=4,
                   help="run the gap-transport check only up to this dimension")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats", help="statistics experiments")
    p.add_argument("experiment", choices=["coprime-gap", "perturbation"])
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--bit-size", type=int, default=32)
    p.add_argument("--runs", type=int, default=300)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default="strict", choices=["strict", "small-n", "small_n"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
