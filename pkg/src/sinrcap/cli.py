"""Command-line interface: gen, solve, admit, oracle, compare, suite.

Every subcommand exits 0 only if its internal verifications pass.
"""

from __future__ import annotations

import argparse
import json
import sys

from .admission import admit_general, admit_large_opt
from .affectance import AffectanceContext, check_feasibility, schedule_weight
from .formulations import (build_capacity_lp, build_qos_lp, build_weighted_lp)
from .greedy import (greedy_combined, greedy_length_classes,
                     greedy_weight_classes)
from .harness import (DEFAULT_SWEEP, GenConfig, generate_instance, run_compare,
                      run_oracle_suite)
from .model import parse_power, read_instance, write_instance
from .oracle import exact_admission, exact_capacity
from .rounding import RoundingPolicy, run_pipeline


def _add_common(p, default_power="uniform"):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--power", default=default_power,
                   help="uniform[:P0] | linear | mean | exp:tau")
    p.add_argument("--sweep", default=None,
                   help="comma-separated constants (default 0.2..3.0 step 0.2)")
    p.add_argument("--out", default=None)


def _sweep(args):
    if args.sweep is None:
        return list(DEFAULT_SWEEP)
    values = [float(x) for x in args.sweep.split(",") if x.strip()]
    if not values:
        raise SystemExit("empty --sweep")
    return values


def _parse_args(argv):
    ap = argparse.ArgumentParser(prog="sinrcap")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random instance file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--side", type=float, required=True, help="square side R")
    g.add_argument("--delta", type=float, required=True, help="max link length")
    g.add_argument("--weights", default="ordinary",
                   choices=("ordinary", "reversed", "length_determined", "weight_class"))
    g.add_argument("--alpha", type=float, default=2.5)
    g.add_argument("--beta", type=float, default=1.0)
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--primaries", type=int, default=0)
    g.add_argument("--primary-power", type=float, default=1.0)
    _add_common(g)

    s = sub.add_parser("solve", help="run one algorithm on an instance file")
    s.add_argument("instance")
    s.add_argument("--algo", required=True,
                   choices=("lp", "greedy", "greedy_w", "greedy_l"))
    s.add_argument("--formulation", default="capacity",
                   choices=("capacity", "qos", "weighted"))
    _add_common(s)

    a = sub.add_parser("admit", help="admission control on an instance with primaries")
    a.add_argument("instance")
    a.add_argument("--method", default="general", choices=("general", "large"))
    _add_common(a)

    o = sub.add_parser("oracle", help="exhaustive optimum on a small instance")
    o.add_argument("instance")
    o.add_argument("--objective", default="cardinality", choices=("cardinality", "weight"))
    o.add_argument("--mode", default="exact", choices=("exact", "affectance"))
    o.add_argument("--admission", action="store_true",
                   help="admission optimum (requires primaries)")
    _add_common(o)

    c = sub.add_parser("compare", help="sweep-and-compare experiment, CSV output")
    c.add_argument("--n", type=int, default=100)
    c.add_argument("--deltas", default="2,8,32")
    c.add_argument("--sides", default="8,32,128")
    c.add_argument("--weights", default="ordinary",
                   choices=("ordinary", "reversed", "length_determined", "weight_class"))
    c.add_argument("--timing", action="store_true",
                   help="record wall times (breaks byte determinism)")
    _add_common(c, default_power="linear")  # the weighted guarantee's setting

    u = sub.add_parser("suite", help="small-instance property checks")
    u.add_argument("--count", type=int, default=10)
    u.add_argument("--n", type=int, default=8)
    _add_common(u)

    return ap.parse_args(argv)


def _emit(payload, out):
    text = json.dumps(payload, indent=2, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _verify(ctx, ids) -> bool:
    ok = check_feasibility(ctx, ids, 1.0, "feasible")
    if ctx.instance.beta >= 1.0:
        ok = ok and check_feasibility(ctx, ids, mode="exact_sinr")
    return ok


def _cmd_gen(args) -> int:
    cfg = GenConfig(n=args.n, R=args.side, delta=args.delta, weight_dist=args.weights,
                    alpha=args.alpha, beta=args.beta, noise=args.noise, seed=args.seed,
                    primaries=args.primaries, primary_power=args.primary_power)
    inst = generate_instance(cfg)
    if not args.out:
        raise SystemExit("gen requires --out")
    write_instance(inst, args.out)
    print(f"wrote {args.out} ({inst.n} links"
          + (f", {len(inst.primaries)} primaries" if inst.primaries else "") + ")")
    return 0


def _cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    ctx = AffectanceContext(inst, parse_power(args.power))
    sweep = _sweep(args)
    builders = {"capacity": build_capacity_lp, "qos": build_qos_lp,
                "weighted": build_weighted_lp}
    best = None
    for c in sweep:
        if args.algo == "lp":
            policy = RoundingPolicy(mode="weighted" if args.formulation == "weighted"
                                    else args.formulation,
                                    C=c, trials=args.trials, seed=args.seed)
            sched = run_pipeline(ctx, builders[args.formulation](ctx, c), policy)
        elif args.algo == "greedy":
            sched = greedy_combined(ctx, c)
        elif args.algo == "greedy_w":
            sched = greedy_weight_classes(ctx, c)
        else:
            sched = greedy_length_classes(ctx, c)
        value = schedule_weight(ctx, sched) if args.formulation == "weighted" \
            else float(sched.size)
        if best is None or value > best["value"]:
            best = {"constant": c, "value": value, "ids": list(sched.ids),
                    "exact_sinr_ok": sched.exact_sinr_ok}
    ok = _verify(ctx, best["ids"])
    best["verified"] = ok
    _emit(best, args.out)
    return 0 if ok else 1


def _cmd_admit(args) -> int:
    inst = read_instance(args.instance)
    if inst.primaries is None:
        raise SystemExit("admit requires an instance with primaries")
    ctx = AffectanceContext(inst, parse_power(args.power), primaries=inst.primaries)
    sweep = _sweep(args)
    mode = "admission_general" if args.method == "general" else "admission_large"
    best = None
    for c in sweep:
        policy = RoundingPolicy(mode=mode, C=c, trials=args.trials, seed=args.seed)
        res = admit_general(ctx, policy) if args.method == "general" \
            else admit_large_opt(ctx, policy)
        if best is None or res.admitted.size > best["value"]:
            best = {"constant": c, "value": res.admitted.size,
                    "ids": list(res.admitted.ids),
                    "groups": [list(g) for g in res.groups],
                    "per_primary_load": list(res.per_primary_load),
                    "verified": res.verified, "notes": res.notes}
    _emit(best, args.out)
    return 0 if best["verified"] else 1


def _cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    power = parse_power(args.power)
    if args.admission:
        if inst.primaries is None:
            raise SystemExit("admission oracle requires primaries")
        ctx = AffectanceContext(inst, power, primaries=inst.primaries)
        sched = exact_admission(ctx)
    else:
        ctx = AffectanceContext(inst, power)
        mode = "exact_sinr" if args.mode == "exact" else "affectance"
        sched = exact_capacity(ctx, args.objective, mode)
    payload = {"ids": list(sched.ids), "size": sched.size,
               "weight": schedule_weight(ctx, sched),
               "exact_sinr_ok": sched.exact_sinr_ok}
    _emit(payload, args.out)
    return 0


def _cmd_compare(args) -> int:
    deltas = [float(x) for x in args.deltas.split(",") if x.strip()]
    sides = [float(x) for x in args.sides.split(",") if x.strip()]
    configs = [
        GenConfig(n=args.n, R=r, delta=d, weight_dist=args.weights,
                  seed=args.seed + i)
        for i, (d, r) in enumerate((d, r) for d in deltas for r in sides)
    ]
    if not args.out:
        raise SystemExit("compare requires --out")
    records = run_compare(configs, _sweep(args), args.trials, args.out,
                          power=parse_power(args.power), timing=args.timing)
    ratios = [r.ratio for r in records if r.algo == "ratio"]
    print(f"wrote {args.out}: {len(records)} rows, "
          f"LP/greedy ratios {['%.3f' % r for r in ratios]}")
    return 0


def _cmd_suite(args) -> int:
    configs = [GenConfig(n=args.n, R=4.0 + 2.0 * (i % 3), delta=4.0,
                         seed=args.seed + i) for i in range(args.count)]
    report = run_oracle_suite(configs, trials=args.trials)
    for row in report["rows"]:
        flags = "".join("+" if v else "-" for v in row["verdicts"].values())
        print(f"seed={row['seed']} n={row['n']} ALG={row['ALG']} OPT={row['OPT']} "
              f"LP*={row['LP*']:.3f} W2={row['W2']} [{flags}]")
    print("all checks passed" if report["all_ok"] else "CHECK FAILURES")
    return 0 if report["all_ok"] else 1


def main(argv=None) -> int:
    args = _parse_args(sys.argv[1:] if argv is None else argv)
    handlers = {"gen": _cmd_gen, "solve": _cmd_solve, "admit": _cmd_admit,
                "oracle": _cmd_oracle, "compare": _cmd_compare, "suite": _cmd_suite}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
