"""Command-line interface: ``patient-pricing <subcommand> ...``."""
from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .buyer import best_response_thresholds, expected_utility
from .learning import LearnMode, benchmark, learning_gaps, _summarize, shattering_witness
from .market import (
    BuyerType,
    MarketError,
    d1,
    d2,
    d2_handcrafted_mixed,
    format_rational,
    parse_distribution,
    parse_strategy,
    serialize_mixed,
    serialize_pure,
    to_rational,
)
from .mixed_planner import GuardExceeded, plan_mixed, DEFAULT_MAX_VALUES, DEFAULT_MAX_W
from .online import regret_summary, run_online
from .oracle import BudgetExceeded, brute_force_buyer, brute_force_mixed, brute_force_pure
from .pure_planner import plan_pure, price_grid
from .revenue import best_fixed_price, revenue_against_type, revenue_mixed

EXIT_OK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2

fr = format_rational


class UsageError(MarketError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- helpers -----------------------------------------------------------------


def _g(x: float) -> str:
    return f"{x:.12g}"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temp file in the same directory."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_dist(path: str):
    try:
        return parse_distribution(_read(path))
    except MarketError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _rationals(text: str) -> list[Fraction]:
    parts = [t.strip() for t in text.split(",") if t.strip()]
    if not parts:
        raise UsageError("expected a comma-separated list of rationals")
    return [to_rational(t) for t in parts]


def _ints(text: str) -> list[int]:
    """'1..50' or '1,2,8'."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None


def _buyer(text: str) -> BuyerType:
    try:
        v, w = text.split(",")
        return BuyerType(to_rational(v.strip()), int(w))
    except ValueError as exc:
        raise UsageError(f"buyer type must look like 'v,w': {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _alphabet_or_grid(args) -> list[Fraction]:
    if args.alphabet and args.epsilon:
        raise UsageError("give either --alphabet or --epsilon, not both")
    if args.alphabet:
        return _rationals(args.alphabet)
    if args.epsilon:
        return price_grid(args.epsilon)
    raise UsageError("one of --alphabet or --epsilon is required")


# -- subcommands ---------------------------------------------------------------


def cmd_plan_pure(args) -> int:
    dist = _load_dist(args.dist)
    prices = price_grid(args.epsilon) if args.epsilon else None
    plan = plan_pure(dist, prices)
    print(f"revenue {fr(plan.revenue)}")
    print(f"pricing {plan.pricing!r}")
    if args.out:
        write_atomic(args.out, serialize_pure(plan.pricing))
    return EXIT_OK


def cmd_plan_mixed(args) -> int:
    dist = _load_dist(args.dist)
    plan = plan_mixed(dist, _alphabet_or_grid(args), max_w=args.max_w_guard, max_values=args.max_values_guard)
    print(f"revenue {fr(plan.revenue)}")
    for pricing, q in plan.strategy.support:
        print(f"  {fr(q)}  {pricing!r}")
    if args.out:
        write_atomic(args.out, serialize_mixed(plan.strategy))
    return EXIT_OK


def cmd_best_response(args) -> int:
    try:
        P = parse_strategy(_read(args.strategy))
    except MarketError as exc:
        raise UsageError(f"{args.strategy}: {exc}") from None
    z = _buyer(args.type)
    policy = best_response_thresholds(P, z)
    print(f"buyer {z!r}")
    print(f"expected_utility {fr(expected_utility(P, z))}")
    print(f"expected_revenue {fr(revenue_against_type(P, z))}")
    print("history,threshold")
    for h in sorted(policy.thresholds, key=lambda h: (len(h), h)):
        if len(h) <= z.patience:
            print(f"\"{' '.join(fr(p) for p in h)}\",{fr(policy.thresholds[h])}")
    return EXIT_OK


def _mode(args) -> LearnMode:
    if args.mode == "pure-grid":
        if args.k is None:
            raise UsageError("--mode pure-grid needs --k")
        return LearnMode("pure-grid", k=args.k)
    if args.mode == "mixed":
        if not args.alphabet:
            raise UsageError("--mode mixed needs --alphabet")
        return LearnMode("mixed", alphabet=tuple(_rationals(args.alphabet)))
    return LearnMode(args.mode)


def cmd_learn(args) -> int:
    dist = _load_dist(args.dist)
    mode = _mode(args).validate()
    m_values = _ints(args.m)
    gaps = learning_gaps(dist, mode, m_values, args.trials, args.seed)
    buf = io.StringIO()
    buf.write("m,trial,gap\n")
    for (m, t), g in gaps.items():
        buf.write(f"{m},{t},{fr(g)}\n")
    summary = io.StringIO()
    summary.write(f"# mode={mode.kind} benchmark={fr(benchmark(dist, mode))} seed={args.seed}")
    if mode.kind == "mixed":
        summary.write(" (benchmark: planner optimum over the same alphabet)")
    summary.write("\nm,mean_gap,std_error,trials\n")
    for m in m_values:
        pt = _summarize(m, [gaps[(m, t)] for t in range(args.trials)])
        summary.write(f"{m},{_g(float(pt.mean_error))},{_g(pt.std_error)},{pt.trials}\n")
    if args.out:
        write_atomic(args.out, buf.getvalue())
        sys.stdout.write(summary.getvalue())
    else:
        sys.stdout.write(buf.getvalue() + "\n" + summary.getvalue())
    return EXIT_OK


def cmd_online(args) -> int:
    dist = _load_dist(args.dist)
    mode = _mode(args).validate()
    if mode.kind == "pure-grid":
        raise UsageError("online supports --mode pure or mixed")
    traces = [run_online(dist, args.T, mode, seed) for seed in _ints(args.seeds)]
    buf = io.StringIO()
    buf.write("seed,t,instant_regret,cum_regret\n")
    for tr in traces:
        for t, (inst, cum) in enumerate(zip(tr.instant, tr.cumulative), start=1):
            buf.write(f"{tr.seed},{t},{fr(inst)},{fr(cum)}\n")
    summ = regret_summary(traces)
    sbuf = io.StringIO()
    sbuf.write(f"# mode={mode.kind} T={args.T} seeds={len(traces)} benchmark={fr(traces[0].benchmark)} "
               f"slope={summ.slope_label}\n")
    sbuf.write("T,mean_cum_regret,std_cum_regret\n")
    for t, mean, std in summ.checkpoints:
        sbuf.write(f"{t},{_g(mean)},{_g(std)}\n")
    _emit(buf.getvalue(), args.out)
    if args.summary_out:
        write_atomic(args.summary_out, sbuf.getvalue())
    if args.out or not args.summary_out:
        sys.stdout.write(("\n" if not args.out else "") + sbuf.getvalue())
    return EXIT_OK


def cmd_shatter(args) -> int:
    inst = shattering_witness(args.w, to_rational(args.gamma), to_rational(args.alpha))
    print("points " + " ".join(repr(z) for z in inst.points))
    print("witness " + " ".join(fr(c) for c in inst.witness))
    print("sigma,pricing,revenues,ok")
    all_ok = True
    for sigma, p in sorted(inst.pricing_for.items()):
        revs = [revenue_against_type(p, z) for z in inst.points]
        ok = all(
            (r >= c + inst.gamma) if s == 1 else (r <= c - inst.gamma)
            for s, r, c in zip(sigma, revs, inst.witness)
        )
        all_ok &= ok
        sig = "".join("+" if s == 1 else "-" for s in sigma)
        print(f"{sig},\"{p!r}\",\"{' '.join(fr(r) for r in revs)}\",{'yes' if ok else 'no'}")
    print(f"shattered {'yes' if all_ok else 'no'}")
    return EXIT_OK if all_ok else EXIT_INPUT


def cmd_oracle(args) -> int:
    if args.kind == "buyer":
        if not args.strategy or not args.type:
            raise UsageError("oracle buyer needs --strategy and --type")
        try:
            P = parse_strategy(_read(args.strategy))
        except MarketError as exc:
            raise UsageError(f"{args.strategy}: {exc}") from None
        z = _buyer(args.type)
        print(f"brute_force_utility {fr(brute_force_buyer(P, z))}")
        print(f"threshold_utility {fr(expected_utility(P, z))}")
        return EXIT_OK
    if not args.dist:
        raise UsageError(f"oracle {args.kind} needs --dist")
    dist = _load_dist(args.dist)
    if args.kind == "pure":
        res = brute_force_pure(dist)
        print(f"revenue {fr(res.revenue)}")
        print(f"pricing {res.strategy!r}")
        print(f"planner {fr(plan_pure(dist).revenue)}")
    else:
        if not args.alphabet:
            raise UsageError("oracle mixed needs --alphabet")
        res = brute_force_mixed(dist, _rationals(args.alphabet), args.cap, args.grid)
        print(f"revenue {fr(res.revenue)}")
        for pricing, q in res.strategy.support:
            print(f"  {fr(q)}  {pricing!r}")
    return EXIT_OK


def cmd_separation_demo(args) -> int:
    a = d1()
    _, fixed = best_fixed_price(a)
    pure1 = plan_pure(a)
    print(f"D1: fixed {fr(fixed)} < pure {fr(pure1.revenue)}  (pure pricing {pure1.pricing!r})")
    b = d2()
    pure2 = plan_pure(b).revenue
    hand = revenue_mixed(d2_handcrafted_mixed(), b)
    planned = plan_mixed(b, [Fraction(1, 3), Fraction(2, 3), Fraction(1)]).revenue
    print(f"D2: pure {fr(pure2)} < mixed ≥ {fr(hand)}  (planner optimum on {{1/3,2/3,1}}: {fr(planned)})")
    return EXIT_OK


# -- wiring ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="patient-pricing", description="Optimal posted prices for patient buyers.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan-pure", help="optimal non-increasing pure pricing")
    p.add_argument("--dist", required=True)
    p.add_argument("--epsilon", help="restrict prices to the grid {0, eps, ..., 1}")
    p.add_argument("--out", help="write the pricing as JSON")
    p.set_defaults(func=cmd_plan_pure)

    p = sub.add_parser("plan-mixed", help="optimal mixed pricing over a price alphabet")
    p.add_argument("--dist", required=True)
    p.add_argument("--alphabet", help="comma-separated prices")
    p.add_argument("--epsilon", help="use the grid {0, eps, ..., 1} as alphabet")
    p.add_argument("--max-w-guard", type=int, default=DEFAULT_MAX_W)
    p.add_argument("--max-values-guard", type=int, default=DEFAULT_MAX_VALUES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_plan_mixed)

    p = sub.add_parser("best-response", help="buyer thresholds against a strategy file")
    p.add_argument("--strategy", required=True)
    p.add_argument("--type", required=True, help="buyer as 'v,w', e.g. '1,2'")
    p.set_defaults(func=cmd_best_response)

    for name, func in (("learn", cmd_learn), ("online", cmd_online)):
        p = sub.add_parser(name, help="learning curve" if name == "learn" else "online regret simulation")
        p.add_argument("--dist", required=True)
        p.add_argument("--mode", choices=["pure", "pure-grid", "mixed"] if name == "learn" else ["pure", "mixed"],
                       default="pure")
        p.add_argument("--k", type=int, help="grid resolution for pure-grid")
        p.add_argument("--alphabet", help="price alphabet for mixed mode")
        p.add_argument("--out", help="CSV output file (default: stdout)")
        if name == "learn":
            p.add_argument("--m", required=True, help="sample sizes, e.g. 10,100,1000")
            p.add_argument("--trials", type=int, default=50)
            p.add_argument("--seed", type=int, default=0)
        else:
            p.add_argument("--T", type=int, required=True)
            p.add_argument("--seeds", default="1..50", help="e.g. 1..50 or 1,2,3")
            p.add_argument("--summary-out", help="summary CSV file")
        p.set_defaults(func=func)

    p = sub.add_parser("shatter", help="verify the fat-shattering construction")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=cmd_shatter)

    p = sub.add_parser("oracle", help="brute-force oracles on small instances")
    p.add_argument("kind", choices=["pure", "mixed", "buyer"])
    p.add_argument("--dist")
    p.add_argument("--alphabet")
    p.add_argument("--cap", type=int, default=2)
    p.add_argument("--grid", type=int, default=6)
    p.add_argument("--strategy")
    p.add_argument("--type")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("separation-demo", help="fixed < pure < mixed on the two built-in examples")
    p.set_defaults(func=cmd_separation_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GuardExceeded, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except MarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
