"""Command line front end: ``slashgraph build|iso|spec|w1|bound|selftest``.

Exit codes: 0 success or certified, 1 certification failed (the report
names a witness), 2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import io as sgio
from . import selftest
from .bounds import diamond_bound
from .config import DEFAULT_CAPS, Caps
from .errors import ResourceCapError, SlashGraphError
from .graph import collapsing_map, collapsing_map_diamond
from .isoperimetry import as_delta, certify_power, iso_dimension
from .spectral import base_function_diamond, build_spectral_family, find_base_function, profile_report
from .transport import w1_beckmann, w1_coupling, w1_tree

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class UsageError(SlashGraphError, ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _delta(text: str | None, nu, d):
    if text is None:
        return iso_dimension(nu, d)
    return as_delta(_rational(text))


def _diamond_params(spec: str) -> tuple[int, int] | None:
    kind, _, args = spec.partition(":")
    if kind.strip() != "diamond":
        return None
    k, m = (int(x) for x in args.split(","))
    return k, m


def _emit(payload: dict, args) -> None:
    text = sgio.csv_row(payload) if args.format == "csv" else sgio.dumps(payload)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _header(args, **extra) -> dict:
    out = {"command": args.command, "seed": args.seed}
    if hasattr(args, "spec"):
        out.update(spec=args.spec, power=args.power, measure=args.measure)
    out.update(extra)
    return out


# ------------------------------------------------------------ subcommands


def cmd_build(args, caps: Caps) -> int:
    _, power, nu, d = sgio.build_from_spec(args.spec, args.power, args.measure, caps)
    if args.export == "dot":
        text = sgio.graph_to_dot(power, name=f"{args.spec} ^ {args.power}")
    else:
        text = sgio.dumps(sgio.graph_to_json(power, nu, d))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_iso(args, caps: Caps) -> int:
    g, _, nu, d = sgio.build_from_spec(args.spec, 1, args.measure, caps)
    delta = _delta(args.delta, nu, d)
    alpha = None if args.alpha is None else _rational(args.alpha)
    cert = certify_power(g, delta, nu, d, levels=(args.power,), caps=caps, mode=args.mode, alpha=alpha)
    rep = cert.reports[args.power]
    cond = cert.conditions
    payload = _header(
        args,
        delta=rep.delta,
        iso_dimension=cert.dimension,
        mode=rep.mode,
        alpha=rep.alpha,
        min_ratio=rep.min_ratio,
        level_constant=rep.constant,
        minimiser=rep.witness,
        minimiser_perimeter=rep.witness_perimeter,
        minimiser_measure=rep.witness_measure,
        minimiser_comeasure=rep.witness_comeasure,
        rho=cond.rho,
        p=cond.p,
        c=cond.c,
        certified=cert.certified,
        certified_constant=cert.constant if cert.certified else None,
        reason=cert.reason,
        witness=cert.witness,
    )
    _emit(payload, args)
    return EXIT_OK if cert.certified else EXIT_FAILED


def _spectral_inputs(spec: str, g):
    params = _diamond_params(spec)
    if params is not None:
        return collapsing_map_diamond(*params), base_function_diamond(*params)
    pi = collapsing_map(g)
    return pi, find_base_function(g, pi)


def cmd_spec(args, caps: Caps) -> int:
    g, _, nu, d = sgio.build_from_spec(args.spec, 1, args.measure, caps)
    pi, phi = _spectral_inputs(args.spec, g)
    fam = build_spectral_family(g, pi, phi, args.power, f2_size=args.f2_size, caps=caps)
    delta = float(_delta(args.delta, nu, d))
    beta = float(_rational(args.beta)) if args.beta is not None else float(fam.k**args.power)
    rep = profile_report(fam, delta, beta)
    payload = _header(
        args,
        base_function=list(phi.values),
        f2_sizes=list(fam.f2_sizes),
        n_vertices=fam.graph.n_vertices,
        **{f: getattr(rep, f) for f in rep.__dataclass_fields__ if f not in ("growth", "growth_strict")},
        growth=[[s, c] for s, c in rep.growth],
    )
    _emit(payload, args)
    return EXIT_OK if rep.certified else EXIT_FAILED


def cmd_w1(args, caps: Caps) -> int:
    inst = sgio.load_instance(args.instance, caps)
    methods = ["coupling", "flow", "tree"] if args.method == "all" else [args.method]
    values: dict[str, Fraction] = {}
    skipped: dict[str, str] = {}
    for method in methods:
        if method == "coupling":
            values[method] = w1_coupling(inst).value
            continue
        if inst.graph is None:
            if args.method != "all":
                raise UsageError(f"method {method} needs a graph-based instance")
            skipped[method] = "instance has no graph"
            continue
        if method == "flow":
            values[method] = w1_beckmann(inst.graph, inst.lengths, inst.mu, inst.nu).value
        elif inst.graph.n_edges == inst.graph.n_vertices - 1 or args.method != "all":
            values[method] = w1_tree(inst.graph, inst.lengths, inst.mu, inst.nu)
        else:
            skipped[method] = "graph is not a tree"
    agree = len(set(values.values())) <= 1
    payload = {"command": "w1", "instance": str(args.instance), "values": values, "skipped": skipped, "agree": agree}
    _emit(payload, args)
    return EXIT_OK if agree else EXIT_FAILED


def cmd_bound(args, caps: Caps) -> int:
    params = _diamond_params(args.spec)
    if params is None:
        raise UsageError("bound is defined for diamond:k,m graphs")
    rep = diamond_bound(*params, args.power, constants=args.constants, caps=caps)
    payload = _header(args, **rep.as_dict())
    if args.format == "csv":
        payload.update({f"input_{k}": v for k, v in payload.pop("inputs").items()})
    _emit(payload, args)
    return EXIT_OK


# ------------------------------------------------------------ selftest


def _check(name: str, seed: int) -> tuple[str, bool, str]:
    try:
        ok, detail = selftest.CHECKS[name](seed)
    except SlashGraphError as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return name, ok, detail


def cmd_selftest(args, caps: Caps) -> int:
    names = list(selftest.CHECKS)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check, names, [args.seed] * len(names)))
    else:
        results = [_check(name, args.seed) for name in names]
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAILED


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slashgraph", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file overriding resource caps")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes (selftest only)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("spec", help='graph spec: "path:k", "diamond:k,m" or "laakso"')
    graph.add_argument("--power", "-n", type=int, default=1)
    graph.add_argument("--measure", choices=("uniform", "weighted"), default="uniform")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("build", parents=[common, graph], help="build a slash power and export it")
    p.add_argument("--export", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("iso", parents=[common, graph], help="certify isoperimetric dimension")
    p.add_argument("--delta", help="dimension, e.g. 2 or 3/2 (default: computed)")
    p.add_argument("--mode", choices=("auto", "exhaustive", "connected", "power"), default="auto")
    p.add_argument("--alpha", help="constant head share of each edge mass (default 1/2)")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("spec", parents=[common, graph], help="build and profile the spectral family")
    p.add_argument("--delta", help="dimension (default: computed)")
    p.add_argument("--beta", help="bandwidth (default: k**power)")
    p.add_argument("--f2-size", choices=("half", "full"), default="half")
    p.set_defaults(func=cmd_spec)

    p = sub.add_parser("w1", parents=[common], help="exact 1-Wasserstein distance of an instance file")
    p.add_argument("instance")
    p.add_argument("--method", choices=("coupling", "flow", "tree", "all"), default="all")
    p.set_defaults(func=cmd_w1)

    p = sub.add_parser("bound", parents=[common, graph], help="distortion lower bound for a diamond power")
    p.add_argument("--constants", choices=("paper", "certified"), default="paper")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("selftest", parents=[common], help="quick end-to-end checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        caps = Caps.from_file(args.config) if args.config else DEFAULT_CAPS
        return args.func(args, caps)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SlashGraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
