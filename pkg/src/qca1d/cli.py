"""Command-line front end.

Exit codes: 0 success (or unitary verdict), 1 not-unitary verdict, 2 usage
or rule-file error (including an empty deterministic sector), 3 resource
cap exceeded.  The environment variable QCA_CYCLE_CAP overrides the cycle
enumeration cap.  Identical inputs and --seed produce identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .families import FAMILY_SCHEMAS, ParameterError, family_names, make_family
from .graphs import (
    CycleCapExceeded,
    deterministic_sector,
    format_weight,
    pair_graph,
    rule_graph,
    sector_subgraph,
    to_dot,
)
from .oracle import (
    DEFAULT_MAX_DIM,
    DimensionCapExceeded,
    basis_state,
    defect_estimate,
    evolve,
    global_matrix,
    unitarity_defect,
)
from .rules import DEFAULT_TOLERANCE, RuleFormatError, RuleTable, config_str, dump_rule, index_config, load_rule
from .transfer import path_monomials, transfer_matrix, z_polynomial
from .unitarity import (
    INFINITE_CONDITIONS,
    PERIODIC_CONDITIONS,
    check_infinite,
    check_periodic,
    witness_str,
)


def _load(args) -> RuleTable:
    rule = load_rule(args.rulefile)
    if args.tolerance is not None:
        rule = rule.with_tolerance(args.tolerance)
    return rule


def _cmd_verify(args) -> int:
    rule = _load(args)
    if args.mode == "periodic":
        verdict = check_periodic(rule)
        conditions = PERIODIC_CONDITIONS
    else:
        verdict = check_infinite(rule)
        conditions = INFINITE_CONDITIONS
    if args.json:
        print(json.dumps(verdict.to_json()))
    else:
        print(f"mode: {verdict.mode}")
        by_condition = {}
        for r in verdict.reports:
            by_condition.setdefault(r.condition, []).append(r)
        for cond in conditions:
            reports = by_condition.get(cond, [])
            if not reports:
                print(f"{cond}: ok")
                continue
            print(f"{cond}: VIOLATED ({len(reports)} reported)")
            for r in reports:
                print(f"  value={format_weight(r.value, 12)} margin={r.margin:.6e} "
                      f"witness: {witness_str(r.witness)}")
        print("verdict: unitary" if verdict.unitary else "verdict: NOT unitary")
    return 0 if verdict.unitary else 1


def _cmd_oracle(args) -> int:
    rule = _load(args)
    dim = rule.q**args.sites
    rng = np.random.default_rng(args.seed)
    exact = dim <= DEFAULT_MAX_DIM
    if exact:
        defect = unitarity_defect(global_matrix(rule, args.sites))
    else:
        defect = defect_estimate(rule, args.sites, samples=args.samples, rng=rng)
    if args.defect_only:
        print(repr(defect))
        return 0
    if args.json:
        print(json.dumps({"sites": args.sites, "dimension": dim,
                          "defect": defect, "exact": exact}))
        return 0
    kind = "exact" if exact else f"estimated on {args.samples} random vectors"
    print(f"sites: {args.sites} (dimension {dim})")
    print(f"unitarity defect: {defect:.6e} ({kind})")
    print(f"within tolerance {rule.tolerance:g}: {'yes' if defect <= rule.tolerance else 'no'}")
    print("note: finite lattices sample the periodic family; agreement here is "
          "evidence for, not proof of, unitarity at every size")
    return 0


def _parse_initial(value: str, q: int, n_sites: int) -> np.ndarray:
    if len(value) == n_sites and all(c.isdigit() and int(c) < q for c in value):
        return basis_state(q, n_sites, value)
    try:
        with open(value, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise RuleFormatError(
            f"--initial {value!r} is neither a length-{n_sites} config string nor a "
            f"readable state file: {exc}")
    if not isinstance(data, list) or len(data) != q**n_sites:
        raise RuleFormatError(f"state file must hold {q**n_sites} [re, im] pairs")
    return np.array([complex(p[0], p[1]) for p in data])


def _cmd_simulate(args) -> int:
    rule = _load(args)
    state = _parse_initial(args.initial, rule.q, args.sites)
    print(f"sites: {args.sites}, steps: {args.steps}")
    for step in range(args.steps + 1):
        if step:
            state = evolve(rule, args.sites, state, 1)
        norm = float(np.linalg.norm(state))
        probs = np.abs(state) ** 2
        order = np.argsort(-probs, kind="stable")[: args.top]
        tops = " ".join(
            f"{config_str(index_config(int(i), rule.q, args.sites))}:{probs[i]:.6f}"
            for i in order if probs[i] > 0)
        print(f"step {step:4d}  norm={norm:.12f}  top: {tops}")
    return 0


def _parse_param(text: str):
    key, _, raw = text.partition("=")
    if not _:
        raise ParameterError(f"--param expects key=value, got {text!r}")
    for cast in (int, float, complex):
        try:
            return key, cast(raw)
        except ValueError:
            continue
    return key, raw


def _cmd_family(args) -> int:
    if args.list:
        for name in family_names():
            schema = FAMILY_SCHEMAS[name]
            print(f"{name}: {schema['doc']}")
            for pname, desc in schema["params"].items():
                print(f"  {pname}" + (f" ({desc})" if desc else ""))
        return 0
    if not args.name:
        raise ParameterError("family name required (or use --list)")
    params = dict(_parse_param(p) for p in args.param or [])
    rule = make_family(args.name, params,
                       tolerance=args.tolerance if args.tolerance else DEFAULT_TOLERANCE)
    print(dump_rule(rule))
    return 0


def _cmd_graph(args) -> int:
    rule = _load(args)
    if args.which in ("g1", "g2"):
        graph = rule_graph(rule) if args.which == "g1" else pair_graph(rule)
    else:
        sector = deterministic_sector(rule)
        base = rule_graph(rule) if args.which == "d1" else pair_graph(rule)
        graph = sector_subgraph(base, sector)
    print(to_dot(graph, name=args.which))
    return 0


def _cmd_paths(args) -> int:
    rule = _load(args)
    for length in range(1, args.max_len + 1):
        monomials = path_monomials(rule, length)
        print(f"n = {length}: {len(monomials)} monomials")
        for m in monomials:
            print(f"  {m}")
    return 0


def _cmd_zpoly(args) -> int:
    rule = _load(args)
    graph = rule_graph(rule) if args.which == "g1" else pair_graph(rule)
    coeffs = z_polynomial(transfer_matrix(graph, args.convention))
    for power, c in enumerate(coeffs):
        print(f"t^{power}: {format_weight(c, 12)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help="override the rule file's comparison tolerance")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for any randomized sampling")
    common.add_argument("--json", action="store_true",
                        help="machine-readable output where supported")

    parser = argparse.ArgumentParser(
        prog="qca1d",
        description="decide unitarity of one-dimensional quantum cellular automata")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="decide unitarity from the rule table")
    p.add_argument("rulefile", help="rule JSON file, or - for standard input")
    p.add_argument("--mode", choices=("periodic", "infinite"), required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", parents=[common],
                       help="brute-force unitarity defect of the global matrix")
    p.add_argument("rulefile")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--defect-only", action="store_true")
    p.add_argument("--samples", type=int, default=8,
                   help="random vectors for the matrix-free estimate")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("simulate", parents=[common],
                       help="evolve a configuration-space vector")
    p.add_argument("rulefile")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--initial", required=True,
                   help="config string (length = sites) or JSON state file")
    p.add_argument("--top", type=int, default=8, help="probabilities printed per step")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("family", parents=[common], help="emit a family rule file")
    p.add_argument("name", nargs="?", help="family name (see --list)")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--list", action="store_true", help="list families and parameters")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("graph", parents=[common], help="DOT export of an analysis graph")
    p.add_argument("rulefile")
    p.add_argument("--which", choices=("g1", "g2", "d1", "d2"), default="g1")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("paths", parents=[common],
                       help="mismatch-path weight monomials up to a length")
    p.add_argument("rulefile")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=_cmd_paths)

    p = sub.add_parser("zpoly", parents=[common],
                       help="generating polynomial det(I - tA) of a transfer matrix")
    p.add_argument("rulefile")
    p.add_argument("--which", choices=("g1", "g2"), default="g1")
    p.add_argument("--convention", choices=("raw", "simplified"), default="raw")
    p.set_defaults(func=_cmd_zpoly)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CycleCapExceeded, DimensionCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FileNotFoundError) as exc:
        # covers rule-format, parameter and empty-sector errors
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
