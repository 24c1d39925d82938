"""Command-line front end.

Subcommands: certify, nodes, ek, example, chow.  Inputs are TOML files
(polynomials in the x0..x4 text grammar, node coordinates as "num/den"
strings); reports are canonical JSON.  Exit codes for certify: 0
Q-factorial, 10 not Q-factorial, 20 undetermined, 1 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .certify import (VERDICT_NOT, VERDICT_QFACT, DoubleQuadricInput,
                      NonNodalError, construct_example, defect)
from .chow import ChowError, run_golden_suite
from .domains import DomainError
from .groebner import (DEFAULT_MAX_PAIRS, GroebnerError,
                       NotZeroDimensionalError, ResourceLimitError)
from .parsing import ParseError, parse_form
from .position import ek_check
from .singular import (ProjectivePoint, SmoothQuadricError, count_nodes,
                       verify_node)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_QFACTORIAL = 10
EXIT_UNDETERMINED = 20


class InputError(ValueError):
    pass


def _load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"malformed TOML in {path}: {exc}") from exc


def _parse_nodes(raw) -> list:
    nodes = []
    for entry in raw:
        if len(entry) != 5:
            raise InputError(f"node {entry!r} does not have 5 coordinates")
        nodes.append(ProjectivePoint([str(c) for c in entry]))
    return nodes


def build_input(cfg: dict, seed_override=None) -> DoubleQuadricInput:
    nvars = cfg.get("nvars", 5)
    if nvars != 5:
        raise InputError(f"nvars must be 5, got {nvars}")
    seed = seed_override if seed_override is not None else cfg.get("seed", 0)
    nodes = _parse_nodes(cfg["nodes"]) if "nodes" in cfg else None
    try:
        Q = parse_form(cfg["Q"], 5)
        if all(k in cfg for k in ("f1", "f2", "f3")):
            f1 = parse_form(cfg["f1"], 5)
            f2 = parse_form(cfg["f2"], 5)
            f3 = parse_form(cfg["f3"], 5)
            inp = construct_example(f1, f2, f3, Q, nodes=nodes, seed=seed)
            if "W" in cfg and parse_form(cfg["W"], 5) != inp.W:
                raise InputError("explicit W disagrees with f2^2 + f1*f3")
            return inp
        if "W" not in cfg:
            raise InputError("input needs either W or the family forms f1, f2, f3")
        W = parse_form(cfg["W"], 5)
        return DoubleQuadricInput(Q=Q, W=W, nodes=nodes, seed=seed)
    except KeyError as exc:
        raise InputError(f"missing key {exc.args[0]!r} in the input file") from exc
    except (ParseError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _emit(payload: dict, out_path):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _common_kwargs(args, cfg):
    return {
        "domain": args.domain or cfg.get("domain", "q"),
        "prime": args.prime or cfg.get("prime"),
        "max_pairs": args.max_pairs or cfg.get("max_pairs", DEFAULT_MAX_PAIRS),
    }


def cmd_certify(args) -> int:
    cfg = _load_toml(args.input)
    inp = build_input(cfg, args.seed)
    kw = _common_kwargs(args, cfg)
    cert = defect(inp, symbolic=args.symbolic, domain=kw["domain"],
                  prime=kw["prime"], max_pairs=kw["max_pairs"])
    _emit(cert.to_json_dict(), args.out)
    if cert.verdict == VERDICT_QFACT:
        return EXIT_OK
    if cert.verdict == VERDICT_NOT:
        return EXIT_NOT_QFACTORIAL
    return EXIT_UNDETERMINED


def cmd_nodes(args) -> int:
    cfg = _load_toml(args.input)
    inp = build_input(cfg, args.seed)
    kw = _common_kwargs(args, cfg)
    domain = None
    if kw["domain"] == "fp":
        from .domains import GF, random_large_prime
        import random as _random
        domain = GF(kw["prime"]) if kw["prime"] else \
            GF(random_large_prime(_random.Random(inp.seed)))
    count = count_nodes(inp.Q, inp.W, locus=inp.node_locus, domain=domain,
                        seed=inp.seed, max_pairs=kw["max_pairs"])
    reports = None
    if inp.nodes:
        reports = [verify_node(inp.Q, inp.W, p).to_dict() for p in inp.nodes]
    _emit({"count": count.to_dict(), "node_reports": reports, "seed": inp.seed},
          args.out)
    return EXIT_OK


def cmd_ek(args) -> int:
    cfg = _load_toml(args.input)
    inp = build_input(cfg, args.seed)
    if not inp.nodes:
        raise InputError("the ek command needs a nodes list in the input file")
    report = ek_check(inp.nodes, exact_cubic=args.exact_cubic, seed=inp.seed)
    _emit({"position": report.to_dict(), "seed": inp.seed}, args.out)
    return EXIT_OK


def cmd_example(args) -> int:
    try:
        f1 = parse_form(args.f1, 5)
        f2 = parse_form(args.f2, 5)
        f3 = parse_form(args.f3, 5)
        Q = parse_form(args.q, 5)
        inp = construct_example(f1, f2, f3, Q, seed=args.seed or 0)
    except (ParseError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    lines = [
        "# split-family double quadric input",
        "nvars = 5",
        f"seed = {inp.seed}",
        f'Q = "{Q.to_string()}"',
        f'f1 = "{f1.to_string()}"',
        f'f2 = "{f2.to_string()}"',
        f'f3 = "{f3.to_string()}"',
        f'W = "{inp.W.to_string()}"',
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_chow(args) -> int:
    report = run_golden_suite(args.golden)
    _emit(report, args.out)
    return EXIT_OK if report["all_passed"] else EXIT_INPUT


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qfactor",
        description="Certify or refute Q-factoriality of nodal double covers "
                    "of a smooth quadric threefold branched over a quartic section.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--domain", choices=("q", "fp"), default=None,
                        help="coefficient domain for the Groebner machinery")
        sp.add_argument("--prime", type=int, default=None,
                        help="prime for the fp domain (> 2^31); random if omitted")
        sp.add_argument("--seed", type=int, default=None,
                        help="seed for all randomized choices (charts, primes)")
        sp.add_argument("--max-pairs", type=int, default=None,
                        help="Buchberger pair cap before failing loudly")
        sp.add_argument("--out", default=None, help="write the JSON report here")

    sp = sub.add_parser("certify", help="full Q-factoriality certificate")
    sp.add_argument("input", help="TOML input file")
    sp.add_argument("--symbolic", choices=("auto", "always", "never"),
                    default="auto", help="run the saturation rank path")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("nodes", help="count singular points and verify supplied nodes")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_nodes)

    sp = sub.add_parser("ek", help="position report for the node configuration")
    sp.add_argument("input")
    sp.add_argument("--exact-cubic", action="store_true",
                    help="confirm twisted-cubic suspicions with the Groebner check")
    common(sp)
    sp.set_defaults(func=cmd_ek)

    sp = sub.add_parser("example", help="write a split-family input file")
    sp.add_argument("--f1", required=True, help="linear form")
    sp.add_argument("--f2", required=True, help="quadratic form")
    sp.add_argument("--f3", required=True, help="cubic form")
    sp.add_argument("--q", required=True, help="smooth quadric")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_example)

    sp = sub.add_parser("chow", help="verify the shipped intersection-number identities")
    sp.add_argument("--golden", default=None, help="alternative golden file")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_chow)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, DomainError, SmoothQuadricError,
            NonNodalError, NotZeroDimensionalError, ChowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except GroebnerError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED


if __name__ == "__main__":
    sys.exit(main())
