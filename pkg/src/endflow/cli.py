"""Batch command-line front end.

Commands operate on JSON files (schemas in the serialize module) and
write JSON to stdout or ``--out``.  All numeric output is exact-rational
strings; given the same inputs and seed the output is byte-identical.

Exit codes: 0 success, 2 validation failure, 3 internal invariant
violation (the feasibility sentinel), 4 I/O trouble.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import serialize
from .charge import EndCharge, validate_charge
from .errors import EndflowError, InfeasibleTransferError
from .extmath import frac_str, parse_frac
from .measure import MeasureState, base_state
from .morphism import TreeMorphism, push_charge, push_measure, push_word
from .raystar import RayStar, charge_from_definition, realize_word
from .section import build_section, factorize, retract
from .transport import MoveWord, charge_of_word
from .tree import BalloonTree, validate_tree
from .verify import SUITES, run_all

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INVARIANT = 3
EXIT_IO = 4


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(doc, out_path):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


@dataclass
class Scenario:
    """Everything a command references, loaded and validated."""

    tree: Optional[BalloonTree] = None
    measure: Optional[MeasureState] = None
    word: Optional[MoveWord] = None
    charge: Optional[EndCharge] = None
    morphism: Optional[TreeMorphism] = None
    star: Optional[RayStar] = None

    @classmethod
    def load(cls, args) -> "Scenario":
        sc = cls()
        if getattr(args, "tree", None):
            sc.tree = serialize.tree_from_json(_read_json(args.tree))
            problems = validate_tree(sc.tree)
            if problems:
                raise serialize.SchemaError(
                    "invalid tree: " + "; ".join(problems)
                )
            if getattr(args, "measure", None):
                sc.measure = serialize.state_from_json(
                    sc.tree, _read_json(args.measure)
                )
                problems = sc.measure.validate()
                if problems:
                    raise serialize.SchemaError(
                        "invalid measure: " + "; ".join(problems)
                    )
            else:
                sc.measure = base_state(sc.tree)
            if getattr(args, "word", None):
                sc.word = serialize.word_from_json(
                    sc.tree, sc.measure, _read_json(args.word)
                )
            if getattr(args, "charge", None):
                sc.charge = serialize.charge_from_json(
                    sc.tree, _read_json(args.charge)
                )
        if getattr(args, "morphism", None):
            sc.morphism = serialize.morphism_from_json(
                _read_json(args.morphism)
            )
        if getattr(args, "star", None):
            sc.star = serialize.star_from_json(_read_json(args.star))
        return sc


def _load_tree_and_measure(args):
    sc = Scenario.load(args)
    return sc.tree, sc.measure


def _flat_charge(c) -> dict:
    return {v: frac_str(x) for v, x in sorted(c.values.items())}


def cmd_validate(args) -> int:
    report = {}
    ok = True
    tree = serialize.tree_from_json(_read_json(args.tree))
    report["tree"] = validate_tree(tree)
    ok = ok and not report["tree"]
    if not report["tree"]:
        mu = base_state(tree)
        if args.measure:
            mu = serialize.state_from_json(tree, _read_json(args.measure))
            report["measure"] = mu.validate()
            ok = ok and not report["measure"]
        if args.charge:
            c = serialize.charge_from_json(tree, _read_json(args.charge))
            report["charge"] = (
                [] if validate_charge(mu, c) else ["charge not admissible"]
            )
            ok = ok and not report["charge"]
        if args.word:
            w = serialize.word_from_json(tree, mu, _read_json(args.word))
            try:
                from .transport import apply_word

                apply_word(w)
                report["word"] = []
            except EndflowError as e:
                report["word"] = [str(e)]
                ok = False
    if args.morphism:
        pi = serialize.morphism_from_json(_read_json(args.morphism))
        report["morphism"] = pi.validate()
        ok = ok and not report["morphism"]
    if args.star:
        serialize.star_from_json(_read_json(args.star))
        report["star"] = []
    report["valid"] = ok
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_charge(args) -> int:
    tree, mu = _load_tree_and_measure(args)
    word = serialize.word_from_json(tree, mu, _read_json(args.word))
    _emit(_flat_charge(charge_of_word(word)), args.out)
    return EXIT_OK


def cmd_section(args) -> int:
    tree, mu = _load_tree_and_measure(args)
    a = serialize.charge_from_json(tree, _read_json(args.charge))
    word = build_section(tree, mu, a)
    _emit(serialize.word_to_json(word), args.out)
    return EXIT_OK


def cmd_factorize(args) -> int:
    tree, mu = _load_tree_and_measure(args)
    word = serialize.word_from_json(tree, mu, _read_json(args.word))
    kernel, a = factorize(word)
    _emit(
        {
            "charge": _flat_charge(a),
            "kernel": serialize.word_to_json(kernel),
        },
        args.out,
    )
    return EXIT_OK


def cmd_retract(args) -> int:
    tree, mu = _load_tree_and_measure(args)
    word = serialize.word_from_json(tree, mu, _read_json(args.word))
    tau = parse_frac(args.tau)
    _emit(serialize.word_to_json(retract(word, tau)), args.out)
    return EXIT_OK


def cmd_push(args) -> int:
    pi = serialize.morphism_from_json(_read_json(args.morphism))
    problems = pi.validate()
    if problems:
        raise serialize.SchemaError("invalid morphism: " + "; ".join(problems))
    out = {}
    mu = base_state(pi.source)
    if args.measure:
        mu = serialize.state_from_json(pi.source, _read_json(args.measure))
    out["measure"] = serialize.state_to_json(push_measure(pi, mu))
    if args.charge:
        a = serialize.charge_from_json(pi.source, _read_json(args.charge))
        out["charge"] = _flat_charge(push_charge(pi, a))
    if args.word:
        w = serialize.word_from_json(pi.source, mu, _read_json(args.word))
        out["word"] = serialize.word_to_json(push_word(pi, w))
    _emit(out, args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    star = serialize.star_from_json(_read_json(args.star))
    tree = star.to_tree()
    mu = base_state(tree)
    word = serialize.word_from_json(tree, mu, _read_json(args.word))
    h = realize_word(star, word)
    flux_charge = charge_of_word(word)
    cuts = args.cuts if args.cuts else 3
    base_cut = h.last_breakpoint() + 1
    defs = [
        charge_from_definition(star, h, base_cut + 7 * k) for k in range(cuts)
    ]
    match = all(d == flux_charge for d in defs)
    _emit(
        {
            "word_charge": _flat_charge(flux_charge),
            "definition_charge": _flat_charge(defs[0]),
            "cuts": cuts,
            "match": match,
        },
        args.out,
    )
    return EXIT_OK if match else EXIT_INVARIANT


def cmd_verify(args) -> int:
    if args.suite:
        if args.suite not in SUITES:
            raise serialize.SchemaError(f"unknown suite {args.suite!r}")
        from random import Random

        reports = [SUITES[args.suite](Random(f"{args.seed}:{args.suite}"), args.cases)]
    else:
        reports = run_all(args.seed, args.cases)
    failed = 0
    for rep in reports:
        status = "PASS" if not rep["failures"] else "FAIL"
        print(f"{status} {rep['name']} ({rep['cases']} cases)")
        failed += len(rep["failures"])
    _emit({"reports": reports, "failures": failed}, args.out)
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="endflow",
        description="End-charge calculus on balloon trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tree=True, measure=True):
        if tree:
            p.add_argument("--tree", required=True)
        if measure:
            p.add_argument("--measure")
        p.add_argument("--out")

    p = sub.add_parser("validate", help="validate input files")
    common(p)
    p.add_argument("--charge")
    p.add_argument("--word")
    p.add_argument("--morphism")
    p.add_argument("--star")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("charge", help="end charge of a word")
    common(p)
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_charge)

    p = sub.add_parser("section", help="build a word with a given charge")
    common(p)
    p.add_argument("--charge", required=True)
    p.set_defaults(fn=cmd_section)

    p = sub.add_parser("factorize", help="split a word into kernel and charge")
    common(p)
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_factorize)

    p = sub.add_parser("retract", help="slide a word toward the kernel")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--tau", required=True)
    p.set_defaults(fn=cmd_retract)

    p = sub.add_parser("push", help="push data along a tree morphism")
    p.add_argument("--morphism", required=True)
    p.add_argument("--measure")
    p.add_argument("--charge")
    p.add_argument("--word")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_push)

    p = sub.add_parser("oracle", help="compare flux and definition charges")
    p.add_argument("--star", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--cuts", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify", help="run the randomized invariant suites")
    p.add_argument("--cases", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InfeasibleTransferError as e:
        print(f"internal feasibility violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (serialize.SchemaError, EndflowError, json.JSONDecodeError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
