"""Command-line surface tying the engines together.

Query subcommands print a single JSON document on stdout; construction
subcommands print the serialized result automaton so they can be piped back
in (``-`` means stdin for any FILE argument); ``monitor`` streams one exact
rational per line.  Human summaries go to stderr.  Exit status: 0 answered,
2 unknown or resource limit, 1 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import construct, decide, sim, textio
from .core import (
    Automaton,
    AutomatonError,
    LassoWord,
    ResourceLimitError,
    infer_hierarchy,
    validate,
)
from .markov import lasso_acceptance

EXIT_ANSWERED = 0
EXIT_INPUT_ERROR = 1
EXIT_UNKNOWN = 2


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> Automaton:
    name = "stdin" if path == "-" else path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return textio.parse(_read_file(path), name=name)


def _emit(doc: dict, summary: str) -> None:
    print(json.dumps(doc, indent=2))
    print(summary, file=sys.stderr)


def _emit_automaton(aut: Automaton, summary: str) -> None:
    sys.stdout.write(textio.serialize(aut))
    print(summary, file=sys.stderr)


def _frac(x: Fraction) -> str:
    return str(x)


def _lasso_doc(w: LassoWord) -> str:
    return textio.format_lasso(w)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="probuchi",
        description="Probabilistic omega-automata toolkit (exact arithmetic)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, *, files: int = 1, help: str = "") -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        if files == 1:
            sp.add_argument("file", metavar="FILE")
        else:
            sp.add_argument("file1", metavar="FILE1")
            sp.add_argument("file2", metavar="FILE2")
        return sp

    add("validate", help="report every violated invariant")
    add("rank", help="infer a hierarchy ranking")
    sp = add("prob", help="exact lasso acceptance probability")
    sp.add_argument("lasso", metavar="LASSO")
    sp = add("mc", help="Monte Carlo estimate of lasso acceptance")
    sp.add_argument("lasso", metavar="LASSO")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    add("monitor", help="stream exact rejection probabilities (symbols on stdin)")
    sp = add("complement", help="complement an NBA (rank-based)")
    sp.add_argument("--complement-cap", type=int, default=None)
    add("product", files=2, help="monitor product (acceptance multiplies)")
    add("union", files=2, help="almost-sure union of two PBAs")
    add("intersect", files=2, help="almost-sure intersection of two PBAs")
    add("dra2hpba", help="deterministic Rabin to hierarchical PBA")
    add("hpba2nba", help="hierarchical PBA to NBA (positive semantics)")
    add("closure", help="safety closure of a hierarchical PBA's positive language")
    sp = add("decompose", help="Rabin decomposition into PBA pairs")
    sp.add_argument("--cap", type=int, default=6)
    for name, what in (("empty", "emptiness"), ("universal", "universality")):
        sp = add(name, help=f"decide {what} under a semantics")
        sp.add_argument(
            "--semantics", choices=["positive", "almost-sure"], default="positive"
        )
        sp.add_argument("--monoid-cap", type=int, default=None)
    sp = add("witness", help="bounded strongly-asymptotic witness search")
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--max-j", type=int, required=True)
    sp.add_argument("--x", type=str, default="0")
    sp = add("contain", files=2, help="bounded containment refutation")
    sp.add_argument(
        "--semantics", choices=["positive", "almost-sure"], required=True
    )
    sp.add_argument("--bound", type=int, required=True)
    sp = sub.add_parser("gen", help="generate a named example automaton")
    sp.add_argument("name_", metavar="NAME")
    sp.add_argument("params", nargs="*", metavar="PARAMS")
    return p


def _cmd_validate(args) -> int:
    aut = _load(args.file)
    report = validate(aut)
    _emit(
        {
            "command": "validate",
            "valid": report.ok,
            "violations": list(report.violations),
        },
        "valid" if report.ok else f"{len(report.violations)} violation(s)",
    )
    return EXIT_ANSWERED


def _cmd_rank(args) -> int:
    aut = _load(args.file)
    rk = infer_hierarchy(aut)
    if rk is None:
        _emit({"command": "rank", "hierarchical": False}, "not hierarchical")
    else:
        _emit(
            {
                "command": "rank",
                "hierarchical": True,
                "levels": {q: rk.levels[q] for q in aut.states},
                "k": rk.k,
            },
            f"hierarchical with {rk.k + 1} level(s)",
        )
    return EXIT_ANSWERED


def _cmd_prob(args) -> int:
    aut = _load(args.file)
    w = textio.parse_lasso(args.lasso, aut.alphabet)
    p = lasso_acceptance(aut, w)
    _emit(
        {"command": "prob", "lasso": _lasso_doc(w), "probability": _frac(p)},
        f"acceptance probability {p}",
    )
    return EXIT_ANSWERED


def _cmd_mc(args) -> int:
    aut = _load(args.file)
    w = textio.parse_lasso(args.lasso, aut.alphabet)
    est = sim.mc_lasso_estimate(aut, w, args.samples, args.seed)
    _emit(
        {
            "command": "mc",
            "lasso": _lasso_doc(w),
            "mean": est.mean,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": est.seed,
        },
        f"mean {est.mean:.6f} (stderr {est.stderr:.6f})",
    )
    return EXIT_ANSWERED


def _cmd_monitor(args) -> int:
    aut = _load(args.file)
    session = sim.MonitorSession(aut)
    print(Fraction(0))
    for line in sys.stdin:
        symbol = line.strip()
        if not symbol:
            continue
        print(session.feed(symbol))
    print(f"monitored {session.position} symbol(s)", file=sys.stderr)
    return EXIT_ANSWERED


def _certified_lasso(aut: Automaton, w: LassoWord) -> dict:
    return {
        "lasso": _lasso_doc(w),
        "certificate": {"acceptance": _frac(lasso_acceptance(aut, w))},
    }


def _cmd_empty(args) -> int:
    aut = _load(args.file)
    doc: dict = {"command": "empty", "semantics": args.semantics}
    if args.semantics == "almost-sure":
        if aut.role not in ("pba", "fpm", "hpba"):
            raise AutomatonError("almost-sure decisions need a Buchi PBA role")
        w = decide.almost_sure_empty(aut, monoid_cap=args.monoid_cap)
        if w is None:
            _emit(doc | {"answer": "empty"}, "empty")
        else:
            _emit(doc | {"answer": "nonempty", "witness": _certified_lasso(aut, w)},
                  f"nonempty, witness {w}")
        return EXIT_ANSWERED
    if aut.role == "nba":
        w = decide.nba_emptiness(aut)
        if w is None:
            _emit(doc | {"answer": "empty"}, "empty")
        else:
            member = decide.nba_lasso_member(aut, w)
            _emit(doc | {"answer": "nonempty",
                         "witness": {"lasso": _lasso_doc(w),
                                     "certificate": {"member": member}}},
                  f"nonempty, witness {w}")
        return EXIT_ANSWERED
    if aut.role == "fpm":
        sw = decide.fpm_positive_empty(aut, monoid_cap=args.monoid_cap)
        if sw is None:
            _emit(doc | {"answer": "empty"}, "empty")
        else:
            w = sw.lasso()
            _emit(doc | {
                "answer": "nonempty",
                "witness": {
                    "states": sorted(sw.states),
                    "u": _word(sw.u),
                    "v": _word(sw.v),
                } | _certified_lasso(aut, w),
            }, f"nonempty, witness {w}")
        return EXIT_ANSWERED
    if aut.role in ("hpba", "pba"):
        if aut.role == "pba" and infer_hierarchy(aut) is None:
            raise AutomatonError(
                "positive emptiness of a non-hierarchical PBA is undecidable; "
                "use the bounded 'witness' search"
            )
        w = decide.hpba_probable_empty(aut)
        if w is None:
            _emit(doc | {"answer": "empty"}, "empty")
        else:
            _emit(doc | {"answer": "nonempty", "witness": _certified_lasso(aut, w)},
                  f"nonempty, witness {w}")
        return EXIT_ANSWERED
    raise AutomatonError(f"no emptiness procedure for role {aut.role}")


def _cmd_universal(args) -> int:
    aut = _load(args.file)
    doc: dict = {"command": "universal", "semantics": args.semantics}
    if args.semantics == "almost-sure":
        if aut.role not in ("pba", "fpm", "hpba"):
            raise AutomatonError("almost-sure decisions need a Buchi PBA role")
        w = decide.almost_sure_universal(aut, monoid_cap=args.monoid_cap)
    elif aut.role == "nba":
        w = decide.nba_universality(aut, monoid_cap=args.monoid_cap)
        if w is None:
            _emit(doc | {"answer": "universal"}, "universal")
        else:
            _emit(doc | {"answer": "non-universal",
                         "counterexample": {"lasso": _lasso_doc(w),
                                            "certificate": {"member": False}}},
                  f"non-universal, counterexample {w}")
        return EXIT_ANSWERED
    elif aut.role == "fpm":
        w = decide.fpm_positive_universal(aut, monoid_cap=args.monoid_cap)
    elif aut.role in ("hpba", "pba"):
        if aut.role == "pba" and infer_hierarchy(aut) is None:
            raise AutomatonError(
                "positive universality of a non-hierarchical PBA is undecidable"
            )
        w = decide.hpba_probable_universal(aut, monoid_cap=args.monoid_cap)
    else:
        raise AutomatonError(f"no universality procedure for role {aut.role}")
    if w is None:
        _emit(doc | {"answer": "universal"}, "universal")
    else:
        _emit(doc | {"answer": "non-universal",
                     "counterexample": _certified_lasso(aut, w)},
              f"non-universal, counterexample {w}")
    return EXIT_ANSWERED


def _word(symbols: tuple[str, ...]) -> str:
    return "".join(symbols) if all(len(s) == 1 for s in symbols) else ",".join(symbols)


def _cmd_witness(args) -> int:
    aut = _load(args.file)
    x = Fraction(args.x)
    w = decide.pba_positive_nonempty_bounded(aut, args.max_len, args.max_j, x)
    if w is None:
        _emit(
            {"command": "witness", "answer": "unknown",
             "max_len": args.max_len, "max_j": args.max_j},
            "unknown (no witness within bounds)",
        )
        return EXIT_UNKNOWN
    bound = decide.acceptance_lower_bound(aut, w)
    _emit(
        {
            "command": "witness",
            "answer": "nonempty",
            "witness": {
                "states": sorted(w.states),
                "u": _word(w.u),
                "segments": [_word(s) for s in w.segments],
                "start_index": w.start_index,
            },
            "lower_bound": _frac(bound.value),
            "asymptotic": bound.asymptotic,
            "assembled_lasso": _lasso_doc(bound.lasso),
            "certificate": {
                "acceptance": _frac(lasso_acceptance(aut, bound.lasso))
            },
        },
        f"nonempty, lower bound {bound.value}",
    )
    return EXIT_ANSWERED


def _cmd_contain(args) -> int:
    b1, b2 = _load(args.file1), _load(args.file2)
    w = decide.containment_refute(b1, b2, args.semantics, args.bound)
    if w is None:
        _emit(
            {"command": "contain", "semantics": args.semantics,
             "answer": "unknown", "bound": args.bound},
            "unknown (no refutation within bound)",
        )
        return EXIT_UNKNOWN
    _emit(
        {
            "command": "contain",
            "semantics": args.semantics,
            "answer": "refuted",
            "witness": {
                "lasso": _lasso_doc(w),
                "certificate": {
                    "left_acceptance": _frac(lasso_acceptance(b1, w)),
                    "right_acceptance": _frac(lasso_acceptance(b2, w)),
                },
            },
        },
        f"refuted by {w}",
    )
    return EXIT_ANSWERED


def _cmd_decompose(args) -> int:
    aut = _load(args.file)
    members = construct.rabin_decomposition(aut, cap=args.cap)
    _emit(
        {
            "command": "decompose",
            "members": [
                {
                    "I": sorted(index_set),
                    "j": j,
                    "positive": textio.serialize(pos),
                    "negative": textio.serialize(neg),
                }
                for (index_set, j), pos, neg in members
            ],
        },
        f"{len(members)} member(s)",
    )
    return EXIT_ANSWERED


def run(argv: list[str]) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "rank":
            return _cmd_rank(args)
        if args.command == "prob":
            return _cmd_prob(args)
        if args.command == "mc":
            return _cmd_mc(args)
        if args.command == "monitor":
            return _cmd_monitor(args)
        if args.command == "complement":
            out = decide.nba_complement(_load(args.file), cap=args.complement_cap)
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "product":
            out = construct.fpm_product(_load(args.file1), _load(args.file2))
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "union":
            out = construct.almost_sure_union(_load(args.file1), _load(args.file2))
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "intersect":
            out = construct.almost_sure_intersection(
                _load(args.file1), _load(args.file2)
            )
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "dra2hpba":
            out = construct.dra_to_hpba(_load(args.file))
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "hpba2nba":
            out = construct.hpba_to_nba(_load(args.file))
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "closure":
            out = construct.safety_closure(_load(args.file))
            _emit_automaton(out, f"{len(out.states)} state(s)")
            return EXIT_ANSWERED
        if args.command == "decompose":
            return _cmd_decompose(args)
        if args.command == "empty":
            return _cmd_empty(args)
        if args.command == "universal":
            return _cmd_universal(args)
        if args.command == "witness":
            return _cmd_witness(args)
        if args.command == "contain":
            return _cmd_contain(args)
        if args.command == "gen":
            out = construct.generate_example(args.name_, *args.params)
            _emit_automaton(out, f"generated {out.name}")
            return EXIT_ANSWERED
        raise AutomatonError(f"unknown command {args.command}")
    except ResourceLimitError as exc:
        print(
            json.dumps(
                {"command": args.command, "answer": "resource-limit",
                 "cap": exc.cap_name, "detail": str(exc)},
                indent=2,
            )
        )
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (AutomatonError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
