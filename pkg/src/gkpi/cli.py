"""Command-line interface.

Exit codes: 0 every verdict positive, 1 a mathematical verdict is negative
(counterexample, failed reduction or span check), 2 input error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import io
import json
import shutil
import sys
from importlib import resources
from pathlib import Path

from . import formats
from .errors import BudgetExceeded, GrowthHypothesisViolated, InputError, InvalidEll
from .growth import DEFAULT_BUDGET, Filtration, is_irreducible, measured_bergman_bound
from .identities import max_irrep_dim, closed_form_digits, pi_degree_bound
from .monomial import classify_growth, count_normal_words, growth_profile_monomial
from .reduction import LemmaEngine, verify_certificate, verify_comb_lemma

EXIT_OK, EXIT_VERDICT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class CommandError(InputError):
    pass


def _emit(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(formats.render_json(doc))
    else:
        out.write(formats.render_text(doc))


def _load_pres(path):
    return formats.parse_presentation(formats.load_json(path))


def _profile(pres, horizon, budget):
    return Filtration(pres, budget).profile(horizon)


def cmd_growth(args, out) -> int:
    if args.horizon < 1:
        raise CommandError("--horizon must be at least 1")
    pres = _load_pres(args.input)
    profile = _profile(pres, args.horizon, args.budget)
    bound = measured_bergman_bound(profile)
    if args.format == "csv":
        out.write(profile.to_csv())
    else:
        _emit(formats.profile_document(profile, bound, pres.generator_names), args.format, out)
    return EXIT_OK


def _verify_file(path, pres, out, fmt) -> int:
    doc = formats.load_json(path)
    docs = doc["certificates"] if "certificates" in doc else [doc]
    results = []
    for d in docs:
        check = verify_certificate(pres, formats.certificate_from_document(d, pres))
        results.append({"ok": check.ok, "reason": check.reason})
    ok = all(r["ok"] for r in results)
    _emit({"schema": "verify-v1", "results": results, "ok": ok}, fmt, out)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_lemma_check(args, out) -> int:
    pres = _load_pres(args.input)
    if args.verify:
        return _verify_file(args.verify, pres, out, args.format)
    if args.certificates < 0:
        raise CommandError("--certificates must be nonnegative")
    try:
        report = verify_comb_lemma(pres, args.ell, args.certificates, args.seed, args.budget)
    except InvalidEll as exc:
        raise CommandError(f"{exc}; use --ell >= {exc.measured}") from None
    _emit(formats.lemma_document(report, pres), args.format, out)
    return EXIT_OK if report.ok else EXIT_VERDICT


def cmd_reduce(args, out) -> int:
    pres = _load_pres(args.input)
    if args.verify:
        return _verify_file(args.verify, pres, out, args.format)
    if args.word is None:
        raise CommandError("reduce needs --word (or --verify)")
    word = formats.parse_word(args.word, pres)
    ell = args.ell
    if ell is None:
        filt = Filtration(pres, args.budget)
        filt.extend_to_stable()
        ell = max(max((b - a for a, b in zip(filt.dims, filt.dims[1:])), default=0), 1)
    if ell < 1:
        raise CommandError("--ell must be positive")
    engine = LemmaEngine(pres, ell, args.budget)
    if len(word) != engine.m:
        raise CommandError(f"word has length {len(word)}; reduction applies to length ell*(n+1) = {engine.m}")
    cert = engine.reduce(word)
    check = verify_certificate(pres, cert)
    doc = formats.certificate_document(cert, pres)
    doc["verified"] = check.ok
    _emit(doc, args.format, out)
    return EXIT_OK if check.ok else EXIT_VERDICT


def cmd_irreducible(args, out) -> int:
    pres = _load_pres(args.input)
    irreducible, dim = is_irreducible(pres, args.budget)
    _emit({"schema": "irreducible-v1", "n": pres.n, "irreducible": irreducible, "algebra_dim": dim},
          args.format, out)
    return EXIT_OK


def cmd_pi_test(args, out) -> int:
    if args.mode == "random" and args.trials < 1:
        raise CommandError("--mode random needs --trials >= 1")
    if args.degree is not None and args.degree < 1:
        raise CommandError("--degree must be positive")
    pres = _load_pres(args.input)
    filt = Filtration(pres, args.budget)
    filt.extend_to_stable()
    report = pi_degree_bound(filt.profile(), pres, args.mode, args.degree, args.trials, args.seed, args.budget)
    _emit(formats.bound_document(report, pres.generator_names), args.format, out)
    return EXIT_OK if report.empirical.vanishes else EXIT_VERDICT


def cmd_monomial(args, out) -> int:
    if args.horizon < 1:
        raise CommandError("--horizon must be at least 1")
    mp = formats.parse_monomial(formats.load_json(args.input))
    profile = growth_profile_monomial(mp, args.horizon)
    verdict = classify_growth(mp)
    doc = formats.profile_document(profile, measured_bergman_bound(profile))
    doc["schema"] = "monomial-v1"
    doc["counts"] = [count_normal_words(mp, q) for q in range(args.horizon + 1)]
    doc["classification"] = str(verdict)
    doc["linear_growth"] = verdict.is_linear
    if not verdict.is_linear:
        doc["note"] = "growth is not linear; the pi-degree bound does not apply"
    doc["forbidden"] = ["".join(mp.alphabet[a] for a in w) for w in mp.forbidden]
    _emit(doc, args.format, out)
    return EXIT_OK


def cmd_bound(args, out) -> int:
    if args.c is None or args.c < 1:
        raise CommandError("--c must be an integer >= 1")
    c = args.c
    doc = {"schema": "bound-v1", "measured_c": c, "N_int": max_irrep_dim(c), "N_real": closed_form_digits(c),
           "remark_bound": c * c + 1}
    _emit(doc, args.format, out)
    return EXIT_OK


DEMO_RUNS = [
    ["growth", "e12-e21", "--horizon", "4"],
    ["growth", "zero", "--horizon", "4"],
    ["growth", "upper-triangular", "--horizon", "3"],
    ["irreducible", "e12-e21"],
    ["irreducible", "upper-triangular"],
    ["lemma-check", "e12-e21", "--certificates", "4"],
    ["lemma-check", "upper-triangular", "--certificates", "2"],
    ["lemma-check", "unipotent", "--certificates", "2"],
    ["pi-test", "e12-e21"],
    ["pi-test", "block-m2-m1"],
    ["pi-test", "e12-e21", "--mode", "random", "--trials", "20"],
    ["monomial", "monomial-yx-yy", "--horizon", "10"],
    ["monomial", "free-2-letter", "--horizon", "10"],
    ["bound", "--c", "2"],
]


def cmd_demo(args, out) -> int:
    if args.list:
        _emit({"demos": formats.demo_names()}, args.format, out)
        return EXIT_OK
    if args.export:
        dest = Path(args.export)
        dest.mkdir(parents=True, exist_ok=True)
        for name in formats.demo_names():
            with resources.as_file(resources.files(formats.DEMO_PACKAGE).joinpath(name + ".json")) as src:
                shutil.copy(src, dest / (name + ".json"))
        _emit({"exported": formats.demo_names(), "to": str(dest)}, args.format, out)
        return EXIT_OK
    runs = []
    for argv in DEMO_RUNS:
        buf = io.StringIO()
        code = run(argv + ["--format", "json", "--seed", str(args.seed), "--budget", str(args.budget)], buf)
        runs.append({"argv": argv, "exit": code, "report": json.loads(buf.getvalue())})
    _emit({"schema": "demo-v1", "seed": args.seed, "runs": runs}, args.format, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="cap on candidate words, tuples and similar counts")
    common.add_argument("--verify", metavar="FILE", help="re-verify certificates from a previous run")

    parser = argparse.ArgumentParser(prog="gkpi", description="Growth, word reduction and pi-degree bounds "
                                                              "for finitely generated matrix algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("growth", parents=[common], help="growth filtration and Bergman bound")
    p.add_argument("input")
    p.add_argument("--horizon", type=int, default=8)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("lemma-check", parents=[common], help="verify the word-reduction lemma")
    p.add_argument("input")
    p.add_argument("--ell", type=int)
    p.add_argument("--certificates", type=int, default=4)
    p.set_defaults(func=cmd_lemma_check)

    p = sub.add_parser("reduce", parents=[common], help="certificate for one word")
    p.add_argument("input")
    p.add_argument("--word")
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("irreducible", parents=[common], help="does S generate all of M_n")
    p.add_argument("input")
    p.set_defaults(func=cmd_irreducible)

    p = sub.add_parser("pi-test", parents=[common], help="bound report and standard identity test")
    p.add_argument("input")
    p.add_argument("--degree", type=int)
    p.add_argument("--mode", choices=["basis", "random", "elements"], default="basis")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_pi_test)

    p = sub.add_parser("monomial", parents=[common], help="growth of a monomial algebra")
    p.add_argument("input")
    p.add_argument("--horizon", type=int, default=10)
    p.set_defaults(func=cmd_monomial)

    p = sub.add_parser("bound", parents=[common], help="dimension bound for a growth constant")
    p.add_argument("--c", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("demo", parents=[common], help="run the bundled demonstration corpus")
    p.add_argument("--list", action="store_true")
    p.add_argument("--export", metavar="DIR")
    p.set_defaults(func=cmd_demo)
    return parser


def run(argv, out=None) -> int:
    """Run one command; returns the exit code instead of exiting."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.format == "csv" and args.command != "growth":
        sys.stderr.write("error: --format csv is only available for growth\n")
        return EXIT_INPUT
    if args.budget < 1:
        sys.stderr.write("error: --budget must be positive\n")
        return EXIT_INPUT
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (OSError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error: malformed input: {exc}\n")
        return EXIT_INPUT
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except GrowthHypothesisViolated as exc:
        sys.stderr.write(f"verdict: {exc}\n")
        return EXIT_VERDICT
    out.write(buf.getvalue())
    return code


def main(argv=None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
