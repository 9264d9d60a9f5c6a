"""Command-line entry point: ``pvshort <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
or domain errors (bad labels, moduli out of range, unmet hypotheses).
"""

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import triglemma
from .characters import CharacterLabel, evaluate, profile
from .charsums import gauss_sum, prefix_sums, write_profile_csv
from .decomposition import decompose
from .errors import PVShortError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _label(args):
    return CharacterLabel.parse(args.label, q=args.q)


def _cx(z):
    return [z.real, z.imag]


def cmd_char_eval(args):
    lab = _label(args)
    ang = evaluate(lab, args.n)
    if ang is None:
        _emit({"label": str(lab), "n": args.n, "value": [0.0, 0.0], "angle": None})
    else:
        _emit({"label": str(lab), "n": args.n, "angle": str(ang.fraction), "value": _cx(complex(ang))})
    return EXIT_OK


def cmd_charsum(args):
    lab = _label(args)
    prof = prefix_sums(lab)
    if args.emit_profile == "-":
        write_profile_csv(prof, sys.stdout)
        return EXIT_OK
    if args.emit_profile:
        with open(args.emit_profile, "w", newline="") as fh:
            write_profile_csv(prof, fh)
    p = profile(lab)
    _emit({
        "label": str(lab), "parity": p.parity, "conductor": p.conductor,
        "primitive": p.is_primitive, "max_abs": prof.max_abs, "argmax_n": prof.argmax_n,
    })
    return EXIT_OK


def cmd_gauss(args):
    g = gauss_sum(_label(args))
    _emit({"label": str(g.label), "value": _cx(g.value), "abs": abs(g.value),
           "modulus_check": g.modulus_check})
    return EXIT_OK


def cmd_trig(args):
    t = args.which
    if t == "sigma":
        _emit({"value": triglemma.sigma(args.lower, args.upper, args.alpha)})
    elif t in ("eq1", "eq2"):
        fn = triglemma.lemma_eq1 if t == "eq1" else triglemma.lemma_eq2
        r = fn(args.q, args.gamma, args.epsilon, args.alpha)
        _emit({"lhs": r.lhs, "main_term": r.main_term, "residual": r.residual})
    elif t == "eq3":
        r = triglemma.sigma_lower_bound_eq3(args.q, args.gamma, args.epsilon, args.alpha)
        sp = r.split
        _emit({"value": r.value, "chain_bound": r.chain_bound, "holds": r.holds,
               "identity_residual": r.identity_residual,
               "m_bar": sp.m_bar, "p_bar": sp.p_bar, "v_bar": sp.v_bar})
        return EXIT_OK if r.holds else EXIT_FAIL
    elif t == "eq4":
        c = triglemma.lower_bound_eq4(args.m, args.p, args.alpha, args.q)
        _emit({"value": c.value, "bound": c.bound, "holds": c.holds})
        return EXIT_OK if c.holds else EXIT_FAIL
    else:
        approx, bound = triglemma.abs_sin_fourier(args.theta, args.terms)
        _emit({"approx": approx, "bound": bound})
    return EXIT_OK


def cmd_decomp(args):
    rep = decompose(_label(args), args.N, args.gamma, args.epsilon,
                    enforce_hypothesis=not args.allow_outside)
    print(rep.to_json())
    return EXIT_OK


def cmd_survey(args):
    from .survey import (
        emit_plot_data, load_config, run_decomposition_survey,
        run_lemma_survey, run_theorem_survey,
    )

    cfg = load_config(args.config, output_dir=args.output_dir, worker_count=args.workers)
    if args.kind == "theorem":
        records, path = run_theorem_survey(cfg)
        written = [path] + [emit_plot_data(records, k, cfg.output_dir)
                            for k in ("ratio_vs_gamma", "argmax_location")]
    elif args.kind == "lemma":
        written = run_lemma_survey(cfg)
    else:
        _, j, c = run_decomposition_survey(cfg)
        written = [j, c]
    for p in written:
        print(p)
    return EXIT_OK


def cmd_verify(args):
    from .acceptance import run_all

    results = run_all(args.output_dir, workers=args.workers)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_FAIL if failed else EXIT_OK


def _fraction_or_float(text):
    """Accept ``pi``-free decimals or ``a/b`` (as a float)."""
    return float(Fraction(text)) if "/" in text else float(text)


def build_parser():
    p = _Parser(prog="pvshort", description="Character sum and trigonometric bound experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_label(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("q", type=int)
        sp.add_argument("label", help="exponent tuple 'k1,k2,...' or 'q:k1,k2,...'")
        return sp

    sp = with_label("char-eval", "evaluate chi(n)")
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_char_eval)

    sp = with_label("charsum", "prefix sums S(N) = |sum_{n<=N} chi(n)|")
    sp.add_argument("--emit-profile", metavar="FILE",
                    help="write N,re,im,abs rows to FILE ('-' for stdout)")
    sp.set_defaults(func=cmd_charsum)

    with_label("gauss", "Gauss sum tau(chi)").set_defaults(func=cmd_gauss)

    tp = sub.add_parser("trig", help="cosine sums and the bounds built on them")
    tsub = tp.add_subparsers(dest="which", required=True, parser_class=_Parser)
    s = tsub.add_parser("sigma", help="sum cos(alpha n)/n over lower <= n <= upper")
    for a in ("lower", "upper", "alpha"):
        s.add_argument(a, type=_fraction_or_float)
    for name in ("eq1", "eq2", "eq3"):
        s = tsub.add_parser(name)
        s.add_argument("q", type=int)
        s.add_argument("gamma", type=_fraction_or_float)
        s.add_argument("epsilon", type=_fraction_or_float)
        s.add_argument("alpha", type=_fraction_or_float)
    s = tsub.add_parser("eq4", help="sigma(m+1, p(2m+1)) against -5 - 1/(2q)")
    s.add_argument("m", type=int)
    s.add_argument("p", type=int)
    s.add_argument("alpha", type=_fraction_or_float)
    s.add_argument("q", type=int)
    s = tsub.add_parser("fourier", help="truncated cosine series of |sin theta|")
    s.add_argument("theta", type=_fraction_or_float)
    s.add_argument("--terms", type=int, default=triglemma.FOURIER_TERMS)
    tp.set_defaults(func=cmd_trig)

    sp = with_label("decomp", "split the inner sum into sigma1, sigma2, sigma3 (JSON)")
    sp.add_argument("N", type=int)
    sp.add_argument("--gamma", type=_fraction_or_float, required=True)
    sp.add_argument("--epsilon", type=_fraction_or_float, default=0.05)
    sp.add_argument("--allow-outside", action="store_true",
                    help="report N > q^(1-gamma) instead of rejecting it")
    sp.set_defaults(func=cmd_decomp)

    sp = sub.add_parser("survey", help="batch sweeps writing CSV/JSON")
    sp.add_argument("kind", choices=("theorem", "lemma", "decomposition"))
    sp.add_argument("--config", help="flat 'key = value' file; PVSHORT_* variables override it")
    sp.add_argument("--output-dir")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_survey)

    sp = sub.add_parser("verify", help="run every acceptance criterion")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output-dir", default="acceptance_out")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (PVShortError, ValueError, OSError) as exc:
        print(f"pvshort: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
