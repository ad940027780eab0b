"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 internal invariant violation.
stdout carries data only; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from collections import Counter
from pathlib import Path

from .corpus import Document, SemcorSyntaxError, extract_nouns, filter_known, parse_plain, parse_semcor
from .density import DensityParams
from .evaluation import (
    AlignmentError,
    GoldKeyError,
    Population,
    count_sense_frequencies,
    evaluate_engine,
    gold_items,
    most_frequent_baseline,
    random_analytic_report,
    random_baseline_monte_carlo,
    score,
    window_sweep,
    write_csv,
)
from .taxonomy import Taxonomy, TaxonomyError, load_taxonomy
from .wsd import Status, WindowConfig, disambiguate_document

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("cdwsd")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _sizes(text: str) -> list[int]:
    try:
        return [_positive_int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_taxonomy(path: str) -> Taxonomy:
    try:
        with open(path, "rb") as fh:
            return load_taxonomy(fh)
    except OSError as exc:
        raise InputError(f"cannot read taxonomy: {exc}") from exc


def _read_document(path: str) -> Document:
    try:
        with open(path, "rb") as fh:
            return parse_semcor(fh, source_id=Path(path).stem)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _open_out(path: str | None):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _config(args) -> WindowConfig:
    return WindowConfig(args.window, DensityParams(args.alpha, args.beta))


def cmd_check(args) -> int:
    t = _read_taxonomy(args.taxonomy)
    heights = Counter(s.height for s in t.stats.values())
    out = sys.stdout
    deepest = max(heights, default=0)
    print(f"{len(t)} synsets, {t.word_count()} words, {len(t.roots())} roots, max height {deepest}", file=out)
    for h in sorted(heights):
        print(f"height\t{h}\t{heights[h]}", file=out)
    for w in t.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_disambiguate(args) -> int:
    t = _read_taxonomy(args.taxonomy)
    try:
        with open(args.input, "rb") as fh:
            if args.format == "plain":
                known, unknown = filter_known(parse_plain(fh), t)
                if unknown:
                    print(f"skipped {len(unknown)} lemmas not in taxonomy: {' '.join(unknown)}", file=sys.stderr)
            else:
                doc = parse_semcor(fh, source_id=Path(args.input).stem)
                known, report = extract_nouns(doc, t)
                print(
                    f"{report.tokens} tokens, {report.nouns} nouns, "
                    f"{report.not_in_taxonomy} not in taxonomy, {report.monosemous} monosemous",
                    file=sys.stderr,
                )
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc}") from exc

    outcomes = disambiguate_document(t, [l for _, l in known], _config(args), [p for p, _ in known])
    with _open_out(args.output) as out:
        for o in outcomes:
            keys = ",".join(t.sense_key(o.lemma, s) or s for s in o.remaining)
            print(f"{o.position}\t{o.lemma}\t{o.status.value}\t{keys}", file=out)
    counts = Counter(o.status for o in outcomes)
    print(", ".join(f"{s.value} {counts[s]}" for s in Status), file=sys.stderr)
    return EXIT_OK


def _populations(args) -> list[Population]:
    return list(Population) if args.population == "both" else [Population(args.population)]


def cmd_evaluate(args) -> int:
    t = _read_taxonomy(args.taxonomy)
    gold = _read_document(args.gold)
    pops = _populations(args)
    gs = gold_items(gold, t, args.strict_gold)
    reports = [r for r in evaluate_engine(gold, t, _config(args), gold_set=gs) if r.population in pops]
    if args.baselines:
        for pop in pops:
            reports.append(random_analytic_report(gold, t, pop))
            mc = random_baseline_monte_carlo(gold, t, args.runs, args.seed, pop)
            print(f"random-mc {pop.value}: mean {mc.mean:.4f} sd {mc.stddev:.4f} over {mc.runs} runs", file=sys.stderr)
            reports.append(mc.report())
        if args.train:
            freqs = count_sense_frequencies([_read_document(p) for p in args.train], t)
            mfs = most_frequent_baseline(gold, t, freqs)
            reports.extend(score(mfs, gold, t, pop, method="most-frequent", gold_set=gs) for pop in pops)
        else:
            print("most-frequent baseline skipped: no --train corpus", file=sys.stderr)
    if gs.unknown_keys:
        print(f"{gs.unknown_keys} gold keys unknown to the taxonomy were excluded", file=sys.stderr)
    with _open_out(args.output) as out:
        write_csv(reports, out, with_method=True)
    return EXIT_OK


def cmd_sweep(args) -> int:
    t = _read_taxonomy(args.taxonomy)
    gold = _read_document(args.gold)
    pops = _populations(args)
    reports = window_sweep(gold, t, args.sizes, DensityParams(args.alpha, args.beta), strict=args.strict_gold)
    with _open_out(args.output) as out:
        write_csv((r for r in reports if r.population in pops), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cdwsd", description="Noun sense disambiguation by conceptual density.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def engine_opts(sp):
        sp.add_argument("--window", type=_positive_int, default=15, help="window size in nouns (default 15)")
        sp.add_argument("--alpha", type=float, default=0.20)
        sp.add_argument("--beta", type=float, default=0.0)
        sp.add_argument("-o", "--output", help="output file (default stdout)")

    def gold_opts(sp):
        sp.add_argument("--population", choices=["POLYSEMOUS_ONLY", "OVERALL", "both"], default="both")
        sp.add_argument("--strict-gold", action="store_true", help="fail on gold keys unknown to the taxonomy")

    sp = sub.add_parser("check", help="validate a taxonomy and print statistics")
    sp.add_argument("taxonomy")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("disambiguate", help="tag every noun of a document")
    sp.add_argument("taxonomy")
    sp.add_argument("input")
    sp.add_argument("--format", choices=["semcor", "plain"], default="semcor")
    engine_opts(sp)
    sp.set_defaults(func=cmd_disambiguate)

    sp = sub.add_parser("evaluate", help="score the engine (and baselines) against gold tags")
    sp.add_argument("taxonomy")
    sp.add_argument("gold")
    engine_opts(sp)
    gold_opts(sp)
    sp.add_argument("--baselines", action="store_true", help="add random and most-frequent rows")
    sp.add_argument("--train", nargs="*", default=[], help="tagged files for most-frequent counts")
    sp.add_argument("--runs", type=_positive_int, default=10, help="Monte Carlo runs (default 10)")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("sweep", help="evaluate over several window sizes")
    sp.add_argument("taxonomy")
    sp.add_argument("gold")
    sp.add_argument("--sizes", type=_sizes, default=[5, 10, 15, 20, 25, 30])
    sp.add_argument("--alpha", type=float, default=0.20)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("-o", "--output")
    gold_opts(sp)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    if args.command == "sweep" and not args.sizes:
        parser.error("--sizes is empty")
    try:
        if getattr(args, "alpha", 0.0) < 0:
            parser.error("--alpha must be >= 0")
        return args.func(args)
    except (InputError, TaxonomyError, SemcorSyntaxError, AlignmentError, GoldKeyError, LookupError) as exc:
        print(f"cdwsd: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, ValueError) as exc:
        print(f"cdwsd: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
