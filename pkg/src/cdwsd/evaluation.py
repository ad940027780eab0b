"""Scoring against gold sense tags, baselines, and the window-size sweep.

coverage = answered / total, precision = correct / answered, recall = correct / total.
Only RESOLVED outcomes count as answered.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .corpus import Document, extract_nouns
from .density import DEFAULT_PARAMS, DensityParams
from .taxonomy import Taxonomy, normalize_lemma
from .wsd import DisambiguationOutcome, Status, WindowConfig, disambiguate_document

logger = logging.getLogger(__name__)

CSV_FIELDS = ["population", "window_size", "total", "answered", "correct", "coverage", "precision", "recall"]


class Population(str, enum.Enum):
    POLYSEMOUS_ONLY = "POLYSEMOUS_ONLY"
    OVERALL = "OVERALL"


class AlignmentError(ValueError):
    pass


class GoldKeyError(LookupError):
    pass


@dataclass(frozen=True)
class ScoreReport:
    population: Population
    total: int
    answered: float
    correct: float
    window_size: int | None = None
    method: str = "cd"
    excluded_gold: int = 0

    @property
    def coverage(self) -> float:
        return self.answered / self.total if self.total else 0.0

    @property
    def precision(self) -> float:
        return self.correct / self.answered if self.answered else 0.0

    @property
    def recall(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass(frozen=True)
class GoldItem:
    """One scorable noun: its position among extracted nouns and gold synset."""

    index: int
    lemma: str
    synset: str
    senses: tuple[str, ...]

    @property
    def polysemous(self) -> bool:
        return len(self.senses) > 1


@dataclass
class GoldSet:
    nouns: list[tuple[int, str]]
    items: list[GoldItem]
    unknown_keys: int = 0
    untagged: int = 0

    def select(self, population: Population) -> list[GoldItem]:
        if population is Population.POLYSEMOUS_ONLY:
            return [g for g in self.items if g.polysemous]
        return list(self.items)


def gold_items(gold: Document, t: Taxonomy, strict: bool = False) -> GoldSet:
    """Resolve gold keys of the taxonomy-known nouns of ``gold``.

    Nouns without a tag, or with a key the taxonomy does not know, are left out
    of every total; ``strict`` turns unknown keys into an error.
    """
    nouns, _ = extract_nouns(gold, t)
    out = GoldSet(nouns, [])
    for i, (pos, lemma) in enumerate(nouns):
        key = gold.tokens[pos].gold_key
        if key is None:
            out.untagged += 1
            continue
        sid = t.synset_for_key(lemma, key)
        if sid is None:
            if strict:
                raise GoldKeyError(f"token {pos}: {lemma!r} has no sense with key {key!r}")
            out.unknown_keys += 1
            continue
        out.items.append(GoldItem(i, lemma, sid, t.senses(lemma)))
    if out.unknown_keys:
        logger.warning("%d gold keys not found in the taxonomy; excluded", out.unknown_keys)
    return out


def score(
    outcomes: Sequence[DisambiguationOutcome],
    gold: Document,
    t: Taxonomy,
    population: Population = Population.POLYSEMOUS_ONLY,
    *,
    strict: bool = False,
    window_size: int | None = None,
    method: str = "cd",
    gold_set: GoldSet | None = None,
) -> ScoreReport:
    gs = gold_set or gold_items(gold, t, strict)
    if len(outcomes) != len(gs.nouns):
        raise AlignmentError(f"{len(outcomes)} outcomes for {len(gs.nouns)} nouns")
    for out, (_, lemma) in zip(outcomes, gs.nouns):
        if normalize_lemma(out.lemma) != normalize_lemma(lemma):
            raise AlignmentError(f"outcome for {out.lemma!r} aligned with noun {lemma!r}")
    items = gs.select(population)
    answered = correct = 0
    for g in items:
        out = outcomes[g.index]
        if out.status is Status.RESOLVED:
            answered += 1
            correct += out.chosen == g.synset
    return ScoreReport(
        population, len(items), answered, correct, window_size, method, gs.unknown_keys
    )


def random_baseline_analytic(nouns: Iterable[str], t: Taxonomy) -> float:
    """Expected precision of a uniform random sense over the polysemous nouns."""
    inv = [1.0 / len(s) for s in (t.senses(n) for n in nouns) if len(s) > 1]
    return math.fsum(inv) / len(inv) if inv else 0.0


def random_analytic_report(
    gold: Document, t: Taxonomy, population: Population, *, strict: bool = False
) -> ScoreReport:
    """Expected counts of random guessing (monosemous nouns are always right)."""
    items = gold_items(gold, t, strict).select(population)
    expected = math.fsum(1.0 / len(g.senses) for g in items)
    return ScoreReport(population, len(items), len(items), expected, None, "random-analytic")


@dataclass(frozen=True)
class MonteCarloResult:
    population: Population
    runs: int
    total: int
    mean: float
    stddev: float
    precisions: tuple[float, ...] = field(repr=False)

    def report(self) -> ScoreReport:
        return ScoreReport(
            self.population, self.total, self.total, self.mean * self.total, None, "random-mc"
        )


def random_baseline_monte_carlo(
    gold: Document,
    t: Taxonomy,
    runs: int = 10,
    seed: int = 0,
    population: Population = Population.POLYSEMOUS_ONLY,
    *,
    strict: bool = False,
) -> MonteCarloResult:
    if runs < 1:
        raise ValueError("runs must be >= 1")
    items = gold_items(gold, t, strict).select(population)
    rng = np.random.default_rng(seed)
    n = len(items)
    if n == 0:
        zeros = (0.0,) * runs
        return MonteCarloResult(population, runs, 0, 0.0, 0.0, zeros)
    k = np.array([len(g.senses) for g in items])
    truth = np.array([g.senses.index(g.synset) for g in items])
    picks = rng.integers(0, k, size=(runs, n))
    precisions = (picks == truth).sum(axis=1) / n
    std = float(precisions.std(ddof=1)) if runs > 1 else 0.0
    return MonteCarloResult(population, runs, n, float(precisions.mean()), std, tuple(precisions.tolist()))


class SenseFrequencyTable(Counter):
    """Counts keyed by (normalized lemma, synset id)."""

    def count(self, lemma: str, synset: str) -> int:
        return self.get((normalize_lemma(lemma), synset), 0)

    def add(self, lemma: str, synset: str, n: int = 1) -> None:
        self[(normalize_lemma(lemma), synset)] += n


def count_sense_frequencies(docs: Iterable[Document], t: Taxonomy) -> SenseFrequencyTable:
    table = SenseFrequencyTable()
    for doc in docs:
        for g in gold_items(doc, t).items:
            table.add(g.lemma, g.synset)
    return table


def most_frequent_baseline(
    gold: Document, t: Taxonomy, freqs: SenseFrequencyTable
) -> list[DisambiguationOutcome]:
    """Most frequent training sense per noun; nouns never seen in training stay unanswered."""
    nouns, _ = extract_nouns(gold, t)
    outcomes = []
    for pos, lemma in nouns:
        senses = t.senses(lemma)
        counts = [freqs.count(lemma, s) for s in senses]
        best = max(counts)
        if best == 0:
            outcomes.append(DisambiguationOutcome(pos, lemma, Status.UNRESOLVED, None, senses, len(senses)))
            continue
        chosen = senses[counts.index(best)]  # first index = lowest sense number
        outcomes.append(DisambiguationOutcome(pos, lemma, Status.RESOLVED, chosen, (chosen,), len(senses)))
    return outcomes


def normalize_sizes(sizes: Iterable[int]) -> list[int]:
    out = sorted(set(int(s) for s in sizes))
    if not out:
        raise ValueError("no window sizes given")
    if out[0] < 1:
        raise ValueError("window sizes must be >= 1")
    return out


def evaluate_engine(
    gold: Document,
    t: Taxonomy,
    cfg: WindowConfig = WindowConfig(),
    *,
    strict: bool = False,
    gold_set: GoldSet | None = None,
) -> list[ScoreReport]:
    """Run the engine over the nouns of ``gold``; one report per population."""
    gs = gold_set or gold_items(gold, t, strict)
    lemmas = [lemma for _, lemma in gs.nouns]
    positions = [pos for pos, _ in gs.nouns]
    outcomes = disambiguate_document(t, lemmas, cfg, positions)
    return [
        score(outcomes, gold, t, pop, window_size=cfg.window_size, gold_set=gs)
        for pop in Population
    ]


def window_sweep(
    gold: Document,
    t: Taxonomy,
    sizes: Iterable[int],
    params: DensityParams = DEFAULT_PARAMS,
    *,
    strict: bool = False,
) -> list[ScoreReport]:
    """Reports ordered by population, then ascending window size."""
    gs = gold_items(gold, t, strict)
    by_size = {
        size: evaluate_engine(gold, t, WindowConfig(size, params), gold_set=gs)
        for size in normalize_sizes(sizes)
    }
    return [r for pop in Population for reports in by_size.values() for r in reports if r.population is pop]


def _fmt_count(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.4f}"


def report_row(r: ScoreReport) -> list[str]:
    return [
        r.population.value,
        "" if r.window_size is None else str(r.window_size),
        str(r.total),
        _fmt_count(r.answered),
        _fmt_count(r.correct),
        f"{r.coverage:.4f}",
        f"{r.precision:.4f}",
        f"{r.recall:.4f}",
    ]


def write_csv(reports: Iterable[ScoreReport], stream: IO[str], with_method: bool = False) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow((["method"] if with_method else []) + CSV_FIELDS)
    for r in reports:
        writer.writerow(([r.method] if with_method else []) + report_row(r))
