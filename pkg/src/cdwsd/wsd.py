"""Sliding-window disambiguation by repeated selection of the densest concept.

For each window the nouns, their senses and every hypernym of those senses go
into a lattice. The candidate concept with the highest conceptual density
(among those holding at least two marks) is selected; every word with senses
below it keeps only those senses, the rest are deleted, and the concepts under
it are blocked. This repeats until no candidate holds two marks.

A mark is a live (word, sense) pair whose word has not yet been settled by a
selection. Senses of settled words stay in the lattice as the answer but no
longer count towards the density of other concepts.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field, replace
from typing import Sequence

from .density import DEFAULT_PARAMS, DensityParams, conceptual_density
from .taxonomy import Taxonomy


class Status(str, enum.Enum):
    RESOLVED = "RESOLVED"
    REDUCED = "REDUCED"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class WindowConfig:
    window_size: int = 15
    params: DensityParams = DEFAULT_PARAMS

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")


@dataclass
class Occurrence:
    position: int
    lemma: str
    senses: list[str]
    original: tuple[str, ...]
    settled: bool = False


@dataclass(frozen=True)
class DisambiguationOutcome:
    position: int
    lemma: str
    status: Status
    chosen: str | None
    remaining: tuple[str, ...]
    original_count: int

    @classmethod
    def from_occurrence(cls, occ: Occurrence, position: int | None = None) -> "DisambiguationOutcome":
        n = len(occ.senses)
        if n == 1:
            status = Status.RESOLVED
        elif n < len(occ.original):
            status = Status.REDUCED
        else:
            status = Status.UNRESOLVED
        return cls(
            position=occ.position if position is None else position,
            lemma=occ.lemma,
            status=status,
            chosen=occ.senses[0] if n == 1 else None,
            remaining=tuple(occ.senses),
            original_count=len(occ.original),
        )

    @property
    def answered(self) -> bool:
        return self.status is Status.RESOLVED


class NotACandidateError(KeyError):
    pass


@dataclass
class Lattice:
    taxonomy: Taxonomy
    occurrences: list[Occurrence]
    candidates: dict[str, set[tuple[int, str]]] = field(default_factory=dict)
    blocked: set[str] = field(default_factory=set)
    _heap: list | None = field(default=None, repr=False)
    _heap_params: DensityParams | None = field(default=None, repr=False)

    def marks(self, c: str) -> list[tuple[int, str]]:
        """Marks under ``c`` as (occurrence index, synset) pairs, sorted."""
        return sorted(self.candidates.get(c, ()))

    def m(self, c: str) -> int:
        return len(self.candidates.get(c, ()))

    def _entry(self, c: str, params: DensityParams):
        m = len(self.candidates[c])
        stats = self.taxonomy.stats[c]
        d = conceptual_density(stats, m, params)
        # min-heap order: density desc, m desc, smaller subhierarchy, id
        return (-d, -m, stats.descendants, c, m)

    def _rebuild_heap(self, params: DensityParams) -> None:
        self._heap = [
            self._entry(c, params)
            for c, marks in self.candidates.items()
            if len(marks) >= 2 and c not in self.blocked
        ]
        heapq.heapify(self._heap)
        self._heap_params = params

    def densest(self, params: DensityParams = DEFAULT_PARAMS) -> tuple[str, float] | None:
        if self._heap is None or self._heap_params != params:
            self._rebuild_heap(params)
        heap = self._heap
        while heap:
            neg_d, _, _, c, m = heap[0]
            if c not in self.blocked and self.m(c) == m:
                return c, -neg_d
            heapq.heappop(heap)
        return None

    def select(self, c: str) -> None:
        """Keep the senses under ``c`` for every word marked below it."""
        if not self.candidates.get(c) or c in self.blocked:
            raise NotACandidateError(c)
        anc = self.taxonomy._ancestors.__getitem__  # ids here are already validated
        dropped: list[tuple[int, str]] = []
        for idx, occ in enumerate(self.occurrences):
            if occ.settled:
                continue
            under = [s for s in occ.senses if c in anc(s)]
            if not under:
                continue
            dropped.extend((idx, s) for s in occ.senses)
            occ.senses = under
            occ.settled = True

        blocked = self.blocked
        blocked.update(x for x in self.candidates if x not in blocked and c in anc(x))

        touched = set()
        for idx, s in dropped:
            for a in anc(s):
                marks = self.candidates.get(a)
                if marks is not None:
                    marks.discard((idx, s))
                    touched.add(a)
        for a in touched:
            if not self.candidates[a]:
                del self.candidates[a]
            elif self._heap is not None and a not in self.blocked and len(self.candidates[a]) >= 2:
                heapq.heappush(self._heap, self._entry(a, self._heap_params))


def build_lattice(t: Taxonomy, window: Sequence[str]) -> Lattice:
    occurrences = []
    candidates: dict[str, set[tuple[int, str]]] = {}
    for idx, lemma in enumerate(window):
        senses = t.senses(lemma)
        if not senses:
            raise LookupError(f"lemma {lemma!r} has no senses in the taxonomy")
        occurrences.append(Occurrence(idx, lemma, list(senses), tuple(senses)))
        for s in senses:
            for a in t.ancestors(s):
                candidates.setdefault(a, set()).add((idx, s))
    return Lattice(t, occurrences, candidates)


def select_densest(
    lattice: Lattice, t: Taxonomy | None = None, params: DensityParams = DEFAULT_PARAMS
) -> tuple[str, float] | None:
    return lattice.densest(params)


def apply_selection(lattice: Lattice, t: Taxonomy | None, c: str) -> Lattice:
    lattice.select(c)
    return lattice


def run_lattice(lattice: Lattice, params: DensityParams = DEFAULT_PARAMS) -> list[tuple[str, float]]:
    """Select until no candidate has two marks; returns the selections in order."""
    trace = []
    while (best := lattice.densest(params)) is not None:
        lattice.select(best[0])
        trace.append(best)
    return trace


def disambiguate_window(
    t: Taxonomy,
    window: Sequence[str],
    target_index: int,
    cfg: WindowConfig = WindowConfig(),
) -> DisambiguationOutcome:
    if not 0 <= target_index < len(window):
        raise IndexError(f"target_index {target_index} outside window of {len(window)}")
    lattice = build_lattice(t, window)
    run_lattice(lattice, cfg.params)
    return DisambiguationOutcome.from_occurrence(lattice.occurrences[target_index])


def window_bounds(n: int, i: int, size: int) -> tuple[int, int]:
    """Half-open slice of the window centred on ``i``, clipped to ``[0, n)``.

    Even sizes put the extra context word on the right.
    """
    left = (size - 1) // 2
    right = size - 1 - left
    return max(0, i - left), min(n, i + right + 1)


def disambiguate_document(
    t: Taxonomy,
    nouns: Sequence[str],
    cfg: WindowConfig = WindowConfig(),
    positions: Sequence[int] | None = None,
) -> list[DisambiguationOutcome]:
    """One outcome per noun, each from a fresh window centred on it.

    ``positions`` relabels outcomes (e.g. token offsets in the source document);
    defaults to the index in ``nouns``.
    """
    if positions is not None and len(positions) != len(nouns):
        raise ValueError("positions and nouns differ in length")
    outcomes = []
    for i in range(len(nouns)):
        lo, hi = window_bounds(len(nouns), i, cfg.window_size)
        out = disambiguate_window(t, nouns[lo:hi], i - lo, cfg)
        pos = positions[i] if positions is not None else i
        outcomes.append(replace(out, position=pos))
    return outcomes
