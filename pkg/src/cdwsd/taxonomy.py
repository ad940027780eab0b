"""Noun taxonomy: loading, validation and per-concept subhierarchy statistics.

The interchange format is line based and tab separated::

    SYNSET  <id>  <hypernym ids, comma separated>  <lemmas, comma separated>  [gloss]
    SENSE   <lemma>  <sense number>  <synset id>  <sense key>

Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

#: Deepest hierarchy observed in WordNet 1.4 nouns; deeper taxonomies only warn.
MAX_EXPECTED_HEIGHT = 16

NHYP_TOLERANCE = 1e-9
NHYP_MAX_ITER = 200


class TaxonomyError(ValueError):
    """Raised for malformed or structurally invalid taxonomies."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DanglingReferenceError(TaxonomyError):
    pass


class DuplicateSynsetError(TaxonomyError):
    pass


class CycleError(TaxonomyError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("hypernym cycle: " + " -> ".join(cycle + cycle[:1]))


class UnknownSynsetError(KeyError):
    pass


def normalize_lemma(lemma: str) -> str:
    """Lemma lookup is case-insensitive (``Police_Department`` == ``police_department``)."""
    return lemma.lower()


@dataclass(frozen=True)
class Synset:
    id: str
    hypernyms: tuple[str, ...]
    words: tuple[str, ...]
    gloss: str | None = None
    sense_keys: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ConceptStats:
    descendants: int
    height: int
    nhyp: float


def _geometric_sum(x: float, height: int) -> float:
    total = 0.0
    for _ in range(height):
        total = total * x + 1.0
    return total


@lru_cache(maxsize=None)
def solve_nhyp(descendants: int, height: int) -> float:
    """Branching factor of a regular tree with the given size and height.

    Returns the non-negative root of ``1 + x + ... + x**(height-1) == descendants``
    (0.0 for a single node). Safeguarded Newton inside a bisection bracket.
    """
    if descendants < 1 or height < 1:
        raise ValueError(f"need descendants >= 1 and height >= 1, got {descendants}, {height}")
    if descendants < height:
        raise ValueError(f"descendants ({descendants}) < height ({height}): corrupt stats")
    if height == 1:
        return 0.0
    if height == 2:
        return float(descendants - 1)
    if descendants == height:
        return 1.0

    target = float(descendants)
    # f(1) = height < target, so the root lies in (1, descendants]
    lo, hi = 1.0, target
    x = 1.0
    best, best_res = x, abs(_geometric_sum(x, height) - target)
    for _ in range(NHYP_MAX_ITER):
        # value and derivative by Horner
        f, df = 0.0, 0.0
        for _ in range(height):
            df = df * x + f
            f = f * x + 1.0
        res = f - target
        if abs(res) < best_res:
            best, best_res = x, abs(res)
        if res == 0.0:
            break
        if res < 0:
            lo = x
        else:
            hi = x
        step = x - res / df if df > 0 else None
        if step is None or not lo < step < hi:
            step = 0.5 * (lo + hi)
        if step == x or (best_res <= NHYP_TOLERANCE and abs(step - x) <= 4e-16 * x):
            break
        x = step
    # Newton is polished to rounding level; the tolerance is the contract, not the stop rule
    return _snap_integer(best, descendants, height)


def _snap_integer(x: float, descendants: int, height: int) -> float:
    # regular trees have integer branching; return it exactly when it fits
    r = round(x)
    if r >= 2 and sum(r**i for i in range(height)) == descendants:
        return float(r)
    return x


def _split_csv(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


@dataclass
class Taxonomy:
    """Immutable-by-convention noun taxonomy with precomputed statistics.

    Build with :func:`load_taxonomy` or :meth:`from_synsets`.
    """

    synsets: dict[str, Synset]
    hyponyms: dict[str, tuple[str, ...]]
    sense_index: dict[str, tuple[str, ...]]
    stats: dict[str, ConceptStats]
    warnings: list[str] = field(default_factory=list)
    _ancestors: dict[str, frozenset[str]] = field(default_factory=dict, repr=False)
    _key_to_synset: dict[tuple[str, str], str] = field(default_factory=dict, repr=False)
    _synset_to_key: dict[tuple[str, str], str] = field(default_factory=dict, repr=False)

    @classmethod
    def from_synsets(
        cls,
        synsets: Iterable[Synset],
        senses: Iterable[tuple[str, int, str, str]] = (),
        *,
        lines: Mapping[str, int] | None = None,
        sense_lines: Sequence[int] | None = None,
    ) -> "Taxonomy":
        """Validate and index.

        ``senses`` holds ``(lemma, sense_number, synset_id, sense_key)`` tuples.
        ``lines``/``sense_lines`` give source line numbers for error messages.
        """
        lines = lines or {}
        table: dict[str, Synset] = {}
        for s in synsets:
            if not s.id:
                raise TaxonomyError("empty synset id", lines.get(s.id))
            if s.id in table:
                raise DuplicateSynsetError(f"duplicate synset id {s.id!r}", lines.get(s.id))
            if not s.words:
                raise TaxonomyError(f"synset {s.id!r} has no lemmas", lines.get(s.id))
            table[s.id] = s

        children: dict[str, list[str]] = {sid: [] for sid in table}
        for s in table.values():
            for h in dict.fromkeys(s.hypernyms):
                if h not in table:
                    raise DanglingReferenceError(
                        f"synset {s.id!r} names unknown hypernym {h!r}", lines.get(s.id)
                    )
                children[h].append(s.id)

        order = _topological_order(table, children)

        ancestors: dict[str, frozenset[str]] = {}
        for sid in order:
            acc = {sid}
            for h in table[sid].hypernyms:
                acc |= ancestors[h]
            ancestors[sid] = frozenset(acc)

        counts: Counter[str] = Counter()
        for anc in ancestors.values():
            counts.update(anc)

        heights: dict[str, int] = {}
        for sid in reversed(order):
            kids = children[sid]
            heights[sid] = 1 + max((heights[k] for k in kids), default=0)

        stats = {
            sid: ConceptStats(counts[sid], heights[sid], solve_nhyp(counts[sid], heights[sid]))
            for sid in table
        }

        sense_index, key_to_synset, synset_to_key = _index_senses(table, senses, sense_lines)

        tax = cls(
            synsets=table,
            hyponyms={sid: tuple(kids) for sid, kids in children.items()},
            sense_index=sense_index,
            stats=stats,
            _ancestors=ancestors,
            _key_to_synset=key_to_synset,
            _synset_to_key=synset_to_key,
        )
        deepest = max(heights.values(), default=0)
        if deepest > MAX_EXPECTED_HEIGHT:
            tax.warnings.append(
                f"max height {deepest} exceeds {MAX_EXPECTED_HEIGHT} (WordNet noun maximum)"
            )
        if not table:
            tax.warnings.append("taxonomy is empty (0 synsets)")
        for w in tax.warnings:
            logger.warning(w)
        return tax

    def __len__(self) -> int:
        return len(self.synsets)

    def __contains__(self, sid: object) -> bool:
        return sid in self.synsets

    def _check(self, c: str) -> None:
        if c not in self.synsets:
            raise UnknownSynsetError(c)

    def descendants(self, c: str) -> int:
        self._check(c)
        return self.stats[c].descendants

    def height(self, c: str) -> int:
        self._check(c)
        return self.stats[c].height

    def nhyp(self, c: str) -> float:
        self._check(c)
        return self.stats[c].nhyp

    def ancestors(self, c: str) -> frozenset[str]:
        """Every synset reachable by hypernym links, ``c`` included."""
        self._check(c)
        return self._ancestors[c]

    def subhierarchy(self, c: str) -> set[str]:
        """Every synset reachable by hyponym links, ``c`` included."""
        self._check(c)
        seen = {c}
        stack = [c]
        while stack:
            for k in self.hyponyms[stack.pop()]:
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        return seen

    def roots(self) -> list[str]:
        return [sid for sid, s in self.synsets.items() if not s.hypernyms]

    def senses(self, lemma: str) -> tuple[str, ...]:
        """Synsets of ``lemma`` in sense-number order; empty if unknown."""
        return self.sense_index.get(normalize_lemma(lemma), ())

    def knows(self, lemma: str) -> bool:
        return normalize_lemma(lemma) in self.sense_index

    def synset_for_key(self, lemma: str, key: str) -> str | None:
        return self._key_to_synset.get((normalize_lemma(lemma), key))

    def sense_key(self, lemma: str, synset: str) -> str | None:
        return self._synset_to_key.get((normalize_lemma(lemma), synset))

    def word_count(self) -> int:
        return len(self.sense_index)


def _topological_order(table: Mapping[str, Synset], children: Mapping[str, list[str]]) -> list[str]:
    """Roots first. Raises CycleError naming one cycle."""
    indegree = {sid: len(set(s.hypernyms)) for sid, s in table.items()}
    ready = [sid for sid, d in indegree.items() if d == 0]
    order: list[str] = []
    while ready:
        sid = ready.pop()
        order.append(sid)
        for k in set(children[sid]):
            indegree[k] -= 1
            if indegree[k] == 0:
                ready.append(k)
    if len(order) == len(table):
        return order
    remaining = {sid for sid, d in indegree.items() if d > 0}
    raise CycleError(_find_cycle(table, remaining))


def _find_cycle(table: Mapping[str, Synset], remaining: set[str]) -> list[str]:
    # every remaining node has a remaining hypernym, so walking up must revisit
    start = min(remaining)
    path: list[str] = []
    pos: dict[str, int] = {}
    node = start
    while node not in pos:
        pos[node] = len(path)
        path.append(node)
        node = min(h for h in table[node].hypernyms if h in remaining)
    return path[pos[node]:]


def _index_senses(table, senses, sense_lines=None):
    senses = list(senses)
    if sense_lines is None:
        sense_lines = [None] * len(senses)
    explicit: dict[str, list[tuple[int, str]]] = {}
    key_to_synset: dict[tuple[str, str], str] = {}
    synset_to_key: dict[tuple[str, str], str] = {}
    for (lemma, number, sid, key), ln in zip(senses, sense_lines):
        norm = normalize_lemma(lemma)
        if sid not in table:
            raise DanglingReferenceError(f"sense {lemma}#{number} names unknown synset {sid!r}", ln)
        if norm not in {normalize_lemma(w) for w in table[sid].words}:
            raise TaxonomyError(f"sense {lemma}#{number}: lemma not among words of {sid!r}", ln)
        entries = explicit.setdefault(norm, [])
        if any(n == number for n, _ in entries):
            raise TaxonomyError(f"duplicate sense number {number} for lemma {lemma!r}", ln)
        if any(s == sid for _, s in entries):
            raise TaxonomyError(f"lemma {lemma!r} lists synset {sid!r} twice", ln)
        if (norm, key) in key_to_synset:
            raise TaxonomyError(f"duplicate sense key {key!r} for lemma {lemma!r}", ln)
        entries.append((number, sid))
        key_to_synset[(norm, key)] = sid
        synset_to_key[(norm, sid)] = key

    index: dict[str, list[str]] = {
        lemma: [sid for _, sid in sorted(entries)] for lemma, entries in explicit.items()
    }
    # lemmas with no SENSE lines take their synsets in file order
    implicit: dict[str, list[str]] = {}
    for sid, s in table.items():
        for w in s.words:
            norm = normalize_lemma(w)
            if norm in explicit:
                continue
            lst = implicit.setdefault(norm, [])
            if sid not in lst:
                lst.append(sid)
    index.update(implicit)
    return {k: tuple(v) for k, v in index.items()}, key_to_synset, synset_to_key


def load_taxonomy(source: IO[bytes] | IO[str]) -> Taxonomy:
    """Parse the interchange format from a byte (or text) stream."""
    data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TaxonomyError(f"not valid UTF-8: {exc}") from exc
    return parse_taxonomy(data)


def parse_taxonomy(text: str) -> Taxonomy:
    synsets: list[Synset] = []
    lines: dict[str, int] = {}
    senses: list[tuple[str, int, str, str]] = []
    sense_lines: list[int] = []
    keys: dict[str, list[tuple[str, str]]] = {}

    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        starts = [0]
        for f in fields[:-1]:
            starts.append(starts[-1] + len(f) + 1)

        def err(msg, i=0):
            return TaxonomyError(msg, lineno, starts[i] + 1 if i < len(starts) else len(line) + 1)

        kind = fields[0]
        if kind == "SYNSET":
            if len(fields) not in (4, 5):
                raise err(f"SYNSET needs 4 or 5 tab-separated fields, got {len(fields)}", min(len(fields), 4) - 1)
            sid = fields[1].strip()
            if not sid:
                raise err("empty synset id", 1)
            if sid in lines:
                raise DuplicateSynsetError(
                    f"duplicate synset id {sid!r} (first on line {lines[sid]})", lineno, starts[1] + 1
                )
            words = _split_csv(fields[3])
            if not words:
                raise err("synset has no lemmas", 3)
            gloss = fields[4] if len(fields) == 5 and fields[4] else None
            lines[sid] = lineno
            synsets.append(Synset(sid, tuple(_split_csv(fields[2])), tuple(words), gloss))
        elif kind == "SENSE":
            if len(fields) != 5:
                raise err(f"SENSE needs 5 tab-separated fields, got {len(fields)}", min(len(fields), 5) - 1)
            lemma, number, sid, key = (f.strip() for f in fields[1:])
            if not lemma:
                raise err("empty lemma", 1)
            try:
                n = int(number)
            except ValueError:
                raise err(f"sense number {number!r} is not an integer", 2) from None
            if n < 1:
                raise err("sense numbers are 1-based", 2)
            if not key:
                raise err("empty sense key", 4)
            senses.append((lemma, n, sid, key))
            sense_lines.append(lineno)
            keys.setdefault(sid, []).append((lemma, key))
        else:
            raise err(f"unknown record type {kind!r}")

    synsets = [
        Synset(s.id, s.hypernyms, s.words, s.gloss, tuple(keys.get(s.id, ()))) for s in synsets
    ]
    return Taxonomy.from_synsets(synsets, senses, lines=lines, sense_lines=sense_lines)


def dump_taxonomy(t: Taxonomy) -> str:
    """Serialize back to the interchange format."""
    out = []
    for s in t.synsets.values():
        row = ["SYNSET", s.id, ",".join(s.hypernyms), ",".join(s.words)]
        if s.gloss:
            row.append(s.gloss)
        out.append("\t".join(row))
    for norm, sids in t.sense_index.items():
        for n, sid in enumerate(sids, start=1):
            for lemma, key in t.synsets[sid].sense_keys:
                if normalize_lemma(lemma) == norm:
                    out.append("\t".join(["SENSE", lemma, str(n), sid, key]))
    return "\n".join(out) + "\n"
