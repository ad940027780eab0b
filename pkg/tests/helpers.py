"""Taxonomy generators and brute-force oracles shared by the tests.

Nothing here calls into the statistics or selection code under test, except to
build a Taxonomy object from synsets.
"""

from __future__ import annotations

import functools
import random
from pathlib import Path

from cdwsd.taxonomy import Synset, Taxonomy

DATA = Path(__file__).parent / "data"


def build(edges: dict[str, list[str]], words: dict[str, list[str]] | None = None, senses=()) -> Taxonomy:
    """Taxonomy from {id: [hypernyms]}; each synset's lemma defaults to its id."""
    words = words or {}
    return Taxonomy.from_synsets(
        [Synset(sid, tuple(h), tuple(words.get(sid, [sid]))) for sid, h in edges.items()], senses
    )


def taxonomy_text(edges: dict[str, list[str]], words: dict[str, list[str]] | None = None) -> str:
    words = words or {}
    return "".join(
        f"SYNSET\t{sid}\t{','.join(h)}\t{','.join(words.get(sid, [sid]))}\n" for sid, h in edges.items()
    )


def perfect_tree(k: int, h: int, prefix: str = "n") -> dict[str, list[str]]:
    edges = {f"{prefix}0": []}
    level = [f"{prefix}0"]
    count = 1
    for _ in range(h - 1):
        nxt = []
        for parent in level:
            for _ in range(k):
                sid = f"{prefix}{count}"
                count += 1
                edges[sid] = [parent]
                nxt.append(sid)
        level = nxt
    return edges


DIAMOND = {"root": [], "left": ["root"], "right": ["root"], "bottom": ["left", "right"]}
CHAIN = {"root": [], "mid": ["root"], "leaf": ["mid"]}


def random_dag(rng: random.Random, n: int, max_parents: int = 3, root_prob: float = 0.05):
    """Random DAG over ids s0..s{n-1}; hypernyms always point to lower ids."""
    edges: dict[str, list[str]] = {"s0": []}
    for i in range(1, n):
        if rng.random() < root_prob:
            edges[f"s{i}"] = []
            continue
        k = rng.randint(1, min(max_parents, i))
        edges[f"s{i}"] = [f"s{j}" for j in rng.sample(range(i), k)]
    return edges


def random_lexicon(rng: random.Random, edges, n_lemmas: int):
    """Attach one lemma from a small pool to every synset (polysemy arises naturally)."""
    lemmas = [f"w{i}" for i in range(n_lemmas)]
    return {sid: [rng.choice(lemmas)] for sid in edges}


# ---------------------------------------------------------------- oracles

def children_of(edges):
    kids = {sid: [] for sid in edges}
    for sid, hs in edges.items():
        for h in hs:
            kids[h].append(sid)
    return kids


def brute_below(edges, c) -> set[str]:
    kids = children_of(edges)
    seen, frontier = {c}, [c]
    while frontier:
        nxt = []
        for x in frontier:
            for k in kids[x]:
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        frontier = nxt
    return seen


def brute_above(edges, c) -> set[str]:
    seen, frontier = {c}, [c]
    while frontier:
        frontier = [h for x in frontier for h in edges[x] if h not in seen]
        seen.update(frontier)
    return seen


def brute_height(edges, c) -> int:
    """Longest downward path, by recursion over hyponym lists (memoized per call)."""
    kids = children_of(edges)

    @functools.cache
    def longest(x):
        return 1 + max((longest(k) for k in kids[x]), default=0)

    return longest(c)


def bisect_nhyp(descendants: int, height: int) -> float:
    if height == 1:
        return 0.0
    lo, hi = 0.0, float(descendants)
    for _ in range(200):
        mid = (lo + hi) / 2
        if sum(mid**i for i in range(height)) < descendants:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2
    # integer roots checked exactly in integer arithmetic
    k = round(x)
    if sum(k**i for i in range(height)) == descendants:
        return float(k)
    return x


def direct_density(descendants, nhyp, m, alpha=0.20, beta=0.0) -> float:
    base = nhyp + beta
    return sum(1.0 if i == 0 else base ** (i**alpha) for i in range(m)) / descendants


def naive_disambiguate(t: Taxonomy, window, target: int, alpha=0.20, beta=0.0):
    """Reference engine: recomputes reachability, stats and marks on every iteration.

    Returns (remaining senses of target, original sense count).
    """
    edges = {sid: list(s.hypernyms) for sid, s in t.synsets.items()}
    senses = [list(t.senses(w)) for w in window]
    original = [len(s) for s in senses]
    settled = [False] * len(window)
    blocked: set[str] = set()
    while True:
        best = None
        for c in sorted(edges):
            if c in blocked:
                continue
            sub = brute_below(edges, c)
            m = sum(1 for i, ss in enumerate(senses) if not settled[i] for s in ss if s in sub)
            if m < 2:
                continue
            d = len(sub)
            density = direct_density(d, bisect_nhyp(d, brute_height(edges, c)), m, alpha, beta)
            key = (-density, -m, d, c)
            if best is None or key < best:
                best = key
        if best is None:
            break
        c = best[3]
        sub = brute_below(edges, c)
        for i, ss in enumerate(senses):
            if settled[i]:
                continue
            under = [s for s in ss if s in sub]
            if under:
                senses[i] = under
                settled[i] = True
        blocked |= sub
    return senses[target], original[target]


# ---------------------------------------------------------------- corpora

def lexicon(sense_counts: dict[str, int]) -> Taxonomy:
    """One flat root per sense; lemma ``w`` gets synsets w.1..w.k keyed noun.x.{i-1}."""
    synsets, senses = [], []
    for lemma, k in sense_counts.items():
        for i in range(1, k + 1):
            sid = f"{lemma}.{i}"
            synsets.append(Synset(sid, (), (lemma,)))
            senses.append((lemma, i, sid, f"noun.x.{i - 1}"))
    return Taxonomy.from_synsets(synsets, senses)


def gold_doc(items: list[tuple[str, int]]):
    """Document of NN tokens; ``items`` are (lemma, gold sense number)."""
    from cdwsd.corpus import Document, GoldToken

    return Document([GoldToken(lemma, "NN", f"noun.x.{n - 1}") for lemma, n in items])


def wordnet_like(rng: random.Random, n: int = 60_000, n_lemmas: int = 45_000, roots: int = 9):
    """Large bushy DAG: depths up to 15, ~2% multiple inheritance, Zipf-ish polysemy.

    Returns (edges, words, polysemous lemma pool).
    """
    edges: dict[str, list[str]] = {f"s{i}": [] for i in range(roots)}
    depth = {f"s{i}": 1 for i in range(roots)}
    ids = list(edges)
    for i in range(roots, n):
        # prefer recent synsets as parents so chains get deep
        parent = ids[min(len(ids) - 1, int(len(ids) * (1 - rng.random() ** 3)))] if rng.random() < 0.9 else rng.choice(ids)
        while depth[parent] >= 14:
            parent = rng.choice(ids[:roots * 50])
        hs = [parent]
        if rng.random() < 0.02:
            other = rng.choice(ids)
            if other != parent and depth[other] < 14:
                hs.append(other)
        sid = f"s{i}"
        edges[sid] = hs
        depth[sid] = 1 + max(depth[h] for h in hs)
        ids.append(sid)
    words = {sid: [f"w{rng.randrange(n_lemmas)}"] for sid in edges}
    lemma_senses: dict[str, int] = {}
    for ws in words.values():
        lemma_senses[ws[0]] = lemma_senses.get(ws[0], 0) + 1
    # add extra senses to a pool of frequent words so text nouns are polysemous
    pool = [f"p{i}" for i in range(1500)]
    sids = list(edges)
    for j, lemma in enumerate(pool):
        for sid in rng.sample(sids, 1 + min(25, int(2 / (rng.random() + 0.06)))):
            words[sid] = words[sid] + [lemma]
    return edges, words, pool
