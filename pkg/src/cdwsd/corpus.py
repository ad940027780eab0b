"""Readers for sense-tagged SemCor-style text and plain lemma streams.

The tagged grammar is the simplified SemCor rendering::

    <s>
    <wd>jury</wd><sn>[noun.group.0]</sn><tag>NN</tag>
    <wd>prison_farms</wd><mwd>prison_farm</mwd><msn>[noun.artifact.0]</msn><tag>NN</tag>
    </s>

A token runs from ``<wd>`` to ``</tag>``. ``<mwd>``/``<msn>`` override the
lemma and gold key of the token they appear in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO

from .taxonomy import Taxonomy

TAGS = {"s", "wd", "sn", "tag", "mwd", "msn"}
_TOKEN_RE = re.compile(r"<(/?)([A-Za-z][A-Za-z0-9_]*)>|([^<]+)|(<)")
_KEY_RE = re.compile(r"^(?P<lexfile>[^\s\[\]]+?)\.(?P<number>\d+)$")


class SemcorSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class GoldToken:
    lemma: str
    pos_tag: str
    gold_key: str | None = None
    multiword_surface: str | None = None
    sentence_index: int = 0

    def __post_init__(self):
        if self.gold_key is not None and not _KEY_RE.match(self.gold_key):
            raise ValueError(f"malformed sense key {self.gold_key!r}")


@dataclass
class Document:
    tokens: list[GoldToken] = field(default_factory=list)
    source_id: str = ""


@dataclass
class NounReport:
    tokens: int = 0
    nouns: int = 0
    not_in_taxonomy: int = 0
    monosemous: int = 0

    @property
    def kept(self) -> int:
        return self.nouns - self.not_in_taxonomy


def _read_text(source: IO[bytes] | IO[str] | str) -> str:
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _lex(text: str):
    line = 1
    for m in _TOKEN_RE.finditer(text):
        closing, name, chunk, stray_lt = m.groups()
        if stray_lt:
            yield "text", "<", line
        elif name is not None:
            yield ("close" if closing else "open"), name, line
        else:
            yield "text", chunk, line
            line += chunk.count("\n")


def parse_semcor(source, source_id: str = "", strict: bool = True) -> Document:
    """Parse tagged text. ``strict=False`` skips unknown tags instead of failing."""
    doc = Document(source_id=source_id)
    sentence = -1
    in_sentence = False
    group: dict | None = None
    open_el: tuple[str, int] | None = None  # element inside a group, with its start line
    buf: list[str] = []

    def finish(el, line):
        text = "".join(buf).strip()
        if el in ("sn", "msn"):
            if not (text.startswith("[") and text.endswith("]")):
                raise SemcorSyntaxError(f"<{el}> payload {text!r} is not bracketed", line)
            text = text[1:-1].strip()
            if not _KEY_RE.match(text):
                raise SemcorSyntaxError(f"malformed sense key {text!r}", line)
        elif not text:
            raise SemcorSyntaxError(f"empty <{el}>", line)
        if el in group:
            raise SemcorSyntaxError(f"repeated <{el}> in one token", line)
        group[el] = text

    for kind, value, line in _lex(_read_text(source)):
        if kind == "text":
            if open_el is not None:
                buf.append(value)
            elif value.strip():
                lead = len(value) - len(value.lstrip())
                raise SemcorSyntaxError(f"stray text {value.strip()[:30]!r}", line + value[:lead].count("\n"))
            continue
        if value not in TAGS:
            if strict:
                raise SemcorSyntaxError(f"unknown tag <{'/' if kind == 'close' else ''}{value}>", line)
            continue

        if kind == "open":
            if open_el is not None:
                raise SemcorSyntaxError(f"<{value}> inside <{open_el[0]}>", line)
            if value == "s":
                if in_sentence:
                    raise SemcorSyntaxError("nested <s>", line)
                in_sentence = True
                sentence += 1
                continue
            if not in_sentence:
                raise SemcorSyntaxError(f"<{value}> outside <s>", line)
            if value == "wd":
                if group is not None:
                    raise SemcorSyntaxError("<wd> before previous token's <tag>", line)
                group = {}
            elif group is None:
                raise SemcorSyntaxError(f"<{value}> before <wd>", line)
            open_el = (value, line)
            buf = []
        else:
            if value == "s":
                if open_el is not None or group is not None:
                    raise SemcorSyntaxError("</s> inside an unfinished token", line)
                if not in_sentence:
                    raise SemcorSyntaxError("</s> without <s>", line)
                in_sentence = False
                continue
            if open_el is None or open_el[0] != value:
                raise SemcorSyntaxError(f"unexpected </{value}>", line)
            finish(value, line)
            open_el = None
            if value == "tag":
                doc.tokens.append(_make_token(group, sentence))
                group = None

    if open_el is not None or group is not None or in_sentence:
        raise SemcorSyntaxError("unexpected end of input", line)
    return doc


def _make_token(group: dict, sentence: int) -> GoldToken:
    surface = group["wd"]
    lemma = group.get("mwd", surface)
    key = group.get("msn", group.get("sn"))
    return GoldToken(
        lemma=lemma,
        pos_tag=group["tag"],
        gold_key=key,
        multiword_surface=surface if "mwd" in group else None,
        sentence_index=sentence,
    )


def dump_semcor(doc: Document) -> str:
    """Serialize in the grammar read by :func:`parse_semcor`."""
    by_sentence: dict[int, list[GoldToken]] = {}
    for tok in doc.tokens:
        by_sentence.setdefault(tok.sentence_index, []).append(tok)
    out = []
    last = max(by_sentence, default=-1)
    for i in range(last + 1):
        out.append("<s>")
        for tok in by_sentence.get(i, ()):
            if tok.multiword_surface is not None:
                parts = [f"<wd>{tok.multiword_surface}</wd>", f"<mwd>{tok.lemma}</mwd>"]
                if tok.gold_key is not None:
                    parts.append(f"<msn>[{tok.gold_key}]</msn>")
            else:
                parts = [f"<wd>{tok.lemma}</wd>"]
                if tok.gold_key is not None:
                    parts.append(f"<sn>[{tok.gold_key}]</sn>")
            parts.append(f"<tag>{tok.pos_tag}</tag>")
            out.append("".join(parts))
        out.append("</s>")
    return "\n".join(out) + ("\n" if out else "")


def parse_plain(source) -> list[str]:
    return _read_text(source).split()


def is_noun_tag(tag: str) -> bool:
    return tag.startswith("NN")


def extract_nouns(doc: Document, t: Taxonomy) -> tuple[list[tuple[int, str]], NounReport]:
    """Nouns known to the taxonomy, as (token position, lemma)."""
    report = NounReport(tokens=len(doc.tokens))
    kept = []
    for pos, tok in enumerate(doc.tokens):
        if not is_noun_tag(tok.pos_tag):
            continue
        report.nouns += 1
        senses = t.senses(tok.lemma)
        if not senses:
            report.not_in_taxonomy += 1
            continue
        if len(senses) == 1:
            report.monosemous += 1
        kept.append((pos, tok.lemma))
    return kept, report


def filter_known(lemmas: list[str], t: Taxonomy) -> tuple[list[tuple[int, str]], list[str]]:
    """Split a plain lemma stream into known (position, lemma) pairs and unknown lemmas."""
    known, unknown = [], []
    for pos, lemma in enumerate(lemmas):
        if t.knows(lemma):
            known.append((pos, lemma))
        else:
            unknown.append(lemma)
    return known, unknown
