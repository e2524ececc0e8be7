"""Benchmark data model: parsing, validation, candidate extraction and statistics.

Corpus files are UTF-8 TSV with the header::

    ID  SET  CATEGORY  COMMON  SRC  REF-G  REF-N1  REF-N2  REF-N3

``SET`` is ``Set-N`` or ``Set-G``, ``CATEGORY`` is ``N``, ``M`` or ``F`` and
``COMMON`` is ``1`` for entries carrying three neutral references (``0``
leaves ``REF-N2``/``REF-N3`` empty).
"""

from __future__ import annotations

import enum
import io
import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean
from typing import IO, Callable, Iterable, Sequence

from .metrics import BleuConfig, bleu

HEADER = ("ID", "SET", "CATEGORY", "COMMON", "SRC", "REF-G", "REF-N1", "REF-N2", "REF-N3")
LEXICON_HEADER = ("PATTERN", "CLASS", "HINT")
REFERENCE_ROLES = ("REF-N1", "REF-N2", "REF-N3", "REF-G")


class SetTag(enum.Enum):
    SET_N = "Set-N"
    SET_G = "Set-G"


class GenderCategory(enum.Enum):
    NEUTRAL = "N"
    MASCULINE = "M"
    FEMININE = "F"

    @property
    def set_tag(self) -> SetTag:
        return SetTag.SET_N if self is GenderCategory.NEUTRAL else SetTag.SET_G


class CorpusFormatError(ValueError):
    def __init__(self, line: int | None, message: str):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    set_tag: SetTag
    category: GenderCategory
    common_set: bool
    source: str
    ref_g: str
    neutral_refs: tuple[str, ...]
    line: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "neutral_refs", tuple(self.neutral_refs))
        if self.category.set_tag is not self.set_tag:
            raise ValueError(
                f"entry {self.id}: category {self.category.value} is not allowed in {self.set_tag.value}"
            )
        expected = 3 if self.common_set else 1
        if len(self.neutral_refs) != expected:
            raise ValueError(
                f"entry {self.id}: {'common-set' if self.common_set else 'non-common'} entries need "
                f"{expected} neutral reference(s), got {len(self.neutral_refs)}"
            )
        for text in (self.id, self.source, self.ref_g, *self.neutral_refs):
            if "\t" in text or "\n" in text or "\r" in text:
                raise ValueError(f"entry {self.id}: fields may not contain tabs or newlines")


@dataclass(frozen=True)
class Corpus:
    entries: tuple[CorpusEntry, ...]
    name: str = "corpus"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for e in self.entries:
            if e.id in seen:
                raise ValueError(f"duplicate id {e.id!r}")
            seen.add(e.id)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_id(self) -> dict[str, CorpusEntry]:
        return {e.id: e for e in self.entries}

    def subset(self, set_tag: SetTag | None = None, common_only: bool = False) -> "Corpus":
        keep = [
            e
            for e in self.entries
            if (set_tag is None or e.set_tag is set_tag) and (not common_only or e.common_set)
        ]
        suffix = "" if set_tag is None else f"/{set_tag.value}"
        return Corpus(keep, self.name + ("/common" if common_only else "") + suffix)


# ------------------------------------------------------------------ TSV I/O


def _read_text(source: bytes | str | IO) -> str:
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, str):
        return source
    else:
        data = source.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(None, f"input is not valid UTF-8 ({exc})") from None


def parse_corpus(source: bytes | str | IO, name: str = "corpus") -> Corpus:
    """Parse the corpus TSV format, reporting the offending line on errors.

    Structural problems (column count, codes, set/category mismatch,
    reference counts, duplicate ids) raise :class:`CorpusFormatError`.
    Content problems such as empty sentences or identical references are
    left to :func:`validate`.
    """
    text = _read_text(source)
    lines = [l[:-1] if l.endswith("\r") else l for l in text.split("\n")]
    if not lines or tuple(lines[0].split("\t")) != HEADER:
        raise CorpusFormatError(1, "missing or malformed header; expected " + "\t".join(HEADER))
    entries: list[CorpusEntry] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        cols = line.split("\t")
        if len(cols) != len(HEADER):
            raise CorpusFormatError(lineno, f"expected {len(HEADER)} columns, got {len(cols)}")
        id_, set_code, cat_code, common, src, ref_g, n1, n2, n3 = cols
        try:
            set_tag = SetTag(set_code)
        except ValueError:
            raise CorpusFormatError(lineno, f"invalid SET {set_code!r}") from None
        try:
            category = GenderCategory(cat_code)
        except ValueError:
            raise CorpusFormatError(lineno, f"invalid CATEGORY {cat_code!r}") from None
        if category.set_tag is not set_tag:
            raise CorpusFormatError(
                lineno, f"category/set mismatch: {cat_code} is not allowed in {set_code}"
            )
        if common not in ("0", "1"):
            raise CorpusFormatError(lineno, f"invalid COMMON {common!r}")
        if common == "1":
            if not (n1 and n2 and n3):
                raise CorpusFormatError(lineno, "common-set row lacks 3 neutral references")
            refs = (n1, n2, n3)
        else:
            if n2 or n3:
                raise CorpusFormatError(lineno, "REF-N2/REF-N3 must be empty when COMMON=0")
            refs = (n1,)
        if id_ in seen:
            raise CorpusFormatError(lineno, f"duplicate id {id_!r} (first seen on line {seen[id_]})")
        seen[id_] = lineno
        entries.append(CorpusEntry(id_, set_tag, category, common == "1", src, ref_g, refs, line=lineno))
    return Corpus(entries, name)


def load_corpus(path) -> Corpus:
    p = Path(path)
    return parse_corpus(p.read_bytes(), name=p.stem)


def serialize_corpus(corpus: Corpus) -> str:
    out = io.StringIO()
    out.write("\t".join(HEADER) + "\n")
    for e in corpus.entries:
        refs = list(e.neutral_refs) + [""] * (3 - len(e.neutral_refs))
        row = [e.id, e.set_tag.value, e.category.value, "1" if e.common_set else "0", e.source, e.ref_g, *refs]
        out.write("\t".join(row) + "\n")
    return out.getvalue()


# --------------------------------------------------------------- validation


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    entry_id: str | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "entry_id": self.entry_id, "details": self.details}


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings

    def codes(self) -> list[str]:
        return [f.code for f in self.findings]

    def to_dict(self) -> dict:
        return {"valid": self.ok, "findings": [f.to_dict() for f in self.findings]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def _balance(findings, code, label, a_name, a, b_name, b, tolerance):
    if abs(a - b) > tolerance:
        findings.append(
            Finding(
                code,
                f"{label}: {a_name}={a} vs {b_name}={b} (tolerance {tolerance})",
                details={a_name: a, b_name: b, "tolerance": tolerance},
            )
        )


def validate(corpus: Corpus, tolerance: int = 0) -> ValidationReport:
    """Collect every problem with ``corpus``; an empty report means valid."""
    findings: list[Finding] = []
    if not corpus.entries:
        return ValidationReport((Finding("empty-corpus", "corpus has no entries"),))
    for e in corpus.entries:
        for fname, value in [("SRC", e.source), ("REF-G", e.ref_g)] + [
            (f"REF-N{i}", r) for i, r in enumerate(e.neutral_refs, 1)
        ]:
            if not value.strip():
                findings.append(Finding("empty-field", f"{fname} is empty", e.id, {"field": fname}))
        for i, r in enumerate(e.neutral_refs, 1):
            if r == e.ref_g:
                findings.append(
                    Finding("identical-references", f"REF-G equals REF-N{i}", e.id, {"field": f"REF-N{i}"})
                )

    def counts(entries):
        n = sum(1 for e in entries if e.set_tag is SetTag.SET_N)
        return n, len(entries) - n

    n, g = counts(corpus.entries)
    _balance(findings, "set-imbalance", "Set-N/Set-G imbalance", "set_n", n, "set_g", g, tolerance)
    f = sum(1 for e in corpus.entries if e.category is GenderCategory.FEMININE)
    m = sum(1 for e in corpus.entries if e.category is GenderCategory.MASCULINE)
    _balance(findings, "gender-imbalance", "F/M imbalance in Set-G", "feminine", f, "masculine", m, tolerance)
    common = [e for e in corpus.entries if e.common_set]
    if common:
        cn, cg = counts(common)
        _balance(
            findings, "common-set-imbalance", "common-set Set-N/Set-G imbalance", "set_n", cn, "set_g", cg, tolerance
        )
    return ValidationReport(tuple(findings))


# ---------------------------------------------------------- cue extraction


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Cue:
    pattern: str
    cue_class: str  # "gendered" | "neutral"
    hint: GenderCategory | None
    regex: re.Pattern = field(compare=False, repr=False)


@dataclass(frozen=True)
class CueLexicon:
    gendered_cues: tuple[Cue, ...]
    neutral_cues: tuple[Cue, ...]

    def __len__(self):
        return len(self.gendered_cues) + len(self.neutral_cues)

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, str, str]]) -> "CueLexicon":
        gendered, neutral = [], []
        roles: dict[str, str] = {}
        for n, (pattern, cue_class, hint) in enumerate(rows, 1):
            if cue_class not in ("gendered", "neutral"):
                raise LexiconError(f"cue {n}: CLASS must be 'gendered' or 'neutral', got {cue_class!r}")
            if hint not in ("M", "F", "-"):
                raise LexiconError(f"cue {n}: HINT must be M, F or -, got {hint!r}")
            if cue_class == "neutral" and hint != "-":
                raise LexiconError(f"cue {n}: neutral cues take no category hint")
            if roles.get(pattern, cue_class) != cue_class:
                raise LexiconError(f"cue {n}: pattern {pattern!r} listed as both gendered and neutral")
            roles[pattern] = cue_class
            try:
                regex = re.compile(r"\b(?:" + pattern + r")\b")
            except re.error as exc:
                raise LexiconError(f"cue {n}: invalid pattern {pattern!r}: {exc}") from None
            cue = Cue(pattern, cue_class, None if hint == "-" else GenderCategory(hint), regex)
            (gendered if cue_class == "gendered" else neutral).append(cue)
        return cls(tuple(gendered), tuple(neutral))


def load_lexicon(source: bytes | str | IO) -> CueLexicon:
    """Read a cue lexicon TSV (PATTERN, CLASS, HINT; header required)."""
    text = _read_text(source)
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith("#")]
    if not lines or tuple(lines[0].split("\t")) != LEXICON_HEADER:
        raise LexiconError("cue lexicon needs the header PATTERN\\tCLASS\\tHINT")
    rows = []
    for line in lines[1:]:
        cols = line.split("\t")
        if len(cols) != 3:
            raise LexiconError(f"malformed lexicon row {line!r}")
        rows.append(tuple(cols))
    return CueLexicon.from_rows(rows)


def starter_lexicon() -> CueLexicon:
    from importlib.resources import files

    return load_lexicon(files("nevl.data").joinpath("cue_lexicon.tsv").read_bytes())


@dataclass(frozen=True)
class Candidate:
    source: str
    target: str
    set_tag: SetTag
    gendered_cues: tuple[str, ...]
    neutral_cues: tuple[str, ...]
    category_hint: GenderCategory | None = None


def _matches(cues: Sequence[Cue], text: str) -> tuple[list[str], set]:
    found, hints = [], set()
    for cue in cues:
        for m in cue.regex.finditer(text):
            found.append(m.group(0))
            if cue.hint is not None:
                hints.add(cue.hint)
    return found, hints


def extract_candidates(segments: Iterable[tuple[str, str]], lexicon: CueLexicon) -> list[Candidate]:
    """Propose Set-G/Set-N membership for parallel segments from source-side cues.

    Any gendered cue makes a segment Set-G; otherwise any neutral cue makes
    it Set-N; segments matching neither are dropped. Both cue lists are
    kept so mixed cases can be reviewed by hand.
    """
    if len(lexicon) == 0:
        raise LexiconError("cue lexicon is empty")
    out = []
    for source, target in segments:
        gendered, hints = _matches(lexicon.gendered_cues, source)
        neutral, _ = _matches(lexicon.neutral_cues, source)
        if gendered:
            hint = next(iter(hints)) if len(hints) == 1 else None
            out.append(Candidate(source, target, SetTag.SET_G, tuple(gendered), tuple(neutral), hint))
        elif neutral:
            out.append(Candidate(source, target, SetTag.SET_N, (), tuple(neutral), GenderCategory.NEUTRAL))
    return out


# --------------------------------------------------------------- statistics


def _is_punct(token: str) -> bool:
    return all(unicodedata.category(ch).startswith("P") for ch in token)


def content_length(text: str) -> int:
    """Whitespace token count, ignoring punctuation-only tokens."""
    return sum(1 for tok in text.split() if not _is_punct(tok))


@dataclass(frozen=True)
class SetStats:
    sentences: int
    neutral_refs: int
    avg_source_length: float | None
    avg_ref_g_length: float | None
    avg_neutral_ref_length: float | None
    gendered_words: int | None = None

    def to_dict(self) -> dict:
        return {
            "sentences": self.sentences,
            "neutral_refs": self.neutral_refs,
            "avg_source_length": self.avg_source_length,
            "avg_ref_g_length": self.avg_ref_g_length,
            "avg_neutral_ref_length": self.avg_neutral_ref_length,
            "gendered_words": self.gendered_words,
        }


@dataclass(frozen=True)
class CorpusStats:
    per_set: dict[SetTag, SetStats]

    def to_dict(self) -> dict:
        return {tag.value: self.per_set[tag].to_dict() for tag in SetTag}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def stats(corpus: Corpus) -> CorpusStats:
    """Per-set counts and average lengths, punctuation excluded.

    Every neutral reference counts separately, so a common-set entry
    contributes three neutral sentences. Averages are None for empty sets.
    """
    per_set = {}
    for tag in SetTag:
        entries = [e for e in corpus.entries if e.set_tag is tag]
        neutral = [r for e in entries for r in e.neutral_refs]
        per_set[tag] = SetStats(
            sentences=len(entries),
            neutral_refs=len(neutral),
            avg_source_length=fmean(content_length(e.source) for e in entries) if entries else None,
            avg_ref_g_length=fmean(content_length(e.ref_g) for e in entries) if entries else None,
            avg_neutral_ref_length=fmean(content_length(r) for r in neutral) if neutral else None,
        )
    return CorpusStats(per_set)


# ---------------------------------------------------- reference variability

Scorer = Callable[[Sequence[str], Sequence[Sequence[str]]], float]


def _default_scorer(hyps, refs) -> float:
    return bleu(hyps, refs, BleuConfig()).value


@dataclass(frozen=True)
class VariabilityMatrix:
    """``cells[r][c]``: score of role ``c`` as candidate against role ``r`` as reference."""

    roles: tuple[str, ...]
    cells: tuple[tuple[float | None, ...], ...]

    def __getitem__(self, key: tuple[str, str]) -> float | None:
        ref_role, cand_role = key
        return self.cells[self.roles.index(ref_role)][self.roles.index(cand_role)]

    def defined(self) -> list[float]:
        return [v for row in self.cells for v in row if v is not None]

    def to_dict(self) -> dict:
        return {"roles": list(self.roles), "cells": [list(r) for r in self.cells]}


def reference_variability(corpus: Corpus, scorer: Scorer | None = None) -> dict[SetTag, VariabilityMatrix]:
    """Score every reference role against every other, per set, over common-set entries.

    ``corpus`` must contain only entries with three neutral references
    (use ``corpus.subset(common_only=True)``). Sets with no entries are
    omitted from the result.
    """
    scorer = scorer or _default_scorer
    for e in corpus.entries:
        if len(e.neutral_refs) < 3:
            raise ValueError(f"entry {e.id} has {len(e.neutral_refs)} neutral reference(s); 3 are required")
    result = {}
    for tag in SetTag:
        entries = [e for e in corpus.entries if e.set_tag is tag]
        if not entries:
            continue
        texts = {role: [] for role in REFERENCE_ROLES}
        for e in entries:
            for i in range(3):
                texts[f"REF-N{i + 1}"].append(e.neutral_refs[i])
            texts["REF-G"].append(e.ref_g)
        rows = []
        for ref_role in REFERENCE_ROLES:
            row = []
            for cand_role in REFERENCE_ROLES:
                if ref_role == cand_role:
                    row.append(None)
                else:
                    row.append(scorer(texts[cand_role], [[t] for t in texts[ref_role]]))
            rows.append(tuple(row))
        result[tag] = VariabilityMatrix(REFERENCE_ROLES, tuple(rows))
    return result
