"""Seed triplets: aligned neutral / masculine / feminine expressions."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib.resources import files
from typing import IO

from ..corpus import GenderCategory

log = logging.getLogger(__name__)

SEED_HEADER = ("NEUTRAL", "MASCULINE", "FEMININE", "TAGS")


class SeedLexiconError(ValueError):
    pass


@dataclass(frozen=True)
class SeedTriplet:
    id: str
    neutral: str
    masculine: str
    feminine: str
    morph_tags: frozenset[str] = frozenset()

    def __post_init__(self):
        forms = (self.neutral, self.masculine, self.feminine)
        for form in forms:
            if not form.strip():
                raise ValueError(f"seed {self.id}: empty form")
            if "\t" in form or "\n" in form:
                raise ValueError(f"seed {self.id}: forms may not contain tabs or newlines")
        if len(set(forms)) != 3:
            raise ValueError(f"seed {self.id}: the three forms must be pairwise distinct {forms}")
        object.__setattr__(self, "morph_tags", frozenset(self.morph_tags))

    def form(self, label: GenderCategory) -> str:
        return {
            GenderCategory.NEUTRAL: self.neutral,
            GenderCategory.MASCULINE: self.masculine,
            GenderCategory.FEMININE: self.feminine,
        }[label]

    def tag(self, key: str) -> str | None:
        """Value of a ``key=value`` morph tag, if present."""
        for t in self.morph_tags:
            if t.startswith(key + "="):
                return t.split("=", 1)[1]
        return None


@dataclass(frozen=True)
class SeedLexicon:
    seeds: tuple[SeedTriplet, ...]
    duplicates_dropped: int = 0

    def __len__(self):
        return len(self.seeds)

    def __iter__(self):
        return iter(self.seeds)

    def by_id(self) -> dict[str, SeedTriplet]:
        return {s.id: s for s in self.seeds}


def load_seed_lexicon(source: bytes | str | IO) -> SeedLexicon:
    """Read a NEUTRAL/MASCULINE/FEMININE/TAGS TSV.

    Ids are assigned in file order (s0001, s0002, ...). Rows repeating an
    earlier triplet are dropped and counted. TAGS is a comma-separated
    list and may be empty.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [l.rstrip("\r") for l in text.split("\n")]
    header = tuple(lines[0].split("\t")) if lines else ()
    missing = [c for c in SEED_HEADER if c not in header]
    if missing:
        raise SeedLexiconError(f"seed lexicon is missing column(s): {', '.join(missing)}")
    col = {name: header.index(name) for name in SEED_HEADER}
    seeds, seen, dropped = [], set(), 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != len(header):
            raise SeedLexiconError(f"line {lineno}: expected {len(header)} columns, got {len(cols)}")
        n, m, f = cols[col["NEUTRAL"]], cols[col["MASCULINE"]], cols[col["FEMININE"]]
        if (n, m, f) in seen:
            dropped += 1
            continue
        seen.add((n, m, f))
        tags = frozenset(t.strip() for t in cols[col["TAGS"]].split(",") if t.strip())
        try:
            seeds.append(SeedTriplet(f"s{len(seeds) + 1:04d}", n, m, f, tags))
        except ValueError as exc:
            raise SeedLexiconError(f"line {lineno}: {exc}") from None
    if dropped:
        log.warning("dropped %d duplicate seed triplet(s)", dropped)
    return SeedLexicon(tuple(seeds), dropped)


def starter_seeds() -> SeedLexicon:
    return load_seed_lexicon(files("nevl.data").joinpath("seed_lexicon.tsv").read_bytes())
