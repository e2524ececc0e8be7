"""Prompt templates for the two generation rounds and the completion parser.

Both rounds use the same answer format so that parsing is deterministic::

    3.
    N: <neutral sentence>
    M: <masculine sentence>
    F: <feminine sentence>

The number refers to the request item; an item may be answered by
several such blocks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .seeds import SeedTriplet


@dataclass(frozen=True)
class SentenceTriplet:
    seed_id: str
    neutral: str
    masculine: str
    feminine: str
    round: str = "R1"


@dataclass(frozen=True)
class FewShotExample:
    neutral_seed: str
    masculine_seed: str
    feminine_seed: str
    neutral: str
    masculine: str
    feminine: str


DEFAULT_FEW_SHOT = (
    FewShotExample(
        "il personale impiegato",
        "l'impiegato",
        "l'impiegata",
        "Il personale impiegato ha chiesto un nuovo orario di lavoro.",
        "L'impiegato ha chiesto un nuovo orario di lavoro.",
        "L'impiegata ha chiesto un nuovo orario di lavoro.",
    ),
    FewShotExample(
        "tutte le persone che insegnano",
        "tutti i professori",
        "tutte le professoresse",
        "Domani la preside incontrerà tutte le persone che insegnano nella scuola.",
        "Domani la preside incontrerà tutti i professori della scuola.",
        "Domani la preside incontrerà tutte le professoresse della scuola.",
    ),
)

ROUND1_INSTRUCTIONS = """\
You write Italian sentences for a corpus about gender-neutral language.
Each numbered item gives three Italian expressions that refer to people: a gender-neutral one (N), a masculine one (M) and a feminine one (F).
For every item, write {n} different sentence triplets. In each triplet the N, M and F sentences must be identical except for the given expression and any agreement it strictly requires.
Use each expression exactly as given. Vary topics and sentence structure across triplets.
Answer only with blocks of this form, one block per triplet:
<item number>.
N: <sentence with the neutral expression>
M: <sentence with the masculine expression>
F: <sentence with the feminine expression>"""

ROUND2_INSTRUCTIONS = """\
You rewrite Italian sentence triplets for a corpus about gender-neutral language.
Each numbered item gives a triplet of sentences (N, M, F) that differ only in how people are referred to.
For every item, write {n} rewritten triplets that add context and make the sentences longer and more varied. Keep the referring expression of each line exactly as it appears, and keep the three sentences identical everywhere else.
Answer only with blocks of this form, one block per rewritten triplet:
<item number>.
N: <rewritten neutral sentence>
M: <rewritten masculine sentence>
F: <rewritten feminine sentence>"""


def _example_block(k: int, ex: FewShotExample) -> str:
    return (
        f"{k}. N: {ex.neutral_seed} | M: {ex.masculine_seed} | F: {ex.feminine_seed}\n"
        f"Answer:\n{k}.\nN: {ex.neutral}\nM: {ex.masculine}\nF: {ex.feminine}"
    )


def build_round1_prompt(
    batch: Sequence[SeedTriplet], few_shot: Sequence[FewShotExample] = DEFAULT_FEW_SHOT, per_seed: int = 1
) -> str:
    if not batch:
        raise ValueError("round-1 prompt needs at least one seed triplet")
    if not few_shot:
        raise ValueError("round-1 prompt needs at least one few-shot example")
    parts = [ROUND1_INSTRUCTIONS.format(n=per_seed), "", "Examples:"]
    parts += [_example_block(k, ex) for k, ex in enumerate(few_shot, 1)]
    parts += ["", "Items:"]
    parts += [f"{k}. N: {s.neutral} | M: {s.masculine} | F: {s.feminine}" for k, s in enumerate(batch, 1)]
    return "\n".join(parts) + "\n"


def build_round2_prompt(batch: Sequence[SentenceTriplet], rewrites: int = 1) -> str:
    if not batch:
        raise ValueError("round-2 prompt needs at least one sentence triplet")
    parts = [ROUND2_INSTRUCTIONS.format(n=rewrites), "", "Items:"]
    for k, t in enumerate(batch, 1):
        parts.append(f"{k}.\nN: {t.neutral}\nM: {t.masculine}\nF: {t.feminine}")
    return "\n".join(parts) + "\n"


_ITEM = re.compile(r"^\s*(\d+)\s*[.)]\s*$")
_LINE = re.compile(r"^\s*([NMF])\s*:\s*(.*?)\s*$")


@dataclass(frozen=True)
class ParsedCompletion:
    blocks: tuple[tuple[int, str, str, str], ...]  # (item number, N, M, F)
    skipped: int


def parse_completion(text: str, n_items: int) -> ParsedCompletion:
    """Extract complete N/M/F blocks; incomplete or out-of-range blocks are counted as skipped."""
    blocks, skipped = [], 0
    item, lines = None, {}

    def flush():
        nonlocal skipped
        if item is None:
            return
        if set(lines) == {"N", "M", "F"} and all(lines.values()) and 1 <= item <= n_items:
            blocks.append((item, lines["N"], lines["M"], lines["F"]))
        else:
            skipped += 1

    for raw in text.splitlines():
        if not raw.strip():
            continue
        m = _ITEM.match(raw)
        if m:
            flush()
            item, lines = int(m.group(1)), {}
            continue
        m = _LINE.match(raw)
        if m and item is not None:
            if m.group(1) in lines:
                # a repeated label without a new item number starts another block for the same item
                flush()
                lines = {}
            lines[m.group(1)] = m.group(2)
    flush()
    return ParsedCompletion(tuple(blocks), skipped)
