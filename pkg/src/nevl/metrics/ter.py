"""Translation edit rate with greedy block shifts."""

from __future__ import annotations

from typing import Sequence

from .base import MetricKind, MetricScore, check_parallel
from .tokenize import tokenize_13a

MAX_SHIFT_SIZE = 10
MAX_SHIFT_DISTANCE = 50
MAX_SHIFTS = 20


def edit_distance(hyp: Sequence, ref: Sequence) -> int:
    """Word-level Levenshtein distance (bit-parallel, Hyyro 2001)."""
    m = len(ref)
    if m == 0:
        return len(hyp)
    if not hyp:
        return m
    peq: dict = {}
    for i, tok in enumerate(ref):
        peq[tok] = peq.get(tok, 0) | (1 << i)
    full = (1 << m) - 1
    high = 1 << (m - 1)
    pv, mv, score = full, 0, m
    for tok in hyp:
        eq = peq.get(tok, 0)
        xv = eq | mv
        xh = ((((eq & pv) + pv) & full) ^ pv) | eq
        ph = (mv | ~(xh | pv)) & full
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = ((ph << 1) | 1) & full
        mh = (mh << 1) & full
        pv = (mh | ~(xv | ph)) & full
        mv = ph & xv
    return score


def _ref_blocks(ref: Sequence[str]) -> set[tuple[str, ...]]:
    blocks = set()
    for i in range(len(ref)):
        for n in range(1, min(MAX_SHIFT_SIZE, len(ref) - i) + 1):
            blocks.add(tuple(ref[i : i + n]))
    return blocks


def _best_shift(hyp: list[str], ref: list[str], ref_blocks: set, current: int):
    best_delta, best_hyp = 0, None
    n = len(hyp)
    for start in range(n):
        for length in range(1, min(MAX_SHIFT_SIZE, n - start) + 1):
            block = hyp[start : start + length]
            if tuple(block) not in ref_blocks:
                break
            rest = hyp[:start] + hyp[start + length :]
            for pos in range(len(rest) + 1):
                if pos == start or abs(pos - start) > MAX_SHIFT_DISTANCE:
                    continue
                candidate = rest[:pos] + block + rest[pos:]
                delta = current - edit_distance(candidate, ref)
                if delta > best_delta:
                    best_delta, best_hyp = delta, candidate
    return best_delta, best_hyp


def count_edits(hyp: Sequence[str], ref: Sequence[str]) -> tuple[int, int]:
    """Return (total edits, number of shifts) turning ``hyp`` into ``ref``.

    Shifts are chosen greedily: each round applies the single block move
    that most reduces the remaining edit distance, until none helps or
    the shift cap is reached. Only blocks that occur verbatim in the
    reference are considered for moving.
    """
    hyp, ref = list(hyp), list(ref)
    current = edit_distance(hyp, ref)
    blocks = _ref_blocks(ref)
    shifts = 0
    while shifts < MAX_SHIFTS and current > 0:
        delta, shifted = _best_shift(hyp, ref, blocks, current)
        if shifted is None:
            break
        hyp, current = shifted, current - delta
        shifts += 1
    return current + shifts, shifts


def ter_tokens(text: str) -> list[str]:
    return tokenize_13a(text.lower())


def _segment(hypothesis: str, references: Sequence[str]) -> tuple[int, int]:
    """(edits, reference length) for the reference giving the lowest rate."""
    if not references:
        raise ValueError("TER needs at least one reference")
    hyp = ter_tokens(hypothesis)
    best = None
    for ref_text in references:
        ref = ter_tokens(ref_text)
        if not ref:
            raise ValueError(f"reference is empty after tokenization: {ref_text!r}")
        edits, _ = count_edits(hyp, ref)
        if best is None or edits / len(ref) < best[0] / best[1]:
            best = (edits, len(ref))
    return best


def ter(hypothesis: str, references: Sequence[str]) -> MetricScore:
    """Sentence TER (0-100, lower is better), minimised over references."""
    if isinstance(references, str):
        raise TypeError("references must be a list of strings")
    edits, length = _segment(hypothesis, references)
    return MetricScore(MetricKind.TER, 100.0 * edits / length)


def corpus_ter(hypotheses: Sequence[str], references: Sequence[Sequence[str]]) -> MetricScore:
    """Total edits over total length of each segment's best reference."""
    check_parallel(hypotheses, references)
    edits = length = 0
    for hyp, refs in zip(hypotheses, references):
        e, n = _segment(hyp, refs)
        edits += e
        length += n
    return MetricScore(MetricKind.TER, 100.0 * edits / length)

