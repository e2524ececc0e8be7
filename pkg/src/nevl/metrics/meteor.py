"""METEOR: unigram alignment with a fragmentation penalty."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Sequence

from .base import MetricKind, MetricScore, check_parallel
from .tokenize import tokenize_13a

EXACT = "exact"
STEM = "stem"

# Above this many memoised states the exact search gives way to a beam.
_STATE_BUDGET = 200_000
_BEAM_WIDTH = 40

_VOWELS = "aeiouàèéìíòóùú"


def suffix_stem(token: str) -> str:
    """Language-agnostic stem: drop trailing vowels from tokens longer than 3."""
    if len(token) <= 3:
        return token
    stem = token.rstrip(_VOWELS)
    return stem if len(stem) >= 2 else token


_STAGE_KEYS: dict[str, Callable[[str], str]] = {EXACT: lambda t: t, STEM: suffix_stem}


@dataclass(frozen=True)
class MeteorParams:
    alpha: float = 0.9
    beta: float = 3.0
    gamma: float = 0.5
    stages: tuple[str, ...] = (EXACT,)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        stages = tuple(self.stages)
        if not stages or stages[0] != EXACT:
            raise ValueError("the first matcher stage must be 'exact'")
        for s in stages:
            if s not in _STAGE_KEYS:
                raise ValueError(f"unknown matcher stage {s!r}")
        object.__setattr__(self, "stages", stages)


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[tuple[int, int], ...]  # (hyp index, ref index), sorted by hyp index
    hyp_len: int
    ref_len: int

    @property
    def matches(self) -> int:
        return len(self.pairs)

    @property
    def chunks(self) -> int:
        return count_chunks(self.pairs)


def count_chunks(pairs: Sequence[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for i, j in sorted(pairs):
        if prev is None or i != prev[0] + 1 or j != prev[1] + 1:
            chunks += 1
        prev = (i, j)
    return chunks


class _BudgetExceeded(Exception):
    pass


def _stage_align(hyp_keys, ref_keys, fixed: dict[int, int]) -> dict[int, int]:
    """Add a maximum matching over ``*_keys`` (None = unavailable) to ``fixed``.

    Among maximum matchings, the one giving the fewest chunks overall
    (fixed matches included) is returned.
    """
    n = len(hyp_keys)
    ref_positions: dict[str, list[int]] = {}
    for j, k in enumerate(ref_keys):
        if k is not None:
            ref_positions.setdefault(k, []).append(j)
    hyp_counts: dict[str, int] = {}
    for k in hyp_keys:
        if k is not None and k in ref_positions:
            hyp_counts[k] = hyp_counts.get(k, 0) + 1
    quota = {k: min(c, len(ref_positions[k])) for k, c in hyp_counts.items()}
    if not quota:
        return dict(fixed)
    masks = {k: sum(1 << j for j in ref_positions[k]) for k in quota}
    # occurrences of each key at or after position i
    remaining = [None] * (n + 1)
    remaining[n] = {}
    for i in range(n - 1, -1, -1):
        r = dict(remaining[i + 1])
        k = hyp_keys[i]
        if k in quota:
            r[k] = r.get(k, 0) + 1
        remaining[i] = r

    def options(i, used):
        k = hyp_keys[i]
        if i in fixed:
            return [fixed[i]]
        if k not in quota:
            return [-1]
        matched = bin(used & masks[k]).count("1")
        opts = []
        if matched < quota[k]:
            opts = [j for j in ref_positions[k] if not used >> j & 1]
        if remaining[i][k] - 1 >= quota[k] - matched:
            opts.append(-1)
        return opts

    def step_cost(prev, j):
        if j < 0:
            return 0
        return 0 if prev >= 0 and j == prev + 1 else 1

    try:
        choice = _exact_search(n, options, step_cost)
    except _BudgetExceeded:
        choice = _beam_search(n, options, step_cost)
    result = dict(fixed)
    for i, j in enumerate(choice):
        if j >= 0:
            result[i] = j
    return result


def _exact_search(n, options, step_cost):
    states = 0

    @functools.lru_cache(maxsize=None)
    def best(i, used, prev):
        nonlocal states
        states += 1
        if states > _STATE_BUDGET:
            raise _BudgetExceeded
        if i == n:
            return 0, ()
        result = None
        for j in options(i, used):
            new_used = used | (1 << j) if j >= 0 else used
            cost, rest = best(i + 1, new_used, j)
            cost += step_cost(prev, j)
            if result is None or cost < result[0]:
                result = (cost, (j,) + rest)
        return result

    try:
        return best(0, 0, -1)[1]
    finally:
        best.cache_clear()


def _beam_search(n, options, step_cost):
    beam = [(0, 0, -1, ())]  # cost, used, prev, choices
    for i in range(n):
        expanded = {}
        for cost, used, prev, choices in beam:
            for j in options(i, used):
                new_used = used | (1 << j) if j >= 0 else used
                key = (new_used, j)
                new_cost = cost + step_cost(prev, j)
                if key not in expanded or new_cost < expanded[key][0]:
                    expanded[key] = (new_cost, new_used, j, choices + (j,))
        beam = sorted(expanded.values(), key=lambda s: (s[0], s[3]))[:_BEAM_WIDTH]
    return beam[0][3]


def align(hyp: Sequence[str], ref: Sequence[str], stages: Sequence[str] = (EXACT,)) -> Alignment:
    fixed: dict[int, int] = {}
    for stage in stages:
        key = _STAGE_KEYS[stage]
        used_ref = set(fixed.values())
        hyp_keys = [None if i in fixed else key(t) for i, t in enumerate(hyp)]
        ref_keys = [None if j in used_ref else key(t) for j, t in enumerate(ref)]
        fixed = _stage_align(hyp_keys, ref_keys, fixed)
    return Alignment(tuple(sorted(fixed.items())), len(hyp), len(ref))


def score_from_counts(matches: int, chunks: int, hyp_len: int, ref_len: int, params: MeteorParams) -> float:
    if matches == 0:
        return 0.0
    precision = matches / hyp_len
    recall = matches / ref_len
    fmean = precision * recall / (params.alpha * precision + (1 - params.alpha) * recall)
    penalty = params.gamma * (chunks / matches) ** params.beta
    return fmean * (1 - penalty)


def meteor_tokens(text: str) -> list[str]:
    return tokenize_13a(text.lower())


def _best_alignment(hypothesis: str, references: Sequence[str], params: MeteorParams):
    if isinstance(references, str):
        raise TypeError("references must be a list of strings")
    hyp = meteor_tokens(hypothesis)
    best_score, best = -1.0, None
    for ref_text in references:
        a = align(hyp, meteor_tokens(ref_text), params.stages)
        s = score_from_counts(a.matches, a.chunks, a.hyp_len, a.ref_len, params)
        if s > best_score:
            best_score, best = s, a
    return best_score, best


def meteor(hypothesis: str, references: Sequence[str], params: MeteorParams = MeteorParams()) -> MetricScore:
    """Sentence METEOR in [0, 1], best over references.

    >>> round(meteor("a b c d", ["a b c d"]).value, 7)
    0.9921875
    """
    score, _ = _best_alignment(hypothesis, references, params)
    return MetricScore(MetricKind.METEOR, max(score, 0.0))


def corpus_meteor(
    hypotheses: Sequence[str], references: Sequence[Sequence[str]], params: MeteorParams = MeteorParams()
) -> MetricScore:
    """Corpus METEOR from match, chunk and length counts pooled over segments."""
    check_parallel(hypotheses, references)
    matches = chunks = hyp_len = ref_len = 0
    for hyp, refs in zip(hypotheses, references):
        _, a = _best_alignment(hyp, refs, params)
        if a is None:
            continue
        matches += a.matches
        chunks += a.chunks
        hyp_len += a.hyp_len
        ref_len += a.ref_len
    return MetricScore(MetricKind.METEOR, score_from_counts(matches, chunks, hyp_len, ref_len, params))
