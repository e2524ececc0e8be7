"""N-gram overlap metrics: BLEU, chrF, TER and METEOR."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .base import Direction, Level, MetricKind, MetricScore, compare, round_half_up
from .bleu import BleuConfig, Smoothing, bleu, sentence_bleu
from .chrf import ChrfConfig, chrf, sentence_chrf
from .meteor import MeteorParams, corpus_meteor, meteor
from .ter import corpus_ter, ter
from .tokenize import tokenize_13a

__all__ = [
    "BleuConfig",
    "ChrfConfig",
    "Direction",
    "Level",
    "MeteorParams",
    "MetricConfig",
    "MetricKind",
    "MetricScore",
    "Smoothing",
    "bleu",
    "chrf",
    "compare",
    "corpus_meteor",
    "corpus_ter",
    "meteor",
    "round_half_up",
    "score",
    "sentence_bleu",
    "sentence_chrf",
    "ter",
    "tokenize_13a",
]


@dataclass(frozen=True)
class MetricConfig:
    """Per-metric settings bundled for callers that dispatch on MetricKind."""

    bleu: BleuConfig = field(default_factory=BleuConfig)
    chrf: ChrfConfig = field(default_factory=ChrfConfig)
    meteor: MeteorParams = field(default_factory=MeteorParams)


def score(
    kind: MetricKind,
    hypotheses: Sequence[str],
    references: Sequence[Sequence[str]],
    level: Level = Level.CORPUS,
    config: MetricConfig = MetricConfig(),
) -> MetricScore:
    """Score with any metric. Sentence level expects a single segment."""
    if level is Level.SENTENCE and len(hypotheses) != 1:
        raise ValueError("sentence-level scoring takes exactly one segment")
    if kind is MetricKind.BLEU:
        return bleu(hypotheses, references, config.bleu, level)
    if kind is MetricKind.CHRF:
        return chrf(hypotheses, references, config.chrf, level)
    if kind is MetricKind.TER:
        if level is Level.SENTENCE:
            return ter(hypotheses[0], references[0])
        return corpus_ter(hypotheses, references)
    if kind is MetricKind.METEOR:
        if level is Level.SENTENCE:
            return meteor(hypotheses[0], references[0], config.meteor)
        return corpus_meteor(hypotheses, references, config.meteor)
    raise ValueError(f"unsupported metric {kind}")
