"""Shared metric types."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence


class Direction(enum.Enum):
    HIGHER_BETTER = "higher"
    LOWER_BETTER = "lower"


class MetricKind(enum.Enum):
    BLEU = "bleu"
    CHRF = "chrf"
    TER = "ter"
    METEOR = "meteor"

    @property
    def direction(self) -> Direction:
        if self is MetricKind.TER:
            return Direction.LOWER_BETTER
        return Direction.HIGHER_BETTER

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown metric {name!r}; valid metrics: {valid}") from None


class Level(enum.Enum):
    SENTENCE = "sentence"
    CORPUS = "corpus"


@dataclass(frozen=True)
class MetricScore:
    """A metric value together with its kind.

    BLEU, chrF and TER live on the 0-100 scale (TER can exceed 100);
    METEOR is a fraction in [0, 1].
    """

    kind: MetricKind
    value: float

    @property
    def direction(self) -> Direction:
        return self.kind.direction

    def report_value(self) -> float:
        """Value on the 0-100 reporting scale."""
        return self.value * 100.0 if self.kind is MetricKind.METEOR else self.value

    def __float__(self) -> float:
        return self.value


def compare(a: float, b: float, direction: Direction) -> int:
    """Return 1 if ``a`` is strictly better than ``b``, -1 if strictly worse, 0 on a tie."""
    if a == b:
        return 0
    better = a > b if direction is Direction.HIGHER_BETTER else a < b
    return 1 if better else -1


def round_half_up(value: float | None, digits: int = 2) -> float | None:
    """Report rounding. Never call inside a computation."""
    if value is None:
        return None
    quant = Decimal(1).scaleb(-digits)
    # snap binary noise first so that e.g. (92.00 + 51.83) / 2 shows as 71.92
    return float(Decimal(repr(round(value, 9))).quantize(quant, rounding=ROUND_HALF_UP))


def check_parallel(hypotheses: Sequence[str], references: Sequence[Sequence[str]]) -> None:
    if len(hypotheses) != len(references):
        raise ValueError(
            f"got {len(hypotheses)} hypotheses but {len(references)} reference lists"
        )
    if not hypotheses:
        raise ValueError("at least one segment is required")
    for i, refs in enumerate(references):
        if isinstance(refs, str):
            raise TypeError(f"segment {i}: references must be a list of strings, not a string")
        if len(refs) == 0:
            raise ValueError(f"segment {i}: empty reference list")
