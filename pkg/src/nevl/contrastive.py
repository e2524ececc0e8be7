"""Reference-based contrastive evaluation.

An output is scored against the gendered reference and against the
neutral reference(s) of its entry. At corpus level the two scores give a
percentage gain for the correct reference; at sentence level the metric's
preference classifies the output as gendered or neutral.
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, Sequence

from .corpus import Corpus, CorpusEntry, SetTag
from .metrics import Direction, Level, MetricConfig, MetricKind, compare, round_half_up, score

CANONICAL_METRICS = (MetricKind.BLEU, MetricKind.TER, MetricKind.METEOR)


class Prediction(enum.Enum):
    GENDERED = "gendered"
    NEUTRAL = "neutral"
    TIE = "tie"


class TiePolicy(enum.Enum):
    INCORRECT = "incorrect"
    GENDERED = "gendered"
    NEUTRAL = "neutral"


class ExclusionPolicy(enum.Enum):
    LENIENT = "lenient"  # Set-N outputs without provenance are raw MT, scored against all refs
    STRICT = "strict"  # common-set Set-N outputs must say which reference they came from


class RefPolicyKind(enum.Enum):
    BEST = "best"
    EXCLUDE_SOURCE = "exclude-source"
    SINGLE = "single"
    PAIRWISE = "pairwise"


@dataclass(frozen=True)
class RefPolicy:
    """Which neutral reference(s) a sentence is compared with.

    ``BEST`` takes the best-scoring neutral reference, ``EXCLUDE_SOURCE``
    does the same after dropping the reference the output was post-edited
    from, ``SINGLE`` uses reference ``index`` (1-based). ``PAIRWISE``
    yields one verdict per non-source neutral reference and is expanded
    by :func:`sentence_verdicts`.
    """

    kind: RefPolicyKind
    index: int | None = None

    @classmethod
    def parse(cls, text: str) -> "RefPolicy":
        text = text.strip().lower()
        if text.startswith("single:"):
            try:
                return cls(RefPolicyKind.SINGLE, int(text.split(":", 1)[1]))
            except ValueError:
                raise ValueError(f"bad reference policy {text!r}") from None
        try:
            return cls(RefPolicyKind(text))
        except ValueError:
            raise ValueError(
                f"bad reference policy {text!r}; use best, exclude-source, single:K or pairwise"
            ) from None

    def __str__(self):
        return f"single:{self.index}" if self.kind is RefPolicyKind.SINGLE else self.kind.value


BEST = RefPolicy(RefPolicyKind.BEST)
EXCLUDE_SOURCE = RefPolicy(RefPolicyKind.EXCLUDE_SOURCE)
PAIRWISE = RefPolicy(RefPolicyKind.PAIRWISE)


@dataclass(frozen=True)
class SystemOutput:
    entry_id: str
    text: str
    postedit_source: int | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"output for entry {self.entry_id} is empty")
        if self.postedit_source is not None and self.postedit_source not in (1, 2, 3):
            raise ValueError(f"output for entry {self.entry_id}: postedit_source must be 1, 2 or 3")


@dataclass(frozen=True)
class ContrastiveVerdict:
    entry_id: str
    metric: MetricKind
    score_vs_neutral: float
    score_vs_gendered: float
    predicted: Prediction
    gold: SetTag
    neutral_ref: int  # 1-based index of the neutral reference that was used
    postedit_source: int | None = None
    canonical: bool = True

    def to_dict(self) -> dict:
        return {
            "entry_id": self.entry_id,
            "metric": self.metric.value,
            "score_vs_neutral": self.score_vs_neutral,
            "score_vs_gendered": self.score_vs_gendered,
            "predicted": self.predicted.value,
            "gold": self.gold.value,
            "neutral_ref": self.neutral_ref,
            "postedit_source": self.postedit_source,
            "canonical": self.canonical,
        }


# -------------------------------------------------------------- arithmetic


def delta_percent(score_correct: float, score_wrong: float, direction: Direction) -> float:
    """Relative gain of the correct reference, positive when the metric prefers it."""
    if score_correct == 0:
        raise ValueError("delta_percent is undefined for a zero correct-reference score")
    if direction is Direction.HIGHER_BETTER:
        return 100.0 * (score_correct - score_wrong) / score_correct
    return 100.0 * (score_wrong - score_correct) / score_correct


def macro_average(set_g: float, set_n: float) -> float:
    return (set_g + set_n) / 2.0


# ------------------------------------------------------------- corpus level


@dataclass(frozen=True)
class ScoredPair:
    """One (output, reference) pairing that entered a corpus score."""

    entry_id: str
    postedit_source: int | None
    side: str  # "correct" | "wrong"
    ref_role: str  # "REF-G" or "REF-Nk"


@dataclass(frozen=True)
class CorpusContrast:
    metric: MetricKind
    set_tag: SetTag
    score_correct: float
    score_wrong: float
    delta_percent: float | None
    correct_runs: tuple[tuple[str, float], ...]
    wrong_runs: tuple[tuple[str, float], ...]
    trace: tuple[ScoredPair, ...] = field(repr=False)


def _corpus_delta(s_correct: float, s_wrong: float, direction: Direction) -> float | None:
    # a perfect TER (0) against the correct side is the limit case: +inf if the
    # wrong side is worse, undefined (None) if both sides are 0
    if s_correct != 0:
        return delta_percent(s_correct, s_wrong, direction)
    if s_wrong == 0:
        return None
    gain = s_wrong - s_correct if direction is Direction.LOWER_BETTER else s_correct - s_wrong
    return math.copysign(math.inf, gain)


def _resolve(outputs: Iterable[SystemOutput], corpus: Corpus) -> list[tuple[SystemOutput, CorpusEntry]]:
    index = corpus.by_id()
    pairs = []
    for o in outputs:
        entry = index.get(o.entry_id)
        if entry is None:
            raise KeyError(f"output refers to unknown entry id {o.entry_id!r}")
        if o.postedit_source is not None and o.postedit_source > len(entry.neutral_refs):
            raise ValueError(
                f"entry {entry.id}: postedit_source {o.postedit_source} but only "
                f"{len(entry.neutral_refs)} neutral reference(s)"
            )
        pairs.append((o, entry))
    return pairs


def _ref_text(entry: CorpusEntry, role: str) -> str | None:
    if role == "REF-G":
        return entry.ref_g
    k = int(role[len("REF-N") :])
    return entry.neutral_refs[k - 1] if k <= len(entry.neutral_refs) else None


def corpus_contrastive(
    outputs: Sequence[SystemOutput],
    corpus: Corpus,
    metric: MetricKind,
    exclusion: ExclusionPolicy = ExclusionPolicy.LENIENT,
    config: MetricConfig = MetricConfig(),
) -> dict[SetTag, CorpusContrast]:
    """Corpus-level scores against the correct and the wrong references, per set.

    Outputs are grouped by post-edit provenance. Each group is scored as a
    corpus against every reference role separately and the resulting
    corpus scores are averaged per side. For Set-G the correct side is
    REF-G and the wrong side every neutral reference. For Set-N the
    correct side is every neutral reference except the one an output was
    post-edited from, and the wrong side is REF-G.
    """
    resolved = _resolve(outputs, corpus)
    results = {}
    for tag in SetTag:
        members = [(o, e) for o, e in resolved if e.set_tag is tag]
        if not members:
            continue
        groups: dict[int | None, list] = {}
        for o, e in members:
            if (
                tag is SetTag.SET_N
                and exclusion is ExclusionPolicy.STRICT
                and e.common_set
                and o.postedit_source is None
            ):
                raise ValueError(f"entry {e.id}: Set-N output lacks postedit_source under the strict policy")
            groups.setdefault(o.postedit_source, []).append((o, e))
        correct_runs, wrong_runs, trace = [], [], []
        max_refs = max(len(e.neutral_refs) for _, e in members)
        neutral_roles = [f"REF-N{k}" for k in range(1, max_refs + 1)]
        for source in sorted(groups, key=lambda s: -1 if s is None else s):
            group = groups[source]
            if tag is SetTag.SET_G:
                sides = [("correct", ["REF-G"]), ("wrong", neutral_roles)]
            else:
                allowed = [r for r in neutral_roles if source is None or r != f"REF-N{source}"]
                sides = [("correct", allowed), ("wrong", ["REF-G"])]
            for side, roles in sides:
                for role in roles:
                    hyps, refs = [], []
                    for o, e in group:
                        ref = _ref_text(e, role)
                        if ref is None:
                            continue
                        hyps.append(o.text)
                        refs.append([ref])
                        trace.append(ScoredPair(e.id, o.postedit_source, side, role))
                    if not hyps:
                        continue
                    value = score(metric, hyps, refs, Level.CORPUS, config).value
                    if metric is MetricKind.METEOR:
                        value *= 100.0
                    label = f"{'raw' if source is None else f'pe{source}'}:{role}"
                    (correct_runs if side == "correct" else wrong_runs).append((label, value))
        s_correct = fmean(v for _, v in correct_runs)
        s_wrong = fmean(v for _, v in wrong_runs)
        delta = _corpus_delta(s_correct, s_wrong, metric.direction)
        results[tag] = CorpusContrast(
            metric, tag, s_correct, s_wrong, delta, tuple(correct_runs), tuple(wrong_runs), tuple(trace)
        )
    return results


# ----------------------------------------------------------- sentence level


def _sentence_score(metric, hyp, ref, config) -> float:
    value = score(metric, [hyp], [[ref]], Level.SENTENCE, config).value
    return value * 100.0 if metric is MetricKind.METEOR else value


def _neutral_candidates(output: SystemOutput, entry: CorpusEntry, policy: RefPolicy) -> list[int]:
    n = len(entry.neutral_refs)
    if policy.kind is RefPolicyKind.SINGLE:
        if policy.index is None or not 1 <= policy.index <= n:
            raise ValueError(f"entry {entry.id}: reference index {policy.index} out of range 1..{n}")
        return [policy.index]
    candidates = list(range(1, n + 1))
    if policy.kind is RefPolicyKind.EXCLUDE_SOURCE and output.postedit_source is not None:
        candidates.remove(output.postedit_source)
        if not candidates:
            raise ValueError(f"entry {entry.id}: no neutral reference left after excluding the source")
    return candidates


def sentence_contrastive(
    output: SystemOutput,
    entry: CorpusEntry,
    metric: MetricKind,
    ref_policy: RefPolicy | None = None,
    config: MetricConfig = MetricConfig(),
) -> ContrastiveVerdict:
    """Classify one output by whether the metric prefers the neutral or the gendered reference.

    Without an explicit policy, the post-edit source is excluded when it
    is known and the best neutral reference is used otherwise.
    """
    if output.entry_id != entry.id:
        raise ValueError(f"output for {output.entry_id!r} paired with entry {entry.id!r}")
    if ref_policy is None:
        ref_policy = EXCLUDE_SOURCE if output.postedit_source is not None else BEST
    if ref_policy.kind is RefPolicyKind.PAIRWISE:
        raise ValueError("the pairwise policy yields several verdicts; use sentence_verdicts")
    direction = metric.direction
    best_k, best = None, None
    for k in _neutral_candidates(output, entry, ref_policy):
        s = _sentence_score(metric, output.text, entry.neutral_refs[k - 1], config)
        if best is None or compare(s, best, direction) > 0:
            best_k, best = k, s
    s_g = _sentence_score(metric, output.text, entry.ref_g, config)
    outcome = compare(best, s_g, direction)
    predicted = Prediction.NEUTRAL if outcome > 0 else Prediction.GENDERED if outcome < 0 else Prediction.TIE
    return ContrastiveVerdict(
        entry.id,
        metric,
        best,
        s_g,
        predicted,
        entry.set_tag,
        best_k,
        output.postedit_source,
        metric in CANONICAL_METRICS,
    )


def sentence_verdicts(
    outputs: Sequence[SystemOutput],
    corpus: Corpus,
    metric: MetricKind,
    ref_policy: RefPolicy | None = None,
    config: MetricConfig = MetricConfig(),
) -> list[ContrastiveVerdict]:
    verdicts = []
    for o, e in _resolve(outputs, corpus):
        if ref_policy is not None and ref_policy.kind is RefPolicyKind.PAIRWISE:
            for k in _neutral_candidates(o, e, EXCLUDE_SOURCE):
                verdicts.append(sentence_contrastive(o, e, metric, RefPolicy(RefPolicyKind.SINGLE, k), config))
        else:
            verdicts.append(sentence_contrastive(o, e, metric, ref_policy, config))
    return verdicts


@dataclass(frozen=True)
class Accuracy:
    set_g: float | None
    set_n: float | None
    all: float | None

    def to_dict(self, digits: int | None = None) -> dict:
        r = (lambda v: round_half_up(v, digits)) if digits is not None else (lambda v: v)
        return {"set_g": r(self.set_g), "set_n": r(self.set_n), "all": r(self.all)}


def _is_correct(v: ContrastiveVerdict, tie_policy: TiePolicy) -> bool:
    predicted = v.predicted
    if predicted is Prediction.TIE:
        if tie_policy is TiePolicy.INCORRECT:
            return False
        predicted = Prediction.GENDERED if tie_policy is TiePolicy.GENDERED else Prediction.NEUTRAL
    expected = Prediction.GENDERED if v.gold is SetTag.SET_G else Prediction.NEUTRAL
    return predicted is expected


def accuracy(verdicts: Sequence[ContrastiveVerdict], tie_policy: TiePolicy = TiePolicy.INCORRECT) -> Accuracy:
    """Per-set accuracy (percent) and their unweighted mean.

    A set with no verdicts gets None, and so does the overall figure.
    """
    if not verdicts:
        raise ValueError("no verdicts to score")
    per_set = {}
    for tag in SetTag:
        vs = [v for v in verdicts if v.gold is tag]
        per_set[tag] = 100.0 * sum(_is_correct(v, tie_policy) for v in vs) / len(vs) if vs else None
    g, n = per_set[SetTag.SET_G], per_set[SetTag.SET_N]
    return Accuracy(g, n, macro_average(g, n) if g is not None and n is not None else None)


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class MetricReport:
    metric: MetricKind
    corpus: dict[SetTag, CorpusContrast]
    accuracy: Accuracy
    verdicts: tuple[ContrastiveVerdict, ...]


@dataclass(frozen=True)
class ProtocolReport:
    metrics: tuple[MetricReport, ...]
    ref_policy: str
    tie_policy: str

    def to_dict(self) -> dict:
        sections = []
        for m in self.metrics:
            for tag in SetTag:
                c = m.corpus.get(tag)
                if c is None:
                    continue
                sections.append(
                    {
                        "metric": m.metric.value,
                        "set": tag.value,
                        "score_correct": round_half_up(c.score_correct),
                        "score_wrong": round_half_up(c.score_wrong),
                        "delta_percent": _json_number(c.delta_percent),
                        "accuracy": m.accuracy.to_dict(digits=2),
                        "verdicts": [
                            {
                                **v.to_dict(),
                                "score_vs_neutral": round_half_up(v.score_vs_neutral),
                                "score_vs_gendered": round_half_up(v.score_vs_gendered),
                            }
                            for v in m.verdicts
                            if v.gold is tag
                        ],
                    }
                )
        return {"ref_policy": self.ref_policy, "tie_policy": self.tie_policy, "results": sections}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, allow_nan=False)

    def verdicts_tsv(self) -> str:
        out = io.StringIO()
        out.write("ENTRY_ID\tMETRIC\tS_N\tS_G\tPRED\tGOLD\n")
        for m in self.metrics:
            for v in m.verdicts:
                out.write(
                    f"{v.entry_id}\t{v.metric.value}\t{round_half_up(v.score_vs_neutral):.2f}\t"
                    f"{round_half_up(v.score_vs_gendered):.2f}\t{v.predicted.value}\t{v.gold.value}\n"
                )
        return out.getvalue()


def _json_number(value: float | None) -> float | str | None:
    if value is not None and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return round_half_up(value)


def evaluate_protocol(
    outputs: Sequence[SystemOutput],
    corpus: Corpus,
    metrics: Sequence[MetricKind] = CANONICAL_METRICS,
    ref_policy: RefPolicy | None = None,
    tie_policy: TiePolicy = TiePolicy.INCORRECT,
    exclusion: ExclusionPolicy = ExclusionPolicy.LENIENT,
    config: MetricConfig = MetricConfig(),
) -> ProtocolReport:
    """Corpus-level contrast and sentence-level accuracy for each metric."""
    reports = []
    for metric in metrics:
        contrast = corpus_contrastive(outputs, corpus, metric, exclusion, config)
        verdicts = sentence_verdicts(outputs, corpus, metric, ref_policy, config)
        reports.append(MetricReport(metric, contrast, accuracy(verdicts, tie_policy), tuple(verdicts)))
    return ProtocolReport(tuple(reports), "auto" if ref_policy is None else str(ref_policy), tie_policy.value)


# ---------------------------------------------------------- test-bed helper


@dataclass(frozen=True)
class PosteditResult:
    text: str
    changed_fraction: float  # share of the original whitespace tokens touched by a substitution


def apply_neutral_postedit(output_text: str, substitutions: Sequence[tuple[str, str]]) -> PosteditResult:
    """Replace gendered spans with neutral ones, leaving all other characters untouched.

    Each gendered span is located at its first occurrence in the original
    text; the located spans must not overlap.
    """
    located = []
    for gendered, neutral in substitutions:
        if not gendered:
            raise ValueError("empty gendered span")
        start = output_text.find(gendered)
        if start < 0:
            raise ValueError(f"span not found: {gendered!r}")
        located.append((start, start + len(gendered), neutral, gendered))
    located.sort()
    for (s1, e1, _, g1), (s2, _, _, g2) in zip(located, located[1:]):
        if s2 < e1:
            raise ValueError(f"overlapping spans: {g1!r} and {g2!r}")
    pieces, pos = [], 0
    for start, end, neutral, _ in located:
        pieces.append(output_text[pos:start])
        pieces.append(neutral)
        pos = end
    pieces.append(output_text[pos:])

    tokens, offset = [], 0
    for tok in output_text.split():
        offset = output_text.index(tok, offset)
        tokens.append((offset, offset + len(tok)))
        offset += len(tok)
    touched = sum(1 for ts, te in tokens if any(ts < end and start < te for start, end, _, _ in located))
    fraction = touched / len(tokens) if tokens else 0.0
    return PosteditResult("".join(pieces), fraction)
