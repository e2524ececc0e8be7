"""Two-round prompted generation, validation and the offline generator."""

from __future__ import annotations

import enum
import io
import logging
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib.resources import files
from typing import Callable, Iterable, Sequence

from ..corpus import GenderCategory
from .client import ChatClient
from .prompts import (
    DEFAULT_FEW_SHOT,
    FewShotExample,
    SentenceTriplet,
    build_round1_prompt,
    build_round2_prompt,
    parse_completion,
)
from .seeds import SeedTriplet

log = logging.getLogger(__name__)

SLOT = "{}"
SYNTH_HEADER = ("TEXT", "LABEL", "SEED_ID", "ROUND", "VALID")
LABELS = (GenderCategory.NEUTRAL, GenderCategory.MASCULINE, GenderCategory.FEMININE)


class Round(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    OFFLINE = "OFFLINE"


@dataclass(frozen=True)
class GenerationConfig:
    round1_temperature: float = 0.5
    round2_temperature: float = 0.3
    sentences_per_seed: int = 25  # sentence triplets per seed in round 1
    rewrites_per_sentence: int = 5
    seeds_per_request: int = 4
    triplets_per_request: int = 4
    max_in_flight: int = 4
    model_name: str = "gpt-3.5-turbo"
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    token_env: str = "NEVL_API_TOKEN"
    max_retries: int = 3
    request_timeout: float = 60.0

    def __post_init__(self):
        for name in ("round1_temperature", "round2_temperature"):
            if not 0.0 <= getattr(self, name) <= 2.0:
                raise ValueError(f"{name} must lie in [0, 2]")
        for name in (
            "sentences_per_seed",
            "rewrites_per_sentence",
            "seeds_per_request",
            "triplets_per_request",
            "max_in_flight",
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class SyntheticExample:
    text: str
    label: GenderCategory
    seed_id: str
    round: Round
    valid: bool = False


@dataclass(frozen=True)
class RoundResult:
    triplets: tuple[SentenceTriplet, ...]
    skipped: int  # completion blocks that could not be parsed
    requests: int


def _chunks(items: Sequence, size: int) -> list[Sequence]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def _run(client: ChatClient, jobs: list[tuple[str, float]], max_in_flight: int) -> list[str]:
    # map() keeps submission order, so assembly is stable whatever finishes first
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(lambda job: client.send(*job), jobs))


def generate_round1(
    client: ChatClient,
    seeds: Sequence[SeedTriplet],
    config: GenerationConfig = GenerationConfig(),
    few_shot: Sequence[FewShotExample] = DEFAULT_FEW_SHOT,
) -> RoundResult:
    """Ask for ``sentences_per_seed`` sentence triplets per seed triplet.

    Transport failures propagate; unparseable blocks are skipped and
    counted, never silently dropped.
    """
    batches = _chunks(list(seeds), config.seeds_per_request)
    jobs = [(build_round1_prompt(b, few_shot, config.sentences_per_seed), config.round1_temperature) for b in batches]
    completions = _run(client, jobs, config.max_in_flight)
    triplets, skipped = [], 0
    for batch, text in zip(batches, completions):
        parsed = parse_completion(text, len(batch))
        skipped += parsed.skipped
        for item, n, m, f in parsed.blocks:
            triplets.append(SentenceTriplet(batch[item - 1].id, n, m, f, Round.R1.value))
    if skipped:
        log.warning("round 1: skipped %d unparseable block(s)", skipped)
    return RoundResult(tuple(_order_by_seed(triplets)), skipped, len(jobs))


def generate_round2(
    client: ChatClient, triplets: Sequence[SentenceTriplet], config: GenerationConfig = GenerationConfig()
) -> RoundResult:
    """Rewrite each triplet up to ``rewrites_per_sentence`` times with added context."""
    batches = _chunks(list(triplets), config.triplets_per_request)
    jobs = [(build_round2_prompt(b, config.rewrites_per_sentence), config.round2_temperature) for b in batches]
    completions = _run(client, jobs, config.max_in_flight)
    out, skipped = [], 0
    for batch, text in zip(batches, completions):
        parsed = parse_completion(text, len(batch))
        skipped += parsed.skipped
        per_item: dict[int, int] = {}
        for item, n, m, f in parsed.blocks:
            per_item[item] = per_item.get(item, 0) + 1
            if per_item[item] > config.rewrites_per_sentence:
                skipped += 1
                continue
            out.append(SentenceTriplet(batch[item - 1].seed_id, n, m, f, Round.R2.value))
    if skipped:
        log.warning("round 2: skipped %d block(s)", skipped)
    return RoundResult(tuple(_order_by_seed(out)), skipped, len(jobs))


def _order_by_seed(triplets: list[SentenceTriplet]) -> list[SentenceTriplet]:
    return sorted(triplets, key=lambda t: t.seed_id)  # stable: keeps completion order within a seed


def explode(triplets: Iterable[SentenceTriplet]) -> list[SyntheticExample]:
    """One example per sentence, in N, M, F order."""
    out = []
    for t in triplets:
        rnd = Round(t.round)
        out.append(SyntheticExample(t.neutral, GenderCategory.NEUTRAL, t.seed_id, rnd))
        out.append(SyntheticExample(t.masculine, GenderCategory.MASCULINE, t.seed_id, rnd))
        out.append(SyntheticExample(t.feminine, GenderCategory.FEMININE, t.seed_id, rnd))
    return out


# --------------------------------------------------------------- validation


def _contains(text: str, form: str) -> bool:
    return re.search(r"(?<!\w)" + re.escape(form) + r"(?!\w)", text, re.IGNORECASE) is not None


def validate_generation(example: SyntheticExample, seed: SeedTriplet) -> SyntheticExample:
    """Mark ``example`` valid iff it contains its own seed form verbatim and neither other form.

    Matching is case-insensitive on word boundaries. Paraphrases of the
    seed are rejected, which is deliberately conservative.
    """
    if example.seed_id != seed.id:
        raise ValueError(f"example for seed {example.seed_id} checked against seed {seed.id}")
    own = seed.form(example.label)
    others = [seed.form(l) for l in LABELS if l is not example.label]
    # an opposite form nested inside the own form would otherwise reject every sentence
    others = [o for o in others if not _contains(own, o)]
    ok = _contains(example.text, own) and not any(_contains(example.text, o) for o in others)
    return replace(example, valid=ok)


def validate_all(examples: Iterable[SyntheticExample], seeds: Sequence[SeedTriplet]) -> list[SyntheticExample]:
    index = {s.id: s for s in seeds}
    return [validate_generation(e, index[e.seed_id]) for e in examples]


# ------------------------------------------------------------------ offline


def load_frames(text: str | None = None) -> tuple[str, ...]:
    """Context frames with one ``{}`` slot each; ``#`` lines are comments."""
    if text is None:
        text = files("nevl.data").joinpath("offline_frames.txt").read_text(encoding="utf-8")
    frames = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.count(SLOT) != 1:
            raise ValueError(f"frame {n} must contain exactly one {SLOT} slot: {line!r}")
        frames.append(line)
    return tuple(frames)


def offline_generate(
    seeds: Sequence[SeedTriplet], n_per_seed: int, rng_seed: int, frames: Sequence[str] | None = None
) -> list[SyntheticExample]:
    """Fill context frames with each seed form; no network, fully deterministic.

    Every seed yields ``n_per_seed`` triplets whose three sentences differ
    only at the slot, so labels are exactly balanced and every example is
    valid by construction (it is still checked). Frames that already
    contain one of a seed's forms are not used for that seed.
    """
    if n_per_seed < 1:
        raise ValueError("n_per_seed must be >= 1")
    frames = load_frames() if frames is None else tuple(frames)
    if not frames:
        raise ValueError("the frame bank is empty")
    rng = random.Random(rng_seed)
    out = []
    for seed in seeds:
        usable = [f for f in frames if not any(_contains(f.replace(SLOT, " "), seed.form(l)) for l in LABELS)]
        if not usable:
            raise ValueError(f"seed {seed.id}: every frame already contains one of its forms")
        # cycle through a shuffled bank so each seed sees as many distinct frames as possible
        order: list[str] = []
        for k in range(n_per_seed):
            if not order:
                order = list(usable)
                rng.shuffle(order)
            frame = order.pop()
            for label in LABELS:
                ex = SyntheticExample(_fill(frame, seed.form(label)), label, seed.id, Round.OFFLINE)
                out.append(validate_generation(ex, seed))
    return out


def _fill(frame: str, form: str) -> str:
    i = frame.index(SLOT)
    if i == 0:
        form = form[:1].upper() + form[1:]
    return frame[:i] + form + frame[i + len(SLOT) :]


def holdout_split(
    examples: Sequence[SyntheticExample],
    holdout_fraction: float = 0.2,
    rng_seed: int = 0,
    key: Callable[[SyntheticExample], str] = lambda e: e.seed_id,
) -> tuple[list[SyntheticExample], list[SyntheticExample]]:
    """Split by group (seed triplet by default) so no group lands on both sides."""
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError("holdout_fraction must lie in (0, 1)")
    groups = sorted({key(e) for e in examples})
    k = max(1, round(len(groups) * holdout_fraction))
    held = set(random.Random(rng_seed).sample(groups, k))
    train = [e for e in examples if key(e) not in held]
    test = [e for e in examples if key(e) in held]
    return train, test


# ---------------------------------------------------------------- TSV I/O


def write_synthetic_tsv(examples: Iterable[SyntheticExample]) -> str:
    out = io.StringIO()
    out.write("\t".join(SYNTH_HEADER) + "\n")
    for e in examples:
        if "\t" in e.text or "\n" in e.text:
            raise ValueError(f"example text for seed {e.seed_id} contains a tab or newline")
        out.write(f"{e.text}\t{e.label.value}\t{e.seed_id}\t{e.round.value}\t{int(e.valid)}\n")
    return out.getvalue()


def read_synthetic_tsv(text: str) -> list[SyntheticExample]:
    lines = text.split("\n")
    if tuple(lines[0].rstrip("\r").split("\t")) != SYNTH_HEADER:
        raise ValueError("synthetic corpus needs the header " + "\t".join(SYNTH_HEADER))
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            raise ValueError(f"line {lineno}: expected 5 columns, got {len(cols)}")
        text_, label, seed_id, rnd, valid = cols
        try:
            out.append(SyntheticExample(text_, GenderCategory(label), seed_id, Round(rnd), valid == "1"))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if valid not in ("0", "1"):
            raise ValueError(f"line {lineno}: VALID must be 0 or 1")
    return out
