"""Synthetic training data: seed triplets, prompted generation and an offline generator."""

from .client import DEFAULT_TOKEN_ENV, ChatClient, HttpChatClient, TransportError
from .pipeline import (
    LABELS,
    SYNTH_HEADER,
    GenerationConfig,
    Round,
    RoundResult,
    SyntheticExample,
    explode,
    generate_round1,
    generate_round2,
    holdout_split,
    load_frames,
    offline_generate,
    read_synthetic_tsv,
    validate_all,
    validate_generation,
    write_synthetic_tsv,
)
from .prompts import (
    DEFAULT_FEW_SHOT,
    FewShotExample,
    ParsedCompletion,
    SentenceTriplet,
    build_round1_prompt,
    build_round2_prompt,
    parse_completion,
)
from .seeds import SEED_HEADER, SeedLexicon, SeedLexiconError, SeedTriplet, load_seed_lexicon, starter_seeds

__all__ = [
    "ChatClient",
    "DEFAULT_FEW_SHOT",
    "DEFAULT_TOKEN_ENV",
    "FewShotExample",
    "GenerationConfig",
    "HttpChatClient",
    "LABELS",
    "ParsedCompletion",
    "Round",
    "RoundResult",
    "SEED_HEADER",
    "SYNTH_HEADER",
    "SeedLexicon",
    "SeedLexiconError",
    "SeedTriplet",
    "SentenceTriplet",
    "SyntheticExample",
    "TransportError",
    "build_round1_prompt",
    "build_round2_prompt",
    "explode",
    "generate_round1",
    "generate_round2",
    "holdout_split",
    "load_frames",
    "load_seed_lexicon",
    "offline_generate",
    "parse_completion",
    "read_synthetic_tsv",
    "starter_seeds",
    "validate_all",
    "validate_generation",
    "write_synthetic_tsv",
]
