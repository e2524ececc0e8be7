"""Reference-free evaluation: a hashed-feature logistic classifier, gendered vs neutral.

Sentences are mapped to sparse surface features aimed at Italian gender
morphology (character n-grams, token suffixes, articles and
determiners), hashed into 2**18 buckets and L2-normalised. A linear
model trained by SGD on logistic loss labels each sentence.
"""

from __future__ import annotations

import enum
import hashlib
import io
import json
import math
import random
import re
import struct
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import BinaryIO, Callable, Iterable, Sequence

import numpy as np

from .corpus import GenderCategory, SetTag

HASH_BITS = 18
HASH_DIM = 1 << HASH_BITS
MAGIC = b"NEVL"
FORMAT_VERSION = 1
CHAR_ORDERS = (2, 3, 4, 5)
SUFFIX_LENGTHS = (1, 2, 3)
DETERMINERS = frozenset(
    """il lo la l' i gli le un uno una un' ogni tutti tutte tutto tutta alcuni alcune alcun alcuna
    nessun nessuno nessuna quel quello quella quell' quei quegli quelle questo questa quest' questi queste
    del dello della dell' dei degli delle al allo alla all' ai agli alle dal dallo dalla dall' dai dagli dalle
    nel nello nella nell' nei negli nelle sul sullo sulla sull' sui sugli sulle col coi
    mio mia miei mie tuo tua tuoi tue suo sua suoi sue nostro nostra nostri nostre vostro vostra vostri vostre
    molti molte pochi poche tanti tante diversi diverse certi certe altri altre""".split()
)
_TOKEN = re.compile(r"\w+'|\w+", re.UNICODE)

ExtraFeatures = Callable[[str], "np.ndarray"]


class Label(enum.Enum):
    GENDERED = "gendered"
    NEUTRAL = "neutral"


def binary_label(gold: Label | SetTag | GenderCategory | str) -> Label:
    """Collapse M/F (or Set-G) to Gendered and N (or Set-N) to Neutral."""
    if isinstance(gold, Label):
        return gold
    if isinstance(gold, SetTag):
        return Label.NEUTRAL if gold is SetTag.SET_N else Label.GENDERED
    if isinstance(gold, GenderCategory):
        return Label.NEUTRAL if gold is GenderCategory.NEUTRAL else Label.GENDERED
    key = str(gold).strip()
    aliases = {"N": Label.NEUTRAL, "M": Label.GENDERED, "F": Label.GENDERED, "Set-N": Label.NEUTRAL, "Set-G": Label.GENDERED}
    if key in aliases:
        return aliases[key]
    try:
        return Label(key.lower())
    except ValueError:
        raise ValueError(f"unknown gold label {gold!r}") from None


# ---------------------------------------------------------------- features


@lru_cache(maxsize=1 << 20)
def feature_index(key: str) -> int:
    """blake2b-64 of the UTF-8 key, truncated to HASH_BITS bits."""
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") & (HASH_DIM - 1)


def feature_keys(text: str) -> list[str]:
    """Named features before hashing, with repeats (they become counts)."""
    text = text.lower().strip()
    if not text:
        return []
    keys = []
    padded = "^" + re.sub(r"\s+", " ", text) + "$"
    for n in CHAR_ORDERS:
        keys += ["c:" + padded[i : i + n] for i in range(len(padded) - n + 1)]
    for tok in _TOKEN.findall(text):
        if tok in DETERMINERS:
            keys.append("d:" + tok)
        word = tok.rstrip("'")
        for k in SUFFIX_LENGTHS:
            if len(word) > k:
                keys.append(f"s{k}:" + word[-k:])
    return keys


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector: sorted unique indices and their values."""

    indices: np.ndarray
    values: np.ndarray

    def __len__(self):
        return len(self.indices)

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.indices.tolist(), self.values.tolist()))


def featurize(text: str, extra: ExtraFeatures | None = None) -> FeatureVector:
    counts: dict[int, float] = {}
    for key in feature_keys(text):
        idx = feature_index(key)
        counts[idx] = counts.get(idx, 0.0) + 1.0
    indices = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
    values = np.array([counts[i] for i in indices.tolist()], dtype=np.float64)
    if len(values):
        values /= math.sqrt(float(values @ values))
    if extra is not None:
        emb = np.asarray(extra(text), dtype=np.float64).ravel()
        indices = np.concatenate([indices, HASH_DIM + np.arange(len(emb), dtype=np.int64)])
        values = np.concatenate([values, emb])
    return FeatureVector(indices, values)


# ------------------------------------------------------------------- model


class ClassBalance(enum.Enum):
    UNBALANCED = "unbalanced"  # all examples, natural 2:1 gendered:neutral
    BALANCED = "balanced"  # gendered examples down-weighted to the neutral total


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 2
    # features are L2-normalised over ~250 active buckets, so each weight moves by
    # only ~lr/16 per update; at 0.05 two epochs never leave the class prior
    learning_rate: float = 32.0
    l2: float = 1e-6
    rng_seed: int = 0
    class_balance: ClassBalance = ClassBalance.UNBALANCED
    threshold: float = 0.5

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class_balance"] = self.class_balance.value
        return d


@dataclass(frozen=True)
class ClassifierModel:
    weights: np.ndarray
    bias: float = 0.0
    threshold: float = 0.5
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 1 or len(w) < HASH_DIM:
            raise ValueError(f"weights must be a vector of length >= {HASH_DIM}")
        if not (np.all(np.isfinite(w)) and math.isfinite(self.bias)):
            raise ValueError("model parameters must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def extra_dim(self) -> int:
        return len(self.weights) - HASH_DIM

    @classmethod
    def zero(cls, threshold: float = 0.5) -> "ClassifierModel":
        return cls(np.zeros(HASH_DIM), 0.0, threshold, {"note": "zero-weight debug model"})


@dataclass(frozen=True)
class Prediction:
    label: Label
    probability: float  # of Neutral


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def predict_vector(model: ClassifierModel, x: FeatureVector) -> Prediction:
    if len(x) and x.indices[-1] >= len(model.weights):
        raise ValueError("feature vector is wider than the model (extra features not used in training?)")
    p = _sigmoid(float(model.weights[x.indices] @ x.values) + model.bias)
    return Prediction(Label.NEUTRAL if p >= model.threshold else Label.GENDERED, p)


def predict(model: ClassifierModel, text: str, extra: ExtraFeatures | None = None) -> Prediction:
    if model.extra_dim and extra is None:
        raise ValueError(f"model expects {model.extra_dim} extra feature(s); pass the same extractor")
    return predict_vector(model, featurize(text, extra))


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, ensure_ascii=False).encode("utf-8")).hexdigest()


def train(
    examples: Sequence,
    config: TrainConfig = TrainConfig(),
    extra: ExtraFeatures | None = None,
) -> ClassifierModel:
    """Fit by SGD on logistic loss.

    ``examples`` are SyntheticExample-like objects (``text``, ``label``,
    ``valid``) or ``(text, label)`` pairs; M and F both count as Gendered.
    The step size at update t is ``learning_rate / sqrt(t)``; L2 decay is
    applied lazily through a global scale factor. Runs are bit-identical
    for the same examples, order and config.
    """
    texts, targets = [], []
    for ex in examples:
        if isinstance(ex, tuple):
            text, gold = ex
        else:
            if not getattr(ex, "valid", True):
                raise ValueError("training examples must all be valid")
            text, gold = ex.text, ex.label
        texts.append(text)
        targets.append(1.0 if binary_label(gold) is Label.NEUTRAL else 0.0)
    if not texts:
        raise ValueError("no training examples")
    n_neutral = int(sum(targets))
    if n_neutral in (0, len(targets)):
        raise ValueError("training data must contain both gendered and neutral examples")

    vectors = [featurize(t, extra) for t in texts]
    dim = HASH_DIM + (max((int(v.indices[-1]) + 1 - HASH_DIM for v in vectors if len(v)), default=0) if extra else 0)
    weight_of = {1.0: 1.0, 0.0: 1.0}
    if config.class_balance is ClassBalance.BALANCED:
        weight_of[0.0] = n_neutral / (len(targets) - n_neutral)

    v = np.zeros(dim)  # true weights are scale * v
    scale, bias = 1.0, 0.0
    rng = random.Random(config.rng_seed)
    order = list(range(len(vectors)))
    t = 0
    for _ in range(config.epochs):
        rng.shuffle(order)
        for i in order:
            t += 1
            x, y = vectors[i], targets[i]
            lr = config.learning_rate / math.sqrt(t)
            p = _sigmoid(scale * float(v[x.indices] @ x.values) + bias)
            g = (p - y) * weight_of[y]
            if config.l2:
                scale *= 1.0 - lr * config.l2
            v[x.indices] -= (lr * g / scale) * x.values
            bias -= lr * g
            if scale < 1e-9:
                v *= scale
                scale = 1.0
    weights = v * scale
    metadata = {
        "format_version": FORMAT_VERSION,
        "train_config": config.to_dict(),
        "config_digest": _digest(config.to_dict()),
        "corpus_digest": _digest([[t, y] for t, y in zip(texts, targets)]),
        "n_examples": len(texts),
        "n_neutral": n_neutral,
        "updates": t,
        "features": {
            "hash": "blake2b-64",
            "hash_bits": HASH_BITS,
            "char_orders": list(CHAR_ORDERS),
            "suffix_lengths": list(SUFFIX_LENGTHS),
            "extra_dim": dim - HASH_DIM,
        },
    }
    return ClassifierModel(weights, bias, config.threshold, metadata)


# --------------------------------------------------------------- evaluation


@dataclass(frozen=True)
class EvaluationReport:
    set_g: float | None  # accuracy on gendered gold items
    set_n: float | None  # accuracy on neutral gold items
    macro: float
    micro: float
    confusion: tuple[tuple[int, int], tuple[int, int]]  # rows gold, cols predicted; order gendered, neutral

    def to_dict(self) -> dict:
        return {
            "accuracy": {"set_g": self.set_g, "set_n": self.set_n, "macro": self.macro, "micro": self.micro},
            "confusion": [list(r) for r in self.confusion],
            "labels": [Label.GENDERED.value, Label.NEUTRAL.value],
        }


def evaluate(
    model: ClassifierModel, labeled: Iterable[tuple[str, object]], extra: ExtraFeatures | None = None
) -> EvaluationReport:
    """Per-class, macro (mean over present classes) and micro accuracy."""
    order = (Label.GENDERED, Label.NEUTRAL)
    confusion = [[0, 0], [0, 0]]
    for text, gold in labeled:
        g = order.index(binary_label(gold))
        confusion[g][order.index(predict(model, text, extra).label)] += 1
    total = sum(map(sum, confusion))
    if total == 0:
        raise ValueError("nothing to evaluate")
    per_class = [100.0 * row[k] / sum(row) if sum(row) else None for k, row in enumerate(confusion)]
    present = [a for a in per_class if a is not None]
    micro = 100.0 * (confusion[0][0] + confusion[1][1]) / total
    return EvaluationReport(per_class[0], per_class[1], sum(present) / len(present), micro, tuple(map(tuple, confusion)))


# ------------------------------------------------------------- persistence


class ModelFormatError(ValueError):
    pass


def dumps_model(model: ClassifierModel) -> bytes:
    meta = json.dumps(model.metadata, sort_keys=True, ensure_ascii=False).encode("utf-8")
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(struct.pack("<II", FORMAT_VERSION, len(model.weights)))
    out.write(model.weights.astype("<f8").tobytes())
    out.write(struct.pack("<ddI", model.bias, model.threshold, len(meta)))
    out.write(meta)
    return out.getvalue()


def loads_model(data: bytes) -> ClassifierModel:
    if len(data) < 12 or data[:4] != MAGIC:
        raise ModelFormatError("not a model file (bad magic bytes)")
    version, dim = struct.unpack_from("<II", data, 4)
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version} (this build reads {FORMAT_VERSION})")
    offset = 12 + 8 * dim
    if len(data) < offset + 20:
        raise ModelFormatError("model file is truncated")
    weights = np.frombuffer(data, dtype="<f8", count=dim, offset=12).astype(np.float64)
    bias, threshold, meta_len = struct.unpack_from("<ddI", data, offset)
    meta_bytes = data[offset + 20 :]
    if len(meta_bytes) != meta_len:
        raise ModelFormatError("model file is truncated" if len(meta_bytes) < meta_len else "trailing bytes after model")
    try:
        metadata = json.loads(meta_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise ModelFormatError("model metadata is not valid JSON") from None
    try:
        return ClassifierModel(weights, bias, threshold, metadata)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None


def save_model(model: ClassifierModel, sink: BinaryIO | str) -> None:
    data = dumps_model(model)
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "wb") as fh:
            fh.write(data)
    else:
        sink.write(data)


def load_model(source: BinaryIO | str) -> ClassifierModel:
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            return loads_model(fh.read())
    return loads_model(source.read())
