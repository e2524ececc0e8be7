"""The ten acceptance criteria, one test each, at the stated tolerances.

Every test carries a ``criterion`` marker; conftest prints one PASS/FAIL
line per criterion at the end of the run. Run just this file with
``pytest tests/test_acceptance.py -v``.
"""

import io
import math
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus_fixtures import identical_neutral_corpus, make_corpus
from oracles import bleu_oracle, chrf_oracle, meteor_oracle, ter_oracle
from nevl.classifier import TrainConfig, dumps_model, evaluate, load_model, loads_model, predict, save_model, train
from nevl.contrastive import (
    CANONICAL_METRICS,
    BEST,
    ContrastiveVerdict,
    Prediction,
    SystemOutput,
    accuracy,
    corpus_contrastive,
    delta_percent,
    macro_average,
    sentence_verdicts,
)
from nevl.corpus import Corpus, CorpusEntry, GenderCategory, SetTag, parse_corpus, reference_variability, serialize_corpus
from nevl.metrics import Direction, Level, MetricKind, bleu, chrf, meteor, ter
from nevl.synthgen import holdout_split, offline_generate, starter_seeds, write_synthetic_tsv


def detail(record_property, text):
    record_property("detail", text)


# --------------------------------------------------------------------- 1


@pytest.mark.criterion(1, "delta-percent arithmetic")
def test_ac01_delta_percent(record_property):
    higher = delta_percent(34.95, 25.76, Direction.HIGHER_BETTER)
    lower = delta_percent(52.18, 61.92, Direction.LOWER_BETTER)
    detail(record_property, f"{higher:.4f}, {lower:.4f}")
    assert abs(higher - 26.30) <= 0.01
    assert abs(lower - 18.66) <= 0.01


# --------------------------------------------------------------------- 2


def _verdicts(gold: SetTag, correct: int, total: int):
    right = Prediction.GENDERED if gold is SetTag.SET_G else Prediction.NEUTRAL
    wrong = Prediction.NEUTRAL if gold is SetTag.SET_G else Prediction.GENDERED
    return [
        ContrastiveVerdict(f"{gold.value}-{i}", MetricKind.BLEU, 0.0, 0.0, right if i < correct else wrong, gold, 1)
        for i in range(total)
    ]


# (Set-G correct of 200, Set-N correct of 600, expected Set-G, Set-N, all)
MACRO_CASES = [
    (184, 311, 92.00, 51.83, 71.92),
    (181, 396, 90.50, 66.00, 78.25),
    (189, 292, 94.50, 48.67, 71.59),
    (182, 532, 91.00, 88.67, 89.83),
]


@pytest.mark.criterion(2, "macro-accuracy aggregation")
def test_ac02_macro_accuracy(record_property):
    shown = []
    for g_ok, n_ok, g, n, expected in MACRO_CASES:
        assert abs(macro_average(g, n) - expected) <= 0.01
        # the same numbers through verdict counting. No one rounding order gives
        # all four to the cent (71.59 needs rounded inputs, 89.83 unrounded ones),
        # so the tolerance is what is checked
        acc = accuracy(_verdicts(SetTag.SET_G, g_ok, 200) + _verdicts(SetTag.SET_N, n_ok, 600))
        assert abs(acc.set_g - g) <= 0.01 and abs(acc.set_n - n) <= 0.01
        assert abs(acc.all - expected) <= 0.01
        shown.append(f"{acc.all:.2f}")
    detail(record_property, ", ".join(shown))


# --------------------------------------------------------------------- 3


@pytest.mark.criterion(3, "metric-oracle equivalence on 200 segments")
def test_ac03_metric_oracles(metric_fixture, record_property):
    start = time.perf_counter()
    assert len(metric_fixture) == 200
    hyps = [h for _, h, _ in metric_fixture]
    refs = [r for _, _, r in metric_fixture]
    worst = {"bleu": 0.0, "chrf": 0.0, "ter": 0.0, "meteor": 0.0}

    def check(name, ours, oracle):
        worst[name] = max(worst[name], abs(ours - oracle))

    for h, r in zip(hyps, refs):
        check("bleu", bleu([h], [r], level=Level.SENTENCE).value, bleu_oracle([h], [r]))
        check("chrf", chrf([h], [r], level=Level.SENTENCE).value, chrf_oracle([h], [r]))
        check("ter", ter(h, r).value, ter_oracle(h, r))
        check("meteor", meteor(h, r).value, meteor_oracle(h, r))
    check("bleu", bleu(hyps, refs).value, bleu_oracle(hyps, refs))
    check("chrf", chrf(hyps, refs).value, chrf_oracle(hyps, refs))
    elapsed = time.perf_counter() - start
    detail(record_property, "max |diff| " + ", ".join(f"{k}={v:.1e}" for k, v in worst.items()) + f"; {elapsed:.1f}s")
    assert all(v <= 1e-9 for v in worst.values()), worst
    assert elapsed < 30


# --------------------------------------------------------------------- 4


@pytest.mark.criterion(4, "contrastive soundness on a 100-entry corpus")
def test_ac04_contrastive_soundness(record_property):
    start = time.perf_counter()
    corpus = make_corpus(50)
    assert len(corpus.entries) == 100
    set_g = corpus.subset(SetTag.SET_G)
    set_n = corpus.subset(SetTag.SET_N)
    ref_g_outputs = [SystemOutput(e.id, e.ref_g) for e in set_g]
    neutral_outputs = [SystemOutput(e.id, e.neutral_refs[0]) for e in set_n]
    deltas = []
    for metric in CANONICAL_METRICS:
        g_acc = accuracy(sentence_verdicts(ref_g_outputs, corpus, metric))
        assert g_acc.set_g == 100.0
        contrast = corpus_contrastive(ref_g_outputs, corpus, metric)[SetTag.SET_G]
        # a perfect TER makes the relative gain the +inf limit, still positive
        assert contrast.delta_percent is not None and contrast.delta_percent > 0
        n_acc = accuracy(sentence_verdicts(neutral_outputs, corpus, metric, BEST))
        assert n_acc.set_n == 100.0
        deltas.append(f"{metric.value} {contrast.delta_percent:.2f}")
    elapsed = time.perf_counter() - start
    detail(record_property, "Set-G delta " + ", ".join(deltas))
    assert elapsed < 10


# --------------------------------------------------------------------- 5


@pytest.mark.criterion(5, "multi-reference exclusion never scores against the source")
@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=20, max_size=20), st.sampled_from(CANONICAL_METRICS))
def test_ac05_exclusion_rule(sources, metric):
    corpus = make_corpus(20)
    set_n = list(corpus.subset(SetTag.SET_N))
    # output k is a copy of its source reference, the worst case for leakage
    outputs = [SystemOutput(e.id, e.neutral_refs[s - 1], s) for e, s in zip(set_n, sources)]
    outputs += [SystemOutput(e.id, e.ref_g) for e in corpus.subset(SetTag.SET_G)]
    source_of = {o.entry_id: o.postedit_source for o in outputs}

    trace = corpus_contrastive(outputs, corpus, metric)[SetTag.SET_N].trace
    assert trace, "the scoring trace is empty"
    for pair in trace:
        src = source_of[pair.entry_id]
        assert pair.postedit_source == src
        assert pair.ref_role != f"REF-N{src}", pair
    # every output was scored against both of its other references
    for e in set_n:
        roles = {p.ref_role for p in trace if p.entry_id == e.id and p.side == "correct"}
        assert roles == {f"REF-N{k}" for k in (1, 2, 3)} - {f"REF-N{source_of[e.id]}"}
    for v in sentence_verdicts(outputs, corpus, metric):
        if v.gold is SetTag.SET_N:
            assert v.neutral_ref != v.postedit_source


# --------------------------------------------------------------------- 6


@pytest.mark.criterion(6, "offline generation determinism and balance")
def test_ac06_offline_determinism(record_property):
    seeds = list(starter_seeds())
    per_seed = math.ceil(8000 / len(seeds))
    start = time.perf_counter()
    first = offline_generate(seeds, per_seed, rng_seed=7)
    elapsed = time.perf_counter() - start
    second = offline_generate(seeds, per_seed, rng_seed=7)
    a, b = write_synthetic_tsv(first).encode(), write_synthetic_tsv(second).encode()
    counts = {lab: sum(1 for e in first if e.label is lab) for lab in GenderCategory}
    detail(record_property, f"{len(first)} sentences, N/M/F {counts[GenderCategory.NEUTRAL]}/"
           f"{counts[GenderCategory.MASCULINE]}/{counts[GenderCategory.FEMININE]}, {elapsed:.1f}s")
    assert len(first) >= 24_000
    assert a == b
    assert len(set(counts.values())) == 1
    assert elapsed < 10


# ------------------------------------------------------------------ 7, 8


@pytest.fixture(scope="module")
def desk_scale():
    """Offline corpus, split by seed triplet so no seed is seen on both sides."""
    seeds = list(starter_seeds())
    start = time.perf_counter()
    examples = offline_generate(seeds, n_per_seed=21, rng_seed=2024)
    train_part, test_part = holdout_split(examples, holdout_fraction=0.2, rng_seed=2024)
    model = train(train_part, TrainConfig(rng_seed=2024))
    return model, train_part, test_part, time.perf_counter() - start


@pytest.mark.criterion(7, "classifier held-out accuracy (macro >= 90, gap <= 10)")
def test_ac07_classifier_accuracy(desk_scale, record_property):
    model, train_part, test_part, build_time = desk_scale
    start = time.perf_counter()
    report = evaluate(model, [(e.text, e.label) for e in test_part])
    elapsed = build_time + time.perf_counter() - start
    gap = abs(report.set_g - report.set_n)
    detail(
        record_property,
        f"train {len(train_part)}, test {len(test_part)}; gendered {report.set_g:.2f}, neutral {report.set_n:.2f}, "
        f"macro {report.macro:.2f}, gap {gap:.2f}; {elapsed:.0f}s",
    )
    assert len(train_part) >= 24_000
    assert report.macro >= 90.0
    assert gap <= 10.0
    assert elapsed < 120


@pytest.mark.criterion(8, "label flip when the gendered slot turns neutral")
def test_ac08_label_flip(desk_scale, record_property):
    model, _, test_part, _ = desk_scale
    start = time.perf_counter()
    # offline output keeps each triplet together, in N, M, F order
    triplets = [test_part[i : i + 3] for i in range(0, len(test_part), 3)]
    flips = cases = 0
    for n, m, f in triplets:
        assert (n.label, m.label, f.label) == (GenderCategory.NEUTRAL, GenderCategory.MASCULINE, GenderCategory.FEMININE)
        assert n.seed_id == m.seed_id == f.seed_id
        neutral_pred = predict(model, n.text).label
        for gendered in (m, f):
            cases += 1
            flips += predict(model, gendered.text).label is not neutral_pred
    rate = flips / cases
    elapsed = time.perf_counter() - start
    detail(record_property, f"{len(triplets)} held-out triplets, flip rate {100 * rate:.2f}%; {elapsed:.1f}s")
    assert len(triplets) >= 500
    assert rate >= 0.90
    assert elapsed < 30


# --------------------------------------------------------------------- 9


def _perturb(corpus: Corpus) -> Corpus:
    # one extra word per reference role, placed differently, keeps every pair apart
    rng = random.Random(9)
    entries = []
    for e in corpus:
        refs = tuple(f"{r} ({k} {rng.randint(0, 9)})" for k, r in enumerate(e.neutral_refs, 1))
        entries.append(CorpusEntry(e.id, e.set_tag, e.category, True, e.source, e.ref_g + " (g)", refs))
    return Corpus(entries, "perturbed")


@pytest.mark.criterion(9, "reference-variability sanity")
def test_ac09_reference_variability(record_property):
    start = time.perf_counter()
    neutral_roles = ("REF-N1", "REF-N2", "REF-N3")
    same = reference_variability(identical_neutral_corpus(20))
    for tag, m in same.items():
        for r in neutral_roles:
            for c in neutral_roles:
                assert (m[r, c] is None) if r == c else m[r, c] == pytest.approx(100.0, abs=1e-9)
    # with REF-G also identical every defined cell is 100
    base = identical_neutral_corpus(20)
    all_same = Corpus([CorpusEntry(e.id, e.set_tag, e.category, True, e.source, e.neutral_refs[0], e.neutral_refs) for e in base])
    for m in reference_variability(all_same).values():
        assert all(v == pytest.approx(100.0, abs=1e-9) for v in m.defined())
    perturbed = reference_variability(_perturb(make_corpus(20)))
    top = max(v for m in perturbed.values() for v in m.defined())
    elapsed = time.perf_counter() - start
    detail(record_property, f"perturbed max cell {top:.2f}")
    assert set(perturbed) == {SetTag.SET_N, SetTag.SET_G}
    for m in perturbed.values():
        assert len(m.defined()) == 12
        assert all(0 <= v < 100 for v in m.defined())
    assert elapsed < 10


# -------------------------------------------------------------------- 10


@pytest.mark.criterion(10, "byte-identical round trips")
def test_ac10_round_trips(tmp_path, record_property):
    for corpus in (make_corpus(10), make_corpus(6, common=False), identical_neutral_corpus(3)):
        text = serialize_corpus(corpus)
        again = serialize_corpus(parse_corpus(text.encode("utf-8")))
        assert again == text
        assert parse_corpus(again.encode("utf-8")).entries == parse_corpus(text.encode("utf-8")).entries

    toy = [("il dottore è arrivato", "M"), ("la dottoressa è arrivata", "F"), ("il personale medico è arrivato", "N")]
    model = train(toy)
    blob = dumps_model(model)
    assert dumps_model(loads_model(blob)) == blob
    path = tmp_path / "model.bin"
    save_model(model, path)
    assert path.read_bytes() == blob
    buf = io.BytesIO()
    save_model(load_model(path), buf)
    assert buf.getvalue() == blob
    detail(record_property, f"model file {len(blob)} bytes")
