import json
import math
from statistics import fmean

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus_fixtures import make_corpus
from oracles import bleu_oracle, meteor_oracle, ter_oracle
from nevl.contrastive import (
    BEST,
    EXCLUDE_SOURCE,
    PAIRWISE,
    ContrastiveVerdict,
    ExclusionPolicy,
    Prediction,
    RefPolicy,
    RefPolicyKind,
    SystemOutput,
    TiePolicy,
    accuracy,
    apply_neutral_postedit,
    corpus_contrastive,
    delta_percent,
    evaluate_protocol,
    macro_average,
    sentence_contrastive,
    sentence_verdicts,
)
from nevl.corpus import Corpus, CorpusEntry, GenderCategory, SetTag
from nevl.metrics import Direction, MetricKind, corpus_ter

CANONICAL = [MetricKind.BLEU, MetricKind.TER, MetricKind.METEOR]


def test_delta_percent_examples():
    assert delta_percent(34.95, 25.76, Direction.HIGHER_BETTER) == pytest.approx(26.30, abs=0.01)
    assert delta_percent(52.18, 61.92, Direction.LOWER_BETTER) == pytest.approx(18.66, abs=0.01)
    assert delta_percent(7.0, 7.0, Direction.HIGHER_BETTER) == 0.0
    with pytest.raises(ValueError):
        delta_percent(0.0, 3.0, Direction.HIGHER_BETTER)


@given(st.floats(0.01, 100), st.floats(0, 100))
def test_delta_sign_follows_preference(a, b):
    assert (delta_percent(a, b, Direction.HIGHER_BETTER) > 0) == (a > b)
    assert (delta_percent(a, b, Direction.LOWER_BETTER) > 0) == (a < b)


@pytest.mark.parametrize(
    "g, n, all_", [(92.00, 51.83, 71.92), (90.50, 66.00, 78.25), (94.50, 48.67, 71.59), (91.00, 88.67, 89.83)]
)
def test_macro_average_table_rows(g, n, all_):
    assert macro_average(g, n) == pytest.approx(all_, abs=0.01)


def verdict(gold, predicted):
    return ContrastiveVerdict("x", MetricKind.BLEU, 0.0, 0.0, predicted, gold, 1)


def test_accuracy_hand_count():
    vs = [verdict(SetTag.SET_G, Prediction.GENDERED)] * 9 + [verdict(SetTag.SET_G, Prediction.NEUTRAL)]
    vs += [verdict(SetTag.SET_N, Prediction.NEUTRAL)] * 5 + [verdict(SetTag.SET_N, Prediction.TIE)]
    vs += [verdict(SetTag.SET_N, Prediction.GENDERED)] * 4
    acc = accuracy(vs)
    assert (acc.set_g, acc.set_n, acc.all) == (90.0, 50.0, 70.0)
    assert accuracy(vs, TiePolicy.NEUTRAL).set_n == 60.0
    assert accuracy(vs, TiePolicy.GENDERED).set_n == 50.0
    with pytest.raises(ValueError):
        accuracy([])


def test_accuracy_perfect_and_one_sided():
    acc = accuracy([verdict(SetTag.SET_G, Prediction.GENDERED), verdict(SetTag.SET_N, Prediction.NEUTRAL)])
    assert (acc.set_g, acc.set_n, acc.all) == (100.0, 100.0, 100.0)
    assert accuracy([verdict(SetTag.SET_G, Prediction.GENDERED)]).all is None


@settings(max_examples=50)
@given(st.lists(st.tuples(st.sampled_from(list(SetTag)), st.sampled_from(list(Prediction))), min_size=1, max_size=40))
def test_accuracy_all_is_macro(pairs):
    acc = accuracy([verdict(g, p) for g, p in pairs])
    if acc.set_g is not None and acc.set_n is not None:
        assert acc.all == (acc.set_g + acc.set_n) / 2
        assert 0 <= acc.all <= 100


# ----------------------------------------------------------- sentence level


@pytest.fixture(scope="module")
def corpus():
    return make_corpus(20)


@pytest.mark.parametrize("metric", CANONICAL)
def test_ref_g_output_predicted_gendered(corpus, metric):
    for e in corpus:
        v = sentence_contrastive(SystemOutput(e.id, e.ref_g), e, metric)
        assert v.predicted is Prediction.GENDERED
        assert v.canonical


@pytest.mark.parametrize("metric", CANONICAL)
def test_neutral_output_predicted_neutral(corpus, metric):
    for e in corpus:
        for k, ref in enumerate(e.neutral_refs, 1):
            v = sentence_contrastive(SystemOutput(e.id, ref), e, metric, BEST)
            assert v.predicted is Prediction.NEUTRAL
            assert v.neutral_ref == k


def test_hand_built_sentence_case_matches_oracles():
    e = CorpusEntry("1", SetTag.SET_G, GenderCategory.MASCULINE, False, "s", "a b c d", ("a b x y",))
    out = SystemOutput("1", "a b c z")
    for metric, oracle in [(MetricKind.BLEU, bleu_oracle), (MetricKind.TER, None), (MetricKind.METEOR, None)]:
        v = sentence_contrastive(out, e, metric)
        assert v.predicted is Prediction.GENDERED
    v = sentence_contrastive(out, e, MetricKind.BLEU)
    assert v.score_vs_gendered == pytest.approx(bleu_oracle(["a b c z"], [["a b c d"]]), abs=1e-9)
    assert v.score_vs_neutral == pytest.approx(bleu_oracle(["a b c z"], [["a b x y"]]), abs=1e-9)
    v = sentence_contrastive(out, e, MetricKind.TER)
    assert (v.score_vs_gendered, v.score_vs_neutral) == (ter_oracle("a b c z", ["a b c d"]), ter_oracle("a b c z", ["a b x y"]))
    v = sentence_contrastive(out, e, MetricKind.METEOR)
    assert v.score_vs_gendered == pytest.approx(100 * meteor_oracle("a b c z", ["a b c d"]), abs=1e-9)


def test_chrf_is_flagged_non_canonical(corpus):
    e = corpus.entries[0]
    assert not sentence_contrastive(SystemOutput(e.id, e.ref_g), e, MetricKind.CHRF).canonical


def test_tie_is_explicit():
    e = CorpusEntry("1", SetTag.SET_N, GenderCategory.NEUTRAL, False, "s", "a b c d", ("a b c e",))
    v = sentence_contrastive(SystemOutput("1", "a b c z"), e, MetricKind.TER)
    assert v.predicted is Prediction.TIE


def test_ref_policies(corpus):
    e = next(x for x in corpus if x.set_tag is SetTag.SET_N)
    out = SystemOutput(e.id, e.neutral_refs[1], postedit_source=2)
    # default excludes the source reference, so the exact copy is never seen
    v = sentence_contrastive(out, e, MetricKind.BLEU)
    assert v.neutral_ref in (1, 3) and v.score_vs_neutral < 100
    assert sentence_contrastive(out, e, MetricKind.BLEU, BEST).score_vs_neutral == pytest.approx(100)
    assert sentence_contrastive(out, e, MetricKind.BLEU, RefPolicy.parse("single:3")).neutral_ref == 3
    with pytest.raises(ValueError, match="out of range"):
        sentence_contrastive(out, e, MetricKind.BLEU, RefPolicy(RefPolicyKind.SINGLE, 4))
    with pytest.raises(ValueError):
        sentence_contrastive(out, corpus.entries[1], MetricKind.BLEU)
    assert RefPolicy.parse("exclude-source") == EXCLUDE_SOURCE
    assert str(RefPolicy.parse("single:2")) == "single:2"
    with pytest.raises(ValueError):
        RefPolicy.parse("worst")


def test_pairwise_expands_non_source_refs(corpus):
    e = next(x for x in corpus if x.set_tag is SetTag.SET_N)
    outs = [SystemOutput(e.id, e.neutral_refs[k - 1], postedit_source=k) for k in (1, 2, 3)]
    vs = sentence_verdicts(outs, corpus, MetricKind.BLEU, PAIRWISE)
    assert len(vs) == 6
    assert all(v.neutral_ref != v.postedit_source for v in vs)


# ------------------------------------------------------------- corpus level


def test_set_g_identity_gives_perfect_correct_score(corpus):
    outs = [SystemOutput(e.id, e.ref_g) for e in corpus if e.set_tag is SetTag.SET_G]
    for metric in CANONICAL:
        r = corpus_contrastive(outs, corpus, metric)[SetTag.SET_G]
        perfect = 0.0 if metric is MetricKind.TER else None
        if perfect is not None:
            assert r.score_correct == perfect
        elif metric is MetricKind.BLEU:
            assert r.score_correct == pytest.approx(100.0)
        assert r.delta_percent is None or r.delta_percent > 0
        assert len(r.wrong_runs) == 3


def test_exclusion_uses_only_other_refs(corpus):
    set_n = [e for e in corpus if e.set_tag is SetTag.SET_N]
    outs = [SystemOutput(e.id, e.neutral_refs[1], postedit_source=2) for e in set_n]
    r = corpus_contrastive(outs, corpus, MetricKind.BLEU)[SetTag.SET_N]
    assert [label for label, _ in r.correct_runs] == ["pe2:REF-N1", "pe2:REF-N3"]
    assert [label for label, _ in r.wrong_runs] == ["pe2:REF-G"]
    assert {p.ref_role for p in r.trace} == {"REF-N1", "REF-N3", "REF-G"}


def test_strict_policy_requires_provenance(corpus):
    e = next(x for x in corpus if x.set_tag is SetTag.SET_N)
    outs = [SystemOutput(e.id, e.neutral_refs[0])]
    assert corpus_contrastive(outs, corpus, MetricKind.TER)[SetTag.SET_N]
    with pytest.raises(ValueError, match="postedit_source"):
        corpus_contrastive(outs, corpus, MetricKind.TER, ExclusionPolicy.STRICT)
    with pytest.raises(KeyError):
        corpus_contrastive([SystemOutput("nope", "x")], corpus, MetricKind.TER)


def mixed_outputs(corpus):
    outs = []
    for i, e in enumerate(corpus):
        if e.set_tag is SetTag.SET_G:
            outs.append(SystemOutput(e.id, e.ref_g if i % 3 else e.neutral_refs[0]))
        else:
            for k in (1, 2, 3):
                text = e.neutral_refs[k - 1] if (i + k) % 4 else e.ref_g
                outs.append(SystemOutput(e.id, text, postedit_source=k))
    return outs


def test_averaging_matches_explicit_enumeration(corpus):
    outs = mixed_outputs(corpus)
    r = corpus_contrastive(outs, corpus, MetricKind.TER)
    by_id = corpus.by_id()
    # Set-N: per post-edit source, one corpus TER per allowed neutral ref, then the mean
    correct, wrong = [], []
    for k in (1, 2, 3):
        group = [o for o in outs if o.postedit_source == k]
        for j in (1, 2, 3):
            if j != k:
                correct.append(corpus_ter([o.text for o in group], [[by_id[o.entry_id].neutral_refs[j - 1]] for o in group]).value)
        wrong.append(corpus_ter([o.text for o in group], [[by_id[o.entry_id].ref_g] for o in group]).value)
    assert r[SetTag.SET_N].score_correct == pytest.approx(fmean(correct), abs=1e-12)
    assert r[SetTag.SET_N].score_wrong == pytest.approx(fmean(wrong), abs=1e-12)
    g = [o for o in outs if by_id[o.entry_id].set_tag is SetTag.SET_G]
    g_wrong = [corpus_ter([o.text for o in g], [[by_id[o.entry_id].neutral_refs[j]] for o in g]).value for j in range(3)]
    assert r[SetTag.SET_G].score_wrong == pytest.approx(fmean(g_wrong), abs=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.randoms(use_true_random=False))
def test_corpus_scores_invariant_under_reordering(rnd):
    corpus = make_corpus(8)
    outs = mixed_outputs(corpus)
    shuffled = list(outs)
    rnd.shuffle(shuffled)
    for metric in CANONICAL:
        a = corpus_contrastive(outs, corpus, metric)
        b = corpus_contrastive(shuffled, corpus, metric)
        for tag in SetTag:
            assert a[tag].score_correct == b[tag].score_correct
            assert a[tag].score_wrong == b[tag].score_wrong


# ------------------------------------------------------------------ reports


def test_protocol_report_serialisation(corpus):
    report = evaluate_protocol(mixed_outputs(corpus), corpus, [MetricKind.BLEU, MetricKind.TER])
    data = json.loads(report.to_json())
    assert [(s["metric"], s["set"]) for s in data["results"]] == [
        ("bleu", "Set-N"), ("bleu", "Set-G"), ("ter", "Set-N"), ("ter", "Set-G")
    ]
    first = data["results"][0]
    assert set(first) == {"metric", "set", "score_correct", "score_wrong", "delta_percent", "accuracy", "verdicts"}
    assert first["accuracy"]["all"] == pytest.approx((first["accuracy"]["set_g"] + first["accuracy"]["set_n"]) / 2, abs=0.01)
    lines = report.verdicts_tsv().splitlines()
    assert lines[0] == "ENTRY_ID\tMETRIC\tS_N\tS_G\tPRED\tGOLD"
    assert len(lines) == 1 + sum(len(m.verdicts) for m in report.metrics)
    assert report.to_json() == evaluate_protocol(mixed_outputs(corpus), corpus, [MetricKind.BLEU, MetricKind.TER]).to_json()


# ------------------------------------------------------------------ postedit


def test_postedit_example():
    r = apply_neutral_postedit("i vicini sono qui", [("i vicini", "il vicinato")])
    assert r.text == "il vicinato sono qui"
    assert r.changed_fraction == 0.5
    assert apply_neutral_postedit("i vicini sono qui", []).text == "i vicini sono qui"
    with pytest.raises(ValueError, match="le vicine"):
        apply_neutral_postedit("i vicini sono qui", [("le vicine", "x")])
    with pytest.raises(ValueError, match="overlapping"):
        apply_neutral_postedit("i vicini sono qui", [("i vicini", "x"), ("vicini sono", "y")])


@settings(max_examples=80)
@given(st.text(min_size=1, max_size=15), st.text(max_size=15), st.text(max_size=15), st.text(max_size=10))
def test_postedit_preserves_surroundings(span, before, after, neutral):
    text = before + span + after
    r = apply_neutral_postedit(text, [(span, neutral)])
    start = text.find(span)
    assert r.text == text[:start] + neutral + text[start + len(span):]
    assert 0.0 <= r.changed_fraction <= 1.0


def test_perfect_ter_gives_infinite_corpus_gain(corpus):
    outs = [SystemOutput(e.id, e.ref_g) for e in corpus if e.set_tag is SetTag.SET_G]
    c = corpus_contrastive(outs, corpus, MetricKind.TER)[SetTag.SET_G]
    assert c.score_correct == 0 and c.delta_percent == math.inf
    report = evaluate_protocol(outs, corpus, [MetricKind.TER])
    assert json.loads(report.to_json())["results"][0]["delta_percent"] == "inf"
