"""
Contrastive evaluation: does a metric reward the right reference?
=================================================================

Score each output against its correct references and against the
wrong ones. At corpus level the relative gap (delta percent) should be
positive; at sentence level each output gets a verdict, and accuracy
is the share of verdicts that match the gold set.
"""

from nevl.contrastive import BEST, CANONICAL_METRICS, SystemOutput, evaluate_protocol
from nevl.corpus import Corpus, CorpusEntry, GenderCategory, SetTag
from nevl.metrics import MetricKind

frames = ["Ringraziamo {} per il lavoro.", "Abbiamo ascoltato {} ieri.", "La proposta riguarda {}."]
groups = [
    ("i professori", ("il corpo docente", "le persone che insegnano", "il personale docente")),
    ("i cittadini", ("la cittadinanza", "la popolazione", "le persone residenti")),
]
entries = []
for i, frame in enumerate(frames * 2):
    masc, neutral = groups[i % 2]
    tag = SetTag.SET_N if i < 3 else SetTag.SET_G
    cat = GenderCategory.NEUTRAL if tag is SetTag.SET_N else GenderCategory.MASCULINE
    entries.append(
        CorpusEntry(str(i), tag, cat, True, "src", frame.format(masc), tuple(frame.format(n) for n in neutral))
    )
corpus = Corpus(entries)

# a system that always translates with the masculine generic
outputs = [SystemOutput(e.id, e.ref_g) for e in corpus]
report = evaluate_protocol(outputs, corpus, CANONICAL_METRICS, ref_policy=BEST)
for m in report.metrics:
    d = {t.value: c.delta_percent for t, c in m.corpus.items()}
    print(m.metric.value, "accuracy", m.accuracy.to_dict(digits=2), "delta", d)

# a Set-N output post-edited from REF-N2 is never scored against REF-N2
pe = [SystemOutput("0", corpus.entries[0].neutral_refs[1], postedit_source=2)]
(bleu_report,) = evaluate_protocol(pe, corpus, [MetricKind.BLEU]).metrics
print("correct-side runs:", [label for label, _ in bleu_report.corpus[SetTag.SET_N].correct_runs])
print("sentence verdict used REF-N%d" % bleu_report.verdicts[0].neutral_ref)
