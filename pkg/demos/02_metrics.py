"""
Four overlap metrics on the same pair
=====================================

BLEU, chrF and TER report on 0-100; METEOR is a fraction. TER is the
only one where lower is better.
"""

from nevl.metrics import MetricKind, bleu, chrf, meteor, sentence_bleu, ter

hyp = "Ringraziamo i professori per il lavoro svolto."
gendered = "Ringraziamo i professori per il lavoro svolto."
neutral = "Ringraziamo il corpo docente per il lavoro svolto."

for name, ref in (("gendered", gendered), ("neutral", neutral)):
    print(
        f"{name:9s}",
        f"BLEU {sentence_bleu(hyp, [ref]).value:6.2f}",
        f"chrF {chrf([hyp], [[ref]]).value:6.2f}",
        f"TER {ter(hyp, [ref]).value:6.2f}",
        f"METEOR {meteor(hyp, [ref]).value:.3f}",
    )

# corpus BLEU pools n-gram counts before combining; it is not the mean of sentence scores
hyps = [hyp, "Il corpo docente è arrivato."]
refs = [[neutral], ["Il personale docente è arrivato."]]
print("corpus BLEU", round(bleu(hyps, refs).value, 2))
print("TER direction:", MetricKind.TER.direction.value)
