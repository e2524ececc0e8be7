"""
A gold corpus: parse, validate, summarise
=========================================

Entries pair an English source with one gendered Italian reference
(REF-G) and up to three gender-neutral references. Set-G entries
should be translated with gendered forms, Set-N entries neutrally.
"""

from nevl.corpus import HEADER, parse_corpus, reference_variability, serialize_corpus, stats, validate

rows = [
    ("1", "Set-N", "N", "1", "We thank the teachers.", "Ringraziamo i professori.",
     "Ringraziamo il corpo docente.", "Ringraziamo le persone che insegnano.", "Ringraziamo il personale docente."),
    ("2", "Set-G", "F", "1", "Mrs Rossi thanked the teachers.", "La signora Rossi ha ringraziato le professoresse.",
     "La signora Rossi ha ringraziato il corpo docente.", "La signora Rossi ha ringraziato chi insegna.",
     "La signora Rossi ha ringraziato il personale docente."),
]
text = "\t".join(HEADER) + "\n" + "".join("\t".join(r) + "\n" for r in rows)

corpus = parse_corpus(text.encode("utf-8"), name="tiny")
print(len(corpus.entries), "entries")

# serialisation is byte-exact
assert serialize_corpus(corpus) == text

# validation collects problems instead of stopping at the first one;
# this toy corpus is balanced across sets but has no masculine Set-G entry
report = validate(corpus)
print("valid:", report.ok, report.codes())

# lengths ignore punctuation-only tokens
for tag, s in stats(corpus).per_set.items():
    print(tag.value, s.sentences, "sentences, avg REF-G length", s.avg_ref_g_length)

# how similar are the references to each other? (BLEU, rows = reference role)
for tag, m in reference_variability(corpus.subset(common_only=True)).items():
    print(tag.value)
    for role, row in zip(m.roles, m.cells):
        print("  ", role, ["--" if v is None else f"{v:5.1f}" for v in row])
