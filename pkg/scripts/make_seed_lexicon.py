"""Regenerate src/nevl/data/seed_lexicon.tsv from the lemma table below.

Each lemma is expanded into eight inflectional variants (definite
singular, definite plural, indefinite, "ogni", "tutti", "alcuni", and
"tutto"/"questi" built on the collective); variants whose three forms
are not pairwise distinct are dropped.

Run from the repository root: ``python3 scripts/make_seed_lexicon.py``.
"""

from pathlib import Path

# masc sg, fem sg, masc pl, fem pl, relative clause sg/pl for the neutral
# periphrasis, collective noun phrase
LEMMAS = [
    ("professore", "professoressa", "professori", "professoresse", "che insegna", "che insegnano", "il corpo docente"),
    ("lavoratore", "lavoratrice", "lavoratori", "lavoratrici", "che lavora", "che lavorano", "la forza lavoro"),
    ("cittadino", "cittadina", "cittadini", "cittadine", "che ha la cittadinanza", "che hanno la cittadinanza", "la cittadinanza"),
    ("impiegato", "impiegata", "impiegati", "impiegate", "che lavora in ufficio", "che lavorano in ufficio", "il personale impiegato"),
    ("studente", "studentessa", "studenti", "studentesse", "che studia", "che studiano", "la popolazione studentesca"),
    ("elettore", "elettrice", "elettori", "elettrici", "che vota", "che votano", "l'elettorato"),
    ("dottore", "dottoressa", "dottori", "dottoresse", "che esercita la medicina", "che esercitano la medicina", "il personale medico"),
    ("vicino", "vicina", "vicini", "vicine", "che abita accanto", "che abitano accanto", "il vicinato"),
    ("collega", "collega", "colleghi", "colleghe", "che lavora con me", "che lavorano con me", "il gruppo di lavoro"),
    ("autore", "autrice", "autori", "autrici", "che scrive", "che scrivono", "il gruppo autoriale"),
    ("direttore", "direttrice", "direttori", "direttrici", "che dirige", "che dirigono", "la direzione"),
    ("senatore", "senatrice", "senatori", "senatrici", "che siede in Senato", "che siedono in Senato", "il Senato"),
    ("deputato", "deputata", "deputati", "deputate", "che siede alla Camera", "che siedono alla Camera", "la rappresentanza parlamentare"),
    ("ministro", "ministra", "ministri", "ministre", "che guida il ministero", "che guidano i ministeri", "il governo"),
    ("consumatore", "consumatrice", "consumatori", "consumatrici", "che acquista", "che acquistano", "la clientela"),
    ("agricoltore", "agricoltrice", "agricoltori", "agricoltrici", "che coltiva la terra", "che coltivano la terra", "il mondo agricolo"),
    ("ricercatore", "ricercatrice", "ricercatori", "ricercatrici", "che fa ricerca", "che fanno ricerca", "la comunità scientifica"),
    ("infermiere", "infermiera", "infermieri", "infermiere", "che assiste i malati", "che assistono i malati", "il personale infermieristico"),
    ("cuoco", "cuoca", "cuochi", "cuoche", "che cucina", "che cucinano", "il personale di cucina"),
    ("operaio", "operaia", "operai", "operaie", "che lavora in fabbrica", "che lavorano in fabbrica", "la manodopera"),
    ("avvocato", "avvocata", "avvocati", "avvocate", "che esercita la professione forense", "che esercitano la professione forense", "l'avvocatura"),
    ("scrittore", "scrittrice", "scrittori", "scrittrici", "che scrive romanzi", "che scrivono romanzi", "il mondo letterario"),
    ("lettore", "lettrice", "lettori", "lettrici", "che legge", "che leggono", "il pubblico"),
    ("spettatore", "spettatrice", "spettatori", "spettatrici", "che assiste allo spettacolo", "che assistono allo spettacolo", "il pubblico in sala"),
    ("bambino", "bambina", "bambini", "bambine", "che frequenta la scuola primaria", "che frequentano la scuola primaria", "l'infanzia"),
    ("ragazzo", "ragazza", "ragazzi", "ragazze", "che ha meno di vent'anni", "che hanno meno di vent'anni", "la gioventù"),
    ("pensionato", "pensionata", "pensionati", "pensionate", "che è in pensione", "che sono in pensione", "la popolazione anziana"),
    ("segretario", "segretaria", "segretari", "segretarie", "che si occupa della segreteria", "che si occupano della segreteria", "la segreteria"),
    ("funzionario", "funzionaria", "funzionari", "funzionarie", "che lavora nell'amministrazione", "che lavorano nell'amministrazione", "il personale amministrativo"),
    ("sindaco", "sindaca", "sindaci", "sindache", "che guida il comune", "che guidano i comuni", "l'amministrazione comunale"),
    ("architetto", "architetta", "architetti", "architette", "che progetta edifici", "che progettano edifici", "lo studio di progettazione"),
    ("ingegnere", "ingegnera", "ingegneri", "ingegnere", "che progetta impianti", "che progettano impianti", "l'ufficio tecnico"),
    ("tifoso", "tifosa", "tifosi", "tifose", "che sostiene la squadra", "che sostengono la squadra", "la tifoseria"),
    ("volontario", "volontaria", "volontari", "volontarie", "che fa volontariato", "che fanno volontariato", "il volontariato"),
    ("allievo", "allieva", "allievi", "allieve", "che frequenta il corso", "che frequentano il corso", "la classe"),
    ("maestro", "maestra", "maestri", "maestre", "che insegna alla primaria", "che insegnano alla primaria", "il corpo insegnante"),
    ("proprietario", "proprietaria", "proprietari", "proprietarie", "che possiede l'immobile", "che possiedono l'immobile", "la proprietà"),
    ("inquilino", "inquilina", "inquilini", "inquiline", "che vive in affitto", "che vivono in affitto", "l'inquilinato"),
    ("candidato", "candidata", "candidati", "candidate", "che si candida", "che si candidano", "l'elenco delle candidature"),
    ("sostenitore", "sostenitrice", "sostenitori", "sostenitrici", "che sostiene la proposta", "che sostengono la proposta", "il fronte favorevole"),
    ("fornitore", "fornitrice", "fornitori", "fornitrici", "che fornisce i materiali", "che forniscono i materiali", "la filiera di fornitura"),
    ("viaggiatore", "viaggiatrice", "viaggiatori", "viaggiatrici", "che viaggia", "che viaggiano", "l'utenza ferroviaria"),
    ("pittore", "pittrice", "pittori", "pittrici", "che dipinge", "che dipingono", "il mondo della pittura"),
    ("attore", "attrice", "attori", "attrici", "che recita", "che recitano", "il cast"),
    ("traduttore", "traduttrice", "traduttori", "traduttrici", "che traduce", "che traducono", "il team di traduzione"),
    ("programmatore", "programmatrice", "programmatori", "programmatrici", "che programma", "che programmano", "il team di sviluppo"),
    ("contadino", "contadina", "contadini", "contadine", "che lavora nei campi", "che lavorano nei campi", "la popolazione rurale"),
    ("dottorando", "dottoranda", "dottorandi", "dottorande", "che fa il dottorato", "che fanno il dottorato", "il corpo dottorale"),
    ("poliziotto", "poliziotta", "poliziotti", "poliziotte", "che lavora in polizia", "che lavorano in polizia", "le forze dell'ordine"),
    ("straniero", "straniera", "stranieri", "straniere", "che viene dall'estero", "che vengono dall'estero", "la comunità immigrata"),
    ("esperto", "esperta", "esperti", "esperte", "che ha esperienza", "che hanno esperienza", "il comitato tecnico"),
    ("commissario", "commissaria", "commissari", "commissarie", "che siede in Commissione", "che siedono in Commissione", "il collegio della Commissione"),
    ("consigliere", "consigliera", "consiglieri", "consigliere", "che siede in consiglio", "che siedono in consiglio", "il consiglio"),
    ("imprenditore", "imprenditrice", "imprenditori", "imprenditrici", "che guida un'impresa", "che guidano un'impresa", "il mondo imprenditoriale"),
    ("produttore", "produttrice", "produttori", "produttrici", "che produce", "che producono", "il settore produttivo"),
    ("cameriere", "cameriera", "camerieri", "cameriere", "che serve ai tavoli", "che servono ai tavoli", "il personale di sala"),
    ("postino", "postina", "postini", "postine", "che consegna la posta", "che consegnano la posta", "il servizio postale"),
    ("bibliotecario", "bibliotecaria", "bibliotecari", "bibliotecarie", "che lavora in biblioteca", "che lavorano in biblioteca", "il personale della biblioteca"),
    ("educatore", "educatrice", "educatori", "educatrici", "che educa", "che educano", "il personale educativo"),
    ("abbonato", "abbonata", "abbonati", "abbonate", "che ha l'abbonamento", "che hanno l'abbonamento", "l'utenza abbonata"),
]

VOWELS = "aeiouàèéìòù"


def _lo_initial(word):
    w = word.lower()
    return (w[0] == "s" and len(w) > 1 and w[1] not in VOWELS) or w[0] in "zxy" or w[:2] in ("gn", "ps", "pn")


def def_m_sg(w):
    if w[0].lower() in VOWELS:
        return "l'" + w
    return ("lo " if _lo_initial(w) else "il ") + w


def def_f_sg(w):
    return "l'" + w if w[0].lower() in VOWELS else "la " + w


def def_m_pl(w):
    return ("gli " if w[0].lower() in VOWELS or _lo_initial(w) else "i ") + w


def indef_m(w):
    return ("uno " if _lo_initial(w) else "un ") + w


def indef_f(w):
    return "un'" + w if w[0].lower() in VOWELS else "una " + w


# collectives whose elided article hides a feminine head noun
FEMININE_ELIDED = ("l'avvocatura", "l'infanzia", "l'amministrazione", "l'utenza")


def _collective_gender(collective):
    if collective.startswith("le "):
        return "fpl"
    if collective.startswith("la ") or collective.startswith(FEMININE_ELIDED):
        return "f"
    return "m"


def tutto(collective):
    return {"m": "tutto ", "f": "tutta ", "fpl": "tutte "}[_collective_gender(collective)] + collective


def questo(collective):
    gender = _collective_gender(collective)
    if collective.startswith("l'"):
        head = collective[2:]
    else:
        head = collective.split(" ", 1)[1]
    return {"m": "questo ", "f": "questa ", "fpl": "queste "}[gender] + head


def variants(m_sg, f_sg, m_pl, f_pl, rel_sg, rel_pl, collective):
    yield "def-sg", collective if collective.startswith(("il personale", "la ")) else f"la persona {rel_sg}", def_m_sg(m_sg), def_f_sg(f_sg)
    yield "def-pl", collective, def_m_pl(m_pl), "le " + f_pl
    yield "indef", f"una persona {rel_sg}", indef_m(m_sg), indef_f(f_sg)
    yield "ogni", f"ogni persona {rel_sg}", "ogni " + m_sg, "ogni " + f_sg
    yield "tutti", f"tutte le persone {rel_pl}", "tutti " + def_m_pl(m_pl), "tutte le " + f_pl
    yield "alcuni", f"alcune persone {rel_pl}", "alcuni " + m_pl, "alcune " + f_pl
    yield "tutto-coll", tutto(collective), "tutti " + def_m_pl(m_pl), "tutte le " + f_pl
    yield "questi", questo(collective), "questi " + m_pl, "queste " + f_pl


def build():
    rows = []
    for lemma in LEMMAS:
        for tag, n, m, f in variants(*lemma):
            if len({n, m, f}) < 3:
                continue
            number = "pl" if tag in ("def-pl", "tutti", "alcuni", "tutto-coll", "questi") else "sg"
            rows.append((n, m, f, f"lemma={lemma[0]},form={tag},number={number}"))
    return rows


if __name__ == "__main__":
    out = Path(__file__).resolve().parents[1] / "src" / "nevl" / "data" / "seed_lexicon.tsv"
    rows = build()
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("NEUTRAL\tMASCULINE\tFEMININE\tTAGS\n")
        for row in rows:
            fh.write("\t".join(row) + "\n")
    print(f"wrote {len(rows)} triplets to {out}")
