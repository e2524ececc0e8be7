"""Brute-force reference implementations used only by the tests.

Everything here is deliberately naive: explicit loops, no Counters, no
bit tricks, exhaustive search where the production code is greedy or
memoised.
"""

from __future__ import annotations

import itertools
import math

from nevl.metrics.tokenize import tokenize_13a


# --------------------------------------------------------------------- BLEU


def _list_ngrams(tokens, n):
    return [tokens[i : i + n] for i in range(len(tokens) - n + 1)]


def _occurrences(ngram, ngrams):
    c = 0
    for g in ngrams:
        if g == ngram:
            c += 1
    return c


def bleu_oracle(hyps, refs, max_order=4, smooth=True):
    correct = [0] * max_order
    total = [0] * max_order
    sys_len = ref_len = 0
    for hyp_text, ref_texts in zip(hyps, refs):
        hyp = tokenize_13a(hyp_text)
        rtoks = [tokenize_13a(r) for r in ref_texts]
        for n in range(1, max_order + 1):
            hyp_ngrams = _list_ngrams(hyp, n)
            seen = []
            for g in hyp_ngrams:
                if g in seen:
                    continue
                seen.append(g)
                count = _occurrences(g, hyp_ngrams)
                max_ref = 0
                for r in rtoks:
                    max_ref = max(max_ref, _occurrences(g, _list_ngrams(r, n)))
                correct[n - 1] += min(count, max_ref)
                total[n - 1] += count
        sys_len += len(hyp)
        best = None
        for r in rtoks:
            d = abs(len(r) - len(hyp))
            if best is None or d < best[0] or (d == best[0] and len(r) < best[1]):
                best = (d, len(r))
        ref_len += best[1]
    if sys_len == 0:
        return 0.0
    k = 0
    logs = []
    for n in range(max_order):
        if total[n] == 0:
            return 0.0
        if correct[n] == 0:
            if not smooth:
                return 0.0
            k += 1
            logs.append(math.log(1.0 / (2**k * total[n])))
        else:
            logs.append(math.log(correct[n] / total[n]))
    bp = 1.0 if sys_len >= ref_len else math.exp(1 - ref_len / sys_len)
    return 100.0 * bp * math.exp(sum(logs) / max_order)


# --------------------------------------------------------------------- chrF


def _chrf_single(hyp, ref, order, beta):
    hyp = "".join(hyp.split())
    ref = "".join(ref.split())
    precisions, recalls = [], []
    for n in range(1, order + 1):
        hg = [hyp[i : i + n] for i in range(len(hyp) - n + 1)]
        rg = [ref[i : i + n] for i in range(len(ref) - n + 1)]
        if not hg or not rg:
            continue
        matches = 0
        for g in set(hg):
            matches += min(hg.count(g), rg.count(g))
        precisions.append((matches, len(hg)))
        recalls.append((matches, len(rg)))
    return precisions, recalls


def _chrf_from(prec_stats, rec_stats, beta):
    if not prec_stats:
        return 0.0
    p = sum(m / t for m, t in prec_stats) / len(prec_stats)
    r = sum(m / t for m, t in rec_stats) / len(rec_stats)
    if p + r == 0:
        return 0.0
    return 100.0 * (1 + beta**2) * p * r / (beta**2 * p + r)


def chrf_oracle(hyps, refs, order=6, beta=2.0):
    """Pools per-order counts of each segment's best reference."""
    pooled = {}
    for hyp, ref_texts in zip(hyps, refs):
        best = None
        for ref in ref_texts:
            hyp_s = "".join(hyp.split())
            ref_s = "".join(ref.split())
            per_order = []
            for n in range(1, order + 1):
                hg = [hyp_s[i : i + n] for i in range(len(hyp_s) - n + 1)]
                rg = [ref_s[i : i + n] for i in range(len(ref_s) - n + 1)]
                matches = sum(min(hg.count(g), rg.count(g)) for g in set(hg))
                per_order.append((len(hg), len(rg), matches))
            p, r = _chrf_single(hyp, ref, order, beta)
            s = _chrf_from(p, r, beta)
            if best is None or s > best[0]:
                best = (s, per_order)
        for n, triple in enumerate(best[1]):
            acc = pooled.setdefault(n, [0, 0, 0])
            for i in range(3):
                acc[i] += triple[i]
    prec, rec = [], []
    for n in sorted(pooled):
        h, r, m = pooled[n]
        if h > 0 and r > 0:
            prec.append((m, h))
            rec.append((m, r))
    return _chrf_from(prec, rec, beta)


# ---------------------------------------------------------------------- TER


def naive_edit_distance(a, b):
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (0 if a[i - 1] == b[j - 1] else 1),
            )
    return d[len(a)][len(b)]


def _all_shifts(tokens, max_size=10, max_dist=50):
    n = len(tokens)
    for start in range(n):
        for length in range(1, min(max_size, n - start) + 1):
            block = tokens[start : start + length]
            rest = tokens[:start] + tokens[start + length :]
            for pos in range(len(rest) + 1):
                if pos == start or abs(pos - start) > max_dist:
                    continue
                yield tuple(rest[:pos] + block + rest[pos:])


def min_edits_exhaustive(hyp, ref):
    """Minimum of (#shifts + edit distance) over every sequence of block shifts.

    Shifts never change the multiset of hypothesis words, so the bag-of-words
    mismatch bounds the residual edit distance from below; depth d only needs
    exploring while d + that bound can still beat the best total found.
    """
    hyp, ref = tuple(hyp), tuple(ref)
    common = 0
    pool = list(ref)
    for t in hyp:
        if t in pool:
            pool.remove(t)
            common += 1
    lower = max(len(hyp), len(ref)) - common
    best = naive_edit_distance(hyp, ref)
    frontier = {hyp}
    seen = {hyp}
    depth = 0
    while depth + 1 + lower < best:
        depth += 1
        nxt = set()
        for state in frontier:
            for cand in _all_shifts(list(state)):
                if cand in seen:
                    continue
                seen.add(cand)
                nxt.add(cand)
                best = min(best, depth + naive_edit_distance(cand, ref))
        frontier = nxt
        if not frontier:
            break
    return best


def ter_oracle(hyp_text, ref_texts):
    hyp = tokenize_13a(hyp_text.lower())
    best = None
    for r in ref_texts:
        ref = tokenize_13a(r.lower())
        e = min_edits_exhaustive(hyp, ref)
        if best is None or e / len(ref) < best[0] / best[1]:
            best = (e, len(ref))
    return 100.0 * best[0] / best[1]


def corpus_ter_oracle(hyps, refs):
    edits = length = 0
    for h, rs in zip(hyps, refs):
        hyp = tokenize_13a(h.lower())
        best = None
        for r in rs:
            ref = tokenize_13a(r.lower())
            e = min_edits_exhaustive(hyp, ref)
            if best is None or e / len(ref) < best[0] / best[1]:
                best = (e, len(ref))
        edits += best[0]
        length += best[1]
    return 100.0 * edits / length


# ------------------------------------------------------------------- METEOR


def _chunks(pairs):
    pairs = sorted(pairs)
    chunks = 0
    for k, (i, j) in enumerate(pairs):
        if k == 0 or not (i == pairs[k - 1][0] + 1 and j == pairs[k - 1][1] + 1):
            chunks += 1
    return chunks


def exact_alignments(hyp, ref):
    """Every maximum-cardinality exact-match alignment, by enumeration."""
    per_word = []
    for w in sorted(set(hyp) & set(ref)):
        hpos = [i for i, t in enumerate(hyp) if t == w]
        rpos = [j for j, t in enumerate(ref) if t == w]
        q = min(len(hpos), len(rpos))
        options = []
        for hs in itertools.combinations(hpos, q):
            for rs in itertools.permutations(rpos, q):
                options.append(list(zip(hs, rs)))
        per_word.append(options)
    for combo in itertools.product(*per_word):
        yield [p for part in combo for p in part]


def meteor_stats_oracle(hyp, ref):
    best = None
    for pairs in exact_alignments(hyp, ref):
        c = _chunks(pairs) if pairs else 0
        if best is None or c < best[1]:
            best = (len(pairs), c)
    return best if best is not None else (0, 0)


def meteor_formula(m, chunks, hyp_len, ref_len, alpha=0.9, beta=3.0, gamma=0.5):
    if m == 0:
        return 0.0
    p = m / hyp_len
    r = m / ref_len
    f = p * r / (alpha * p + (1 - alpha) * r)
    return f * (1 - gamma * (chunks / m) ** beta)


def meteor_oracle(hyp_text, ref_texts):
    hyp = tokenize_13a(hyp_text.lower())
    best = 0.0
    for r in ref_texts:
        ref = tokenize_13a(r.lower())
        m, c = meteor_stats_oracle(hyp, ref)
        best = max(best, meteor_formula(m, c, len(hyp), len(ref)))
    return best
