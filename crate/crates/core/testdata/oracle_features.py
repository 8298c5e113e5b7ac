#!/usr/bin/env python3
"""Independent oracle for the golden feature matrix.

Reads the hand-enumerated candidate list in golden/expected_candidates.tsv and
the golden corpus resources, recomputes every feature slot from first
principles and writes golden/expected_features.tsv. Run from this directory."""

import math
import os
from collections import Counter, defaultdict
from fractions import Fraction

HERE = os.path.dirname(os.path.abspath(__file__))
G = os.path.join(HERE, "golden")
W = os.path.join(HERE, "wordnet")
EDGE = set("'‘’“”।॥…") | {c for c in map(chr, range(33, 127)) if not c.isalnum() and c != "-"}


def word_list(path):
    out = []
    for line in open(path, encoding="utf-8"):
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


SUFFIXES = word_list(os.path.join(G, "suffixes.txt"))


def stem(w):
    best = None
    for s in SUFFIXES:
        if w.endswith(s) and len(w) - len(s) >= 2 and (best is None or len(s) > len(best)):
            best = s
    return (w[: len(w) - len(best)], True) if best else (w, False)


def items(tokens):
    out = []
    for t in tokens:
        i, j = 0, len(t)
        while i < j and t[i] in EDGE:
            i += 1
        while j > i and t[j - 1] in EDGE:
            j -= 1
        if i == j:
            out.extend(t)
            continue
        out.extend(t[:i])
        out.append(t[i:j])
        out.extend(t[j:])
    return out


def sentences():
    for line in open(os.path.join(G, "sentences.txt"), encoding="utf-8"):
        if line.startswith("## doc:") or not line.strip():
            continue
        yield line.split()


# Corpus counts by direct enumeration.
bigrams = Counter()
unigrams = Counter()
for toks in sentences():
    stems = [stem(t)[0] for t in items(toks)]
    unigrams.update(stems)
    for a, b in zip(stems, stems[1:]):
        bigrams[(a, b)] += 1
N = sum(bigrams.values())


def assoc(w1, w2):
    n11 = bigrams[(w1, w2)]
    n1p = sum(c for (a, _), c in bigrams.items() if a == w1)
    np1 = sum(c for (_, b), c in bigrams.items() if b == w2)
    f1, f2 = unigrams[w1], unigrams[w2]
    f12 = min(n11, f1, f2)
    cooc = f12 / (f1 + f2 - f12) if f1 + f2 - f12 > 0 else 0.0
    sig = f12 / math.sqrt(f1 * f2) if f1 and f2 else 0.0
    if n1p == 0 or np1 == 0:
        return [0.0] * 7 + [cooc, sig]
    obs = [[n11, n1p - n11], [np1 - n11, N - n1p - np1 + n11]]
    rows = [n1p, N - n1p]
    cols = [np1, N - np1]
    exp = [[Fraction(rows[i] * cols[j], N) for j in range(2)] for i in range(2)]
    chi = float(sum((obs[i][j] - exp[i][j]) ** 2 / exp[i][j] for i in range(2) for j in range(2) if exp[i][j] != 0))
    ll = 2 * math.fsum(obs[i][j] * math.log(obs[i][j] / exp[i][j]) for i in range(2) for j in range(2) if obs[i][j] > 0)
    den = rows[0] * rows[1] * cols[0] * cols[1]
    phi = float(Fraction((obs[0][0] * obs[1][1] - obs[0][1] * obs[1][0]) ** 2, den)) if den else 0.0
    if n11 == 0:
        pmi = t = ps = sal = 0.0
    else:
        m11 = float(exp[0][0])
        pmi = math.log2((n11 / N) / ((n1p / N) * (np1 / N)))
        t = (n11 - m11) / math.sqrt(n11)
        ps = n11 * (math.log(n11 / m11) - 1)
        sal = pmi * math.log2(n11 + 1)
    return [phi, pmi, sal, ll, ps, chi, t, cooc, sig]


# Toy WordNet.
synsets = {}
for line in open(os.path.join(W, "data.noun"), encoding="utf-8"):
    if line.startswith("  "):
        continue
    head, gloss = line.split("|", 1)
    f = head.split()
    n = int(f[3], 16)
    lemmas = [f[4 + 2 * k].lower() for k in range(n)]
    p = 4 + 2 * n
    ptrs = [int(f[p + 2 + 4 * k]) for k in range(int(f[p + 0])) if f[p + 1 + 4 * k] in ("@", "@i")]
    synsets[int(f[0])] = (lemmas, ptrs, gloss.strip())
ROOT = "root"
senses = defaultdict(list)
for line in open(os.path.join(W, "index.noun"), encoding="utf-8"):
    if line.startswith("  "):
        continue
    f = line.split()
    cnt = int(f[2])
    senses[f[0]].extend(int(x) for x in f[-cnt:])


def parents(s):
    if s == ROOT:
        return []
    return synsets[s][1] or [ROOT]


def upward(s):
    """All ancestors (including s and the root) with shortest edge distance."""
    dist = {s: 0}
    frontier = [s]
    while frontier:
        nxt = []
        for x in frontier:
            for p in parents(x):
                if p not in dist:
                    dist[p] = dist[x] + 1
                    nxt.append(p)
        frontier = nxt
    return dist


def depth(s):
    return 1 if s == ROOT else 1 + max(depth(p) for p in parents(s))


own = {s: 0.0 for s in synsets}
for line in open(os.path.join(W, "ic.txt"), encoding="utf-8"):
    if line.strip() and not line.startswith("#"):
        o, c = line.split("\t")
        own[int(o)] += float(c)
freq = defaultdict(float)
for s, c in own.items():
    for a in upward(s):
        freq[a] += c


def ic(s):
    return -math.log(freq[s] / freq[ROOT]) if freq[s] > 0 else None


STOP = set(word_list(os.path.join(HERE, "..", "resources", "stopwords_en.txt")))


def bag(text):
    words = "".join(c if c.isalnum() else " " for c in text.lower()).split()
    return Counter(w for w in words if w not in STOP)


def cos(a, b):
    if not a or not b:
        return 0.0
    dot = sum(a[k] * b[k] for k in a if k in b)
    return min(1.0, dot / (math.sqrt(sum(v * v for v in a.values())) * math.sqrt(sum(v * v for v in b.values()))))


def pair_scores(s1, s2):
    u1, u2 = upward(s1), upward(s2)
    common = [a for a in u1 if a in u2]
    path = 1.0 / (min(u1[a] + u2[a] for a in common) + 1)
    wup = 2.0 * max(depth(a) for a in common) / (depth(s1) + depth(s2))
    i1, i2 = ic(s1), ic(s2)
    lin = min(1.0, 2.0 * max(ic(a) or 0.0 for a in common) / (i1 + i2)) if i1 and i2 else 0.0
    vec = cos(bag(synsets[s1][2]), bag(synsets[s2][2]))
    hyp = cos(bag(" ".join(synsets[p][2] for p in synsets[s1][1])), bag(" ".join(synsets[p][2] for p in synsets[s2][1])))
    return [lin, wup, path, vec, (vec + hyp) / 2]


dictionary = defaultdict(list)
for line in open(os.path.join(W, "dictionary.tsv"), encoding="utf-8"):
    if line.strip() and not line.startswith("#"):
        src, tgts = line.rstrip("\n").split("\t")
        dictionary[src.strip()].extend(t.strip() for t in tgts.split(",") if t.strip())


def translate(w):
    for key in (w, stem(w)[0]):
        if dictionary.get(key):
            return dictionary[key][0]
    return None


def wordnet(w1, w2):
    t1, t2 = translate(w1), translate(w2)
    if not t1 or not t2 or not senses.get(t1.lower()) or not senses.get(t2.lower()):
        return [0.0] * 5
    best = [0.0] * 5
    for s1 in senses[t1.lower()]:
        for s2 in senses[t2.lower()]:
            best = [max(b, x) for b, x in zip(best, pair_scores(s1, s2))]
    return best


ONE_HOT = {"XC": [1.0, 0.0, 0.0], "NN": [0.0, 1.0, 0.0], "NNP": [0.0, 0.0, 1.0], "NA": [0.0, 1.0, 0.0]}
NAMES = [
    "phi", "pmi", "salience", "log_likelihood", "poisson_stirling", "chi", "t_score", "cooccurrence",
    "significance", "lin", "wup", "path", "vector", "vector_pairs", "avg_word_length", "hyphenated",
    "within_quote", "within_bracket", "oov", "reduplicated", "first_word_inflected",
    "second_word_inflected", "tag1_xc", "tag1_nn", "tag1_nnp", "tag2_xc", "tag2_nn", "tag2_nnp",
]

rows = []
lines = open(os.path.join(G, "expected_candidates.tsv"), encoding="utf-8").read().splitlines()[1:]
for line in lines:
    w1, w2, s1, s2, _occ, flags, tags, label = line.split("\t")
    flags = set(flags.split(","))
    t1, t2 = tags.split(",")
    v = assoc(s1, s2) + wordnet(w1, w2)
    v.append((len(w1) + len(w2)) / 2)
    v += [float(f in flags) for f in ("hyphenated", "quoted", "bracketed", "oov")]
    v.append(float("reduplicated" in flags or s1 == s2 or w1 == w2))
    v += [float(stem(w1)[1]), float(stem(w2)[1])]
    v += ONE_HOT[t1] + ONE_HOT[t2]
    rows.append("\t".join(repr(float(x)) for x in v) + "\t%s\t%s %s" % (label, s1, s2))

with open(os.path.join(G, "expected_features.tsv"), "w", encoding="utf-8") as f:
    f.write("\t".join(NAMES) + "\tlabel\tkey\n")
    f.write("\n".join(rows) + "\n")
