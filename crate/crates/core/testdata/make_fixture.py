#!/usr/bin/env python3
"""Regenerates testdata/corpus: a small synthetic romanized Bengali corpus with
chunk annotations, gold MWE list, lexicons, bilingual dictionary and a noun
WordNet. Output is deterministic; rerun with `python3 make_fixture.py`."""

import os
import random

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")
rng = random.Random(20240607)

# Bengali noun -> English translation (WordNet lemma).
NOUNS = {
    "mAnuSh": "person", "lok": "man", "mahilA": "woman", "mantrI": "minister",
    "shikShak": "teacher", "chhAtra": "student", "kRiShak": "farmer", "rAjA": "king",
    "jAygA": "place", "rAjya": "state", "shahar": "city", "grAm": "village",
    "desh": "country", "nadI": "river", "bhaban": "building", "bAri": "house",
    "bidyAlay": "school", "daptar": "office", "bAjAr": "market", "sTeshan": "station",
    "sangsthA": "organization", "sarkAr": "government", "dal": "party", "samiti": "committee",
    "sabhA": "society", "byAnk": "bank", "jinis": "object", "jal": "water",
    "bidyut": "electricity", "rAstA": "road", "kAgaj": "paper", "boi": "book",
    "khabar": "news", "chhobi": "film", "samay": "time", "din": "day", "rAt": "night",
    "ghantA": "hour", "bachhar": "year", "AIn": "law", "shikShA": "education",
    "sAhitya": "literature", "svAsthya": "health", "shakti": "power", "kendra": "centre",
    "pradhAn": "chief", "dAm": "price", "pAni": "drink",
}
# Known to the lexicon but absent from the dictionary.
LEXICON_ONLY_NOUNS = ["ghAt", "panchAyat", "melA"]
PROPER = ["kalkAtA", "dillI", "bA~NglA"]

POSITIVE = [
    ("rAjya", "sarkAr"), ("pradhAn", "mantrI"), ("jal", "bidyut"), ("khabar", "kAgaj"),
    ("shikShA", "mantrI"), ("svAsthya", "kendra"), ("bidyut", "kendra"), ("rAstA", "ghAt"),
    ("sAhitya", "sabhA"), ("grAm", "panchAyat"), ("bAjAr", "dAm"), ("din", "rAt"),
    ("shikShA", "sangsthA"), ("byAnk", "daptar"), ("boi", "melA"), ("desh", "sarkAr"),
    ("pAni", "jal"), ("rAjya", "samiti"), ("shahar", "kendra"), ("bidyAlay", "bhaban"),
    ("rAjA", "bAri"), ("kRiShak", "samiti"),
]
SUFFIXES = ["er", "der", "ke", "gulo"]
NUMBERS = ["ek", "dui", "teen", "chAr", "pA~Nch", "soyA", "sARe", "derh"]
ADJ = ["notun", "puronon", "boro", "chhoto", "bhAlo", "sundar"]
VERBS = ["karechhe", "dekhechhe", "bolechhe", "geChhe", "ache", "hobe", "chAy", "dilo"]
PSP = ["theke", "niye", "jonyo", "sange", "moddhe"]
CC = ["o", "ebong", "kintu"]
OOV = ["kampiuTAr", "inTAraneT", "mobAil", "sim", "nAno", "Tivi", "rediyo", "phesbuk"]

# WordNet: synset name -> (parent names, gloss, lemmas).
SYNSETS = {
    "entity": ([], "that which is perceived or known to have its own distinct existence", []),
    "physical_entity": (["entity"], "an entity that has physical existence", []),
    "abstraction": (["entity"], "a general concept formed by extracting common features", []),
    "person": (["physical_entity"], "a human being", ["person"]),
    "man": (["person"], "an adult male person", ["man"]),
    "woman": (["person"], "an adult female person", ["woman"]),
    "leader": (["person"], "a person who rules or guides others", []),
    "minister": (["leader"], "a person who is a member of the government and heads a department", ["minister"]),
    "king": (["leader"], "a male sovereign ruler of a state", ["king"]),
    "chief": (["leader"], "a person who is head of an organization", ["chief"]),
    "teacher": (["person"], "a person whose occupation is teaching at a school", ["teacher"]),
    "student": (["person"], "a learner who is enrolled in a school", ["student"]),
    "farmer": (["person"], "a person who operates a farm in a village", ["farmer"]),
    "location": (["physical_entity"], "a point or extent in space", []),
    "place": (["location"], "a particular point in space", ["place"]),
    "region": (["location"], "a large indefinite location on the surface of the earth", []),
    "state": (["region"], "a politically organized region of a country", ["state"]),
    "country": (["region"], "a politically organized body of people under a government", ["country"]),
    "city": (["region"], "a large and densely populated urban area", ["city"]),
    "village": (["region"], "a community of people smaller than a town", ["village"]),
    "centre": (["place"], "a place where some particular activity is concentrated", ["centre"]),
    "river": (["physical_entity"], "a large natural stream of water", ["river"]),
    "structure": (["physical_entity"], "a thing constructed from parts", []),
    "building": (["structure"], "a structure that has a roof and walls", ["building"]),
    "house": (["building"], "a building that serves as living quarters for a family", ["house"]),
    "school": (["building"], "a building where young people receive education", ["school"]),
    "office": (["building"], "a place of business where professional work is done", ["office"]),
    "market": (["building"], "a place where goods are bought and sold", ["market"]),
    "station": (["building"], "a facility equipped with special equipment for a service", ["station"]),
    "road": (["structure"], "an open way for travel between places", ["road"]),
    "object": (["physical_entity"], "a tangible and visible entity", ["object"]),
    "substance": (["physical_entity"], "the real physical matter of which a thing consists", []),
    "water": (["substance"], "binary compound that occurs as a liquid", ["water"]),
    "drink": (["substance"], "a liquid suitable for drinking such as water", ["drink"]),
    "electricity": (["substance"], "energy made available by the flow of electric charge", ["electricity"]),
    "paper": (["substance"], "a material made of cellulose pulp used for writing", ["paper"]),
    "group": (["abstraction"], "a number of entities considered as a unit", []),
    "organization": (["group"], "a group of people who work together", ["organization"]),
    "government": (["organization"], "the organization that is the governing authority of a state", ["government"]),
    "party": (["organization"], "an organization to gain political power", ["party"]),
    "committee": (["organization"], "a group of people appointed to perform a function", ["committee"]),
    "society": (["organization"], "an extended social group having a distinctive culture", ["society"]),
    "bank": (["organization"], "a financial institution that accepts deposits", ["bank"]),
    "communication": (["abstraction"], "something that is communicated by or to people", []),
    "book": (["communication"], "a written work or composition that has been published", ["book"]),
    "news": (["communication"], "information reported in a paper or on the radio", ["news"]),
    "film": (["communication"], "a form of entertainment that enacts a story by images", ["film"]),
    "law": (["communication"], "the collection of rules imposed by authority of a government", ["law"]),
    "time_period": (["abstraction"], "an amount of time", ["time"]),
    "day": (["time_period"], "time for one rotation of the earth", ["day"]),
    "night": (["time_period"], "the time after sunset and before sunrise", ["night"]),
    "hour": (["time_period"], "a period of time equal to one twenty fourth of a day", ["hour"]),
    "year": (["time_period"], "a period of time containing twelve months", ["year"]),
    "knowledge": (["abstraction"], "the psychological result of perception and learning", []),
    "education": (["knowledge"], "knowledge acquired by learning and instruction at a school", ["education"]),
    "literature": (["knowledge"], "creative writing of recognized artistic value in a book", ["literature"]),
    "condition": (["abstraction"], "a state at a particular time", []),
    "health": (["condition"], "a healthy state of wellbeing free from disease", ["health"]),
    "power": (["condition"], "possession of controlling influence", ["power"]),
    "price": (["abstraction"], "the amount of money needed to purchase something in a market", ["price"]),
}


def tagged_noun(word, inflect):
    if inflect and rng.random() < 0.35:
        word += rng.choice(SUFFIXES)
    return word


def np_chunk(nouns, tags, adj=None, inflect_last=True):
    toks = []
    if adj:
        toks.append((adj, "JJ"))
    for i, (n, t) in enumerate(zip(nouns, tags)):
        toks.append((tagged_noun(n, inflect_last and i == len(nouns) - 1), t))
    return [(w, t, "B-NP" if i == 0 else "I-NP") for i, (w, t) in enumerate(toks)]


def noun_tag(n):
    return "NNP" if n in PROPER else "NN"


def random_noun():
    pool = list(NOUNS) + LEXICON_ONLY_NOUNS
    return rng.choice(pool)


def sentence():
    """One sentence as a list of (surface, pos, chunk) triples."""
    chunks = []
    kind = rng.random()
    if kind < 0.45:
        a, b = rng.choice(POSITIVE)
        first_tag = "XC" if rng.random() < 0.25 else noun_tag(a)
        chunks.append(np_chunk([a, b], [first_tag, noun_tag(b)], rng.choice(ADJ) if rng.random() < 0.3 else None))
    elif kind < 0.85:
        a, b = random_noun(), random_noun()
        while (a, b) in POSITIVE or a == b:
            a, b = random_noun(), random_noun()
        chunks.append(np_chunk([a, b], [noun_tag(a), noun_tag(b)]))
    else:
        chunks.append(np_chunk([rng.choice(PROPER), random_noun()], ["NNP", "NN"]))
    if rng.random() < 0.5:
        chunks.append([(rng.choice(PSP), "PSP", "O")])
    if rng.random() < 0.6:
        chunks.append(np_chunk([random_noun()], ["NN"], rng.choice(ADJ) if rng.random() < 0.5 else None))
    if rng.random() < 0.1:
        n1, n2 = rng.sample(NUMBERS, 2)
        chunks.append([(n1, "NN", "B-NP"), (n2, "NN", "I-NP"), (rng.choice(["ghantA", "din"]), "NN", "I-NP")])
    if rng.random() < 0.08:
        chunks.append([(str(rng.randint(1, 99)), "NN", "B-NP"), (str(rng.randint(1, 99)), "NN", "I-NP")])
    rng.shuffle(chunks)
    tokens = [t for c in chunks for t in c]
    tokens.append((rng.choice(VERBS), "VM", "O"))
    return tokens


def heuristic_sentence():
    """A sentence exercising the raw-text heuristics; returns chunk triples."""
    r = rng.random()
    verb = (rng.choice(VERBS), "VM", "O")
    if r < 0.2:
        w = rng.choice(["bAri", "din", "grAm", "shahar"])
        toks = [(w, "NN", "B-NP"), (w, "NN", "I-NP")]
    elif r < 0.4:
        a, b = rng.choice(POSITIVE[:12] + [("mA", "bAbA"), ("bhAi", "bon")])
        toks = [(a + "-" + b, "NN", "B-NP")]
    elif r < 0.6:
        a, b = rng.sample(OOV, 2)
        toks = [("'", "SYM", "O"), (a, "NN", "B-NP"), (b, "NN", "I-NP"), ("'", "SYM", "O")]
    elif r < 0.8:
        a, b = rng.sample(OOV, 2)
        toks = [("(", "SYM", "O"), (a, "NN", "B-NP"), (b, "NN", "I-NP"), (")", "SYM", "O")]
    else:
        a, b = rng.sample(OOV, 2)
        toks = [(a, "NN", "B-NP"), (b, "NN", "I-NP")]
    lead = np_chunk([random_noun()], ["NN"])
    return lead + toks + [verb]


def raw_text(sentences):
    parts = []
    for toks in sentences:
        words = []
        i = 0
        while i < len(toks):
            w = toks[i][0]
            # Attach opening and closing marks to their neighbours as in running text.
            if w in ("'", "(") and i + 1 < len(toks):
                words.append(w + toks[i + 1][0])
                i += 2
                continue
            if w in ("'", ")") and words:
                words[-1] += w
                i += 1
                continue
            words.append(w)
            i += 1
        parts.append(" ".join(words) + rng.choice([" ।", " ।", " ।", "?", "!"]))
    return " ".join(parts) + "\n"


def main():
    os.makedirs(os.path.join(OUT, "raw"), exist_ok=True)
    os.makedirs(os.path.join(OUT, "wordnet"), exist_ok=True)
    docs = []
    for d in range(24):
        sents = [sentence() if rng.random() < 0.85 else heuristic_sentence() for _ in range(rng.randint(12, 22))]
        docs.append(("doc%02d" % d, sents))

    for name, sents in docs:
        with open(os.path.join(OUT, "raw", name + ".txt"), "w", encoding="utf-8") as f:
            f.write(raw_text(sents))
    with open(os.path.join(OUT, "chunks.tsv"), "w", encoding="utf-8") as f:
        blocks = ["\n".join("\t".join(t) for t in s) for _, sents in docs for s in sents]
        f.write("\n\n".join(blocks) + "\n")

    with open(os.path.join(OUT, "gold.txt"), "w", encoding="utf-8") as f:
        f.write("# Manually identified noun-noun MWEs\n")
        for a, b in POSITIVE + [("bAri", "bAri"), ("din", "din"), ("mA", "bAbA"), ("bhAi", "bon")]:
            f.write("%s %s\n" % (a, b))
    with open(os.path.join(OUT, "suffixes.txt"), "w", encoding="utf-8") as f:
        f.write("# Nominal inflections\n" + "\n".join(SUFFIXES) + "\n")
    with open(os.path.join(OUT, "numbers.txt"), "w", encoding="utf-8") as f:
        f.write("# Number words\n" + "\n".join(NUMBERS) + "\n")
    with open(os.path.join(OUT, "dictionary.tsv"), "w", encoding="utf-8") as f:
        f.write("# Bengali headword, English translations\n")
        for bn, en in sorted(NOUNS.items()):
            f.write("%s\t%s\n" % (bn, en))
    lexicon = set(NOUNS) | set(LEXICON_ONLY_NOUNS) | set(PROPER) | set(ADJ) | set(VERBS) | set(PSP) | set(CC)
    lexicon |= set(NUMBERS) | {"mA", "bAbA", "bhAi", "bon"}
    with open(os.path.join(OUT, "lexicon.txt"), "w", encoding="utf-8") as f:
        f.write("# Reference vocabulary\n" + "\n".join(sorted(lexicon)) + "\n")

    names = list(SYNSETS)
    offset = {n: 1000 + 100 * i for i, n in enumerate(names)}
    with open(os.path.join(OUT, "wordnet", "data.noun"), "w", encoding="utf-8") as f:
        f.write("  1 Synthetic noun database in WordNet data.noun layout.\n")
        for n in names:
            parents, gloss, lemmas = SYNSETS[n]
            words = lemmas or [n]
            ptrs = " ".join("@ %08d n 0000" % offset[p] for p in parents)
            f.write("%08d 03 n %02x %s %03d %s| %s\n" % (
                offset[n], len(words), " ".join(w + " 0" for w in words), len(parents),
                ptrs + " " if ptrs else "", gloss))
    index = {}
    for n in names:
        for w in SYNSETS[n][2] or [n]:
            index.setdefault(w, []).append(offset[n])
    with open(os.path.join(OUT, "wordnet", "index.noun"), "w", encoding="utf-8") as f:
        f.write("  1 Synthetic noun index.\n")
        for w in sorted(index):
            offs = index[w]
            f.write("%s n %d 1 @ %d 0 %s\n" % (w, len(offs), len(offs), " ".join("%08d" % o for o in offs)))
    with open(os.path.join(OUT, "wordnet", "ic.txt"), "w", encoding="utf-8") as f:
        f.write("# synset offset, own frequency\n")
        for n in names:
            f.write("%08d\t%d\n" % (offset[n], rng.randint(1, 50)))


if __name__ == "__main__":
    main()
