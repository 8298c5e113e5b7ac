#!/usr/bin/env python3
"""Independent high-precision oracle for the association measures.

Writes assoc_oracle.tsv: the worked table followed by 500 seeded random valid
2x2 tables, each with the nine measures evaluated at 50 significant digits.
Columns: N n11 n1p np1, then phi pmi salience log_likelihood poisson_stirling
chi t_score cooccurrence significance (with f1 = n1p, f2 = np1, f12 = n11)."""

import os
import random

import mpmath as mp

mp.mp.dps = 50
rng = random.Random(1234)


def measures(N, n11, n1p, np1):
    N, n11, n1p, np1 = map(mp.mpf, (N, n11, n1p, np1))
    n12, n21 = n1p - n11, np1 - n11
    n22 = N - n1p - np1 + n11
    n2p, np2 = N - n1p, N - np1
    obs = [n11, n12, n21, n22]
    exp = [n1p * np1 / N, n1p * np2 / N, n2p * np1 / N, n2p * np2 / N]
    chi = mp.fsum((o - e) ** 2 / e for o, e in zip(obs, exp) if e != 0)
    ll = 2 * mp.fsum(o * mp.log(o / e) for o, e in zip(obs, exp) if o != 0)
    den = n1p * n2p * np1 * np2
    phi = (n11 * n22 - n12 * n21) ** 2 / den if den != 0 else mp.mpf(0)
    if n11 == 0:
        pmi = t = ps = sal = mp.mpf(0)
    else:
        pmi = mp.log(n11 * N / (n1p * np1), 2)
        t = (n11 - exp[0]) / mp.sqrt(n11)
        ps = n11 * (mp.log(n11 / exp[0]) - 1)
        sal = pmi * mp.log(n11 + 1, 2)
    union = n1p + np1 - n11
    cooc = n11 / union if union != 0 else mp.mpf(0)
    sig = n11 / mp.sqrt(n1p * np1)
    return [phi, pmi, sal, ll, ps, chi, t, cooc, sig]


def random_table():
    N = rng.choice([rng.randint(1, 20), rng.randint(1, 500), rng.randint(1, 5000)])
    n1p = rng.randint(1, N)
    np1 = rng.randint(1, N)
    lo, hi = max(0, n1p + np1 - N), min(n1p, np1)
    r = rng.random()
    if r < 0.1:
        n11 = lo
    elif r < 0.2:
        n11 = hi
    else:
        n11 = rng.randint(lo, hi)
    return N, n11, n1p, np1


def main():
    tables = [(100, 10, 20, 25), (100, 0, 5, 5), (7, 7, 7, 7)] + [random_table() for _ in range(500)]
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "assoc_oracle.tsv")
    with open(path, "w") as f:
        f.write("N\tn11\tn1p\tnp1\tphi\tpmi\tsalience\tlog_likelihood\tpoisson_stirling\tchi\tt_score\tcooccurrence\tsignificance\n")
        for t in tables:
            vals = measures(*t)
            f.write("\t".join(map(str, t)) + "\t" + "\t".join(mp.nstr(v, 25) for v in vals) + "\n")


if __name__ == "__main__":
    main()
