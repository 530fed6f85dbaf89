"""Acceptance criteria, one test each.  Every test appends a PASS/FAIL line
(with its time against the budget) to the summary printed at the end of the run."""

import random
import time
from itertools import permutations
from math import comb

from conftest import ACCEPTANCE_LINES, naive_alpha
from hdepthkit.combinatorics import fvector_feasible, magic_identity_rhs
from hdepthkit.hdepth import (AlphaVector, alpha_enumerate, alpha_inclusion_exclusion, alpha_of_ideal,
                              alpha_of_quotient, beta_table, hdepth, hdepth_general)
from hdepthkit.ideals import (MonomialIdeal, intersect, parse_ideal, polarize, random_squarefree_masks,
                              squarefree_ideals)
from hdepthkit.search import enumerate_feasible_alpha, realize_colex
from hdepthkit.verify import DEFAULT_SCALE, check_sweep_n6, check_sweep_n7, check_sweep_small, check_targeted


class Criterion:
    def __init__(self, label, budget):
        self.label, self.budget = label, budget
        self.failures = []
        self.note = ""

    def check(self, what, cond):
        if not cond:
            self.failures.append(what)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if exc is not None:
            self.failures.append(f"raised {exc_type.__name__}: {exc}")
        if elapsed >= self.budget:
            self.failures.append(f"took {elapsed:.2f}s, budget {self.budget}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"{status}  {self.label:<40} {elapsed:8.2f}s (< {self.budget}s)"
        if self.note:
            line += f"  {self.note}"
        if self.failures:
            line += "  -- " + "; ".join(self.failures[:5])
        ACCEPTANCE_LINES.append(line)
        print(line)
        return False


def test_c1_patru():
    with Criterion("1 Example patru", 1) as c:
        I = parse_ideal("x1x2, x1x3, x1x4, x1x5x6", 6)
        aS, aI = alpha_of_quotient(None, I), alpha_of_ideal(I)
        c.check("alpha(S/I)", aS.counts == (1, 6, 12, 10, 5, 1, 0))
        c.check("alpha(S/I) brute force", list(aS.counts) == naive_alpha([{1, 2}, {1, 3}, {1, 4}, {1, 5, 6}], 6))
        c.check("alpha(I)", aI.counts == (0, 0, 3, 10, 10, 5, 1))
        c.check("beta^4(S/I)", beta_table(aS, 4).values == (1, 2, 0, 0, 2))
        c.check("beta_2^5(S/I)", beta_table(aS, 5)[2] == -2)
        c.check("beta^4(I)", beta_table(aI, 4).values == (0, 0, 3, 4, 3))
        c.check("beta_4^5(I)", beta_table(aI, 5)[4] == -1)
        c.check("hdepth(S/I)", hdepth(aS).hdepth == 4)
        c.check("hdepth(I)", hdepth(aI).hdepth == 4)
    assert not c.failures


def test_c2_minus():
    with Criterion("2 Example minus (n=13)", 1) as c:
        n = 13
        I = intersect(parse_ideal("x1", n), parse_ideal("x2,...,x13", n))
        aS, aI = alpha_of_quotient(None, I), alpha_of_ideal(I)
        c.check("hdepth(S/I)", hdepth(aS).hdepth == 8)
        c.check("hdepth(I)", hdepth(aI).hdepth == 7)
        c.check("alpha_2(I)", aI[2] == 12)
        c.check("alpha_3(I)", aI[3] == 66)
        c.check("beta_3^8(I)", beta_table(aI, 8)[3] == -6)
    assert not c.failures


def test_c3_minus2():
    with Criterion("3 Example minus2 (n=14)", 2) as c:
        n = 14
        pairs = ", ".join(f"x{i}x{j}" for i in range(2, 15) for j in range(i + 1, 15))
        I = intersect(parse_ideal("x1", n), parse_ideal(pairs, n))
        aS, aI = alpha_of_quotient(None, I), alpha_of_ideal(I)
        c.check("hdepth(S/I)", hdepth(aS).hdepth == 7)
        c.check("hdepth(I)", hdepth(aI).hdepth == 6)
        c.check("alpha_3(I)", aI[3] == comb(13, 2))
        c.check("alpha_4(I)", aI[4] == comb(13, 3))
        c.check("beta_4^7(I) < 0", beta_table(aI, 7)[4] < 0)
    assert not c.failures


def test_c4_minus3():
    with Criterion("4 Example minus3 (n=10)", 2) as c:
        prefix = (1, 10, 45, 120, 197, 216, 155, 70)
        c.check("feasible", fvector_feasible(prefix).feasible)
        alpha = AlphaVector.padded(prefix, 10)
        I = realize_colex(alpha)
        again = alpha_of_quotient(None, I)
        c.check("realized alpha", again == alpha)
        c.check("hdepth(S/I)", hdepth(again).hdepth == 7)
        c.check("beta_5^7(S/I)", beta_table(again, 7)[5] == 24)
        c.check("C(7,5)", comb(7, 5) == 21 == magic_identity_rhs(10, 7, 5))
        c.check("hdepth(I)", hdepth(alpha_of_ideal(I)).hdepth == 6)
    assert not c.failures


def test_c5_exhaustive_n_le_5():
    with Criterion("5 exhaustive sweep n<=5", 60) as c:
        chk = check_sweep_small(dict(DEFAULT_SCALE))
        c.note = chk.detail
        c.check("sweep", chk.passed)
        c.failures += chk.mismatches[:3]
    assert not c.failures


def test_c6_sampled_n6_n7():
    with Criterion("6 sampled sweeps n=6, n=7 (+ hdepth 4/5)", 600) as c:
        scale = dict(DEFAULT_SCALE)
        details = []
        for fn in (check_sweep_n6, check_sweep_n7, check_targeted):
            chk = fn(scale)
            details.append(f"{chk.name}: {chk.detail}")
            c.check(chk.name, chk.passed)
            c.failures += chk.mismatches[:3]
        # every feasible alpha-vector at n = 6, 7 as well; hdepth only sees alpha
        full = dict(scale, n6="exhaustive", n7="exhaustive")
        for fn in (check_sweep_n6, check_sweep_n7):
            chk = fn(full)
            details.append(f"{chk.name}: {chk.detail}")
            c.check(chk.name + " exhaustive", chk.passed)
            c.failures += chk.mismatches[:3]
        c.check("n6 sample size", int(scale["n6"]) >= 10**5)
        c.check("n7 sample size", int(scale["n7"]) >= 10**5)
        c.note = "; ".join(details)
    assert not c.failures


def test_c7_magic_identity():
    with Criterion("7 identity, all k<=q<=n<=30", 1) as c:
        triples = 0
        for n in range(31):
            for q in range(n + 1):
                for k in range(q + 1):
                    lhs = sum((-1) ** (k - j) * comb(q - j, k - j) * comb(n, j) for j in range(k + 1))
                    c.check(f"n={n} q={q} k={k}", lhs == magic_identity_rhs(n, q, k))
                    triples += 1
        # every triple with 0 <= k <= q <= n <= 30; that is C(33, 3) of them
        c.check("triple count", triples == comb(33, 3))
        c.note = f"{triples} triples"
    assert not c.failures


def test_c8_alpha_oracles_agree():
    with Criterion("8 enumeration vs inclusion-exclusion", 120) as c:
        total = 0
        for n in range(6, 13):
            rng = random.Random(f"c8:{n}")
            for _ in range(1000):
                masks = random_squarefree_masks(n, rng)
                if alpha_enumerate(None, masks, n) != alpha_inclusion_exclusion(None, masks, n):
                    c.failures.append(f"n={n} masks={masks}")
                total += 1
        c.note = f"{total} ideals"
    assert not c.failures


def test_c9_compressed_complex_oracle():
    with Criterion("9 feasible alpha = complex alpha, n<=5", 60) as c:
        for n in range(1, 6):
            listed = {a.counts for a in enumerate_feasible_alpha(n)}
            actual = set()
            for gens in squarefree_ideals(n, include_trivial=True):
                if gens == (0,):
                    continue  # unit ideal: no faces at all
                faces = [m for m in range(1 << n) if not any(g & m == g for g in gens)]
                f = [0] * (n + 1)
                for m in faces:
                    f[m.bit_count()] += 1
                actual.add(tuple(f))
            c.check(f"n={n}", listed == actual)
        c.note = "set equality for n=1..5"
    assert not c.failures


def test_c10_polarization_consistency():
    with Criterion("10 polarization consistency", 60) as c:
        rng = random.Random("c10")
        done = 0
        while done < 1000:
            n = rng.randint(1, 4)
            rows = [tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(rng.randint(1, 4))]
            I = MonomialIdeal.from_exponents(rows, n)
            if I.is_unit() or I.is_squarefree():
                continue
            base = (hdepth_general(I).hdepth, hdepth_general(I, "ideal").hdepth)
            shuffled = rows[:]
            rng.shuffle(shuffled)
            c.check("generator order", (hdepth_general(MonomialIdeal.from_exponents(shuffled, n)).hdepth,
                                        hdepth_general(MonomialIdeal.from_exponents(shuffled, n), "ideal").hdepth)
                    == base)
            perm = rng.choice(list(permutations(range(n))))
            J = MonomialIdeal.from_exponents([tuple(r[p] for p in perm) for r in rows], n)
            c.check("relabeling", (hdepth_general(J).hdepth, hdepth_general(J, "ideal").hdepth) == base)
            P, N = polarize(I)
            for method in ("enumerate", "inclusion-exclusion"):
                q = hdepth(alpha_of_quotient(None, P, method)).hdepth - N
                qi = hdepth(alpha_of_ideal(P, method)).hdepth - N
                c.check(f"pipeline {method}", (q, qi) == base)
            done += 1
        c.note = f"{done} non-squarefree ideals"
    assert not c.failures
