"""Replays the worked examples and the comparison theorems on concrete instances.

Each check returns a :class:`Check`; ``run_checks`` drives them with a name
filter and a scale map (see ``DEFAULT_SCALE``).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .combinatorics import binom, fvector_feasible, kk_expand, kk_upper, magic_identity_rhs, shadow_lower_bound
from .hdepth import (AlphaVector, alpha_enumerate, alpha_from_beta, alpha_inclusion_exclusion,
                     alpha_of_ideal, alpha_of_quotient, beta_ideal_from_quotient, beta_table,
                     beta_values, compare_criteria, hdepth, hdepth_value, principal_profile)
from .ideals import intersect, parse_ideal, random_squarefree_masks, squarefree_ideals
from .search import AlphaConstraints, SearchSpec, enumerate_feasible_alpha, hunt, realize_colex

__all__ = ["Check", "CHECKS", "DEFAULT_SCALE", "run_checks", "parse_scale", "SweepStats", "sweep_alpha"]

#: n5 is always exhaustive.  n6/n7 take "exhaustive" (every feasible alpha)
#: or a sample count of random ideals; "targeted" is a sample count of
#: random alpha walks at n = 7..10.
DEFAULT_SCALE = {"n5": "exhaustive", "n6": "100000", "n7": "100000", "targeted": "20000", "seed": "2024"}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    mismatches: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<24} {self.detail}"


class _Recorder:
    def __init__(self):
        self.mismatches: list[str] = []

    def eq(self, label: str, actual, expected):
        if actual != expected:
            self.mismatches.append(f"{label}: expected {expected}, got {actual}")

    def true(self, label: str, cond: bool, detail: str = ""):
        if not cond:
            self.mismatches.append(f"{label}{': ' + detail if detail else ''}")


# --- worked examples ------------------------------------------------------------


def check_patru(scale) -> Check:
    r = _Recorder()
    I = parse_ideal("x1x2, x1x3, x1x4, x1x5x6", 6)
    aS = alpha_of_quotient(None, I, check=True)
    aI = alpha_of_ideal(I, check=True)
    r.eq("alpha(S/I)", aS.counts, (1, 6, 12, 10, 5, 1, 0))
    r.eq("alpha(I)", aI.counts, (0, 0, 3, 10, 10, 5, 1))
    r.eq("beta^4(S/I)", beta_table(aS, 4).values, (1, 2, 0, 0, 2))
    r.eq("beta_2^5(S/I)", beta_table(aS, 5)[2], -2)
    r.eq("beta^4(I)", beta_table(aI, 4).values, (0, 0, 3, 4, 3))
    r.eq("beta_4^5(I)", beta_table(aI, 5)[4], -1)
    r.eq("hdepth(S/I)", hdepth(aS).hdepth, 4)
    r.eq("hdepth(I)", hdepth(aI).hdepth, 4)
    cmp = compare_criteria(aS)
    r.eq("strict_plus_one", cmp.strict_plus_one, False)
    r.eq("at_least", cmp.at_least, True)
    r.eq("principal", I.is_principal(), False)
    r.eq("in m^2", I.in_m_squared(), True)
    return Check("example:patru", not r.mismatches, "hdepth(S/I)=hdepth(I)=4", r.mismatches)


def check_minus(scale) -> Check:
    r = _Recorder()
    n = 13
    I = intersect(parse_ideal("x1", n), parse_ideal("x2,...,x13", n))
    aS = alpha_of_quotient(None, I, check=True)
    aI = alpha_of_ideal(I, check=True)
    r.eq("alpha(S/I)", aS.counts, (1, 13) + tuple(binom(12, k) for k in range(2, 14)))
    r.eq("alpha_2(I)", aI[2], 12)
    r.eq("alpha_3(I)", aI[3], 66)
    r.eq("beta_3^8(I)", beta_table(aI, 8)[3], 66 - 6 * 12)
    r.eq("beta_3^8(I) via complement",
         beta_ideal_from_quotient(beta_table(aS, 8), n)[3], -6)
    repS, repI = hdepth(aS), hdepth(aI)
    r.eq("hdepth(S/I)", repS.hdepth, 8)
    r.eq("hdepth(I)", repI.hdepth, 7)
    r.eq("witness at q=8", repI.rejected.get(8), (3, -6))
    r.eq("at_least", compare_criteria(aS).at_least, False)
    return Check("example:minus", not r.mismatches, "n=13: hdepth(S/I)=8, hdepth(I)=7", r.mismatches)


def check_minus2(scale) -> Check:
    r = _Recorder()
    n = 14
    pairs = ", ".join(f"x{i}x{j}" for i in range(2, 15) for j in range(i + 1, 15))
    I = intersect(parse_ideal("x1", n), parse_ideal(pairs, n))
    aS = alpha_of_quotient(None, I, check=True)
    aI = alpha_of_ideal(I)
    r.eq("alpha(S/I)", aS.counts, (1, 14, binom(14, 2)) + tuple(binom(13, k) for k in range(3, 14)) + (0,))
    r.eq("alpha_0..2(I)", aI.counts[:3], (0, 0, 0))
    r.eq("alpha_3(I)", aI[3], binom(13, 2))
    r.eq("alpha_4(I)", aI[4], binom(13, 3))
    b = beta_table(aI, 7)[4]
    r.true("beta_4^7(I) < 0", b < 0, f"got {b}")
    r.eq("beta_4^7(I) formula", b, aI[4] - 4 * aI[3])
    r.eq("hdepth(S/I)", hdepth(aS).hdepth, 7)
    r.eq("hdepth(I)", hdepth(aI).hdepth, 6)
    return Check("example:minus2", not r.mismatches, "n=14: hdepth(S/I)=7, hdepth(I)=6", r.mismatches)


MINUS3_ALPHA = (1, 10, 45, 120, 197, 216, 155, 70)


def check_minus3(scale) -> Check:
    r = _Recorder()
    n = 10
    r.true("KK feasible", fvector_feasible(MINUS3_ALPHA).feasible)
    r.eq("alpha_4 expansion", str(kk_expand(120, 3)), "C(10,3)")
    r.eq("alpha_4 bound", kk_upper(118, 3), 197)
    r.eq("alpha_j, 5<=j<=7", MINUS3_ALPHA[5:],
         tuple(binom(9, j) + binom(8, j - 1) + binom(6, j - 2) for j in range(5, 8)))
    alpha = AlphaVector.padded(MINUS3_ALPHA, n)
    I = realize_colex(alpha)
    again = alpha_of_quotient(None, I, check=True)
    r.eq("realized alpha", again.counts, alpha.counts)
    bS = beta_table(again, 7)
    r.eq("beta_5^7(S/I)", bS[5], 24)
    r.eq("C(7,5)", binom(10 - 7 + 5 - 1, 5), 21)
    r.eq("hdepth(S/I)", hdepth(again).hdepth, 7)
    r.eq("hdepth(I)", hdepth(alpha_of_ideal(I)).hdepth, 6)
    cmp = compare_criteria(again)
    r.eq("at_least witness", cmp.at_least_witness, (5, 24, 21))
    return Check("example:minus3", not r.mismatches, "n=10: beta_5^7=24>21, hdepth 7 vs 6", r.mismatches)


def check_liema(scale) -> Check:
    r = _Recorder()
    count = 0
    for n in range(1, 11):
        for m in range(1, n + 1):
            try:
                p = principal_profile(n, m)
            except AssertionError as exc:
                r.true(f"profile n={n} m={m}", False, str(exc))
                continue
            count += 1
            # cross-check against an actual principal ideal
            u = parse_ideal("*".join(f"x{i}" for i in range(n - m + 1, n + 1)), n)
            r.eq(f"alpha(I) n={n} m={m}", alpha_of_ideal(u).counts, p.alpha_ideal.counts)
            r.eq(f"hdepth(I) n={n} m={m}", hdepth(p.alpha_ideal).hdepth, n)
            if n >= 2:
                r.eq(f"hdepth(S/I) n={n} m={m}", hdepth(p.alpha_quotient).hdepth, n - 1)
                r.true(f"strict_plus_one n={n} m={m}", compare_criteria(p.alpha_quotient).strict_plus_one)
    r.eq("beta^5(S/I) n=6 m=2", principal_profile(6, 2).beta_quotient_n1.values, (1, 1, 0, 0, 0, 0))
    r.eq("beta^5(I) n=5 m=3", principal_profile(5, 3).beta_ideal_n.values, (0, 0, 0, 1, 0, 0))
    return Check("lemma:liema", not r.mismatches, f"{count} principal profiles, n<=10", r.mismatches)


def check_magic(scale) -> Check:
    r = _Recorder()
    triples = 0
    for n in range(31):
        row = [binom(n, j) for j in range(n + 1)]
        for q in range(n + 1):
            for k in range(q + 1):
                lhs = sum((-1) ** (k - j) * binom(q - j, k - j) * row[j] for j in range(k + 1))
                if lhs != magic_identity_rhs(n, q, k):
                    r.mismatches.append(f"n={n} q={q} k={k}: {lhs} != {magic_identity_rhs(n, q, k)}")
                triples += 1
    return Check("identity:magic", not r.mismatches, f"{triples} triples, n<=30", r.mismatches)


def check_kk(scale) -> Check:
    r = _Recorder()
    r.eq("binom(7,5)", binom(7, 5), 21)
    r.eq("118 expansion", kk_expand(118, 3).terms, ((9, 3), (8, 2), (6, 1)))
    r.eq("118^(3)", kk_upper(118, 3), binom(9, 4) + binom(8, 3) + binom(6, 2))
    r.eq("alpha_4 shadow bound", shadow_lower_bound(binom(9, 4) + binom(8, 3) + binom(6, 2), 4), 118)
    for n in range(6, 15):
        r.eq(f"shadow C({n - 1},4)+1", shadow_lower_bound(binom(n - 1, 4) + 1, 4), binom(n - 1, 3) + 3)
    for m in range(2, 15):
        r.eq(f"shadow C({m},2)", shadow_lower_bound(binom(m, 2), 2), m)
    return Check("kk:values", not r.mismatches, "greedy expansions and shadow bounds", r.mismatches)


# --- sweeps ------------------------------------------------------------------------


@dataclass
class SweepStats:
    ideals: int = 0
    distinct_alpha: int = 0
    by_pair: dict[tuple[int, int], int] = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)


def _alpha_checks(aS: tuple[int, ...], n: int, rules: Iterable[str]) -> tuple[int, int, list[str]]:
    """Checks that only depend on alpha(S/I).  Returns (hdepth(S/I), hdepth(I), failures)."""
    aI = tuple(binom(n, j) - a for j, a in enumerate(aS))
    qS, qI = hdepth_value(aS), hdepth_value(aI)
    bad = []
    for name, alpha, q in (("S/I", aS, qS), ("I", aI, qI)):
        for level in range(q + 1):
            b = beta_values(alpha, level)
            if min(b) < 0:
                bad.append(f"downward closure {name}: beta^{level} has a negative entry but hdepth={q}")
            if alpha_from_beta(beta_table(alpha, level)) != alpha[: level + 1]:
                bad.append(f"roundtrip {name} at q={level}")
    for level in range(n + 1):
        if beta_ideal_from_quotient(beta_table(aS, level), n) != beta_table(aI, level):
            bad.append(f"complement transform at q={level}")
    if not aI[n] == 1:
        bad.append("alpha_n(I) != 1")
    cmp = compare_criteria(AlphaVector(aS), qS)
    if cmp.at_least != (qI >= qS):
        bad.append(f"at_least={cmp.at_least} but hdepth(I)={qI}, hdepth(S/I)={qS}")
    if cmp.strict_plus_one != (qI >= qS + 1):
        bad.append(f"strict_plus_one={cmp.strict_plus_one} but hdepth(I)={qI}, hdepth(S/I)={qS}")
    # theorem-level claims
    rules = set(rules)
    principal_alpha = _is_principal_alpha(aS, n)
    if "teo1" in rules and not (principal_alpha == (qI == n) == (qS == n - 1)):
        bad.append(f"principal trichotomy: principal={principal_alpha}, hdepth(I)={qI}, hdepth(S/I)={qS}")
    if "teo2" in rules and qS <= 3 and qI < qS + 1:
        bad.append(f"hdepth(S/I)={qS}<=3 but hdepth(I)={qI}")
    if "plus_one" in rules and qI < qS + 1:
        bad.append(f"hdepth(I)={qI} < hdepth(S/I)+1={qS + 1}")
    if "at_least" in rules and qI < qS:
        bad.append(f"hdepth(I)={qI} < hdepth(S/I)={qS}")
    if "t3_main" in rules and qS in (4, 5) and qI < qS:
        bad.append(f"hdepth(S/I)={qS} but hdepth(I)={qI}")
    if "cook" in rules:
        b = beta_values(aS, qS)
        for k in (1, 2):
            if k <= qS and b[k] > binom(n - qS + k - 1, k):
                bad.append(f"beta_{k}^{qS}(S/I)={b[k]} above its bound")
    if "b_lemmas" in rules and aS[1] == n and not principal_alpha:
        for msg in _b_lemma_failures(aS, n, qS):
            bad.append(msg)
    return qS, qI, bad


def _b_lemma_failures(aS, n, q) -> list[str]:
    out = []
    if q in (5, 6, 7):
        b = beta_values(aS, q)[3]
        if b > binom(n - q + 2, 3):
            out.append(f"beta_3^{q}={b} > C({n - q + 2},3)")
    if q == 5:
        b = beta_values(aS, 5)
        if b[4] > binom(n - 2, 4):
            out.append(f"beta_4^5={b[4]} > C({n - 2},4)")
        if b[5] > binom(n - 1, 5):
            out.append(f"beta_5^5={b[5]} > C({n - 1},5)")
    return out


def sweep_alpha(alphas: Iterable[tuple[int, ...]], n: int, rules: Iterable[str],
                stats: SweepStats | None = None, cache: dict | None = None) -> SweepStats:
    stats = stats or SweepStats()
    cache = {} if cache is None else cache
    rules = tuple(rules)
    for aS in alphas:
        stats.ideals += 1
        hit = cache.get(aS)
        if hit is None:
            hit = _alpha_checks(aS, n, rules)
            cache[aS] = hit
            if hit[2]:
                stats.mismatches.extend(f"alpha={aS}: {m}" for m in hit[2])
        pair = (hit[0], hit[1])
        stats.by_pair[pair] = stats.by_pair.get(pair, 0) + 1
    stats.distinct_alpha = len(cache)
    return stats


def _is_principal_alpha(aS: tuple[int, ...], n: int) -> bool:
    aI = tuple(binom(n, j) - a for j, a in enumerate(aS))
    return any(aI == tuple(binom(n - m, k - m) for k in range(n + 1)) for m in range(1, n + 1))


def _ideal_alphas(masks_iter, n, stats: SweepStats, check_ie_every: int = 0):
    """alpha(S/I) of each ideal; also ties "principal" back to the generator count."""
    for i, masks in enumerate(masks_iter):
        a = alpha_enumerate(None, masks, n)
        if check_ie_every and i % check_ie_every == 0:
            if alpha_inclusion_exclusion(None, masks, n) != a:
                stats.mismatches.append(f"alpha pipelines disagree on {masks}")
        if (len(masks) == 1) != _is_principal_alpha(a, n):
            stats.mismatches.append(f"ideal {masks}: generator count and principal alpha profile disagree")
        yield a


def check_sweep_small(scale) -> Check:
    rules = ("teo1", "teo2", "plus_one", "at_least", "cook")
    stats = SweepStats()
    counts = []
    for n in range(1, 6):
        ideals = list(squarefree_ideals(n))
        counts.append(len(ideals) + 2)
        sweep_alpha(_ideal_alphas(ideals, n, stats, check_ie_every=1), n, rules, stats)
    detail = (f"{stats.ideals} ideals (antichain census {counts}), {stats.distinct_alpha} alpha, "
              f"teo1/teo2/cor2/max/roundtrip")
    return Check("sweep:n<=5", not stats.mismatches, detail, stats.mismatches[:20])


def _sized_sweep(name: str, n: int, setting: str, rules, seed: int) -> Check:
    stats = SweepStats()
    if setting == "exhaustive":
        alphas = (a.counts for a in enumerate_feasible_alpha(n) if a.counts[n] == 0)
        sweep_alpha(alphas, n, rules, stats)
        detail = f"all {stats.ideals} feasible alpha-vectors"
    else:
        count = int(setting)
        rng = random.Random(f"{seed}:{name}")
        masks = (random_squarefree_masks(n, rng) for _ in range(count))
        sweep_alpha(_ideal_alphas(masks, n, stats, check_ie_every=97), n, rules, stats)
        detail = f"{stats.ideals} seeded random ideals, {stats.distinct_alpha} distinct alpha"
    return Check(name, not stats.mismatches, detail, stats.mismatches[:20])


def check_sweep_n6(scale) -> Check:
    return _sized_sweep("sweep:n6", 6, scale["n6"], ("teo1", "teo2", "at_least", "t3_main", "cook"),
                        int(scale["seed"]))


def check_sweep_n7(scale) -> Check:
    return _sized_sweep("sweep:n7", 7, scale["n7"], ("teo1", "teo2", "at_least", "t3_main", "cook"),
                        int(scale["seed"]))


def check_targeted(scale) -> Check:
    """Random alpha walks at n = 7..10, kept when hdepth(S/I) is 4 or 5."""
    count = int(scale["targeted"])
    seed = int(scale["seed"])
    stats = SweepStats()
    hits = 0
    for n in range(7, 11):
        cons = AlphaConstraints(fixed={1: n})  # I inside m^2
        rng = random.Random(f"{seed}:targeted:{n}")
        alphas = []
        for _ in range(count):
            a = _random_chain(n, rng, cons)
            if hdepth_value(a) in (4, 5):
                alphas.append(a)
        hits += len(alphas)
        sweep_alpha(alphas, n, ("teo2", "t3_main", "cook", "b_lemmas"), stats)
    detail = f"{hits} walks with hdepth(S/I) in {{4,5}}, {stats.distinct_alpha} distinct"
    return Check("sweep:hdepth45", not stats.mismatches and hits > 0, detail, stats.mismatches[:20])


def _random_chain(n: int, rng: random.Random, cons: AlphaConstraints) -> tuple[int, ...]:
    prefix = [1]
    for k in range(1, n + 1):
        hi = 0 if k == n else (n if k == 1 else min(binom(n, k), kk_upper(prefix[-1], k - 1)))
        lo, hi = cons.window(k, 0, hi)
        if hi <= 0:
            return tuple(prefix) + (0,) * (n + 1 - k)
        # the upper half keeps hdepth from collapsing to 0 or 1 on most walks
        prefix.append(rng.randint(max(lo, 1, hi // 2), hi))
    return tuple(prefix)


def check_search(scale) -> Check:
    r = _Recorder()
    for n in range(2, 8):
        res = hunt(SearchSpec(n=n))
        r.true(f"n={n} exhaustive hunt complete", res.summary()["complete"])
        r.eq(f"n={n} findings", len(res.findings), 0)
    res = hunt(SearchSpec(n=10, predicate="beta_exceeds", k=5, q=7, bound=21, q_range=(7,),
                          constraints=AlphaConstraints(fixed={1: 10, 2: 45, 3: 120}, upper={8: 0}),
                          max_findings=1))
    r.eq("n=10 rediscovery", [f.alpha.counts for f in res.findings], [AlphaVector.padded(MINUS3_ALPHA, 10).counts])
    res = hunt(SearchSpec(n=13, constraints=AlphaConstraints(fixed={1: 13}, upper={2: 66}), max_findings=1))
    want = (1, 13) + tuple(binom(12, k) for k in range(2, 14))
    r.eq("n=13 rediscovery", [f.alpha.counts for f in res.findings], [want])
    return Check("search:regression", not r.mismatches, "n<=7 empty; minus3 and minus rediscovered",
                 r.mismatches)


CHECKS: dict[str, Callable[[dict], Check]] = {
    "example:patru": check_patru,
    "example:minus": check_minus,
    "example:minus2": check_minus2,
    "example:minus3": check_minus3,
    "lemma:liema": check_liema,
    "identity:magic": check_magic,
    "kk:values": check_kk,
    "sweep:n<=5": check_sweep_small,
    "sweep:n6": check_sweep_n6,
    "sweep:n7": check_sweep_n7,
    "sweep:hdepth45": check_targeted,
    "search:regression": check_search,
}


def parse_scale(items: Iterable[str]) -> dict:
    scale = dict(DEFAULT_SCALE)
    for item in items:
        for part in item.split(","):
            key, sep, value = part.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in DEFAULT_SCALE:
                raise ValueError(f"bad --scale entry {part!r}; keys are {sorted(DEFAULT_SCALE)}")
            if key == "n5" and value != "exhaustive":
                raise ValueError("n5 only supports 'exhaustive'")
            if key in ("n6", "n7") and value != "exhaustive" and not value.isdigit():
                raise ValueError(f"{key} takes 'exhaustive' or a sample count")
            if key in ("targeted", "seed") and not value.isdigit():
                raise ValueError(f"{key} takes an integer")
            scale[key] = value
    return scale


def run_checks(only: Iterable[str] = (), scale: dict | None = None,
               on_result: Callable[[Check], None] | None = None) -> list[Check]:
    """Run every check whose name starts with one of ``only`` (all when empty)."""
    scale = scale or dict(DEFAULT_SCALE)
    only = tuple(only)
    names = [n for n in CHECKS if not only or any(n == o or n.startswith(o) for o in only)]
    if only and not names:
        raise ValueError(f"no check matches {list(only)}; known: {list(CHECKS)}")
    results = []
    for name in names:
        t0 = time.monotonic()
        try:
            chk = CHECKS[name](scale)
        except Exception as exc:  # a crash is a failed check, not a crashed run
            chk = Check(name, False, f"raised {type(exc).__name__}", [repr(exc)])
        chk.elapsed = time.monotonic() - t0
        results.append(chk)
        if on_result:
            on_result(chk)
    return results
