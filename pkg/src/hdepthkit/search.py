"""Kruskal-Katona feasible alpha-vectors, their compressed realizations, and
a branch-and-bound hunt for vectors where hdepth(I) falls short of hdepth(S/I).

Since hdepth only depends on alpha, searching alpha-vectors covers every
squarefree ideal at once.  A vector ``(1, a_1, ..., a_n)`` is the alpha of
some S/I iff ``a_1 <= n`` and ``a_{k+1} <= a_k^{(k)}`` along the chain.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .combinatorics import binom, fvector_feasible, kk_upper
from .errors import DomainError, ParseError
from .hdepth import (AlphaVector, HdepthReport, alpha_of_quotient, beta_values, hdepth,
                     hdepth_value, ideal_alpha_from_quotient)
from .ideals import MonomialIdeal, stanley_reisner_ideal

__all__ = [
    "ENUMERATION_CAP",
    "PREDICATES",
    "AlphaConstraints",
    "SearchSpec",
    "Finding",
    "SearchResult",
    "enumerate_feasible_alpha",
    "realize_colex",
    "colex_subsets",
    "hunt",
    "load_search_spec",
    "parse_search_spec",
]

#: Default largest n accepted by ``enumerate_feasible_alpha``.
ENUMERATION_CAP = 14

PREDICATES = ("hdepth_ideal_lt_quotient", "at_least_fails", "strict_plus_one_fails", "beta_exceeds")


@dataclass(frozen=True)
class AlphaConstraints:
    """Inclusive per-coordinate bounds; ``fixed`` wins over both."""

    lower: Mapping[int, int] = field(default_factory=dict)
    upper: Mapping[int, int] = field(default_factory=dict)
    fixed: Mapping[int, int] = field(default_factory=dict)

    def window(self, k: int, lo: int, hi: int) -> tuple[int, int]:
        if k in self.fixed:
            v = self.fixed[k]
            return (v, v) if lo <= v <= hi else (1, 0)
        return max(lo, self.lower.get(k, lo)), min(hi, self.upper.get(k, hi))

    def to_json(self) -> dict:
        return {name: {str(k): v for k, v in sorted(getattr(self, name).items())}
                for name in ("lower", "upper", "fixed")}


NO_CONSTRAINTS = AlphaConstraints()


def _upper_next(prev: int, k: int, n: int) -> int:
    # largest admissible alpha_k given alpha_{k-1} = prev
    if k == 1:
        return n if prev else 0
    return min(binom(n, k), kk_upper(prev, k - 1))


def enumerate_feasible_alpha(n: int, constraints: AlphaConstraints | None = None,
                             cap: int | None = ENUMERATION_CAP) -> Iterator[AlphaVector]:
    """Every alpha(S/I) for squarefree I in n variables (I = 0 included), lazily.

    Coordinates are filled from alpha_1 upward; each takes its values from
    the largest admissible down to 0, where 0 ends the chain.
    """
    if cap is not None and n > cap:
        raise DomainError(f"n={n} exceeds the enumeration cap {cap}; pass cap=None to override")
    cons = constraints or NO_CONSTRAINTS
    prefix = [1]

    def rec(k: int) -> Iterator[AlphaVector]:
        if k > n:
            yield AlphaVector(tuple(prefix))
            return
        lo, hi = cons.window(k, 0, _upper_next(prefix[-1], k, n))
        for v in range(hi, lo - 1, -1):
            if v == 0:
                if all(cons.window(j, 0, 0)[0] <= 0 for j in range(k, n + 1)):
                    yield AlphaVector.padded(prefix, n)
                continue
            prefix.append(v)
            yield from rec(k + 1)
            prefix.pop()

    yield from rec(1)


def colex_subsets(n: int, size: int) -> Iterator[int]:
    """``size``-subsets of [n] as masks in colex order (= increasing mask value)."""
    if size == 0:
        yield 0
        return
    if size > n:
        return
    m = (1 << size) - 1
    limit = 1 << n
    while m < limit:
        yield m
        # Gosper's hack: next integer with the same popcount
        c = m & -m
        r = m + c
        m = (((r ^ m) >> 2) // c) | r


def realize_colex(alpha: AlphaVector | Sequence[int], n: int | None = None) -> MonomialIdeal:
    """Stanley-Reisner ideal of the compressed complex with the given alpha(S/I).

    The c-faces are the first alpha_c c-subsets of [n] in colex order.
    """
    counts = tuple(alpha.counts if isinstance(alpha, AlphaVector) else alpha)
    if n is None:
        n = len(counts) - 1
    if len(counts) > n + 1:
        raise DomainError("alpha longer than n + 1")
    counts = counts + (0,) * (n + 1 - len(counts))
    res = fvector_feasible(counts)
    if not res.feasible:
        raise DomainError(f"alpha {counts} is not Kruskal-Katona feasible (fails at f_{res.violated_at})")
    if counts[1] > n:
        raise DomainError(f"alpha_1 = {counts[1]} exceeds n = {n}")
    faces = []
    for c, a in enumerate(counts):
        if a == 0:
            continue
        for i, s in enumerate(colex_subsets(n, c)):
            if i >= a:
                break
            faces.append(s)
    return stanley_reisner_ideal(faces, n)


# --- hunting ------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpec:
    n: int
    predicate: str = "hdepth_ideal_lt_quotient"
    q_range: tuple[int, ...] | None = None  # allowed hdepth(S/I); None = all of 0..n-1
    k: int | None = None  # beta_exceeds only
    q: int | None = None
    bound: int | None = None
    mode: str = "exhaustive"  # or "sample"
    seed: int = 0
    samples: int = 10_000
    node_budget: int | None = None  # per top-level branch (exhaustive) / per chunk (sample)
    time_budget: float | None = None  # seconds, whole run
    max_findings: int | None = None
    constraints: AlphaConstraints = NO_CONSTRAINTS
    cap: int | None = ENUMERATION_CAP

    def validate(self) -> None:
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.cap is not None and self.n > self.cap:
            raise DomainError(f"n={self.n} exceeds the search cap {self.cap}")
        if self.predicate not in PREDICATES:
            raise DomainError(f"unknown predicate {self.predicate!r}; expected one of {PREDICATES}")
        if self.q_range is not None and any(not 0 <= q <= self.n - 1 for q in self.q_range):
            raise DomainError(f"q_range must lie in [0, {self.n - 1}]")
        if self.predicate == "beta_exceeds":
            if None in (self.k, self.q, self.bound):
                raise DomainError("beta_exceeds needs k, q and bound")
            if not 0 <= self.k <= self.q <= self.n:
                raise DomainError("beta_exceeds needs 0 <= k <= q <= n")
        if self.mode not in ("exhaustive", "sample"):
            raise DomainError(f"mode must be 'exhaustive' or 'sample', got {self.mode!r}")
        for name in ("node_budget", "time_budget", "max_findings"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise DomainError(f"{name} must be positive")
        if self.samples <= 0:
            raise DomainError("samples must be positive")

    @property
    def targets(self) -> tuple[int, ...]:
        qs = range(self.n) if self.q_range is None else self.q_range
        return tuple(sorted(set(qs)))

    def to_json(self) -> dict:
        return {"n": self.n, "predicate": self.predicate, "q_range": list(self.targets),
                "k": self.k, "q": self.q, "bound": self.bound, "mode": self.mode, "seed": self.seed,
                "samples": self.samples, "node_budget": self.node_budget,
                "time_budget": self.time_budget, "max_findings": self.max_findings,
                "constraints": self.constraints.to_json()}


@dataclass(frozen=True)
class Finding:
    alpha: AlphaVector
    realization: MonomialIdeal
    quotient: HdepthReport
    ideal: HdepthReport
    # which inequality failed: beta_k^q(S/I) = value > bound
    q: int
    k: int
    value: int
    bound: int

    def to_json(self) -> dict:
        return {
            "n": self.alpha.n,
            "alpha": list(self.alpha.counts),
            "hdepth_quotient": self.quotient.hdepth,
            "hdepth_ideal": self.ideal.hdepth,
            "violation": {"q": self.q, "k": self.k, "value": self.value, "bound": self.bound},
            "generators": [str(g) for g in self.realization.generators],
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


@dataclass
class SearchResult:
    findings: list[Finding]
    nodes: int = 0
    leaves: int = 0
    pruned_kk: int = 0
    pruned_beta: int = 0
    pruned_predicate: int = 0
    exhausted: bool = False  # a budget stopped the search early
    wall_time: float = 0.0

    def summary(self) -> dict:
        return {"findings": len(self.findings), "nodes": self.nodes, "leaves": self.leaves,
                "pruned": {"kk": self.pruned_kk, "beta": self.pruned_beta,
                           "predicate": self.pruned_predicate},
                "budget_exhausted": self.exhausted, "complete": not self.exhausted,
                "wall_time": round(self.wall_time, 3)}


def _violation(spec: SearchSpec, counts: Sequence[int], qS: int) -> tuple[int, int, int, int] | None:
    """(q, k, value, bound) of the predicate's failing inequality, or None."""
    n = spec.n
    if spec.predicate == "beta_exceeds":
        b = beta_values(counts, spec.q)[spec.k]
        return (spec.q, spec.k, b, spec.bound) if b > spec.bound else None
    if spec.predicate == "strict_plus_one_fails":
        if qS + 1 > n:
            return None
        b = beta_values(counts, qS + 1)
        for k in range(qS + 1):
            bound = binom(n - qS + k - 1, k + 1)
            if b[k + 1] > bound:
                return (qS + 1, k + 1, b[k + 1], bound)
        return None
    # at_least_fails and hdepth_ideal_lt_quotient name the same inequality
    b = beta_values(counts, qS)
    for k in range(1, qS + 1):
        bound = binom(n - qS + k - 1, k)
        if b[k] > bound:
            return (qS, k, b[k], bound)
    return None


def _evaluate(spec: SearchSpec, counts: tuple[int, ...]) -> tuple[int, int, int, int] | None:
    if counts[-1]:  # I = 0 is not a valid ideal here
        return None
    qS = hdepth_value(counts)
    if qS not in spec.targets:
        return None
    viol = _violation(spec, counts, qS)
    if viol is None:
        return None
    if spec.predicate == "hdepth_ideal_lt_quotient":
        qI = hdepth_value(ideal_alpha_from_quotient(AlphaVector(counts)).counts)
        if not qI < qS:
            raise AssertionError(f"criterion and direct hdepth disagree on {counts}")
    return viol


def _make_finding(spec: SearchSpec, counts: tuple[int, ...], viol) -> Finding:
    alpha = AlphaVector(counts)
    ideal = realize_colex(alpha)
    # re-verify everything from the realization
    again = alpha_of_quotient(None, ideal, method="enumerate" if spec.n <= 20 else "inclusion-exclusion")
    if again != alpha:
        raise AssertionError(f"realization of {counts} has alpha {again.counts}")
    if _violation(spec, again.counts, hdepth_value(again.counts)) != viol:
        raise AssertionError(f"violation of {counts} does not reproduce")
    rep_S = hdepth(again)
    rep_I = hdepth(ideal_alpha_from_quotient(again))
    q, k, value, bound = viol
    return Finding(alpha, ideal, rep_S, rep_I, q, k, value, bound)


class _Budget(Exception):
    pass


class _Walker:
    """Depth-first search over alpha prefixes for one top-level branch."""

    def __init__(self, spec: SearchSpec, deadline: float | None):
        self.spec = spec
        self.deadline = deadline
        self.res = SearchResult([])
        self.targets = spec.targets
        # (k, q, extra): at depth k require beta_k^q(S/I) > extra
        self.pred_depth = None
        if spec.predicate == "beta_exceeds":
            self.pred_depth = (spec.k, spec.q, spec.bound)

    def _tick(self):
        self.res.nodes += 1
        if self.spec.node_budget is not None and self.res.nodes > self.spec.node_budget:
            raise _Budget
        if self.deadline is not None and self.res.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _Budget

    def _emit(self, counts: tuple[int, ...]):
        self.res.leaves += 1
        viol = _evaluate(self.spec, counts)
        if viol is not None:
            self.res.findings.append(_make_finding(self.spec, counts, viol))
            if self.spec.max_findings is not None and len(self.res.findings) >= self.spec.max_findings:
                raise _Budget

    def _lower(self, k: int, prefix: list[int], betas: dict[int, list[int]],
               live: list[int]) -> tuple[int, int]:
        """Lower bounds on alpha_k from beta_k^q >= 0 (live q) and from the predicate."""
        # beta_k^q = alpha_k - sum_{j<k} C(q-j, k-j) beta_j^q
        if any(q < k for q in live):
            lo_beta = 0
        else:
            lo_beta = min(sum(binom(q - j, k - j) * betas[q][j] for j in range(k)) for q in live)
        lo_pred = 0
        if self.pred_depth is not None and self.pred_depth[0] == k:
            _, q0, extra = self.pred_depth
            prev = betas[q0][:k] if q0 in betas else beta_values(prefix, q0)[:k]
            lo_pred = sum(binom(q0 - j, k - j) * b for j, b in enumerate(prev)) + extra + 1
        return lo_beta, lo_pred

    def run(self, first: int):
        prefix = [1]
        betas = {q: [1] for q in self.targets}  # beta_0^q = alpha_0 = 1
        try:
            self._descend(1, prefix, betas, list(self.targets), forced=first)
        except _Budget:
            self.res.exhausted = not (self.spec.max_findings is not None
                                      and len(self.res.findings) >= self.spec.max_findings)
        return self.res

    def _descend(self, k: int, prefix: list[int], betas: dict[int, list[int]], live: list[int],
                 forced: int | None = None):
        n = self.spec.n
        spec = self.spec
        if k > n:
            self._emit(tuple(prefix))
            return
        hi = _upper_next(prefix[-1], k, n)
        if k == n:
            hi = 0  # proper nonzero I: alpha_n(S/I) = 0
        lo_c, hi = spec.constraints.window(k, 0, hi)
        if forced is not None:
            lo_c, hi = max(lo_c, forced), min(hi, forced)
        if hi < lo_c:
            self.res.pruned_kk += 1
            return
        lo_beta, lo_pred = self._lower(k, prefix, betas, live)
        if hi < lo_beta:
            self.res.pruned_beta += 1
            return
        if hi < lo_pred:
            self.res.pruned_predicate += 1
            return
        lo = max(lo_c, lo_beta, lo_pred)
        # stopping here (alpha_k = 0) is allowed when 0 is in the window
        for v in range(hi, lo - 1, -1):
            self._tick()
            if v == 0:
                if all(spec.constraints.window(j, 0, 0)[0] <= 0 for j in range(k, n + 1)):
                    self._emit(tuple(prefix) + (0,) * (n + 1 - k))
                continue
            nb = {}
            nlive = []
            for q in live:
                if q >= k:
                    b = v - sum(binom(q - j, k - j) * betas[q][j] for j in range(k))
                    if b < 0:
                        continue
                    nb[q] = betas[q] + [b]
                else:
                    nb[q] = betas[q]
                nlive.append(q)
            if not nlive:
                self.res.pruned_beta += 1
                continue
            prefix.append(v)
            self._descend(k + 1, prefix, nb, nlive)
            prefix.pop()


def _run_branch(args):
    spec, first, deadline = args
    return _Walker(spec, deadline).run(first)


def _sample_chunk(args):
    spec, chunk, count, deadline = args
    rng = random.Random(f"{spec.seed}:{chunk}")
    res = SearchResult([])
    seen = set()
    n = spec.n
    for _ in range(count):
        if deadline is not None and time.monotonic() > deadline:
            res.exhausted = True
            break
        prefix = [1]
        for k in range(1, n + 1):
            hi = 0 if k == n else _upper_next(prefix[-1], k, n)
            lo, hi = spec.constraints.window(k, 0, hi)
            if hi < lo:
                prefix = None
                break
            res.nodes += 1
            # biased toward long chains: stop only with probability 1/(n+1)
            if lo == 0 and (hi == 0 or rng.randrange(n + 1) == 0):
                prefix += [0] * (n + 1 - k)
                break
            prefix.append(rng.randint(max(lo, 1), hi))
        if prefix is None:
            res.pruned_kk += 1
            continue
        counts = tuple(prefix)
        res.leaves += 1
        if counts in seen:
            continue
        seen.add(counts)
        viol = _evaluate(spec, counts)
        if viol is not None:
            res.findings.append(_make_finding(spec, counts, viol))
    return res


#: Sampling splits ``samples`` into this many independently seeded chunks.
SAMPLE_CHUNKS = 16


def _merge(parts: Sequence[SearchResult], spec: SearchSpec) -> SearchResult:
    out = SearchResult([])
    seen = set()
    for p in parts:
        out.nodes += p.nodes
        out.leaves += p.leaves
        out.pruned_kk += p.pruned_kk
        out.pruned_beta += p.pruned_beta
        out.pruned_predicate += p.pruned_predicate
        out.exhausted |= p.exhausted
        for f in p.findings:
            if f.alpha.counts not in seen:
                seen.add(f.alpha.counts)
                out.findings.append(f)
    # deterministic order: lexicographically decreasing alpha, the DFS order
    out.findings.sort(key=lambda f: f.alpha.counts, reverse=True)
    if spec.max_findings is not None:
        out.findings = out.findings[: spec.max_findings]
    return out


def hunt(spec: SearchSpec, threads: int = 1) -> SearchResult:
    """Search alpha-vectors of S/I for the spec's predicate.

    Exhaustive mode splits the tree by alpha_1 and gives each branch its own
    ``node_budget``; sample mode splits ``samples`` into fixed seeded chunks.
    Either way the task list does not depend on ``threads``, so the merged
    findings do not either (a wall-clock ``time_budget`` is the exception).
    """
    spec.validate()
    start = time.monotonic()
    deadline = None if spec.time_budget is None else start + spec.time_budget
    if spec.mode == "exhaustive":
        lo, hi = spec.constraints.window(1, 0, spec.n)
        tasks = [(spec, a1, deadline) for a1 in range(hi, lo - 1, -1)]
        worker = _run_branch
    else:
        per = [spec.samples // SAMPLE_CHUNKS + (1 if i < spec.samples % SAMPLE_CHUNKS else 0)
               for i in range(SAMPLE_CHUNKS)]
        tasks = [(spec, i, c, deadline) for i, c in enumerate(per) if c]
        worker = _sample_chunk
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(worker, tasks))
    else:
        parts = [worker(t) for t in tasks]
    res = _merge(parts, spec)
    res.wall_time = time.monotonic() - start
    return res


# --- spec files -----------------------------------------------------------------

_INT_KEYS = ("n", "k", "q", "bound", "seed", "samples", "node_budget", "max_findings", "cap")


def _parse_int_list(value) -> tuple[int, ...]:
    if isinstance(value, int):
        return (value,)
    if isinstance(value, list):
        return tuple(int(v) for v in value)
    out = []
    for part in str(value).replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _parse_bounds(value) -> dict[int, int]:
    if isinstance(value, dict):
        return {int(k): int(v) for k, v in value.items()}
    out = {}
    for part in str(value).split(","):
        part = part.strip()
        if not part:
            continue
        k, _, v = part.partition(":")
        out[int(k)] = int(v)
    return out


def parse_search_spec(text: str) -> SearchSpec:
    """Parse a spec given as one JSON object or as ``key = value`` lines.

    Keys: n, predicate, q_range ("7", "4,5" or "4-6"), k, q, bound, mode,
    seed, samples, node_budget, time_budget, max_findings, cap, and the
    constraint maps fix / lower / upper written ``"1:10, 2:45"``.
    ``#`` starts a comment in the line format.
    """
    text = text.strip()
    try:
        if text.startswith("{"):
            raw = json.loads(text)
            if not isinstance(raw, dict):
                raise ParseError("search spec JSON must be an object")
        else:
            raw = {}
            for lineno, line in enumerate(text.splitlines(), start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ParseError(f"line {lineno}: expected 'key = value'")
                key, _, value = line.partition("=")
                raw[key.strip()] = value.strip()
        nested = raw.pop("constraints", None)  # the shape written by SearchSpec.to_json
        if isinstance(nested, dict):
            for key, value in nested.items():
                raw.setdefault(key, value)
        known = set(_INT_KEYS) | {"predicate", "q_range", "mode", "time_budget", "fix", "fixed",
                                  "lower", "upper"}
        unknown = set(raw) - known
        if unknown:
            raise ParseError(f"unknown search spec keys: {sorted(unknown)}")
        if "n" not in raw:
            raise ParseError("search spec needs n")
        kw = {}
        for key in _INT_KEYS:
            if key in raw and raw[key] not in (None, ""):
                kw[key] = None if str(raw[key]).lower() == "none" else int(raw[key])
        if raw.get("time_budget") not in (None, ""):
            kw["time_budget"] = float(raw["time_budget"])
        for key in ("predicate", "mode"):
            if key in raw:
                kw[key] = str(raw[key])
        if "q_range" in raw:
            kw["q_range"] = _parse_int_list(raw["q_range"])
        kw["constraints"] = AlphaConstraints(
            lower=_parse_bounds(raw.get("lower", {})),
            upper=_parse_bounds(raw.get("upper", {})),
            fixed=_parse_bounds(raw.get("fix", raw.get("fixed", {}))),
        )
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad search spec: {exc}") from exc
    spec = SearchSpec(**kw)
    try:
        spec.validate()
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
    return spec


def load_search_spec(path: str) -> SearchSpec:
    with open(path) as fh:
        return parse_search_spec(fh.read())
