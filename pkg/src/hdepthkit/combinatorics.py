"""Exact binomials, Macaulay (greedy k-binomial) expansions and Kruskal-Katona bounds.

Everything here is integer-only.  ``binom`` is backed by a small Pascal table
for ``n <= BINOM_CACHE_CAP`` and by :func:`math.comb` above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError

__all__ = [
    "BINOM_CACHE_CAP",
    "BinomialExpansion",
    "FeasibilityResult",
    "binom",
    "magic_identity_rhs",
    "kk_expand",
    "kk_upper",
    "kk_lower",
    "shadow_lower_bound",
    "fvector_feasible",
]

#: Rows of Pascal's triangle kept in memory.  Above this, math.comb is used.
BINOM_CACHE_CAP = 96

_PASCAL: list[tuple[int, ...]] = []


def _pascal_row(n: int) -> tuple[int, ...]:
    # Rows are only ever appended, and every writer computes the same
    # values, so concurrent first-writers are harmless.
    rows = _PASCAL
    while len(rows) <= n:
        m = len(rows)
        if m == 0:
            rows.append((1,))
        else:
            prev = rows[m - 1]
            rows.append((1,) + tuple(prev[i - 1] + prev[i] for i in range(1, m)) + (1,))
    return rows[n]


def binom(n: int, k: int) -> int:
    """Return the binomial coefficient C(n, k) as an exact integer.

    Zero when ``k < 0`` or ``0 <= n < k``.  For ``n < 0`` the generalized
    value ``(-1)**k * C(k - n - 1, k)`` is returned, so ``binom(-1, 0) == 1``;
    this is the value the alternating-sum identities need at ``q == n``.
    """
    if k < 0:
        return 0
    if n < 0:
        return (-1) ** k * binom(k - n - 1, k)
    if k > n:
        return 0
    if n <= BINOM_CACHE_CAP:
        return _pascal_row(n)[k]
    return math.comb(n, k)


def magic_identity_rhs(n: int, q: int, k: int) -> int:
    """Closed form of sum_j (-1)^(k-j) C(q-j, k-j) C(n, j), namely C(n-q+k-1, k)."""
    if not 0 <= k <= q <= n:
        raise DomainError(f"need 0 <= k <= q <= n, got n={n}, q={q}, k={k}")
    return binom(n - q + k - 1, k)


@dataclass(frozen=True)
class BinomialExpansion:
    """``value = sum(C(top, bottom) for top, bottom in terms)``.

    Terms are ordered with strictly decreasing tops and consecutive decreasing
    bottoms ending at some ``j >= 1`` with ``top >= j``.
    """

    terms: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        return sum(binom(t, b) for t, b in self.terms)

    @property
    def k(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def __str__(self) -> str:
        return " + ".join(f"C({t},{b})" for t, b in self.terms)


def _max_top(value: int, k: int) -> int:
    """Largest m with C(m, k) <= value (value >= 1, k >= 1)."""
    lo = k  # C(k, k) = 1 <= value
    hi = k + 1
    while binom(hi, k) <= value:
        lo = hi
        hi = 2 * hi
    # invariant: C(lo, k) <= value < C(hi, k)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binom(mid, k) <= value:
            lo = mid
        else:
            hi = mid
    return lo


def kk_expand(ell: int, k: int) -> BinomialExpansion:
    """Greedy k-binomial expansion of ``ell``.

    >>> str(kk_expand(118, 3))
    'C(9,3) + C(8,2) + C(6,1)'
    """
    if ell < 1 or k < 1:
        raise DomainError(f"kk_expand needs ell >= 1 and k >= 1, got ell={ell}, k={k}")
    terms = []
    rest = ell
    i = k
    while rest > 0:
        top = _max_top(rest, i)
        terms.append((top, i))
        rest -= binom(top, i)
        i -= 1
    return BinomialExpansion(tuple(terms))


def kk_upper(ell: int, k: int) -> int:
    """The Kruskal-Katona bound ell^(k): replace every C(n_i, i) by C(n_i, i+1)."""
    if k < 1:
        raise DomainError(f"kk_upper needs k >= 1, got k={k}")
    if ell < 0:
        raise DomainError(f"kk_upper needs ell >= 0, got {ell}")
    if ell == 0:
        return 0
    return sum(binom(t, b + 1) for t, b in kk_expand(ell, k).terms)


def shadow_lower_bound(alpha_k: int, k: int) -> int:
    """Least admissible alpha_{k-1} given alpha_k: replace C(n_i, i) by C(n_i, i-1)."""
    if k < 2 or alpha_k < 1:
        raise DomainError(f"shadow_lower_bound needs k >= 2 and alpha_k >= 1, got k={k}, alpha_k={alpha_k}")
    return sum(binom(t, b - 1) for t, b in kk_expand(alpha_k, k).terms)


def kk_lower(ell: int, k: int) -> int:
    """``shadow_lower_bound`` extended by 0 at ``ell == 0``."""
    return 0 if ell == 0 else shadow_lower_bound(ell, k)


class FeasibilityResult(NamedTuple):
    feasible: bool
    violated_at: int | None  # f-index i of the first failing f_i
    truncated_at: int | None  # length of the f-vector after dropping trailing zeros (None if nothing dropped)

    def __bool__(self) -> bool:
        return self.feasible


def fvector_feasible(f: Sequence[int]) -> FeasibilityResult:
    """Kruskal-Katona test for ``f = (f_{-1}, f_0, ..., f_{d-1})`` with ``f_{-1} = 1``.

    Trailing zeros are dropped first.  ``violated_at`` uses f-indexing,
    so ``violated_at == i`` means ``f_i`` (stored at position ``i + 1``) fails.
    """
    f = list(f)
    if not f or f[0] != 1:
        raise DomainError("an f-vector must start with f_{-1} = 1")
    if any(x < 0 for x in f):
        raise DomainError("f-vector entries must be nonnegative")
    end = len(f)
    while end > 1 and f[end - 1] == 0:
        end -= 1
    truncated = end if end < len(f) else None
    f = f[:end]
    # position p holds f_{p-1}
    for p in range(1, len(f)):
        if f[p] <= 0:
            return FeasibilityResult(False, p - 1, truncated)
        if p >= 2 and f[p] > kk_upper(f[p - 1], p - 1):
            return FeasibilityResult(False, p - 1, truncated)
    return FeasibilityResult(True, None, truncated)
