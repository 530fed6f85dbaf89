"""Hilbert depth of squarefree quotients J/I from the subset census alpha.

alpha_j(J/I) counts the j-subsets A of [n] with x_A in J but not in I.  The
beta transform at level q is

    beta_k^q = sum_{j<=k} (-1)^(k-j) C(q-j, k-j) alpha_j,

and hdepth(J/I) is the largest q with beta_k^q >= 0 for all k <= q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .combinatorics import binom
from .errors import DomainError
from .ideals import MonomialIdeal, polarize

__all__ = [
    "SUBSET_ENUMERATION_LIMIT",
    "AlphaVector",
    "BetaTable",
    "HdepthReport",
    "CompareResult",
    "PrincipalProfile",
    "alpha_of_quotient",
    "alpha_of_ideal",
    "alpha_enumerate",
    "alpha_inclusion_exclusion",
    "beta_table",
    "beta_values",
    "alpha_from_beta",
    "hdepth",
    "hdepth_value",
    "hdepth_general",
    "beta_ideal_from_quotient",
    "ideal_alpha_from_quotient",
    "compare_criteria",
    "principal_profile",
]

#: Default cap on n for the full 2^n subset scan (2^24 masks).
SUBSET_ENUMERATION_LIMIT = 24


@dataclass(frozen=True)
class AlphaVector:
    """``counts[j] = alpha_j`` for ``0 <= j <= n``."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts:
            raise DomainError("an alpha vector needs at least alpha_0")
        for j, c in enumerate(self.counts):
            if not 0 <= c <= binom(self.n, j):
                raise DomainError(f"alpha_{j} = {c} outside [0, C({self.n},{j})]")

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    @property
    def dim(self) -> int:
        """max{j : alpha_j > 0}, or -1 for the zero vector."""
        for j in range(self.n, -1, -1):
            if self.counts[j]:
                return j
        return -1

    def __getitem__(self, j: int) -> int:
        return self.counts[j]

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    @classmethod
    def full(cls, n: int) -> "AlphaVector":
        return cls(tuple(binom(n, j) for j in range(n + 1)))

    @classmethod
    def padded(cls, prefix: Sequence[int], n: int) -> "AlphaVector":
        if len(prefix) > n + 1:
            raise DomainError(f"alpha prefix of length {len(prefix)} does not fit n={n}")
        return cls(tuple(prefix) + (0,) * (n + 1 - len(prefix)))


@dataclass(frozen=True)
class BetaTable:
    q: int
    values: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def first_negative(self) -> int | None:
        for k, b in enumerate(self.values):
            if b < 0:
                return k
        return None

    def is_nonnegative(self) -> bool:
        return all(b >= 0 for b in self.values)


@dataclass(frozen=True)
class HdepthReport:
    hdepth: int
    dim: int
    n: int
    alpha: AlphaVector
    beta_at_hdepth: BetaTable
    # q -> (k, beta_k^q) with k the smallest index where beta_k^q < 0
    rejected: dict[int, tuple[int, int]] = field(default_factory=dict)
    shift: int = 0  # polarization N already subtracted from hdepth


# --- alpha ------------------------------------------------------------------


def _popcounts(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def _membership(masks: Sequence[int], n: int) -> np.ndarray:
    """Boolean array over all 2^n subsets: is the subset in the up-set generated by ``masks``."""
    size = 1 << n
    member = np.zeros(size, dtype=bool)
    if masks:
        member[np.asarray(masks, dtype=np.int64)] = True
        for b in range(n):
            # reshape so that axis 1 toggles bit b; propagate upward
            view = member.reshape(-1, 2, 1 << b)
            view[:, 1, :] |= view[:, 0, :]
    return member


def _check_limit(n: int, limit: int | None) -> None:
    limit = SUBSET_ENUMERATION_LIMIT if limit is None else limit
    if n > limit:
        raise DomainError(f"subset enumeration over 2^{n} masks exceeds the limit n <= {limit}; "
                          "raise the limit or use the inclusion-exclusion method")


def alpha_enumerate(J_masks: Sequence[int] | None, I_masks: Sequence[int], n: int,
                    limit: int | None = None) -> tuple[int, ...]:
    """alpha(J/I) by scanning all 2^n subsets.  ``J_masks=None`` means J = S."""
    _check_limit(n, limit)
    pc = _POPCOUNT_CACHE.get(n)
    if pc is None:
        pc = _POPCOUNT_CACHE.setdefault(n, _popcounts(n))
    in_I = _membership(I_masks, n)
    sel = ~in_I if J_masks is None else _membership(J_masks, n) & ~in_I
    return tuple(int(c) for c in np.bincount(pc[sel], minlength=n + 1))


def _ideal_alpha_ie(masks: Sequence[int], n: int) -> list[int]:
    # Signed inclusion-exclusion over generator subsets, with terms merged
    # by their lcm (= union of masks).
    terms: dict[int, int] = {}
    for g in masks:
        new = dict(terms)
        new[g] = new.get(g, 0) + 1
        for u, c in terms.items():
            v = u | g
            new[v] = new.get(v, 0) - c
        terms = {u: c for u, c in new.items() if c}
    alpha = [0] * (n + 1)
    for u, c in terms.items():
        s = u.bit_count()
        for j in range(s, n + 1):
            alpha[j] += c * binom(n - s, j - s)
    return alpha


def alpha_inclusion_exclusion(J_masks: Sequence[int] | None, I_masks: Sequence[int], n: int) -> tuple[int, ...]:
    """alpha(J/I) = alpha(J) - alpha(I), each by inclusion-exclusion over generator lcms."""
    a_I = _ideal_alpha_ie(I_masks, n)
    a_J = [binom(n, j) for j in range(n + 1)] if J_masks is None else _ideal_alpha_ie(J_masks, n)
    return tuple(x - y for x, y in zip(a_J, a_I))


def _squarefree_masks(I: MonomialIdeal, what: str) -> tuple[int, ...]:
    if not I.is_squarefree():
        raise DomainError(f"{what} is not squarefree; polarize it first")
    return I.masks()


def alpha_of_quotient(J: MonomialIdeal | None, I: MonomialIdeal, method: str = "enumerate",
                      limit: int | None = None, check: bool = False) -> AlphaVector:
    """alpha(J/I) for squarefree ``I`` inside ``J``.  ``J=None`` stands for the ring S.

    ``method`` is ``"enumerate"`` (scan all subsets) or ``"inclusion-exclusion"``.
    With ``check=True`` both are run and must agree.
    """
    n = I.n
    if I.is_unit():
        raise DomainError("I must be a proper ideal")
    I_masks = _squarefree_masks(I, "I")
    J_masks = None
    if J is not None:
        if J.n != n:
            raise DomainError("I and J live in different rings")
        J_masks = _squarefree_masks(J, "J")
        if not I.issubset(J):
            raise DomainError("I is not contained in J")
        if J.is_unit():
            J_masks = None
    if method == "enumerate":
        counts = alpha_enumerate(J_masks, I_masks, n, limit)
    elif method in ("inclusion-exclusion", "ie"):
        counts = alpha_inclusion_exclusion(J_masks, I_masks, n)
    else:
        raise ValueError(f"unknown alpha method {method!r}")
    if check:
        other = (alpha_inclusion_exclusion(J_masks, I_masks, n) if method == "enumerate"
                 else alpha_enumerate(J_masks, I_masks, n, limit))
        if tuple(other) != tuple(counts):
            raise AssertionError(f"alpha pipelines disagree: {counts} vs {other}")
    if not any(counts):
        raise DomainError("J/I is zero (I = J)")
    return AlphaVector(counts)


def alpha_of_ideal(I: MonomialIdeal, method: str = "enumerate", limit: int | None = None,
                   check: bool = False) -> AlphaVector:
    """alpha(I) = alpha(I/0)."""
    if I.is_zero():
        raise DomainError("the zero ideal has no Hilbert depth")
    return alpha_of_quotient(I, MonomialIdeal.zero(I.n), method, limit, check)


# --- beta transform -----------------------------------------------------------


def beta_values(alpha: Sequence[int], q: int) -> list[int]:
    """beta_k^q for 0 <= k <= q (plain list, no validation)."""
    out = []
    for k in range(q + 1):
        s = 0
        for j in range(k + 1):
            term = binom(q - j, k - j) * alpha[j]
            s += term if (k - j) % 2 == 0 else -term
        out.append(s)
    return out


def beta_table(alpha: AlphaVector | Sequence[int], q: int) -> BetaTable:
    counts = alpha.counts if isinstance(alpha, AlphaVector) else tuple(alpha)
    n = len(counts) - 1
    if not 0 <= q <= n:
        raise DomainError(f"level q={q} outside [0, {n}]")
    return BetaTable(q, tuple(beta_values(counts, q)))


def alpha_from_beta(beta: BetaTable) -> tuple[int, ...]:
    """Inverse transform: alpha_k = sum_{j<=k} C(q-j, k-j) beta_j^q, for k <= q."""
    q = beta.q
    return tuple(sum(binom(q - j, k - j) * beta.values[j] for j in range(k + 1)) for k in range(q + 1))


def _scan(counts: Sequence[int]) -> tuple[int, dict[int, tuple[int, int]], list[int]]:
    n = len(counts) - 1
    rejected: dict[int, tuple[int, int]] = {}
    for q in range(n, -1, -1):
        values = beta_values(counts, q)
        for k, b in enumerate(values):
            if b < 0:
                rejected[q] = (k, b)
                break
        else:
            return q, rejected, values
    # beta_0^0 = alpha_0 >= 0, so level 0 always passes
    raise AssertionError("unreachable")


def hdepth_value(alpha: Sequence[int]) -> int:
    """Just the Hilbert depth of a raw alpha sequence (fast path for sweeps)."""
    n = len(alpha) - 1
    for q in range(n, -1, -1):
        # beta_k^q computed incrementally through the inverse relation
        # beta_k = alpha_k - sum_{j<k} C(q-j, k-j) beta_j
        betas = []
        ok = True
        for k in range(q + 1):
            b = alpha[k]
            for j in range(k):
                b -= binom(q - j, k - j) * betas[j]
            if b < 0:
                ok = False
                break
            betas.append(b)
        if ok:
            return q
    raise AssertionError("unreachable")


def hdepth(alpha: AlphaVector | Sequence[int]) -> HdepthReport:
    """Largest q with all beta_k^q >= 0, scanning q from n downward.

    Every rejected level q records the smallest k with beta_k^q < 0.
    """
    if not isinstance(alpha, AlphaVector):
        alpha = AlphaVector(tuple(alpha))
    if not any(alpha.counts):
        raise DomainError("alpha is identically zero (empty poset)")
    q, rejected, values = _scan(alpha.counts)
    dim = alpha.dim
    if q > dim:
        raise AssertionError(f"hdepth {q} exceeds dim {dim}")
    return HdepthReport(hdepth=q, dim=dim, n=alpha.n, alpha=alpha,
                        beta_at_hdepth=BetaTable(q, tuple(values)), rejected=rejected)


def hdepth_general(I: MonomialIdeal, mode: str = "quotient", method: str = "enumerate",
                   limit: int | None = None, check: bool = False) -> HdepthReport:
    """hdepth(S/I) (``mode="quotient"``) or hdepth(I) (``mode="ideal"``) for any monomial ideal.

    Non-squarefree input is polarized and the shift N is subtracted.
    """
    if I.is_zero() or I.is_unit():
        raise DomainError("I must be proper and nonzero")
    P, N = polarize(I)
    if mode == "quotient":
        alpha = alpha_of_quotient(None, P, method, limit, check)
    elif mode == "ideal":
        alpha = alpha_of_ideal(P, method, limit, check)
    else:
        raise ValueError(f"mode must be 'quotient' or 'ideal', got {mode!r}")
    rep = hdepth(alpha)
    if N == 0:
        return rep
    return HdepthReport(hdepth=rep.hdepth - N, dim=rep.dim - N, n=rep.n, alpha=rep.alpha,
                        beta_at_hdepth=rep.beta_at_hdepth, rejected=rep.rejected, shift=N)


# --- comparing I with S/I ---------------------------------------------------------


def ideal_alpha_from_quotient(alpha_S: AlphaVector) -> AlphaVector:
    """alpha_j(I) = C(n, j) - alpha_j(S/I)."""
    n = alpha_S.n
    return AlphaVector(tuple(binom(n, j) - a for j, a in enumerate(alpha_S.counts)))


def beta_ideal_from_quotient(beta_S: BetaTable, n: int) -> BetaTable:
    """beta_k^q(I) = C(n-q+k-1, k) - beta_k^q(S/I)."""
    q = beta_S.q
    if q > n:
        raise DomainError(f"level q={q} exceeds n={n}")
    return BetaTable(q, tuple(binom(n - q + k - 1, k) - b for k, b in enumerate(beta_S.values)))


@dataclass(frozen=True)
class CompareResult:
    q: int
    strict_plus_one: bool  # hdepth(I) >= q + 1
    at_least: bool  # hdepth(I) >= q
    # (k, beta, bound) for the first violation of each condition, else None;
    # for strict_plus_one the entry is beta_{k+1}^{q+1} against C(n-q+k-1, k+1).
    strict_witness: tuple[int, int, int] | None = None
    at_least_witness: tuple[int, int, int] | None = None


def compare_criteria(alpha_S: AlphaVector, q: int | None = None) -> CompareResult:
    """Decide hdepth(I) >= q+1 and hdepth(I) >= q from beta(S/I) alone, q = hdepth(S/I).

    strict_plus_one: beta_{k+1}^{q+1}(S/I) <= C(n-q+k-1, k+1) for 0 <= k <= q.
    at_least:        beta_k^q(S/I)        <= C(n-q+k-1, k)   for 1 <= k <= q.
    """
    n = alpha_S.n
    if q is None:
        q = hdepth_value(alpha_S.counts)
    strict_w = None
    if q + 1 <= n:
        b1 = beta_values(alpha_S.counts, q + 1)
        for k in range(q + 1):
            bound = binom(n - q + k - 1, k + 1)
            if b1[k + 1] > bound:
                strict_w = (k + 1, b1[k + 1], bound)
                break
    at_w = None
    b0 = beta_values(alpha_S.counts, q)
    for k in range(1, q + 1):
        bound = binom(n - q + k - 1, k)
        if b0[k] > bound:
            at_w = (k, b0[k], bound)
            break
    # q = n only happens for S itself; I = 0 then, and there is nothing to compare
    return CompareResult(q=q, strict_plus_one=strict_w is None and q + 1 <= n,
                         at_least=at_w is None, strict_witness=strict_w, at_least_witness=at_w)


@dataclass(frozen=True)
class PrincipalProfile:
    n: int
    m: int
    alpha_ideal: AlphaVector
    alpha_quotient: AlphaVector
    beta_ideal_n: BetaTable  # beta^n(I)
    beta_quotient_n1: BetaTable  # beta^{n-1}(S/I)


def principal_profile(n: int, m: int) -> PrincipalProfile:
    """The closed forms for I = (u), u squarefree of degree m, checked against each other."""
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got n={n}, m={m}")
    a_I = AlphaVector(tuple(binom(n - m, k - m) for k in range(n + 1)))
    a_S = AlphaVector(tuple(binom(n, k) - binom(n - m, k - m) for k in range(n + 1)))
    b_I = BetaTable(n, tuple(int(k == m) for k in range(n + 1)))
    b_S = BetaTable(n - 1, tuple(int(k < m) for k in range(n)))
    if beta_table(a_I, n) != b_I:
        raise AssertionError("beta^n(I) does not match delta_{km}")
    if beta_table(a_S, n - 1) != b_S:
        raise AssertionError("beta^{n-1}(S/I) profile mismatch")
    if alpha_from_beta(b_I) != a_I.counts:
        raise AssertionError("inverse transform of beta^n(I) mismatch")
    if alpha_from_beta(b_S) != a_S.counts[:n]:
        raise AssertionError("inverse transform of beta^{n-1}(S/I) mismatch")
    if ideal_alpha_from_quotient(a_S) != a_I:
        raise AssertionError("alpha(I) + alpha(S/I) != full binomials")
    return PrincipalProfile(n, m, a_I, a_S, b_I, b_S)

