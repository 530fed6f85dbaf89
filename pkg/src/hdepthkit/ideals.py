"""Monomials and monomial ideals given by minimal generators.

Squarefree monomials are interchangeable with subsets of ``[n]``; a subset is
an ``int`` bitmask where bit ``i - 1`` stands for the variable ``x_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ParseError

__all__ = [
    "MAX_MASK_VARS",
    "Monomial",
    "MonomialIdeal",
    "minimalize",
    "intersect",
    "ideal_sum",
    "polarize",
    "parse_monomial",
    "parse_ideal",
    "mask_to_subset",
    "subset_to_mask",
    "squarefree_ideals",
    "stanley_reisner_ideal",
    "random_squarefree_masks",
]

#: Largest ambient size for single-word bitmask work.
MAX_MASK_VARS = 63


def subset_to_mask(subset: Iterable[int]) -> int:
    """1-based variable indices -> bitmask."""
    mask = 0
    for i in subset:
        mask |= 1 << (i - 1)
    return mask


def mask_to_subset(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True, order=True)
class Monomial:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise DomainError("exponents must be nonnegative")

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Monomial":
        return cls(tuple((mask >> i) & 1 for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_squarefree(self) -> bool:
        return all(e <= 1 for e in self.exponents)

    def to_mask(self) -> int:
        if not self.is_squarefree():
            raise DomainError(f"{self} is not squarefree")
        return subset_to_mask(i + 1 for i, e in enumerate(self.exponents) if e)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(max(a, b) for a, b in zip(self.exponents, other.exponents)))

    def __str__(self) -> str:
        parts = []
        for i, e in enumerate(self.exponents, start=1):
            if e == 1:
                parts.append(f"x{i}")
            elif e > 1:
                parts.append(f"x{i}^{e}")
        return "*".join(parts) if parts else "1"


def _check_same_n(gens: Sequence[Monomial], n: int) -> None:
    for g in gens:
        if g.n != n:
            raise DomainError(f"monomial {g} has {g.n} variables, expected {n}")


def _minimal(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    # Sorting by degree first means a divisor is always seen before its multiples.
    kept: list[Monomial] = []
    for g in sorted(set(gens), key=lambda m: (m.degree, m.exponents)):
        if not any(h.divides(g) for h in kept):
            kept.append(g)
    return tuple(sorted(kept, key=lambda m: (m.degree, tuple(-e for e in m.exponents))))


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal of ``K[x_1..x_n]``, stored by its minimal generators.

    Build through :func:`minimalize` (or ``MonomialIdeal.from_masks``) rather
    than the raw constructor, which trusts its input.
    """

    n: int
    generators: tuple[Monomial, ...]

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls(n, ())

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls(n, (Monomial.one(n),))

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int) -> "MonomialIdeal":
        return minimalize([Monomial.from_mask(m, n) for m in masks], n)

    @classmethod
    def from_exponents(cls, rows: Iterable[Sequence[int]], n: int | None = None) -> "MonomialIdeal":
        gens = [Monomial(tuple(r)) for r in rows]
        if n is None:
            if not gens:
                raise DomainError("cannot infer n for an empty generator list")
            n = gens[0].n
        return minimalize(gens, n)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.degree == 0 for g in self.generators)

    def is_proper(self) -> bool:
        return not self.is_unit()

    def is_squarefree(self) -> bool:
        return all(g.is_squarefree() for g in self.generators)

    def is_principal(self) -> bool:
        return len(self.generators) == 1

    def in_m_squared(self) -> bool:
        return all(g.degree >= 2 for g in self.generators)

    def masks(self) -> tuple[int, ...]:
        return tuple(g.to_mask() for g in self.generators)

    def contains(self, m: Monomial) -> bool:
        if m.n != self.n:
            raise DomainError(f"monomial {m} has {m.n} variables, ideal has {self.n}")
        return any(g.divides(m) for g in self.generators)

    def __contains__(self, m: Monomial) -> bool:
        return self.contains(m)

    def issubset(self, other: "MonomialIdeal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __and__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return intersect(self, other)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return ideal_sum(self, other)

    def max_exponents(self) -> tuple[int, ...]:
        if not self.generators:
            return (0,) * self.n
        return tuple(max(col) for col in zip(*(g.exponents for g in self.generators)))

    def __str__(self) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def minimalize(gens: Iterable[Monomial], n: int) -> MonomialIdeal:
    """Divisibility-minimal generating set; no generators gives the zero ideal."""
    gens = list(gens)
    _check_same_n(gens, n)
    return MonomialIdeal(n, _minimal(gens))


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    if I.n != J.n:
        raise DomainError("ideals live in different rings")
    return minimalize((u.lcm(v) for u in I.generators for v in J.generators), I.n)


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    if I.n != J.n:
        raise DomainError("ideals live in different rings")
    return minimalize(I.generators + J.generators, I.n)


def polarize(I: MonomialIdeal) -> tuple[MonomialIdeal, int]:
    """Standard polarization.  Returns ``(I^p, N)`` with ``I^p`` in ``n + N`` variables.

    ``x_i^e`` becomes ``x_{i,1} x_{i,2} ... x_{i,e}``.  The slot ``x_{i,1}``
    keeps index ``i``; the extra slots are appended after ``x_n``, grouped by
    ``i`` and then by slot.
    """
    if I.is_zero() or I.is_unit():
        raise DomainError("polarize needs a proper nonzero ideal")
    n = I.n
    maxe = I.max_exponents()
    extra_start = []
    pos = n
    for e in maxe:
        extra_start.append(pos)
        pos += max(e - 1, 0)
    N = pos - n
    if N == 0:
        return I, 0
    gens = []
    for g in I.generators:
        ex = [0] * (n + N)
        for i, e in enumerate(g.exponents):
            if e >= 1:
                ex[i] = 1
            for slot in range(2, e + 1):
                ex[extra_start[i] + slot - 2] = 1
        gens.append(Monomial(tuple(ex)))
    return minimalize(gens, n + N), N


# --- text format -----------------------------------------------------------

_FACTOR = re.compile(r"\s*x_?(\d+)(?:\s*\^\s*(\d+))?\s*(\*)?")
_RANGE = re.compile(r"^x_?(\d+)\s*,\s*(?:\.\.\.|…)\s*,\s*x_?(\d+)$")


def _parse_factors(text: str) -> list[tuple[int, int]]:
    text = text.strip()
    if text == "1":
        return []
    pos = 0
    out = []
    while pos < len(text):
        m = _FACTOR.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse monomial {text!r} at position {pos}")
        idx = int(m.group(1))
        if idx < 1:
            raise ParseError(f"variable index must be >= 1 in {text!r}")
        out.append((idx, int(m.group(2)) if m.group(2) else 1))
        pos = m.end()
    if not out:
        raise ParseError(f"empty monomial in {text!r}")
    return out


def parse_monomial(text: str, n: int) -> Monomial:
    ex = [0] * n
    for idx, e in _parse_factors(text):
        if idx > n:
            raise ParseError(f"variable x{idx} exceeds n={n}")
        ex[idx - 1] += e
    return Monomial(tuple(ex))


def _split_terms(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    text = text.strip()
    if text in ("", "0"):
        return []
    # expand "xa,...,xb" ranges of single variables
    raw = [t.strip() for t in text.split(",")]
    terms: list[str] = []
    i = 0
    while i < len(raw):
        t = raw[i]
        if t in ("...", "…"):
            if not terms or i + 1 >= len(raw):
                raise ParseError("'...' must sit between two variables")
            m = _RANGE.match(f"{terms[-1]},...,{raw[i + 1]}")
            if not m:
                raise ParseError("'...' ranges are only allowed between single variables")
            a, b = int(m.group(1)), int(m.group(2))
            if b < a:
                raise ParseError(f"empty range x{a},...,x{b}")
            terms.extend(f"x{j}" for j in range(a + 1, b))
            i += 1
            continue
        if not t:
            raise ParseError(f"empty generator in {text!r}")
        terms.append(t)
        i += 1
    return terms


def parse_ideal(text: str, n: int | None = None) -> MonomialIdeal:
    """Parse ``"x1*x2, x1x5x6, x3^2*x4"``.

    ``x12`` always means variable 12.  Surrounding parentheses are optional,
    ``x2,...,x13`` expands to every variable in between, and ``""``/``"0"``
    give the zero ideal.  When ``n`` is omitted it is the largest index used.
    """
    terms = _split_terms(text)
    factors = [_parse_factors(t) for t in terms]
    used = max((idx for fs in factors for idx, _ in fs), default=0)
    if n is None:
        if not terms:
            raise ParseError("n must be given for the zero ideal")
        n = max(used, 1)
    elif used > n:
        raise ParseError(f"variable x{used} exceeds n={n}")
    gens = []
    for fs in factors:
        ex = [0] * n
        for idx, e in fs:
            ex[idx - 1] += e
        gens.append(Monomial(tuple(ex)))
    return minimalize(gens, n)


# --- enumeration -------------------------------------------------------------


def squarefree_ideals(n: int, include_trivial: bool = False) -> Iterator[tuple[int, ...]]:
    """Yield every antichain of subsets of ``[n]`` as a tuple of masks.

    These are the minimal generating sets of all squarefree monomial ideals.
    The zero ideal ``()`` and the unit ideal ``(0,)`` are only produced when
    ``include_trivial`` is set; with them the count is the Dedekind number.
    """
    if include_trivial:
        yield ()
        yield (0,)
    # Nonempty subsets ordered by mask; a set can join the antichain iff it is
    # incomparable with everything already chosen.
    subsets = list(range(1, 1 << n))
    chosen: list[int] = []

    def rec(start: int) -> Iterator[tuple[int, ...]]:
        for idx in range(start, len(subsets)):
            s = subsets[idx]
            if any((c & s) == c or (c & s) == s for c in chosen):
                continue
            chosen.append(s)
            yield tuple(chosen)
            yield from rec(idx + 1)
            chosen.pop()

    yield from rec(0)


def stanley_reisner_ideal(faces: Iterable[int], n: int) -> MonomialIdeal:
    """Ideal of minimal non-faces of the simplicial complex with the given faces.

    ``faces`` must be closed under taking subsets and contain the empty set.
    """
    face_set = set(faces)
    if 0 not in face_set:
        raise DomainError("the complex must contain the empty face")
    minimal = [1 << v for v in range(n) if (1 << v) not in face_set]
    for f in face_set:
        if f == 0:
            continue
        top = f.bit_length()  # every new vertex is larger than max(f)
        for v in range(top, n):
            cand = f | (1 << v)
            if cand in face_set:
                continue
            rest = f
            ok = True
            while rest:
                low = rest & -rest
                if (cand ^ low) not in face_set:
                    ok = False
                    break
                rest ^= low
            if ok:
                minimal.append(cand)
    return MonomialIdeal.from_masks(minimal, n)


def random_squarefree_masks(n: int, rng, max_gens: int | None = None) -> tuple[int, ...]:
    """Minimal generator masks of a random proper nonzero squarefree ideal.

    Generator sizes and counts are drawn per call so that both sparse and
    dense ideals show up.  ``rng`` is a :class:`random.Random`.
    """
    max_gens = max_gens or 2 * n
    count = rng.randint(1, max_gens)
    smallest = rng.randint(1, n)
    gens = []
    for _ in range(count):
        size = rng.randint(smallest, n)
        gens.append(subset_to_mask(rng.sample(range(1, n + 1), size)))
    gens.sort(key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for g in gens:
        if not any((h & g) == h for h in kept):
            kept.append(g)
    return tuple(kept)
