"""Finite and infinite binary words, the shift, and the ultrametric distance.

Finite words are plain ``str`` objects over the characters ``"0"`` and
``"1"``; letters are one-character strings.  Infinite words are restricted to
eventually periodic ones and are held by :class:`OmegaWord` in canonical form,
so structural equality is equality of points.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import lcm
from typing import Iterator, Optional

LETTERS = ("0", "1")

_NEGATE = str.maketrans("01", "10")
_LITERAL = re.compile(r"^([01]*)\(([01]+)\)$")


class WordError(ValueError):
    pass


def negate(letter: str) -> str:
    if letter == "0":
        return "1"
    if letter == "1":
        return "0"
    raise WordError(f"not a letter: {letter!r}")


def negate_word(q: str) -> str:
    return q.translate(_NEGATE)


def check_finite(q: str) -> str:
    if q.strip("01"):
        raise WordError(f"not a binary word: {q!r}")
    return q


def _primitive_root(per: str) -> str:
    n = len(per)
    for d in range(1, n + 1):
        if n % d == 0 and per[:d] * (n // d) == per:
            return per[:d]
    return per


@dataclass(frozen=True, slots=True)
class OmegaWord:
    """The infinite word ``pre · per · per · …``.

    Construction canonicalizes: the period is made primitive and the
    preperiod is shortened as far as possible (rotating the period), so two
    instances are equal iff they denote the same infinite word.
    """

    pre: str
    per: str

    def __post_init__(self):
        check_finite(self.pre)
        check_finite(self.per)
        if not self.per:
            raise WordError("period must be nonempty")
        pre, per = self.pre, _primitive_root(self.per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def parse(cls, text: str) -> OmegaWord:
        """Parse the ``BITS(BITS)`` literal, e.g. ``01(10)`` or ``(0)``."""
        m = _LITERAL.match(text.strip())
        if m is None:
            raise WordError(f"bad word literal {text!r}; expected e.g. 01(10)")
        return cls(m.group(1), m.group(2))

    def __str__(self) -> str:
        return f"{self.pre}({self.per})"

    def __repr__(self) -> str:
        return f"OmegaWord({str(self)!r})"

    def expand(self, n: int) -> str:
        """The first ``n`` letters."""
        if n <= len(self.pre):
            return self.pre[:n]
        rest = n - len(self.pre)
        reps = -(-rest // len(self.per))
        return self.pre + (self.per * reps)[:rest]

    def letter(self, i: int) -> str:
        if i < 1:
            raise WordError("letter positions start at 1")
        if i <= len(self.pre):
            return self.pre[i - 1]
        return self.per[(i - 1 - len(self.pre)) % len(self.per)]

    def letters(self) -> Iterator[str]:
        yield from self.pre
        while True:
            yield from self.per


def canonicalize(pre: str, per: str) -> OmegaWord:
    return OmegaWord(pre, per)


def letter_at(w: OmegaWord, i: int) -> str:
    return w.letter(i)


def prefix(w: OmegaWord, k: int) -> str:
    if k < 0:
        raise WordError("prefix length must be >= 0")
    return w.expand(k)


def shift(w: OmegaWord, k: int = 1) -> OmegaWord:
    if k < 0:
        raise WordError("shift amount must be >= 0")
    if k <= len(w.pre):
        return OmegaWord(w.pre[k:], w.per)
    r = (k - len(w.pre)) % len(w.per)
    return OmegaWord("", w.per[r:] + w.per[:r])


def concat(q: str, w: OmegaWord) -> OmegaWord:
    return OmegaWord(q + w.pre, w.per)


def first_difference(w1: OmegaWord, w2: OmegaWord) -> Optional[int]:
    """1-based index of the first differing letter, or ``None`` if equal.

    Past ``max(|pre|) + lcm(|per|)`` letters both words repeat with a common
    period, so comparing that many letters decides equality.
    """
    if w1 == w2:
        return None
    n = max(len(w1.pre), len(w2.pre)) + lcm(len(w1.per), len(w2.per))
    a, b = w1.expand(n), w2.expand(n)
    diff = int(a, 2) ^ int(b, 2)
    # canonical forms differ, so the words differ within n letters
    return n - diff.bit_length() + 1


@total_ordering
@dataclass(frozen=True, slots=True)
class DyadicScale:
    """Either zero or the exact dyadic power ``2**exponent``."""

    exponent: Optional[int]

    @classmethod
    def power(cls, exponent: int) -> DyadicScale:
        return cls(exponent)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: DyadicScale) -> DyadicScale:
        if self.exponent is None or other.exponent is None:
            return ZERO
        return DyadicScale(self.exponent + other.exponent)

    def __truediv__(self, other: DyadicScale) -> DyadicScale:
        if other.exponent is None:
            raise ZeroDivisionError("division by the zero scale")
        if self.exponent is None:
            return ZERO
        return DyadicScale(self.exponent - other.exponent)

    def __lt__(self, other: DyadicScale) -> bool:
        if self.exponent is None:
            return other.exponent is not None
        if other.exponent is None:
            return False
        return self.exponent < other.exponent

    def to_fraction(self) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return Fraction(2) ** self.exponent

    def __str__(self) -> str:
        if self.exponent is None:
            return "0"
        return f"2^{self.exponent}"


ZERO = DyadicScale(None)
ONE = DyadicScale(0)


def distance(w1: OmegaWord, w2: OmegaWord) -> DyadicScale:
    """``2**-(i-1)`` where ``i`` is the first differing position; zero if equal."""
    i = first_difference(w1, w2)
    if i is None:
        return ZERO
    return DyadicScale(1 - i)


def enumerate_cylinder_reps(n: int) -> list[OmegaWord]:
    """The ``2**n`` words ``q(0)`` for ``q`` of length ``n``, lexicographic in ``q``."""
    if n == 0:
        return [OmegaWord("", "0")]
    return [OmegaWord(format(i, f"0{n}b"), "0") for i in range(2**n)]
