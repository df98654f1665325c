"""Dilatation structures on the boundary of the dyadic tree.

A structure is induced by a W-function, a family of isometries ``W^x_k``
indexed by a level ``k >= 1`` and a base point ``x``.  The coefficient-2
dilatation based at ``x = q a x'`` sends ``q ā y`` to ``q a ¬x'_1 W^x_{|q|+1}(y)``
and fixes ``x``; coefficient ``2**p`` is its ``p``-th iterate and ``2**-p`` the
inverse, defined on the cylinder ``[x]_p X^ω``.

W-functions here are window tables: ``W^x_k`` is looked up by the letters of
``x`` at positions ``k .. k+m-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Union

from . import library
from .automata import NotInvertible, Transducer, apply, check_isometry, invert
from .words import OmegaWord, concat, first_difference, negate, prefix, shift

MEMO_LIMIT = 1 << 20


class DilatationError(ValueError):
    pass


class OutOfDomain(DilatationError):
    """The point lies outside ``[base]_p X^ω``, the domain of the inverse dilatation."""


def all_keys(m: int) -> list[str]:
    return ["".join(t) for t in product("01", repeat=m)]


@dataclass(frozen=True)
class LevelTable:
    """Map from windows of ``m`` base letters to isometry names."""

    window: int
    table: Mapping[str, str]

    def __post_init__(self):
        if self.window < 1:
            raise DilatationError("window must be positive")
        table = dict(self.table)
        missing = [k for k in all_keys(self.window) if k not in table]
        extra = [k for k in table if len(k) != self.window or k.strip("01")]
        if missing or extra:
            raise DilatationError(f"table over window {self.window}: missing keys {missing}, bad keys {extra}")
        object.__setattr__(self, "table", table)

    @classmethod
    def constant(cls, ref: str, window: int = 1) -> LevelTable:
        return cls(window, {k: ref for k in all_keys(window)})

    def key(self, base: OmegaWord, k: int) -> str:
        return base.expand(k + self.window - 1)[k - 1:]

    def lookup(self, base: OmegaWord, k: int) -> str:
        return self.table[self.key(base, k)]

    def refs(self) -> set[str]:
        return set(self.table.values())


@dataclass(frozen=True)
class SelfSimilarW:
    """Level-independent W: ``W^x_k`` depends on letters ``k..k+m-1`` of ``x`` only."""

    table: LevelTable

    kind = "selfsimilar"

    def lookup(self, base: OmegaWord, k: int) -> str:
        return self.table.lookup(base, k)

    @property
    def max_window(self) -> int:
        return self.table.window

    def refs(self) -> set[str]:
        return self.table.refs()

    def restrict(self, letter: str) -> LeveledW:
        return LeveledW((), self.table)


@dataclass(frozen=True)
class LeveledW:
    """Explicit tables for levels ``1..L``; ``tail`` serves every deeper level."""

    levels: tuple[LevelTable, ...]
    tail: LevelTable

    kind = "leveled"

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))

    def table_at(self, k: int) -> LevelTable:
        return self.levels[k - 1] if k <= len(self.levels) else self.tail

    def lookup(self, base: OmegaWord, k: int) -> str:
        return self.table_at(k).lookup(base, k)

    @property
    def max_window(self) -> int:
        return max([t.window for t in self.levels] + [self.tail.window])

    def refs(self) -> set[str]:
        return set().union(self.tail.refs(), *(t.refs() for t in self.levels))

    def restrict(self, letter: str) -> LeveledW:
        return LeveledW(self.levels[1:], self.tail)


@dataclass(frozen=True)
class CombinedW:
    """Glues two W-functions on the cylinders ``0X^ω`` and ``1X^ω``.

    Level 1 (pairs of points in different top cylinders) is governed by
    ``level1``; deeper levels defer to the branch selected by the first base
    letter, one level down.
    """

    level1: LevelTable
    branch0: WFunction
    branch1: WFunction

    kind = "combined"

    def branch(self, letter: str) -> WFunction:
        return self.branch0 if letter == "0" else self.branch1

    def lookup(self, base: OmegaWord, k: int) -> str:
        if k == 1:
            return self.level1.lookup(base, 1)
        return self.branch(base.letter(1)).lookup(shift(base, 1), k - 1)

    @property
    def max_window(self) -> int:
        return max(self.level1.window, self.branch0.max_window, self.branch1.max_window)

    def refs(self) -> set[str]:
        return self.level1.refs() | self.branch0.refs() | self.branch1.refs()

    def restrict(self, letter: str) -> WFunction:
        return self.branch(letter)


WFunction = Union[SelfSimilarW, LeveledW, CombinedW]


def constant_w(ref: str = "id") -> SelfSimilarW:
    return SelfSimilarW(LevelTable.constant(ref))


@dataclass(frozen=True, eq=False)
class DilatationStructure:
    """A W-function together with the machines its isometry names resolve to.

    Every referenced machine must pass :func:`check_isometry`.  The built-in
    ``id`` is always available.  Results of the coefficient-2 maps are
    memoized per instance.
    """

    name: str
    wfun: WFunction
    library: Mapping[str, Transducer] = field(default_factory=dict)

    def __post_init__(self):
        lib = {"id": library.identity()}
        lib.update(self.library)
        object.__setattr__(self, "library", lib)
        object.__setattr__(self, "_inverses", {})
        object.__setattr__(self, "_memo_fwd", {})
        object.__setattr__(self, "_memo_back", {})
        self._validate()

    def _validate(self) -> None:
        for ref in sorted(self.wfun.refs()):
            if ref not in self.library:
                raise DilatationError(f"{self.name}: isometry {ref!r} is not defined")
            report = check_isometry(self.library[ref])
            if not report.passed:
                raise DilatationError(f"{self.name}: machine {ref!r} is not an isometry: {report.witnesses}")

    @property
    def max_window(self) -> int:
        return self.wfun.max_window

    def lookup_w(self, base: OmegaWord, k: int) -> str:
        if k < 1:
            raise DilatationError("levels start at 1")
        return self.wfun.lookup(base, k)

    def isometry(self, ref: str) -> Transducer:
        return self.library[ref]

    def inverse(self, ref: str) -> Transducer:
        inv = self._inverses.get(ref)
        if inv is None:
            inv = self._inverses[ref] = invert(self.library[ref])
        return inv

    def dilate2(self, base: OmegaWord, y: OmegaWord) -> OmegaWord:
        key = (base, y)
        out = self._memo_fwd.get(key)
        if out is None:
            if len(self._memo_fwd) > MEMO_LIMIT:
                self._memo_fwd.clear()
            out = self._memo_fwd[key] = self._dilate2(base, y)
        return out

    def undilate1(self, base: OmegaWord, z: OmegaWord) -> OmegaWord:
        key = (base, z)
        out = self._memo_back.get(key)
        if out is None:
            if len(self._memo_back) > MEMO_LIMIT:
                self._memo_back.clear()
            out = self._memo_back[key] = self._undilate1(base, z)
        return out

    def _dilate2(self, base: OmegaWord, y: OmegaWord) -> OmegaWord:
        i = first_difference(base, y)
        if i is None:
            return base
        lead = base.expand(i + 1)
        iso = self.isometry(self.lookup_w(base, i))
        return concat(lead[:i] + negate(lead[i]), apply(iso, shift(y, i)))

    def _undilate1(self, base: OmegaWord, z: OmegaWord) -> OmegaWord:
        i = first_difference(base, z)
        if i is None:
            return base
        if i == 1:
            raise OutOfDomain(f"{z} is outside [{base}]_1 X^ω")
        lead = base.expand(i - 1)
        iso = self.inverse(self.lookup_w(base, i - 1))
        return concat(lead[:-1] + negate(lead[-1]), apply(iso, shift(z, i)))

    def dilate(self, base: OmegaWord, p: int, y: OmegaWord) -> OmegaWord:
        """Dilatation of coefficient ``2**p`` (``p >= 0``) based at ``base``."""
        if p < 0:
            raise DilatationError("use undilate for negative exponents")
        for _ in range(p):
            y = self.dilate2(base, y)
        return y

    def undilate(self, base: OmegaWord, p: int, z: OmegaWord) -> OmegaWord:
        """Dilatation of coefficient ``2**-p``; defined on ``[base]_p X^ω`` only."""
        if p < 0:
            raise DilatationError("use dilate for negative exponents")
        if prefix(z, p) != prefix(base, p):
            raise OutOfDomain(f"{z} is outside [{base}]_{p} X^ω")
        for _ in range(p):
            z = self.undilate1(base, z)
        return z


def lookup_w(d: DilatationStructure, base: OmegaWord, k: int) -> str:
    return d.lookup_w(base, k)


def dilate2(d: DilatationStructure, base: OmegaWord, y: OmegaWord) -> OmegaWord:
    return d.dilate2(base, y)


def dilate(d: DilatationStructure, base: OmegaWord, p: int, y: OmegaWord) -> OmegaWord:
    return d.dilate(base, p, y)


def undilate(d: DilatationStructure, base: OmegaWord, p: int, z: OmegaWord) -> OmegaWord:
    return d.undilate(base, p, z)


def delta_op(d: DilatationStructure, x: OmegaWord, u: OmegaWord, v: OmegaWord, p: int) -> OmegaWord:
    """Difference operator: undo the ``2**p`` dilatation at the image of ``u``."""
    return d.undilate(d.dilate(x, p, u), p, d.dilate(x, p, v))


def sigma_op(d: DilatationStructure, x: OmegaWord, u: OmegaWord, v: OmegaWord, p: int) -> OmegaWord:
    return d.undilate(x, p, d.dilate(d.dilate(x, p, u), p, v))


def inv_op(d: DilatationStructure, x: OmegaWord, u: OmegaWord, p: int) -> OmegaWord:
    return d.undilate(d.dilate(x, p, u), p, x)


OPERATORS = ("delta", "sigma", "inv")


def apply_operator(d: DilatationStructure, op: str, x: OmegaWord, u: OmegaWord, v: OmegaWord, p: int) -> OmegaWord:
    if op == "delta":
        return delta_op(d, x, u, v, p)
    if op == "sigma":
        return sigma_op(d, x, u, v, p)
    if op == "inv":
        return inv_op(d, x, u, p)
    raise DilatationError(f"unknown operator {op!r}; expected one of {OPERATORS}")


@dataclass
class StabilizationReport:
    operator: str
    depth: int
    values: list[OmegaWord]
    stable_from: Optional[int]
    limit_candidate: Optional[OmegaWord]

    @property
    def stable(self) -> bool:
        return self.stable_from is not None


def stabilize(
    d: DilatationStructure,
    op: str,
    x: OmegaWord,
    u: OmegaWord,
    v: OmegaWord,
    n: int,
    P: int,
) -> StabilizationReport:
    """Evaluate ``op`` for p = 1..P and find where the depth-``n`` prefixes settle.

    ``stable_from`` is the least p whose prefix agrees with every later one.
    A run that only settles at ``p = P`` (with P > 1) is unconfirmed and
    reported as not stable.
    """
    if P < 1:
        raise DilatationError("P must be >= 1")
    values = [apply_operator(d, op, x, u, v, p) for p in range(1, P + 1)]
    last = prefix(values[-1], n)
    start = P
    while start > 1 and prefix(values[start - 2], n) == last:
        start -= 1
    if start == P and P > 1:
        return StabilizationReport(op, n, values, None, None)
    return StabilizationReport(op, n, values, start, values[-1])


def restrict(d: DilatationStructure, letter: str) -> DilatationStructure:
    """Structure induced on one top cylinder: ``W'^x_k = W^{ax}_{k+1}``."""
    return DilatationStructure(f"{d.name}|{letter}", d.wfun.restrict(letter), d.library)


def _merge_libraries(*libs: Mapping[str, Transducer]) -> dict[str, Transducer]:
    merged: dict[str, Transducer] = {}
    for lib in libs:
        for name, m in lib.items():
            if name in merged and merged[name] is not m and name != "id":
                raise DilatationError(f"isometry name {name!r} is bound to two different machines")
            merged.setdefault(name, m)
    return merged


def combine(
    d0: DilatationStructure,
    d1: DilatationStructure,
    level1: Optional[LevelTable] = None,
    name: Optional[str] = None,
) -> DilatationStructure:
    """Structure whose restrictions to ``0`` and ``1`` are ``d0`` and ``d1``.

    The restrictions leave the level-1 isometries (used between the two top
    cylinders) free; they come from ``level1``, defaulting to the identity.
    """
    level1 = level1 or LevelTable.constant("id")
    lib = _merge_libraries(d0.library, d1.library)
    return DilatationStructure(name or f"({d0.name}+{d1.name})", CombinedW(level1, d0.wfun, d1.wfun), lib)


__all__ = [
    "CombinedW",
    "DilatationError",
    "DilatationStructure",
    "LevelTable",
    "LeveledW",
    "NotInvertible",
    "OutOfDomain",
    "SelfSimilarW",
    "StabilizationReport",
    "WFunction",
    "apply_operator",
    "combine",
    "constant_w",
    "delta_op",
    "dilate",
    "dilate2",
    "inv_op",
    "lookup_w",
    "restrict",
    "sigma_op",
    "stabilize",
    "undilate",
]
