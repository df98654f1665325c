"""Exhaustive finite-depth checkers for dilatation structures.

Every checker enumerates cylinder representatives ``q(0)`` at the requested
depth and compares exactly (canonical words, dyadic scales).  Identities at
depth ``n`` for a structure of window ``m`` involving powers up to ``pmax``
are only conclusive when the checker is run at depth ``n + m + pmax``; the
depth argument is used as given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Optional

from .automata import MachineError, Transducer, apply, check_isometry
from .dilatation import DilatationStructure, OutOfDomain, SelfSimilarW, stabilize
from .report import CheckReport, Tally
from .words import ZERO, DyadicScale, OmegaWord, concat, distance, enumerate_cylinder_reps, prefix, shift

reps = enumerate_cylinder_reps


def _scale(e: int) -> DyadicScale:
    return DyadicScale(e)


def check_A1(d: DilatationStructure, n: int) -> CheckReport:
    """Fixed points, convergence to the base, and the contraction clause of continuity.

    For ``d(x, y) = d(x, y') > d(y, y')`` the coefficient-2 images must
    satisfy ``d(δx y, δx y') <= d(y, y') / 2``.
    """
    t = Tally("A1", depth=n, pmax=n)
    xs = reps(n)
    for x in xs:
        for p in range(n + 1):
            fx = d.dilate(x, p, x)
            if fx != x:
                t.fail(x=x, p=p, lhs=fx, rhs=x)
            else:
                t.cases += 1
            bound = _scale(-p)
            for y in xs:
                got = distance(d.dilate(x, p, y), x)
                if got > bound:
                    t.fail(x=x, p=p, y=y, lhs=got, rhs=bound)
                else:
                    t.cases += 1
    half = _scale(-1)
    for x in xs:
        dx = {y: distance(x, y) for y in xs}
        images = {y: d.dilate2(x, y) for y in xs}
        for y, y2 in combinations(xs, 2):
            dyy = distance(y, y2)
            if dx[y] != dx[y2] or dx[y] <= dyy:
                continue
            got = distance(images[y], images[y2])
            want = dyy * half
            if got > want:
                t.fail(x=x, y=y, y2=y2, lhs=got, rhs=want)
            else:
                t.cases += 1
    return t.report()


def check_A2(d: DilatationStructure, n: int, pmax: int) -> CheckReport:
    t = Tally("A2", depth=n, pmax=pmax)
    xs = reps(n)
    for x in xs:
        for u in xs:
            for total in range(pmax + 1):
                lhs = d.dilate(x, total, u)
                for q in range(total + 1):
                    rhs = d.dilate(x, total - q, d.dilate(x, q, u))
                    if lhs != rhs:
                        t.fail(x=x, u=u, p=total - q, q=q, lhs=lhs, rhs=rhs)
                    else:
                        t.cases += 1
    return t.report()


def check_A3_cone(d: DilatationStructure, n: int, pmax: int) -> CheckReport:
    """Exact cone property ``d(δ u, δ v) = 2**-p d(u, v)``.

    Passing means the tangent distance at every base equals ``d`` itself
    (and is therefore nondegenerate).
    """
    t = Tally("A3", depth=n, pmax=pmax)
    xs = reps(n)
    idx = range(len(xs))
    base_d = {(a, b): distance(xs[a], xs[b]) for a, b in combinations(idx, 2)}
    for x in xs:
        for p in range(pmax + 1):
            images = [d.dilate(x, p, u) for u in xs]
            scale = _scale(-p)
            for (a, b), duv in base_d.items():
                got = distance(images[a], images[b])
                want = duv * scale
                if got != want:
                    t.fail(x=x, p=p, u=xs[a], v=xs[b], lhs=got, rhs=want)
                else:
                    t.cases += 1
    t.notes["tangent_distance"] = "equal to d" if t.failures == 0 else "differs from d"
    return t.report()


def check_A0_domains(d: DilatationStructure, n: int, pmax: int) -> CheckReport:
    """Images are exactly the cylinders ``[x]_p X^ω`` and both round trips hold."""
    t = Tally("A0", depth=n, pmax=pmax)
    xs = reps(n)
    outside = 0
    for x in xs:
        for p in range(pmax + 1):
            px = prefix(x, p)
            for y in xs:
                img = d.dilate(x, p, y)
                if prefix(img, p) != px:
                    t.fail(x=x, p=p, y=y, check="image prefix", lhs=prefix(img, p), rhs=px)
                    continue
                try:
                    back = d.undilate(x, p, img)
                except MachineError as e:
                    t.fail(x=x, p=p, y=y, check="undilate(dilate)", lhs=f"error: {e}", rhs=y)
                    continue
                if back != y:
                    t.fail(x=x, p=p, y=y, check="undilate(dilate)", lhs=back, rhs=y)
                else:
                    t.cases += 1
            for z in xs:
                if prefix(z, p) != px:
                    try:
                        d.undilate(x, p, z)
                    except OutOfDomain:
                        outside += 1
                        t.cases += 1
                    else:
                        t.fail(x=x, p=p, z=z, check="domain", lhs="defined", rhs="OutOfDomain")
                    continue
                try:
                    pre = d.undilate(x, p, z)
                except (OutOfDomain, MachineError) as e:
                    t.fail(x=x, p=p, z=z, check="surjectivity", lhs=type(e).__name__, rhs=z)
                    continue
                fwd = d.dilate(x, p, pre)
                if fwd != z:
                    t.fail(x=x, p=p, z=z, check="dilate(undilate)", lhs=fwd, rhs=z)
                else:
                    t.cases += 1
    t.notes["out_of_domain"] = outside
    return t.report()


def check_A4(d: DilatationStructure, n: int, P: int, sample_depth: Optional[int] = None) -> CheckReport:
    """Stabilization of the difference operator at prefix depth ``n`` within p <= P.

    Samples every triple of representatives at depth ``min(n, 5)`` (this
    includes the corner cases ``u = v`` and ``u = x``).
    """
    s = min(n, 5) if sample_depth is None else sample_depth
    t = Tally("A4", depth=n, P=P, sample_depth=s)
    xs = reps(s)
    onsets: dict[int, int] = {}
    for x in xs:
        for u in xs:
            for v in xs:
                r = stabilize(d, "delta", x, u, v, n, P)
                if r.stable_from is None:
                    t.fail(x=x, u=u, v=v, values=" ".join(map(str, r.values[-3:])))
                else:
                    t.cases += 1
                    onsets[r.stable_from] = onsets.get(r.stable_from, 0) + 1
    t.notes["stable_from_histogram"] = dict(sorted(onsets.items()))
    return t.report()


def check_axioms(d: DilatationStructure, n: int, pmax: int, P: Optional[int] = None) -> list[CheckReport]:
    P = n + d.max_window + 1 if P is None else P
    return [
        check_A0_domains(d, n, pmax),
        check_A1(d, n),
        check_A2(d, n, pmax),
        check_A3_cone(d, n, pmax),
        check_A4(d, n, P),
    ]


@lru_cache(maxsize=64)
def _image_table(d: DilatationStructure, n: int) -> dict[str, tuple[OmegaWord, ...]]:
    ys = reps(n)
    return {ref: tuple(apply(d.isometry(ref), y) for y in ys) for ref in sorted(d.library)}


@lru_cache(maxsize=4096)
def _max_gap(d: DilatationStructure, n: int, a: str, b: str) -> DyadicScale:
    """max over depth-n representatives y of d(W_a(y), W_b(y))."""
    if a == b:
        return ZERO
    table = _image_table(d, n)
    return max(distance(s, t) for s, t in zip(table[a], table[b]))


@dataclass
class SmoothnessReport:
    """Smoothness of a W-function at tolerance ``eps``.

    ``worst[c][k]`` is the largest ``2**-k d(W^x_k(y), W^x'_k(y))`` over pairs
    with ``d(x, x') = 2**-c`` and admissible ``k`` (``d(x, x') < 2**-k``).
    ``empirical_mu`` uses the strict reading (every admissible k);
    ``empirical_mu_lenient`` only needs some admissible k.
    """

    eps: DyadicScale
    depth: int
    window: int
    empirical_mu: Optional[DyadicScale]
    empirical_mu_lenient: Optional[DyadicScale]
    worst: dict[int, dict[int, DyadicScale]] = field(default_factory=dict)

    @property
    def window_bound(self) -> DyadicScale:
        return self.eps * DyadicScale(-self.window)

    @property
    def passed(self) -> bool:
        return self.empirical_mu is not None and self.empirical_mu >= self.window_bound


@lru_cache(maxsize=64)
def _smoothness_table(d: DilatationStructure, n: int):
    xs = reps(n)
    refs = [[d.lookup_w(x, k) for k in range(1, n + 1)] for x in xs]
    worst: dict[int, dict[int, DyadicScale]] = {}
    lenient: dict[int, DyadicScale] = {}
    for a, b in combinations(range(len(xs)), 2):
        dxx = distance(xs[a], xs[b])
        c = -dxx.exponent
        # admissible k: d(x, x') < 2**-k, i.e. k < c
        ks = range(1, min(n, c - 1) + 1)
        if not ks:
            continue
        row = worst.setdefault(c, {})
        best = None
        for k in ks:
            val = _max_gap(d, n, refs[a][k - 1], refs[b][k - 1]) * DyadicScale(-k)
            if k not in row or val > row[k]:
                row[k] = val
            if best is None or val < best:
                best = val
        if c not in lenient or best > lenient[c]:
            lenient[c] = best
    return worst, lenient


def check_smooth(d: DilatationStructure, eps: DyadicScale, n: int) -> SmoothnessReport:
    worst, lenient = _smoothness_table(d, n)
    strict_ok = {c: max(row.values()) <= eps for c, row in worst.items()}
    lenient_ok = {c: v <= eps for c, v in lenient.items()}

    def mu(ok: dict[int, bool]) -> Optional[DyadicScale]:
        # largest 2**-t such that every class c >= t is fine
        for t in range(0, n + 1):
            if all(good for c, good in ok.items() if c >= t):
                return DyadicScale(-t)
        return None

    return SmoothnessReport(
        eps=eps,
        depth=n,
        window=d.max_window,
        empirical_mu=mu(strict_ok),
        empirical_mu_lenient=mu(lenient_ok),
        worst={c: dict(sorted(row.items())) for c, row in sorted(worst.items())},
    )


def _same_map(d: DilatationStructure, n: int, a: str, b: str) -> bool:
    return a == b or _max_gap(d, n, a, b) == ZERO


def check_selfsimilar(d: DilatationStructure, n: int) -> CheckReport:
    """Prepending a letter commutes with the coefficient-2 dilatations.

    For W-functions that are not self-similar by construction, the level
    consistency ``W^{qx}_{|q|+1} = W^x_1`` is also compared extensionally.
    """
    t = Tally("selfsimilar", depth=n)
    xs = reps(n)
    for a in "01":
        for x in xs:
            ax = concat(a, x)
            for y in xs:
                lhs = d.dilate2(ax, concat(a, y))
                rhs = concat(a, d.dilate2(x, y))
                if lhs != rhs:
                    t.fail(letter=a, x=x, y=y, lhs=lhs, rhs=rhs)
                else:
                    t.cases += 1
    if not isinstance(d.wfun, SelfSimilarW):
        for x in xs:
            for k in range(2, n + 1):
                deep = d.lookup_w(x, k)
                top = d.lookup_w(shift(x, k - 1), 1)
                if not _same_map(d, n, deep, top):
                    t.fail(x=x, level=k, lhs=deep, rhs=top)
                else:
                    t.cases += 1
    return t.report()


def check_lipschitz(d: DilatationStructure, n: int) -> CheckReport:
    """Least constant C with ``d(W^x(y), W^x'(y)) <= C d(x, x')`` at depth n."""
    if not isinstance(d.wfun, SelfSimilarW):
        raise ValueError(f"{d.name}: Lipschitz bound applies to self-similar W-functions only")
    t = Tally("lipschitz", depth=n)
    xs = reps(n)
    refs = [d.lookup_w(x, 1) for x in xs]
    best = ZERO
    arg = None
    for a, b in combinations(range(len(xs)), 2):
        ratio = _max_gap(d, n, refs[a], refs[b]) / distance(xs[a], xs[b])
        t.cases += 1
        if ratio > best:
            best, arg = ratio, (xs[a], xs[b])
    bound = DyadicScale(d.max_window)
    t.notes["C"] = str(best)
    t.notes["bound"] = str(bound)
    if arg is not None:
        t.notes["argmax"] = f"{arg[0]} {arg[1]}"
    if best > bound:
        t.fail(x=arg[0], x2=arg[1], lhs=best, rhs=bound)
    rep = t.report()
    rep.notes["C_scale"] = best
    return rep


def check_linear_map(
    d: DilatationStructure, f: Callable[[OmegaWord], OmegaWord], n: int, name: str = "linear"
) -> CheckReport:
    """``f(δ^x_2 y) = δ^{f x}_2 f(y)`` for all representatives x, y."""
    t = Tally(name, depth=n)
    xs = reps(n)
    fx = [f(x) for x in xs]
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            lhs = f(d.dilate2(x, y))
            rhs = d.dilate2(fx[i], fx[j])
            if lhs != rhs:
                t.fail(x=x, y=y, lhs=lhs, rhs=rhs)
            else:
                t.cases += 1
    return t.report()


def check_linear(d: DilatationStructure, m: Transducer, n: int) -> CheckReport:
    iso = check_isometry(m)
    if not iso.passed:
        raise ValueError(f"{m.name} is not an isometry: {iso.witnesses}")
    rep = check_linear_map(d, lambda w: apply(m, w), n)
    rep.params["machine"] = m.name
    return rep


def check_prepend_linearity(d: DilatationStructure, n: int) -> CheckReport:
    """Linearity of the two prepend maps ``w -> 0w`` and ``w -> 1w``."""
    reports = [check_linear_map(d, lambda w, a=a: concat(a, w), n, f"prepend {a}") for a in "01"]
    merged = CheckReport("prepend-linear", all(r.passed for r in reports), params={"depth": n})
    for r in reports:
        merged.cases += r.cases
        merged.witnesses.extend({"map": r.name, **w} for w in r.witnesses)
    return merged


def check_isometry_distances(m: Transducer, n: int) -> CheckReport:
    """Distance preservation of ``m`` on all pairs of depth-n representatives."""
    t = Tally("isometry-distances", depth=n, machine=m.name)
    xs = reps(n)
    images = [apply(m, x) for x in xs]
    for a, b in combinations(range(len(xs)), 2):
        lhs, rhs = distance(images[a], images[b]), distance(xs[a], xs[b])
        if lhs != rhs:
            t.fail(u=xs[a], v=xs[b], lhs=lhs, rhs=rhs)
        else:
            t.cases += 1
    return t.report()


__all__ = [
    "SmoothnessReport",
    "check_A0_domains",
    "check_A1",
    "check_A2",
    "check_A3_cone",
    "check_A4",
    "check_axioms",
    "check_isometry_distances",
    "check_linear",
    "check_linear_map",
    "check_lipschitz",
    "check_prepend_linearity",
    "check_selfsimilar",
    "check_smooth",
]
