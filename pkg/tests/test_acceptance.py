"""Acceptance gate: one test and one printed verdict line per criterion.

All comparisons are exact.  Each test records its verdict before asserting,
so the summary at the end of the run lists every criterion.
"""

import itertools
import time

import pytest

from dyadic_dilatations import library
from dyadic_dilatations.automata import (
    agree_on_reps,
    check_isometry,
    check_nondegenerate,
    compose,
    continuity_modulus,
    invert,
    section_identity_holds,
)
from dyadic_dilatations.dilatation import stabilize
from dyadic_dilatations.verify import (
    check_A0_domains,
    check_A1,
    check_A2,
    check_A3_cone,
    check_A4,
    check_isometry_distances,
    check_lipschitz,
    check_prepend_linearity,
    check_selfsimilar,
    check_smooth,
)
from dyadic_dilatations.words import DyadicScale, OmegaWord, concat, enumerate_cylinder_reps

from acceptance_log import record
from mutants import DroppedNegation, LevelShifted, NonInvertedUndilate, mutate

CORE = ("Did", "Dmix1", "Dmix2", "Dlev")
ALL = ("Did", "Dmix1", "Dmix2", "Dwin3", "Dlev", "Dlev2")
SELFSIMILAR = ("Did", "Dmix1", "Dmix2", "Dwin3")


def _failed(reports):
    return [f"{r.params.get('structure', r.name)}: {r.witnesses[:1]}" for r in reports if not r.passed]


def test_criterion_01_cone_property(structures):
    start = time.perf_counter()
    reports = [check_A3_cone(structures[name], 6, 3) for name in CORE]
    elapsed = time.perf_counter() - start
    ok = all(reports) and elapsed < 60
    cases = sum(r.cases for r in reports)
    assert record(1, ok, f"cone property exact on {cases} cases, depth 6, p <= 3, {elapsed:.1f}s"), _failed(reports)


def test_criterion_02_images_and_round_trips(structures):
    start = time.perf_counter()
    reports = [check_A0_domains(structures[name], 6, 3) for name in CORE]
    elapsed = time.perf_counter() - start
    ok = all(reports) and elapsed < 30
    cases = sum(r.cases for r in reports)
    assert record(2, ok, f"prefix/surjectivity/round trips on {cases} cases, depth 6, p <= 3, {elapsed:.1f}s"), _failed(reports)


def test_criterion_03_semigroup_and_fixed_point(structures):
    reports = [check_A2(structures[name], 6, 3) for name in CORE]
    reports += [check_A1(structures[name], 6) for name in CORE]
    assert record(3, all(reports), f"A1 and A2 over depth-6 reps, {sum(r.cases for r in reports)} cases"), _failed(reports)


def test_criterion_04_smoothness(structures):
    bad = []
    for name in ALL:
        d = structures[name]
        for j in range(5):
            s = check_smooth(d, DyadicScale(-j), 8)
            if not (s.passed and s.empirical_mu >= DyadicScale(-(j + d.max_window))):
                bad.append((name, j, str(s.empirical_mu)))
    assert record(4, not bad, f"strict-reading mu >= 2^-(j+m) for j <= 4 at depth 8 on {len(ALL)} W-functions {bad or ''}")


def test_criterion_05_selfsimilarity(structures):
    good = [check_selfsimilar(structures[name], 8) for name in ("Dmix1", "Dmix2")]
    neg = check_selfsimilar(structures["Dlev"], 8)
    again = check_selfsimilar(structures["Dlev"], 8)
    w = neg.witnesses[0] if neg.witnesses else None
    reproduced = False
    if w is not None:
        d = structures["Dlev"]
        a, x, y = w["letter"], OmegaWord.parse(w["x"]), OmegaWord.parse(w["y"])
        reproduced = d.dilate2(concat(a, x), concat(a, y)) != concat(a, d.dilate2(x, y))
    ok = all(good) and not neg.passed and neg == again and reproduced
    assert record(5, ok, f"selfsimilar fixtures PASS at depth 8; leveled control FAILs with witness {w}")


def test_criterion_06_lipschitz(structures):
    found = {}
    ok = True
    for name in SELFSIMILAR:
        d = structures[name]
        r = check_lipschitz(d, 8)
        found[name] = r.notes["C"]
        ok &= r.passed and r.notes["C_scale"] <= DyadicScale(d.max_window)
    assert record(6, ok, f"empirical C within 2^m at depth 8: {found}")


def test_criterion_07_isometries_and_sections(machines):
    lib = dict(machines, id=library.identity())
    isos = [m for m in lib.values() if m.synchronous and check_isometry(m).passed]
    times = []
    dist_ok = True
    for m in isos:
        start = time.perf_counter()
        dist_ok &= check_isometry_distances(m, 10).passed
        times.append(time.perf_counter() - start)
    ws = enumerate_cylinder_reps(4) + [OmegaWord.parse("(1)"), OmegaWord.parse("(10)")]
    words = [""] + ["".join(t) for n in range(1, 7) for t in itertools.product("01", repeat=n)]
    sec_ok = all(section_identity_holds(lib[name], q, w) for name in ("odo", "flip") for q in words for w in ws)
    ident = library.identity()
    rt_ok = all(
        agree_on_reps(compose(m, invert(m)), ident, 8) and agree_on_reps(compose(invert(m), m), ident, 8)
        for m in isos
    )
    ok = dist_ok and max(times) < 10 and sec_ok and rt_ok
    names = sorted(m.name for m in isos)
    assert record(7, ok, f"distance kept at depth 10 by {names} (max {max(times):.1f}s); sections q <= 6; round trips at depth 8")


def test_criterion_08_async_continuity(machines):
    skip = check_nondegenerate(machines["skip"])
    flagged = not skip.passed and skip.witnesses == [{"states": "a -> a", "letters": "0"}]
    bad = {}
    for name, m in sorted(machines.items()):
        if not check_nondegenerate(m).passed:
            continue
        f = continuity_modulus(m, 12)
        monotone = all(a <= b for a, b in zip(f, f[1:]))
        if not (monotone and min(f) >= 1 and f[-1] > f[0]):
            bad[name] = f
    ok = flagged and not bad
    detail = f"skip flagged with cycle {skip.witnesses[:1]}; modulus violations {bad or 'none'}"
    assert record(8, ok, detail)


def test_criterion_09_stabilization(structures):
    did = structures["Did"]
    reps = enumerate_cylinder_reps(5)
    not_constant = 0
    onsets = {}
    for x, u, v in itertools.product(reps, repeat=3):
        r = stabilize(did, "delta", x, u, v, 8, 9)
        if len(set(r.values)) > 1 or r.stable_from != 1:
            not_constant += 1
        onsets[r.stable_from] = onsets.get(r.stable_from, 0) + 1
    mix = check_A4(structures["Dmix1"], 8, 9)
    ok = not_constant == 0 and mix.passed
    detail = (
        f"identity W: {not_constant}/{len(reps) ** 3} depth-5 triples depend on p "
        f"(stable_from histogram {dict(sorted(onsets.items(), key=str))}); "
        f"mixed window-1 W stabilizes at depth 8 within p <= 9: {mix.verdict}"
    )
    assert record(9, ok, detail)


def test_criterion_10_linearity_matches_selfsimilarity(structures):
    rows = {}
    for name in ALL:
        d = structures[name]
        rows[name] = (check_prepend_linearity(d, 6).verdict, check_selfsimilar(d, 6).verdict)
    ok = all(a == b for a, b in rows.values()) and {"PASS", "FAIL"} <= {a for a, _ in rows.values()}
    assert record(10, ok, f"prepend linearity vs self-similarity at depth 6: {rows}")


def test_criterion_11_mutants_killed(structures):
    killed = {
        "dropped negation": not check_A1(mutate(DroppedNegation, structures["Did"]), 6).passed,
        "level-shifted lookup": not check_selfsimilar(mutate(LevelShifted, structures["Dmix1"]), 6).passed,
        "non-inverted undilate": not check_A0_domains(mutate(NonInvertedUndilate, structures["Dmix2"]), 6, 3).passed,
    }
    assert record(11, all(killed.values()), f"killed at depth 6: {killed}")
