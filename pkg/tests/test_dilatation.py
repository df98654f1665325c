import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadic_dilatations import library
from dyadic_dilatations.dilatation import (
    DilatationError,
    DilatationStructure,
    LeveledW,
    LevelTable,
    OutOfDomain,
    SelfSimilarW,
    combine,
    constant_w,
    delta_op,
    dilate,
    dilate2,
    inv_op,
    lookup_w,
    restrict,
    sigma_op,
    stabilize,
    undilate,
)
from dyadic_dilatations.words import (
    DyadicScale,
    OmegaWord,
    concat,
    distance,
    enumerate_cylinder_reps,
    prefix,
)

import oracles

W = OmegaWord.parse
REPS4 = enumerate_cylinder_reps(4)
REPS6 = enumerate_cylinder_reps(6)
NAMES = ("Did", "Dmix1", "Dmix2", "Dlev", "Dlev2")

omega = st.builds(OmegaWord, st.text("01", max_size=6), st.text("01", min_size=1, max_size=4))


@pytest.fixture(scope="module")
def flip_w():
    return DilatationStructure("Wflip", constant_w("flip"), {"flip": library.flip()})


def test_lookup_examples(structures):
    mix1 = structures["Dmix1"]
    assert lookup_w(mix1, W("1(0)"), 1) == "flip"
    assert lookup_w(mix1, W("1(0)"), 2) == "id"
    assert lookup_w(structures["Dlev"], W("(0)"), 3) == "id"
    assert lookup_w(structures["Dlev"], W("(0)"), 1) == "flip"
    with pytest.raises(DilatationError):
        lookup_w(mix1, W("(0)"), 0)


def test_lookup_window_starts_at_level(structures):
    mix2 = structures["Dmix2"]
    # letters 3 and 4 of 0010(1) are "10"
    assert lookup_w(mix2, W("0010(1)"), 3) == "flip"
    assert lookup_w(mix2, W("0010(1)"), 2) == "odo"
    lev2 = structures["Dlev2"]
    assert lookup_w(lev2, W("10(1)"), 1) == "flip"
    assert lookup_w(lev2, W("10(1)"), 2) == "flip"
    assert lookup_w(lev2, W("10(1)"), 3) == "id"


def test_dilate2_examples(structures, flip_w):
    did = structures["Did"]
    assert dilate2(did, W("(0)"), W("(1)")) == W("01(1)") == W("0(1)")
    assert dilate2(flip_w, W("(0)"), W("(1)")) == W("01(0)")
    for x in (W("(0)"), W("1(01)"), W("0110(1)")):
        assert dilate2(did, x, x) == x
    assert distance(W("(0)"), W("01(1)")).exponent == -1


def test_dilate_examples(structures):
    did = structures["Did"]
    assert dilate(did, W("(0)"), 2, W("(1)")) == W("001(1)")
    assert dilate(did, W("(0)"), 0, W("1(10)")) == W("1(10)")
    assert dilate(did, W("1(0)"), 5, W("1(0)")) == W("1(0)")
    assert distance(W("(0)"), W("001(1)")).exponent == -2


def test_undilate_examples(structures):
    did = structures["Did"]
    assert undilate(did, W("(0)"), 1, W("01(1)")) == W("(1)")
    assert undilate(did, W("(0)"), 3, W("(0)")) == W("(0)")
    with pytest.raises(OutOfDomain):
        undilate(did, W("(0)"), 1, W("1(0)"))
    with pytest.raises(OutOfDomain):
        undilate(did, W("(0)"), 2, W("01(0)"))
    with pytest.raises(DilatationError):
        dilate(did, W("(0)"), -1, W("(1)"))


@pytest.mark.parametrize("name", NAMES)
def test_dilate_matches_truncated_oracle(structures, name):
    d = structures[name]
    for x, y in itertools.product(REPS4 + [W("(01)")], REPS4 + [W("1(011)")]):
        for p in (1, 2, 3):
            got = oracles.letters(dilate(d, x, p, y), 40)
            want = oracles.dilate(d, oracles.letters(x), p, oracles.letters(y))
            assert got == want[:40]


@pytest.mark.parametrize("name", NAMES)
def test_undilate_matches_brute_force(structures, name):
    d = structures[name]
    for x, z in itertools.product(enumerate_cylinder_reps(3), enumerate_cylinder_reps(4)):
        for p in (1, 2):
            if prefix(z, p) != prefix(x, p):
                continue
            want = oracles.undilate(d, oracles.letters(x), p, oracles.letters(z))
            assert oracles.letters(undilate(d, x, p, z), len(want)) == want


def test_delta_examples(structures):
    did = structures["Did"]
    x, u, v = W("(0)"), W("1(0)"), W("(1)")
    assert dilate(did, x, 1, u) == W("01(0)")
    assert dilate(did, x, 1, v) == W("01(1)")
    assert delta_op(did, x, u, v, 1) == W("00(1)")
    for v in REPS4:
        assert delta_op(did, x, x, v, 3) == v


def test_delta_on_equal_points_is_the_dilated_point(structures):
    # The base of the outer undilatation is the image of u itself, so the
    # value is that image rather than u.
    for d in structures.values():
        for x, u in itertools.product(REPS4, REPS4):
            for p in (1, 2):
                assert delta_op(d, x, u, u, p) == dilate(d, x, p, u)


def test_sigma_examples(structures):
    did = structures["Did"]
    x, u = W("(0)"), W("1(0)")
    assert sigma_op(did, x, u, W("(0)"), 1) == W("11(0)")
    # value checked against an independent truncated computation
    inner = oracles.dilate2(did, oracles.letters(W("01(0)")), oracles.letters(W("(0)")))
    assert oracles.undilate(did, oracles.letters(x), 1, inner).startswith("11000")
    for v in REPS4:
        assert sigma_op(did, x, x, v, 2) == v
    # the image of u under its own dilatation goes back to u
    assert sigma_op(did, x, u, dilate(did, x, 1, u), 1) == u


def test_inv_examples(structures):
    did = structures["Did"]
    x = W("(0)")
    assert inv_op(did, x, W("1(0)"), 1) == W("1(0)")
    assert oracles.undilate(did, oracles.letters(W("01(0)")), 1, oracles.letters(x)).startswith("10000")
    for d in structures.values():
        assert inv_op(d, x, x, 2) == x


@pytest.mark.parametrize("name", NAMES)
def test_inv_idempotent(structures, name):
    d = structures[name]
    for x, u in itertools.product(REPS4, REPS6):
        for p in (1, 2):
            once = inv_op(d, x, u, p)
            assert inv_op(d, x, once, p) == once


def test_inv_is_not_an_involution(structures):
    did = structures["Did"]
    x, u = W("(0)"), W("000011(0)")
    assert inv_op(did, x, u, 1) == W("00001(0)")
    assert inv_op(did, x, inv_op(did, x, u, 1), 1) != u


@pytest.mark.parametrize("name", NAMES)
def test_operators_against_oracles(structures, name):
    d = structures[name]
    x = W("(0)")
    L = oracles.letters
    for u, v in itertools.product(enumerate_cylinder_reps(3), repeat=2):
        b = oracles.dilate2(d, L(x), L(u))
        c = oracles.dilate2(d, L(x), L(v))
        want = oracles.undilate(d, b, 1, c, 9)
        assert L(delta_op(d, x, u, v, 1), len(want)) == want
        s = oracles.undilate(d, L(x), 1, oracles.dilate2(d, b, L(v)), 9)
        assert L(sigma_op(d, x, u, v, 1), len(s)) == s


def test_stabilize_examples(structures):
    did, mix1 = structures["Did"], structures["Dmix1"]
    x, u, v = W("(0)"), W("1(0)"), W("(1)")
    r = stabilize(did, "delta", x, x, v, 8, 5)
    assert r.stable_from == 1 and r.limit_candidate == v
    # onset fixed by the truncated sweep below
    r = stabilize(mix1, "delta", x, u, v, 8, 6)
    assert [str(w) for w in r.values] == ["(0)", "01(0)", "01(0)", "01(0)", "01(0)", "01(0)"]
    assert r.stable and r.stable_from == 2 and r.limit_candidate == W("01(0)")
    L = oracles.letters
    for p, val in enumerate(r.values[:2], 1):
        b = oracles.dilate(mix1, L(x), p, L(u))
        c = oracles.dilate(mix1, L(x), p, L(v))
        assert L(val, 8) == oracles.undilate(mix1, b, p, c, 10)[:8]
    assert stabilize(mix1, "sigma", x, u, v, 8, 6).stable_from == 1
    assert stabilize(mix1, "inv", x, u, v, 8, 6).limit_candidate == u


def test_stabilize_report_rules(structures):
    did = structures["Did"]
    x, u = W("(0)"), W("1(0)")
    # delta(u, u) moves towards x with p, so it only settles once x and the
    # image share the first n letters
    r = stabilize(did, "delta", x, u, u, 4, 4)
    assert not r.stable and r.limit_candidate is None
    r = stabilize(did, "delta", x, u, u, 4, 6)
    assert r.stable_from == 4
    assert stabilize(did, "delta", x, u, u, 4, 1).stable_from == 1
    with pytest.raises(DilatationError):
        stabilize(did, "delta", x, u, u, 4, 0)
    with pytest.raises(DilatationError):
        stabilize(did, "plus", x, u, u, 4, 2)


@pytest.mark.parametrize("name", NAMES)
def test_restrict_defining_equality(structures, name):
    d = structures[name]
    for a in "01":
        r = restrict(d, a)
        for x, y in itertools.product(REPS6[::3], REPS6[::2]):
            assert dilate2(d, concat(a, x), concat(a, y)) == concat(a, dilate2(r, x, y))


def test_restrict_examples(structures):
    r = restrict(structures["Did"], "0")
    assert isinstance(r.wfun, LeveledW)
    assert all(r.lookup_w(x, k) == "id" for x in REPS4 for k in (1, 2, 5))
    r = restrict(structures["Dmix1"], "0")
    # level 1 of the restriction reads letter 2 of 0x, that is x's first letter
    assert r.lookup_w(W("1(0)"), 1) == "flip"
    assert r.lookup_w(W("(0)"), 1) == "id"


def test_double_restriction(structures):
    for name in NAMES:
        d = structures[name]
        rr = restrict(restrict(d, "0"), "1")
        for x in enumerate_cylinder_reps(5):
            for k in (1, 2, 3, 4):
                assert rr.lookup_w(x, k) == d.lookup_w(concat("01", x), k + 2)


def _agree(d1, d2, reps):
    return all(dilate2(d1, x, y) == dilate2(d2, x, y) for x in reps for y in reps)


@pytest.mark.parametrize("name", ("Did", "Dmix1", "Dmix2"))
def test_combine_restrictions_round_trip(structures, name):
    d = structures[name]
    level1 = d.wfun.table
    back = combine(restrict(d, "0"), restrict(d, "1"), level1)
    assert _agree(back, d, REPS6[::2])


def test_combine_examples(structures):
    did = structures["Did"]
    both = combine(did, did)
    assert _agree(both, did, REPS6)
    mix2, lev2 = structures["Dmix2"], structures["Dlev2"]
    glued = combine(mix2, lev2, LevelTable(1, {"0": "odo", "1": "flip"}))
    assert glued.lookup_w(W("(0)"), 1) == "odo"
    for a, part in (("0", mix2), ("1", lev2)):
        assert _agree(restrict(glued, a), part, REPS6[::2])
    # restrictions of restrictions see the original tables one level down
    assert _agree(restrict(restrict(glued, "1"), "0"), restrict(lev2, "0"), REPS4)


def test_combine_rejects_clashing_names():
    a = DilatationStructure("a", constant_w("t"), {"t": library.flip()})
    b = DilatationStructure("b", constant_w("t"), {"t": library.odometer()})
    with pytest.raises(DilatationError):
        combine(a, b)


def test_structure_validation():
    with pytest.raises(DilatationError):
        DilatationStructure("bad", constant_w("zero"), {"zero": library.constant_zero()})
    with pytest.raises(DilatationError):
        DilatationStructure("missing", constant_w("nope"))
    with pytest.raises(ValueError):
        LevelTable(1, {"0": "id"})
    with pytest.raises(ValueError):
        SelfSimilarW(LevelTable(2, {"0": "id", "1": "id"}))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(NAMES), omega, omega, omega, st.integers(0, 4))
def test_cone_property(structures, name, x, u, v, p):
    d = structures[name]
    a, b = dilate(d, x, p, u), dilate(d, x, p, v)
    assert distance(a, b) == distance(u, v) * DyadicScale(-p)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(NAMES), omega, omega, st.integers(0, 4), st.integers(0, 3))
def test_dilate_round_trip_and_semigroup(structures, name, x, y, p, q):
    d = structures[name]
    z = dilate(d, x, p, y)
    assert prefix(z, p) == prefix(x, p)
    assert undilate(d, x, p, z) == y
    assert dilate(d, x, p + q, y) == dilate(d, x, p, dilate(d, x, q, y))
    assert distance(x, z) == distance(x, y) * DyadicScale(-p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(NAMES), omega, st.text("01", max_size=6), omega, st.integers(1, 3))
def test_undilate_is_onto_the_cylinder(structures, name, x, tail, w, p):
    d = structures[name]
    z = concat(prefix(x, p) + tail, w)
    assert dilate(d, x, p, undilate(d, x, p, z)) == z
