"""Generic slopes, Euler classes, and the localization integral."""

import random
from fractions import Fraction
from itertools import islice

import pytest

from gkmcalc import (
    EquivariantClass,
    LocalizationError,
    TruncatedSeries,
    build_fgl,
    character_class,
    euler_classes,
    find_generic_slope,
    integrate,
    iterate_generic_slopes,
    localize_class,
    solve_equivariant_cohomology,
)
from gkmcalc.localization import GenericSlope, pairing

import helpers


def test_slope_cp1():
    slope = find_generic_slope(helpers.cp1(), helpers.ordinary())
    assert slope.vector == (1,) and slope.mod_p_generic


def test_slope_cp2_rational():
    slope = find_generic_slope(helpers.cp2(), helpers.ordinary())
    assert slope.vector == (1, 2)
    for w in ((1, 0), (0, 1), (-1, 1)):
        assert pairing(w, slope.vector) != 0


def test_slope_cp2_mod2_falls_back():
    # no slope has all three pairings odd (l1, l2, l2 - l1 cannot all be odd),
    # so the search must fall back to an integer-generic slope
    th = helpers.morava(2, 1)
    slope = find_generic_slope(helpers.cp2(), th)
    assert slope.vector == (1, 2)
    assert not slope.mod_p_generic


def test_slope_cp2_mod3_exists():
    th = helpers.morava(3, 1)
    slope = find_generic_slope(helpers.cp2(), th)
    assert slope.mod_p_generic
    for w in ((1, 0), (0, 1), (-1, 1)):
        assert pairing(w, slope.vector) % 3 != 0


def test_localize_character_class_additivity():
    th = helpers.morava(2, 1, trunc=8)
    fgl = build_fgl(th)
    chi = character_class(fgl, (1, 1))
    slope = GenericSlope((1, 2))
    cls = EquivariantClass((chi,))
    (img,) = localize_class(fgl, cls, slope)
    assert img == fgl.n_series(3)


def test_localize_constants_unchanged():
    th = helpers.rational(trunc=6)
    fgl = build_fgl(th)
    one = TruncatedSeries.one(th, 2)
    cls = EquivariantClass((one,))
    (img,) = localize_class(fgl, cls, GenericSlope((1, 2)))
    assert img == TruncatedSeries.one(th, 1)


def test_euler_class_orders():
    th = helpers.morava(2, 1, trunc=8)
    fgl = build_fgl(th)
    g = helpers.cp2()
    slope = find_generic_slope(g, th)
    eus = euler_classes(g, fgl, slope)
    # pairings (1, 2), (-1, 1), (-2, -1): the 2-divisible ones double the order
    assert [e.order for e in eus] == [3, 2, 3]
    for e in eus:
        assert e.series.coefficient(e.order).is_unit()


def test_euler_reordering_invariance():
    rng = random.Random(89)
    th = helpers.morava(3, 1, trunc=8)
    fgl = build_fgl(th)
    pairings = [1, -1, 2, 4]
    prod = TruncatedSeries.one(th, 1)
    for t in pairings:
        prod = prod * fgl.n_series(t)
    for _ in range(4):
        rng.shuffle(pairings)
        again = TruncatedSeries.one(th, 1)
        for t in pairings:
            again = again * fgl.n_series(t)
        assert again == prod


def test_cp1_euler_integral_every_theory():
    g = helpers.cp1()
    for th in (
        helpers.ordinary(),
        helpers.mult(),
        helpers.morava(2, 1),
        helpers.morava(3, 1),
    ):
        work = th.rationalized() if th.kind == "ordinary-integral" else th
        fgl = build_fgl(work)
        cls = EquivariantClass(
            (character_class(fgl, (1,)), TruncatedSeries.zero(work, 1)), 2
        )
        report = integrate(g, th, cls)
        assert report.integral == work.one
        assert report.negative_clean


def test_cp1_degree_zero_class_sums_to_zero():
    th = helpers.ordinary()
    tq = th.rationalized()
    one = TruncatedSeries.one(tq, 1)
    report = integrate(helpers.cp1(), th, EquivariantClass((one, one), 0))
    assert report.total.is_zero()
    assert report.integral is None  # not top degree


def test_cp2_hyperplane_squared_integral():
    th = helpers.ordinary()
    tq = th.rationalized()
    fq = build_fgl(tq)
    zero = TruncatedSeries.zero(tq, 2)
    h1 = character_class(fq, (1, 0))
    h2 = character_class(fq, (0, 1))
    cls = EquivariantClass((zero, h1 * h1, h2 * h2), 4)
    report = integrate(helpers.cp2(), th, cls)
    assert report.integral == tq.scalar(Fraction(1))
    assert report.integral_is_integer
    assert report.negative_clean


def test_slope_independence():
    th = helpers.ordinary()
    tq = th.rationalized()
    fq = build_fgl(tq)
    zero = TruncatedSeries.zero(tq, 2)
    cls = EquivariantClass(
        (zero, character_class(fq, (1, 0)) ** 2, character_class(fq, (0, 1)) ** 2), 4
    )
    values = []
    for slope in islice(iterate_generic_slopes(helpers.cp2(), th), 3):
        values.append(integrate(helpers.cp2(), th, cls, slope=slope).integral)
    assert len(set(values)) == 1


def test_non_generic_slope_rejected():
    th = helpers.ordinary()
    tq = th.rationalized()
    one = TruncatedSeries.one(tq, 2)
    cls = EquivariantClass((one, one, one), 0)
    with pytest.raises(LocalizationError):
        integrate(helpers.cp2(), th, cls, slope=GenericSlope((1, 1)))


def test_precision_budget_enforced():
    th = helpers.ordinary(trunc=3)
    tq = th.rationalized()
    fq = build_fgl(tq)
    zero = TruncatedSeries.zero(tq, 2)
    cls = EquivariantClass((zero, character_class(fq, (1, 0)) ** 2, character_class(fq, (0, 1)) ** 2), 4)
    with pytest.raises(LocalizationError):
        integrate(helpers.cp2(), th, cls)


def test_top_degree_solver_basis_localizes_cleanly():
    th = helpers.morava(2, 1, trunc=8)
    g = helpers.cp2()
    sol = solve_equivariant_cohomology(g, th, 4, compare_primitive=False)
    slope = find_generic_slope(g, th)
    for cls in sol.bases[4]:
        report = integrate(g, th, cls, slope=slope)
        assert report.negative_clean
