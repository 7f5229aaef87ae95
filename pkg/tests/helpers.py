"""Shared builders for the test suite."""

from __future__ import annotations

import random

from gkmcalc import (
    MOD_P,
    MORAVA,
    MULTIPLICATIVE,
    ORDINARY,
    GKMEdge,
    GKMGraph,
    GradedScalar,
    TheoryConfig,
    TruncatedSeries,
    make_theory,
    rational_theory,
)
from gkmcalc.classifying import _slice_monomials


def ordinary(trunc=8):
    return make_theory(TheoryConfig(ORDINARY, trunc))


def rational(trunc=8):
    return rational_theory(trunc)


def modp(p, trunc=8):
    return make_theory(TheoryConfig(MOD_P, trunc, p=p))


def mult(trunc=8):
    return make_theory(TheoryConfig(MULTIPLICATIVE, trunc))


def morava(p, n, trunc=8):
    return make_theory(TheoryConfig(MORAVA, trunc, p=p, n=n))


def cp1(weight=(1,)):
    return GKMGraph(1, ["N", "S"], [GKMEdge(0, 1, tuple(weight))])


def cp2():
    return GKMGraph(
        2,
        ["A", "B", "C"],
        [GKMEdge(0, 1, (1, 0)), GKMEdge(0, 2, (0, 1)), GKMEdge(1, 2, (-1, 1))],
    )


def cp1xcp1():
    return GKMGraph(
        2,
        ["NN", "NS", "SN", "SS"],
        [
            GKMEdge(0, 2, (1, 0)),
            GKMEdge(1, 3, (1, 0)),
            GKMEdge(0, 1, (0, 1)),
            GKMEdge(2, 3, (0, 1)),
        ],
    )


CP1_BETTI = [(0, 1), (2, 1)]
CP2_BETTI = [(0, 1), (2, 1), (4, 1)]
CP1XCP1_BETTI = [(0, 1), (2, 2), (4, 1)]


def random_unimodular(rng: random.Random, m: int, shears: int = 5):
    """Product of elementary shears and swaps; determinant +-1."""
    mat = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for _ in range(shears):
        i, j = rng.randrange(m), rng.randrange(m)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(m):
            mat[i][k] += c * mat[j][k]
    if rng.random() < 0.5 and m > 1:
        i, j = rng.sample(range(m), 2)
        mat[i], mat[j] = mat[j], mat[i]
    return mat


def random_series(rng: random.Random, theory, nvars, maxdeg=None, terms=4):
    """A random series with small integer base coefficients.

    Over the periodic theories the output is homogeneous of a random degree,
    so that products of random series stay representable (a coefficient must
    be a single homogeneous scalar).
    """
    if theory.period_degree:
        q = 2 * rng.randrange(0, theory.trunc + 1)
        return random_homogeneous(rng, theory, nvars, q, terms=terms)
    maxdeg = theory.trunc if maxdeg is None else maxdeg
    out = TruncatedSeries.zero(theory, nvars)
    for _ in range(terms):
        alpha = tuple(rng.randrange(maxdeg + 1) for _ in range(nvars))
        if sum(alpha) > maxdeg:
            continue
        c = GradedScalar(theory, rng.randrange(-4, 5))
        out = out + TruncatedSeries(theory, nvars, {alpha: c})
    return out


def random_homogeneous(rng: random.Random, theory, nvars, q, terms=4):
    monos = _slice_monomials(theory, nvars, q)
    out = TruncatedSeries.zero(theory, nvars)
    if not monos:
        return out
    for _ in range(terms):
        alpha, vexp = rng.choice(monos)
        c = GradedScalar(theory, rng.randrange(-4, 5), vexp)
        out = out + TruncatedSeries(theory, nvars, {alpha: c})
    return out


def random_zero_constant(rng: random.Random, theory, nvars, terms=4):
    s = random_series(rng, theory, nvars, terms=terms)
    ct = s.constant_term()
    if not ct.is_zero():
        s = s - TruncatedSeries.constant(ct, nvars)
    return s


def random_curve_element(rng: random.Random, theory, nvars, terms=4):
    """Random formal-group input: degree-2 homogeneous, zero constant term
    (the shape of an Euler class, which is what formal sums are defined on)."""
    monos = [mv for mv in _slice_monomials(theory, nvars, 2) if any(mv[0])]
    out = TruncatedSeries.zero(theory, nvars)
    for _ in range(terms):
        alpha, vexp = rng.choice(monos)
        c = GradedScalar(theory, rng.randrange(-4, 5), vexp)
        out = out + TruncatedSeries(theory, nvars, {alpha: c})
    return out
