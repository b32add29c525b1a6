"""Exact polynomial kernel: ring laws, calculus, grading."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradcalc.charts import make_chart
from gradcalc.errors import ChartMismatchError, GradcalcError
from gradcalc.poly import (ANY_DEGREE, Poly, degree_matches,
                           degree_of_function, homogeneous_components,
                           mono_mul, mono_total_degree, weight_of_monomial)

M = make_chart(["x", "y", "z"], [1, 2, 0], label="M")
x, y, z = (Poly.variable(M, i) for i in range(3))


def rand_poly(rng, chart=M, terms=4, deg=3):
    entries = []
    for _ in range(rng.randint(0, terms)):
        counts = {}
        for _ in range(rng.randint(0, deg)):
            v = rng.randrange(chart.dim)
            counts[v] = counts.get(v, 0) + 1
        entries.append((tuple(sorted(counts.items())),
                        Fraction(rng.randint(-6, 6), rng.randint(1, 4))))
    return Poly.from_terms(chart, entries)


polys = st.integers(min_value=0, max_value=10 ** 9).map(
    lambda s: rand_poly(random.Random(s)))


def test_constructors():
    assert Poly.zero(M).is_zero()
    assert Poly.const(M, 0).is_zero()
    assert Poly.const(M, Fraction(2, 3)).constant_value() == Fraction(2, 3)
    assert Poly.variable(M, "y") == y
    with pytest.raises(GradcalcError):
        Poly.variable(M, 7)


def test_from_terms_merges_and_drops_zeros():
    p = Poly.from_terms(M, [(((0, 1),), 2), (((0, 1),), -2), ((), 5)])
    assert p == Poly.const(M, 5)
    assert () in p.terms and len(p.terms) == 1


def test_mono_helpers():
    m = mono_mul(((0, 1), (2, 2)), ((0, 2),))
    assert m == ((0, 3), (2, 2))
    assert mono_total_degree(m) == 5
    assert weight_of_monomial(((0, 1), (1, 1)), M) == 3
    assert weight_of_monomial((), M) == 0


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(M)
    assert a + Poly.zero(M) == a
    assert a * Poly.const(M, 1) == a


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_diff_is_a_derivation(a, b):
    for v in range(M.dim):
        assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


def test_diff_by_name_and_constants():
    p = x ** 2 * y + z
    assert p.diff("x") == x * y * 2
    assert p.diff("z") == Poly.const(M, 1)
    assert Poly.const(M, 3).diff(0).is_zero()


def test_power():
    assert (x + y) ** 2 == x ** 2 + x * y * 2 + y ** 2
    assert (x + y) ** 0 == Poly.const(M, 1)
    with pytest.raises(GradcalcError):
        (x + y) ** -1


def test_evaluate():
    p = x ** 2 * y - z + Poly.const(M, Fraction(1, 2))
    pt = {0: Fraction(2), 1: Fraction(-1), 2: Fraction(1, 3)}
    assert p.evaluate(pt) == Fraction(4) * -1 - Fraction(1, 3) + Fraction(1, 2)
    with pytest.raises(GradcalcError):
        p.evaluate({0: Fraction(1)})


def test_substitute_composes():
    # p(x -> x + y) evaluated equals p evaluated at shifted point
    p = x ** 2 - y * z
    q = p.substitute({0: x + y, 1: y, 2: z})
    pt = {0: Fraction(1), 1: Fraction(2), 2: Fraction(3)}
    shifted = dict(pt)
    shifted[0] = pt[0] + pt[1]
    assert q.evaluate(pt) == p.evaluate(shifted)


def test_substitute_requires_all_used_variables():
    with pytest.raises(GradcalcError):
        (x * y).substitute({0: x})


def test_substitute_to_other_chart():
    n = make_chart(["u", "v"], [0, 0], label="N")
    u, v = Poly.variable(n, 0), Poly.variable(n, 1)
    p = x * y + z
    q = p.substitute({0: u, 1: v, 2: u * v}, target=n)
    assert q == u * v + u * v
    with pytest.raises(ChartMismatchError):
        (x * y).substitute({0: u, 1: y})


def test_reindex_by_name():
    n = make_chart(["z", "x", "y"], [0, 1, 2], label="N")
    p = x * y - z
    q = p.reindex(n)
    xn, yn = Poly.variable(n, "x"), Poly.variable(n, "y")
    zn = Poly.variable(n, "z")
    assert q == xn * yn - zn
    missing = make_chart(["x"], [1], label="X")
    with pytest.raises(GradcalcError):
        p.reindex(missing)


def test_degree_of_function():
    # weights: x -> 1, y -> 2, z -> 0
    assert degree_of_function(x * y) == 3
    assert degree_of_function(x ** 2 + y) == 2
    assert degree_of_function(x + y) is None
    assert degree_of_function(Poly.zero(M)) is ANY_DEGREE
    assert degree_of_function(z) == 0
    assert degree_matches(ANY_DEGREE, 17)
    assert degree_matches(3, 3) and not degree_matches(3, 2)
    assert not degree_matches(None, 0)


def test_homogeneous_components_sum_back():
    rng = random.Random(7)
    for _ in range(20):
        p = rand_poly(rng)
        parts = homogeneous_components(p)
        total = Poly.zero(M)
        for d, part in parts.items():
            assert degree_of_function(part) == d
            total = total + part
        assert total == p


def test_sorted_terms_is_stable_display_order():
    p = x + x ** 2 + y
    monos = [m for m, _ in p.sorted_terms()]
    assert monos[0] == ((0, 2),) or monos[0] == ((1, 1),)
    # same polynomial, same order
    assert monos == [m for m, _ in (x ** 2 + y + x).sorted_terms()]


def test_chart_mismatch_rejected():
    n = make_chart(["u"], [0], label="N")
    with pytest.raises(ChartMismatchError):
        x + Poly.variable(n, 0)
