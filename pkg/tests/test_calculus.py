"""Exterior derivative, Lie/Schouten/vv-form brackets, torsion, concomitant."""

import random

import pytest

from gradcalc.calculus import (
    concomitant,
    exterior_derivative,
    fn_bracket,
    lie_bracket,
    lie_derivative,
    nijenhuis_torsion,
    nr_bracket,
    schouten_bracket,
    vf_apply,
)
from gradcalc.charts import make_chart
from gradcalc.errors import ValenceError
from gradcalc.poly import Poly
from gradcalc.sampling import (
    random_form,
    random_multivector,
    random_poly,
    random_tensor,
    random_vector_field,
    random_vv_form,
)
from gradcalc.tensor import (
    TensorField,
    compose_11,
    coordinate_one_form,
    coordinate_vector_field,
    identity_tensor,
    insert_multivector,
    scalar_field,
    tensor_product,
    wedge,
)

E2 = make_chart(["x", "y"], [0, 0])
E3 = make_chart(["x", "y", "z"], [0, 0, 0])
OPTS = dict(max_terms=2, max_degree=2)


def nonzero(make, *args):
    while True:
        t = make(*args)
        if not t.is_zero():
            return t


def rmv(rng, deg):
    return nonzero(lambda: random_multivector(rng, E3, deg, **OPTS))


def rform(rng, deg):
    if deg == 0:
        return scalar_field(E3, random_poly(rng, E3, **OPTS))
    return nonzero(lambda: random_form(rng, E3, deg, **OPTS))


def rvv(rng, deg):
    return nonzero(lambda: random_vv_form(rng, E3, deg, **OPTS))


def apply_11(n, v):
    return insert_multivector(v, n)


def test_exterior_derivative_frozen():
    x = Poly.variable(E2, 0)
    dx = coordinate_one_form(E2, "x")
    dy = coordinate_one_form(E2, "y")
    assert exterior_derivative(dy * x) == wedge(dx, dy)
    df = exterior_derivative(scalar_field(E2, x * x))
    assert df == dx * (x * 2)
    assert exterior_derivative(dx).is_zero()
    with pytest.raises(ValenceError):
        exterior_derivative(coordinate_vector_field(E2, "x"))
    flat = TensorField.from_components(E3, 0, 2, {((), (0, 1)): 1})
    with pytest.raises(ValenceError):
        exterior_derivative(flat)


def test_d_squared_zero():
    rng = random.Random(1)
    for deg in (0, 1, 2):
        for _ in range(10):
            w = rform(rng, deg)
            assert exterior_derivative(exterior_derivative(w)).is_zero()


def test_d_leibniz_on_scaled_forms():
    rng = random.Random(2)
    for deg in (1, 2):
        for _ in range(10):
            f = random_poly(rng, E3, **OPTS)
            w = rform(rng, deg)
            df = exterior_derivative(scalar_field(E3, f))
            assert exterior_derivative(w * f) == wedge(df, w) + exterior_derivative(w) * f


def test_lie_bracket_frozen():
    x, y = Poly.variable(E2, 0), Poly.variable(E2, 1)
    a = coordinate_vector_field(E2, "y") * x
    b = coordinate_vector_field(E2, "x") * y
    assert lie_bracket(a, b) == (coordinate_vector_field(E2, "x") * x
                                 - coordinate_vector_field(E2, "y") * y)
    assert lie_bracket(a, a).is_zero()
    with pytest.raises(ValenceError):
        lie_bracket(a, coordinate_one_form(E2, "x"))


def test_lie_bracket_jacobi():
    rng = random.Random(3)
    for _ in range(15):
        x = random_vector_field(rng, E3, **OPTS)
        y = random_vector_field(rng, E3, **OPTS)
        z = random_vector_field(rng, E3, **OPTS)
        total = (lie_bracket(lie_bracket(x, y), z)
                 + lie_bracket(lie_bracket(y, z), x)
                 + lie_bracket(lie_bracket(z, x), y))
        assert total.is_zero()


def test_vf_apply():
    x, y = Poly.variable(E2, 0), Poly.variable(E2, 1)
    a = coordinate_vector_field(E2, "y") * x
    assert vf_apply(a, y * y) == x * y * 2
    assert not vf_apply(a, x)
    with pytest.raises(ValenceError):
        vf_apply(coordinate_one_form(E2, "x"), x)


def test_lie_derivative_cases():
    rng = random.Random(4)
    for _ in range(10):
        x = random_vector_field(rng, E3, **OPTS)
        f = random_poly(rng, E3, **OPTS)
        assert lie_derivative(x, scalar_field(E3, f)).scalar_part() == vf_apply(x, f)
        y = random_vector_field(rng, E3, **OPTS)
        assert lie_derivative(x, y) == lie_bracket(x, y)
        s = random_tensor(rng, E3, 1, 0, **OPTS)
        t = random_tensor(rng, E3, 0, 1, **OPTS)
        assert lie_derivative(x, tensor_product(s, t)) == (
            tensor_product(lie_derivative(x, s), t)
            + tensor_product(s, lie_derivative(x, t)))


def test_lie_derivative_commutes_with_d():
    rng = random.Random(5)
    for deg in (0, 1, 2):
        for _ in range(8):
            x = random_vector_field(rng, E3, **OPTS)
            w = rform(rng, deg)
            assert lie_derivative(x, exterior_derivative(w)) == \
                exterior_derivative(lie_derivative(x, w))


def test_cartan_magic_formula():
    rng = random.Random(6)
    for deg in (1, 2):
        for _ in range(10):
            x = random_vector_field(rng, E3, **OPTS)
            w = rform(rng, deg)
            assert lie_derivative(x, w) == (
                insert_multivector(x, exterior_derivative(w))
                + exterior_derivative(insert_multivector(x, w)))


def test_lie_derivative_keeps_tags():
    rng = random.Random(7)
    w = rform(rng, 2)
    x = random_vector_field(rng, E3, **OPTS)
    assert lie_derivative(x, w).cov_sym == "antisym"


def test_schouten_graded_antisymmetry():
    rng = random.Random(8)
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            for _ in range(5):
                a, b = rmv(rng, k), rmv(rng, l)
                sign = -1 if ((k - 1) * (l - 1)) % 2 else 1
                assert (schouten_bracket(a, b) + schouten_bracket(b, a) * sign).is_zero()


def test_schouten_leibniz():
    rng = random.Random(9)
    for k in (1, 2):
        for db in (1, 2):
            for _ in range(5):
                a, b, c = rmv(rng, k), rmv(rng, db), rmv(rng, 1)
                sign = -1 if ((k - 1) * db) % 2 else 1
                assert schouten_bracket(a, wedge(b, c)) == (
                    wedge(schouten_bracket(a, b), c)
                    + wedge(b, schouten_bracket(a, c)) * sign)


def test_schouten_on_vectors_is_lie():
    rng = random.Random(10)
    for _ in range(10):
        x = random_vector_field(rng, E3, **OPTS)
        y = random_vector_field(rng, E3, **OPTS)
        assert schouten_bracket(x, y) == lie_bracket(x, y)
    with pytest.raises(ValenceError):
        schouten_bracket(x, scalar_field(E3, 1))
    with pytest.raises(ValenceError):
        schouten_bracket(x, coordinate_one_form(E3, "x"))


def test_fn_on_vectors_is_lie():
    rng = random.Random(11)
    for _ in range(10):
        x = random_vector_field(rng, E3, **OPTS)
        y = random_vector_field(rng, E3, **OPTS)
        assert fn_bracket(x, y) == lie_bracket(x, y)


def test_fn_graded_antisymmetry():
    rng = random.Random(12)
    for k in (0, 1, 2):
        for l in (0, 1, 2):
            for _ in range(4):
                a, b = rvv(rng, k), rvv(rng, l)
                sign = -1 if (k * l) % 2 else 1
                assert (fn_bracket(a, b) + fn_bracket(b, a) * sign).is_zero()


def test_torsion_is_twice_classical():
    rng = random.Random(13)
    for _ in range(6):
        n = random_tensor(rng, E3, 1, 1, **OPTS)
        x = random_vector_field(rng, E3, **OPTS)
        y = random_vector_field(rng, E3, **OPTS)
        t2 = nijenhuis_torsion(n)
        assert t2 == fn_bracket(n, n)
        paired = insert_multivector(y, insert_multivector(x, t2))
        nx, ny = apply_11(n, x), apply_11(n, y)
        classical = (lie_bracket(nx, ny)
                     - apply_11(n, lie_bracket(nx, y))
                     - apply_11(n, lie_bracket(x, ny))
                     + apply_11(n, apply_11(n, lie_bracket(x, y))))
        assert paired == classical * 2
    with pytest.raises(ValenceError):
        nijenhuis_torsion(coordinate_vector_field(E3, "x"))


def test_complex_structure_has_no_torsion():
    j = TensorField.from_components(
        E2, 1, 1, {((1,), (0,)): 1, ((0,), (1,)): -1})
    assert nijenhuis_torsion(j).is_zero()
    assert nijenhuis_torsion(identity_tensor(E3)).is_zero()


def test_nr_graded_antisymmetry():
    rng = random.Random(14)
    for k, l in ((1, 1), (1, 2), (2, 1), (2, 2), (0, 1), (1, 0)):
        for _ in range(4):
            a, b = rvv(rng, k), rvv(rng, l)
            sign = -1 if ((k - 1) * (l - 1)) % 2 else 1
            assert (nr_bracket(a, b) + nr_bracket(b, a) * sign).is_zero()
    with pytest.raises(ValenceError):
        nr_bracket(coordinate_vector_field(E3, "x"),
                   coordinate_vector_field(E3, "y"))


def test_nr_on_11_is_composition_commutator():
    rng = random.Random(15)
    for _ in range(8):
        k = random_tensor(rng, E3, 1, 1, **OPTS)
        l = random_tensor(rng, E3, 1, 1, **OPTS)
        assert nr_bracket(k, l) == compose_11(l, k) - compose_11(k, l)
    j = TensorField.from_components(
        E2, 1, 1, {((1,), (0,)): 1, ((0,), (1,)): -1})
    assert nr_bracket(j, j).is_zero()


def test_concomitant_frozen():
    lam = wedge(coordinate_vector_field(E2, "x"), coordinate_vector_field(E2, "y"))
    n = TensorField.from_components(E2, 1, 1, {((0,), (0,)): Poly.variable(E2, 1)})
    c = concomitant(lam, n)
    assert c == TensorField.from_components(E2, 2, 1, {((0, 1), (1,)): -1})
    with pytest.raises(ValenceError):
        concomitant(n, n)
    with pytest.raises(ValenceError):
        concomitant(lam, coordinate_vector_field(E2, "x"))


def test_concomitant_vanishes_on_identity():
    rng = random.Random(16)
    for _ in range(8):
        lam = rmv(rng, 2)
        assert concomitant(lam, identity_tensor(E3)).is_zero()
