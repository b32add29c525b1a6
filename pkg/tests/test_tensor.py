"""Tensor storage, symmetry tags, products, insertions, degrees, rendering."""

import random
from fractions import Fraction

import pytest

from gradcalc.charts import make_chart
from gradcalc.errors import ChartMismatchError, GradcalcError, ValenceError
from gradcalc.poly import ANY_DEGREE, Poly
from gradcalc.render import chart_to_json, poly_to_json, render_tensor, tensor_to_json
from gradcalc.sampling import random_form, random_one_form, random_vector_field
from gradcalc.tensor import (
    TensorField,
    compose_11,
    contract,
    coordinate_one_form,
    coordinate_vector_field,
    degree_of_tensor,
    identity_tensor,
    insert_form,
    insert_multivector,
    one_form,
    scalar_field,
    tagged,
    tensor_product,
    vector_field,
    wedge,
    wedge_list,
    weight_vector_field,
)


M = make_chart(["x", "y"], [1, 2], label="M")
E3 = make_chart(["x", "y", "z"], [0, 0, 0], label="E3")


def p(chart, i):
    return Poly.variable(chart, i)


def test_from_components_validates_keys():
    with pytest.raises(ValenceError):
        TensorField.from_components(M, 1, 0, {((0, 1), ()): 1})
    with pytest.raises(GradcalcError):
        TensorField.from_components(M, 1, 0, {((7,), ()): 1})
    other = Poly.variable(E3, 0)
    with pytest.raises(ChartMismatchError):
        TensorField.from_components(M, 1, 0, {((0,), ()): other})


def test_from_components_requires_canonical_keys():
    with pytest.raises(ValenceError):
        TensorField.from_components(E3, 0, 2, {((), (1, 0)): 1}, cov_sym="antisym")
    with pytest.raises(ValenceError):
        TensorField.from_components(E3, 0, 2, {((), (0, 0)): 1}, cov_sym="antisym")
    with pytest.raises(ValenceError):
        TensorField.from_components(E3, 2, 0, {((2, 0), ()): 1}, contra_sym="sym")
    # same keys are fine untagged
    t = TensorField.from_components(E3, 0, 2, {((), (1, 0)): 1})
    assert t.component((), (1, 0)) == Poly.const(E3, 1)


def test_from_components_merges_and_coerces():
    t = TensorField.from_components(
        M, 1, 0, [(((0,), ()), 2), (((0,), ()), Fraction(1, 2))])
    assert t.component((0,), ()) == Poly.const(M, Fraction(5, 2))
    z = TensorField.from_components(M, 1, 0, [(((0,), ()), 1), (((0,), ()), -1)])
    assert z.is_zero()
    assert not z


def test_low_arity_tags_collapse():
    t = TensorField(M, 1, 0, {((0,), ()): Poly.const(M, 1)}, contra_sym="antisym")
    assert t.contra_sym == "none"
    with pytest.raises(ValenceError):
        TensorField(M, 1, 0, {}, contra_sym="skew")


def test_scalar_part():
    f = scalar_field(M, 3)
    assert f.scalar_part() == Poly.const(M, 3)
    assert scalar_field(M, 0).is_zero()
    with pytest.raises(ValenceError):
        coordinate_vector_field(M, "x").scalar_part()


def test_component_resolves_symmetry():
    w = wedge(coordinate_one_form(E3, "x"), coordinate_one_form(E3, "y"))
    assert w.component((), (0, 1)) == Poly.const(E3, 1)
    assert w.component((), (1, 0)) == Poly.const(E3, -1)
    assert w.component((), (0, 0)).is_zero()
    s = tagged(TensorField.from_components(
        E3, 0, 2, {((), (0, 1)): 1, ((), (1, 0)): 1}), cov_sym="sym")
    assert s.cov_sym == "sym"
    assert s.component((), (1, 0)) == Poly.const(E3, 1)


def test_addition_across_tags():
    a = wedge(coordinate_one_form(E3, "x"), coordinate_one_form(E3, "y"))
    b = TensorField.from_components(E3, 0, 2, {((), (0, 1)): 1, ((), (1, 0)): -1})
    assert a == b
    assert (a + b).component((), (0, 1)) == Poly.const(E3, 2)
    assert (a - b).is_zero()
    assert (a + a).cov_sym == "antisym"


def test_scalar_multiplication():
    x = coordinate_vector_field(M, "x")
    assert (x * 2).component((0,), ()) == Poly.const(M, 2)
    assert (Fraction(1, 3) * x).component((0,), ()) == Poly.const(M, Fraction(1, 3))
    assert (x * p(M, 1)).component((0,), ()) == p(M, 1)
    with pytest.raises(ChartMismatchError):
        x * Poly.variable(E3, 0)
    y = coordinate_vector_field(E3, "x")
    with pytest.raises(ChartMismatchError):
        x + y
    with pytest.raises(ValenceError):
        x + coordinate_one_form(M, "x")


def test_wedge_equals_alternating_sum():
    rng = random.Random(7)
    for _ in range(20):
        a = random_one_form(rng, E3)
        b = random_one_form(rng, E3)
        lhs = wedge(a, b)
        rhs = tensor_product(a, b) - tensor_product(b, a)
        assert lhs == rhs
        assert wedge(b, a) == -lhs
    dx = coordinate_one_form(E3, "x")
    assert wedge(dx, dx).is_zero()


def test_tagged_verifies():
    j = TensorField.from_components(
        E3, 0, 2, {((), (0, 1)): 1, ((), (1, 0)): -1})
    assert tagged(j, cov_sym="antisym").cov_sym == "antisym"
    bad = TensorField.from_components(E3, 0, 2, {((), (0, 1)): 1})
    with pytest.raises(ValenceError):
        tagged(bad, cov_sym="antisym")
    diag = TensorField.from_components(E3, 0, 2, {((), (0, 0)): 1})
    with pytest.raises(ValenceError):
        tagged(diag, cov_sym="antisym")
    assert tagged(diag, cov_sym="sym").component((), (0, 0)) == Poly.const(E3, 1)


def test_tensor_product_tags_and_scalars():
    w = wedge(coordinate_one_form(E3, "x"), coordinate_one_form(E3, "y"))
    x = coordinate_vector_field(E3, "z")
    vv = tensor_product(w, x)
    assert (vv.q, vv.p) == (1, 2)
    assert vv.cov_sym == "antisym"
    assert vv.contra_sym == "none"
    # two covariant blocks merge untagged
    both = tensor_product(w, coordinate_one_form(E3, "z"))
    assert both.cov_sym == "none"
    f = scalar_field(E3, Poly.variable(E3, 0))
    assert tensor_product(f, x) == x * Poly.variable(E3, 0)
    assert tensor_product(x, f) == tensor_product(f, x)


def test_wedge_rejects_bad_operands():
    flat = TensorField.from_components(E3, 0, 2, {((), (0, 1)): 1})
    dx = coordinate_one_form(E3, "x")
    with pytest.raises(ValenceError):
        wedge(flat, dx)
    with pytest.raises(ValenceError):
        wedge(dx, coordinate_vector_field(E3, "y"))
    mixed = tensor_product(coordinate_vector_field(E3, "x"), dx)
    with pytest.raises(ValenceError):
        wedge(mixed, dx)
    with pytest.raises(ValenceError):
        wedge_list([])


def test_wedge_list_and_pairings():
    forms = [coordinate_one_form(E3, n) for n in ("x", "y", "z")]
    top = wedge_list(forms)
    assert top.components == {((), (0, 1, 2)): Poly.const(E3, 1)}
    bi = wedge(*[coordinate_vector_field(E3, n) for n in ("x", "y")])
    # unnormalized pairing of a 2-vector with a 2-form
    val = insert_multivector(bi, wedge(forms[0], forms[1]))
    assert val.scalar_part() == Poly.const(E3, 2)


def test_contract():
    assert contract(identity_tensor(E3), 0, 0).scalar_part() == Poly.const(E3, 3)
    j = TensorField.from_components(
        E3, 1, 1, {((1,), (0,)): 1, ((0,), (1,)): -1})
    assert contract(j, 0, 0).is_zero()
    x = coordinate_vector_field(M, "x")
    a = coordinate_one_form(M, "x") * p(M, 1)
    assert contract(tensor_product(x, a), 0, 0).scalar_part() == p(M, 1)
    with pytest.raises(ValenceError):
        contract(x, 0, 0)


def test_insert_multivector_leading_cov_slots():
    dx = coordinate_one_form(E3, "x")
    dy = coordinate_one_form(E3, "y")
    w = wedge(dx, dy)
    assert insert_multivector(coordinate_vector_field(E3, "x"), w) == dy
    assert insert_multivector(coordinate_vector_field(E3, "y"), w) == -dx
    f = scalar_field(E3, 2)
    assert insert_multivector(f, w) == w * 2
    with pytest.raises(ValenceError):
        insert_multivector(wedge_list(
            [coordinate_vector_field(E3, n) for n in ("x", "y", "z")]), w)
    with pytest.raises(ValenceError):
        insert_multivector(dx, w)


def test_insert_form_leading_contra_slots():
    j = TensorField.from_components(
        E3, 1, 1, {((1,), (0,)): 1, ((0,), (1,)): -1})
    dx = coordinate_one_form(E3, "x")
    dy = coordinate_one_form(E3, "y")
    assert insert_form(dy, j) == dx
    assert insert_form(dx, j) == -dy
    with pytest.raises(ValenceError):
        insert_form(coordinate_vector_field(E3, "x"), j)
    with pytest.raises(ValenceError):
        insert_form(wedge(dx, dy), j)


def test_compose_11():
    j = TensorField.from_components(
        E3, 1, 1, {((1,), (0,)): 1, ((0,), (1,)): -1})
    i = identity_tensor(E3)
    # j only acts on the x,y block, so j.j = -1 there and 0 on z
    sq = compose_11(j, j)
    assert sq.component((0,), (0,)) == Poly.const(E3, -1)
    assert sq.component((2,), (2,)).is_zero()
    assert compose_11(j, i) == j
    assert compose_11(i, j) == j
    with pytest.raises(ValenceError):
        compose_11(j, coordinate_vector_field(E3, "x"))


def test_builders():
    v = vector_field(M, {"x": 1, 1: p(M, 0)})
    assert v.component((0,), ()) == Poly.const(M, 1)
    assert v.component((1,), ()) == p(M, 0)
    a = one_form(M, {"y": Fraction(2, 3)})
    assert a.component((), (1,)) == Poly.const(M, Fraction(2, 3))
    assert coordinate_vector_field(M, "y") == coordinate_vector_field(M, 1)
    assert identity_tensor(M).component((1,), (1,)) == Poly.const(M, 1)


def test_weight_vector_field():
    w = weight_vector_field(M)
    assert w.component((0,), ()) == p(M, 0)
    assert w.component((1,), ()) == p(M, 1) * 2
    two = make_chart(["u", "v"], [(1, 0), (0, 3)])
    assert weight_vector_field(two, 1).component((1,), ()) == Poly.variable(two, 1) * 3
    assert weight_vector_field(two, 1).component((0,), ()).is_zero()
    with pytest.raises(GradcalcError):
        weight_vector_field(M, 5)


def test_degree_of_tensor():
    # deg(coef) + weights of lower indices - weights of upper indices
    t = tensor_product(coordinate_vector_field(M, "x") * p(M, 1),
                       coordinate_one_form(M, "y"))
    assert degree_of_tensor(t) == 2 + 2 - 1
    mixed = coordinate_vector_field(M, "x") + coordinate_vector_field(M, "y")
    assert degree_of_tensor(mixed) is None
    assert degree_of_tensor(TensorField.zero(M, 1, 1)) is ANY_DEGREE
    assert degree_of_tensor(weight_vector_field(M)) == 0
    with pytest.raises(GradcalcError):
        degree_of_tensor(t, component=3)


def test_degree_per_component():
    two = make_chart(["u", "v"], [(1, 0), (0, 3)])
    t = coordinate_one_form(two, "v") * Poly.variable(two, 0)
    assert degree_of_tensor(t, component=0) == 1
    assert degree_of_tensor(t, component=1) == 3


def test_render_frozen():
    x, y = p(M, 0), p(M, 1)
    v = coordinate_vector_field(M, "x") * x - coordinate_vector_field(M, "y") * y
    assert render_tensor(v) == "x*d/dx - y*d/dy"
    assert render_tensor(wedge(coordinate_one_form(E3, "x"),
                               coordinate_one_form(E3, "y"))) == "dx ^^ dy"
    t = tensor_product(coordinate_vector_field(M, "x"), coordinate_one_form(M, "y"))
    assert render_tensor(t * (x + Poly.const(M, 1))) == "(x + 1)*d/dx ox dy"
    assert render_tensor(t * -2) == "-2*d/dx ox dy"
    assert render_tensor(TensorField.zero(M, 1, 1)) == "0"
    assert render_tensor(scalar_field(M, x * x)) == "x^2"


def test_json_forms():
    doc = tensor_to_json(wedge(coordinate_one_form(E3, "x"),
                               coordinate_one_form(E3, "y")))
    assert doc["valence"] == [0, 2]
    assert doc["cov_sym"] == "antisym"
    assert doc["components"] == [{"up": [], "down": ["x", "y"], "coef": "1"}]
    assert doc["text"] == "dx ^^ dy"
    assert poly_to_json(p(M, 0)) == {"type": "poly", "text": "x"}
    cd = chart_to_json(M)
    assert cd["label"] == "M"
    assert cd["vars"][1] == {"name": "y", "weights": [2]}


def test_random_antisym_inputs_stay_tagged():
    rng = random.Random(11)
    for _ in range(15):
        w = random_form(rng, E3, 2)
        if w.is_zero():
            continue
        assert w.cov_sym == "antisym"
        assert wedge(w, coordinate_one_form(E3, "z")).cov_sym == "antisym"
        assert insert_multivector(random_vector_field(rng, E3), w).p == 1
