"""Differential operators and classical brackets.

Everything here is computed componentwise in one chart with exact
rational coefficients.  The multi-term brackets (Schouten, vector-valued
forms) are evaluated by decomposing stored components into coordinate
decomposables -- coefficient times wedge/tensor products of coordinate
basis fields -- and applying the defining two-argument formulas, so each
bracket is an independent code path and not a reduction to another one.

Sign conventions:

* d(f dx^I) = df ^^ dx^I with the unnormalized wedge;
* [X, Y] = X(Y^k) d/dk - Y(X^k) d/dk;
* Schouten bracket of decomposables X_1^^..^^X_k and Y_1^^..^^Y_l is
  sum_{i,j} (-1)^(i+j) [X_i,Y_j] ^^ X_1..(no i)..X_k ^^ Y_1..(no j)..Y_l;
* the bracket of vector-valued forms mu ox X and nu ox Y (form degrees
  k and l) is
    mu^^nu ox [X,Y] + mu^^L_X(nu) ox Y - L_Y(mu)^^nu ox X
      + (-1)^k (d(mu)^^i_X(nu) ox Y + i_Y(mu)^^d(nu) ox X);
* the algebraic bracket of the same data is
    mu^^i_X(nu) ox Y + (-1)^k i_Y(mu)^^nu ox X.
"""

from __future__ import annotations

from .errors import ChartMismatchError, ValenceError
from .poly import Poly
from .tensor import (
    TensorField, _acc, _from_expanded, coordinate_vector_field,
    insert_multivector, tensor_product, wedge, wedge_list,
)

__all__ = [
    "exterior_derivative", "lie_bracket", "lie_derivative",
    "schouten_bracket", "fn_bracket", "nr_bracket",
    "nijenhuis_torsion", "concomitant",
]


def _require_form(w: TensorField) -> None:
    if w.q != 0:
        raise ValenceError("expected a differential form (purely covariant)")
    if w.p >= 2 and w.cov_sym != "antisym":
        raise ValenceError("forms of degree >= 2 must be antisym-tagged")


def _require_multivector(a: TensorField) -> None:
    if a.p != 0:
        raise ValenceError("expected a multivector field (purely contravariant)")
    if a.q >= 2 and a.contra_sym != "antisym":
        raise ValenceError("multivectors of degree >= 2 must be antisym-tagged")


def _require_vvform(a: TensorField) -> None:
    if a.q != 1:
        raise ValenceError("expected a vector-valued form (one contravariant slot)")
    if a.p >= 2 and a.cov_sym != "antisym":
        raise ValenceError("vector-valued forms of degree >= 2 must be antisym-tagged")


def exterior_derivative(w: TensorField) -> TensorField:
    """Exterior derivative of a (0, p) antisymmetric form."""
    _require_form(w)
    chart = w.chart
    out: dict = {}
    for (_, down), coef in w.components.items():
        for var in sorted(coef.variables_used()):
            dcoef = coef.diff(var)
            if not dcoef:
                continue
            if var in down:
                continue
            pos = 0
            while pos < len(down) and down[pos] < var:
                pos += 1
            key = down[:pos] + (var,) + down[pos:]
            _acc(out, ((), key), dcoef if pos % 2 == 0 else -dcoef)
    return TensorField(chart, 0, w.p + 1,
                       out, cov_sym="antisym" if w.p + 1 >= 2 else "none")


def lie_bracket(x: TensorField, y: TensorField) -> TensorField:
    """Commutator of two vector fields."""
    if x.chart is not y.chart:
        raise ChartMismatchError("vector fields live on different charts")
    if (x.q, x.p) != (1, 0) or (y.q, y.p) != (1, 0):
        raise ValenceError("lie_bracket needs two vector fields")
    out: dict = {}
    for ((j,), _), xj in x.components.items():
        for ((k,), _), yk in y.components.items():
            d = yk.diff(j)
            if d:
                _acc(out, ((k,), ()), xj * d)
    for ((j,), _), yj in y.components.items():
        for ((k,), _), xk in x.components.items():
            d = xk.diff(j)
            if d:
                _acc(out, ((k,), ()), -(yj * d))
    return TensorField(x.chart, 1, 0, out)


def vf_apply(x: TensorField, f: Poly) -> Poly:
    """Directional derivative X(f)."""
    if (x.q, x.p) != (1, 0):
        raise ValenceError("expected a vector field")
    out = Poly.zero(f.chart)
    for ((j,), _), xj in x.components.items():
        d = f.diff(j)
        if d:
            out = out + xj * d
    return out


def lie_derivative(x: TensorField, t: TensorField) -> TensorField:
    """Lie derivative of an arbitrary (q, p) tensor along a vector field.

    Componentwise: X(K^I_J) minus one derivative-of-X term per
    contravariant slot plus one per covariant slot.  Symmetry tags of t
    are preserved.
    """
    if x.chart is not t.chart:
        raise ChartMismatchError("tensors live on different charts")
    if (x.q, x.p) != (1, 0):
        raise ValenceError("first argument must be a vector field")
    if t.q == 0 and t.p == 0:
        from .tensor import scalar_field
        return scalar_field(t.chart, vf_apply(x, t.scalar_part()))
    xc = {i: c for ((i,), _), c in x.components.items()}
    out: dict = {}
    for (up, down), coef in t.expand().items():
        for j, xj in xc.items():
            d = coef.diff(j)
            if d:
                _acc(out, (up, down), xj * d)
        # each derivative-of-X term lands on a key with one index replaced
        for a in range(len(up)):
            l = up[a]
            for i, xi in xc.items():
                d = xi.diff(l)
                if d:
                    nk = (up[:a] + (i,) + up[a + 1:], down)
                    _acc(out, nk, -(coef * d))
        for b in range(len(down)):
            s = down[b]
            xs = xc.get(s)
            if xs is None:
                continue
            for j in sorted(xs.variables_used()):
                d = xs.diff(j)
                if d:
                    nk = (up, down[:b] + (j,) + down[b + 1:])
                    _acc(out, nk, coef * d)
    return _from_expanded(t.chart, t.q, t.p, out, t.contra_sym, t.cov_sym)


def schouten_bracket(a: TensorField, b: TensorField) -> TensorField:
    """Schouten bracket of multivector fields (degrees k, l >= 1).

    Stored components f dx-wedge are decomposed with the coefficient
    attached to the first factor, and the decomposable formula is expanded
    through lie_bracket.  Output degree is k + l - 1.
    """
    if a.chart is not b.chart:
        raise ChartMismatchError("tensors live on different charts")
    _require_multivector(a)
    _require_multivector(b)
    k, l = a.q, b.q
    if k < 1 or l < 1:
        raise ValenceError("schouten_bracket needs multivector degrees >= 1")
    chart = a.chart
    n = k + l - 1
    result = TensorField.zero(chart, n, 0, contra_sym="antisym")
    for (ua, _), f in a.components.items():
        xs = [coordinate_vector_field(chart, i) for i in ua]
        xs[0] = xs[0] * f
        for (ub, _), g in b.components.items():
            ys = [coordinate_vector_field(chart, j) for j in ub]
            ys[0] = ys[0] * g
            for i in range(k):
                for j in range(l):
                    br = lie_bracket(xs[i], ys[j])
                    if br.is_zero():
                        continue
                    rest = xs[:i] + xs[i + 1:] + ys[:j] + ys[j + 1:]
                    term = wedge_list([br] + rest) if rest else br
                    if (i + j) % 2 == 1:
                        term = -term
                    result = result + term
    return result


def _vv_decompose(a: TensorField):
    """Split a vector-valued form into (k-form, coordinate field) pairs."""
    chart = a.chart
    for ((m,), down), coef in a.components.items():
        mu = TensorField(chart, 0, len(down), {((), down): coef},
                         cov_sym="antisym" if len(down) >= 2 else "none")
        yield mu, m


def _vv(mu: TensorField, m: int) -> TensorField:
    """form ox coordinate field m, stored with the form's antisym tag."""
    chart = mu.chart
    comps = {((m,), down): coef for (_, down), coef in mu.components.items()}
    return TensorField(chart, 1, mu.p, comps, cov_sym=mu.cov_sym)


def fn_bracket(a: TensorField, b: TensorField) -> TensorField:
    """Differential-graded bracket of vector-valued forms.

    For decomposables mu ox X (degree k) and nu ox Y (degree l) the value
    is mu^^nu ox [X,Y] + mu^^L_X(nu) ox Y - L_Y(mu)^^nu ox X
    + (-1)^k (d(mu)^^i_X(nu) ox Y + i_Y(mu)^^d(nu) ox X); on vector fields
    (k = l = 0) this is the commutator.  Output degree k + l.
    """
    if a.chart is not b.chart:
        raise ChartMismatchError("tensors live on different charts")
    _require_vvform(a)
    _require_vvform(b)
    k, l = a.p, b.p
    chart = a.chart
    sign_k = 1 if k % 2 == 0 else -1
    result = TensorField.zero(chart, 1, k + l,
                              cov_sym="antisym" if k + l >= 2 else "none")
    for mu, m in _vv_decompose(a):
        x = coordinate_vector_field(chart, m)
        dmu = exterior_derivative(mu)
        for nu, n in _vv_decompose(b):
            y = coordinate_vector_field(chart, n)
            # [x, y] = 0 for coordinate fields, so the first term drops.
            lx_nu = lie_derivative(x, nu)
            if lx_nu:
                result = result + _vv(wedge(mu, lx_nu), n)
            ly_mu = lie_derivative(y, mu)
            if ly_mu:
                result = result - _vv(wedge(ly_mu, nu), m)
            ix_nu = insert_multivector(x, nu) if l >= 1 else None
            if ix_nu is not None and ix_nu:
                t = wedge(dmu, ix_nu)
                if sign_k == -1:
                    t = -t
                result = result + _vv(t, n)
            iy_mu = insert_multivector(y, mu) if k >= 1 else None
            if iy_mu is not None and iy_mu:
                dnu = exterior_derivative(nu)
                t = wedge(iy_mu, dnu)
                if sign_k == -1:
                    t = -t
                result = result + _vv(t, m)
    return result


def nr_bracket(a: TensorField, b: TensorField) -> TensorField:
    """Algebraic bracket of vector-valued forms.

    For decomposables mu ox X (degree k) and nu ox Y (degree l) the value
    is mu^^i_X(nu) ox Y + (-1)^k i_Y(mu)^^nu ox X; insertion of a vector
    into a 0-form is zero.  Output degree k + l - 1.
    """
    if a.chart is not b.chart:
        raise ChartMismatchError("tensors live on different charts")
    _require_vvform(a)
    _require_vvform(b)
    k, l = a.p, b.p
    if k + l < 1:
        raise ValenceError("algebraic bracket of two vector fields is zero-degree; need k + l >= 1")
    chart = a.chart
    sign_k = 1 if k % 2 == 0 else -1
    result = TensorField.zero(chart, 1, k + l - 1,
                              cov_sym="antisym" if k + l - 1 >= 2 else "none")
    for mu, m in _vv_decompose(a):
        x = coordinate_vector_field(chart, m)
        for nu, n in _vv_decompose(b):
            y = coordinate_vector_field(chart, n)
            if l >= 1:
                ix_nu = insert_multivector(x, nu)
                if ix_nu:
                    result = result + _vv(wedge(mu, ix_nu), n)
            if k >= 1:
                iy_mu = insert_multivector(y, mu)
                if iy_mu:
                    t = wedge(iy_mu, nu)
                    if sign_k == -1:
                        t = -t
                    result = result + _vv(t, m)
    return result


def nijenhuis_torsion(n: TensorField) -> TensorField:
    """Torsion of a (1,1) tensor: half the defect of N from integrability,
    computed as the bracket of N with itself (a vector-valued 2-form)."""
    if (n.q, n.p) != (1, 1):
        raise ValenceError("nijenhuis_torsion needs a (1,1) tensor")
    return fn_bracket(n, n)


def concomitant(lam: TensorField, n: TensorField) -> TensorField:
    """Compatibility concomitant of a bivector and a (1,1) tensor.

    Returns the (2,1) tensor with components

      C^{ij}_s = L^{lj} d_l N^i_s + L^{il} d_l N^j_s - N^l_s d_l L^{ij}
                 + N^j_l d_s L^{il} - L^{lj} d_s N^i_l

    (sum over l; d_l is the partial derivative).  Vanishes identically
    when N is the identity.
    """
    if lam.chart is not n.chart:
        raise ChartMismatchError("tensors live on different charts")
    if (lam.q, lam.p) != (2, 0):
        raise ValenceError("first argument must be a bivector")
    if (n.q, n.p) != (1, 1):
        raise ValenceError("second argument must be a (1,1) tensor")
    chart = lam.chart
    le = lam.expand()
    ne = n.expand()
    out: dict = {}
    dim = chart.dim
    for ((l, j), _), a in le.items():
        for ((i,), (s,)), b in ne.items():
            d = b.diff(l)
            if d:
                _acc(out, ((i, j), (s,)), a * d)          # L^{lj} d_l N^i_s
    for ((i, l), _), a in le.items():
        for ((j,), (s,)), b in ne.items():
            d = b.diff(l)
            if d:
                _acc(out, ((i, j), (s,)), a * d)          # L^{il} d_l N^j_s
    for ((i, j), _), a in le.items():
        for ((l,), (s,)), b in ne.items():
            d = a.diff(l)
            if d:
                _acc(out, ((i, j), (s,)), -(b * d))       # - N^l_s d_l L^{ij}
    for ((i, l), _), a in le.items():
        for ((j,), (l2,)), b in ne.items():
            if l2 != l:
                continue
            for s in range(dim):
                d = a.diff(s)
                if d:
                    _acc(out, ((i, j), (s,)), b * d)      # N^j_l d_s L^{il}
    for ((l, j), _), a in le.items():
        for ((i,), (l2,)), b in ne.items():
            if l2 != l:
                continue
            for s in range(dim):
                d = b.diff(s)
                if d:
                    _acc(out, ((i, j), (s,)), -(a * d))   # - L^{lj} d_s N^i_l
    return TensorField(chart, 2, 1, out)
