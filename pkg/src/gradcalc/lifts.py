"""Lifts of functions, forms, fields and connections to prolonged charts.

The order-r prolongation of a chart replaces each variable x by the
family x = x_0, x_1, ..., x_r.  The lambda-lift of a function f is the
coefficient extraction

    f^(lambda) = coefficient of t^lambda in f(sum_mu t^mu x_mu),

a polynomial on the prolonged chart; lambda outside 0..r gives zero, and
r = 0 lifts are the identity.  Lifts of tensors are generated from the
function lift and the basis rules

    (dx)^(lambda)   = dx_lambda,
    (d/dx)^(lambda) = d/d(x_{r-lambda}),

extended to arbitrary tensor products by distributing lambda over the
factors (coefficient included) and to wedge products by the same rule.
These choices make the top lift X^(r) of a vector field the complete
(flow) lift and X^(0) the vertical lift.

All lift operations take a LiftContext so repeated lifts share one
prolonged chart object (charts compare by identity).
"""

from __future__ import annotations

from itertools import product as _cartesian
from typing import Mapping

from .charts import Chart, prolong_chart, tangent_chart, vb_split
from .errors import ChartMismatchError, GradcalcError, ValenceError
from .poly import Poly
from .tensor import TensorField, _acc, _from_expanded, weight_vector_field

__all__ = [
    "LiftContext", "lift_function", "lift_function_jets",
    "lift_vector_field", "lift_one_form", "lift_tensor",
    "lift_weight_vector_field", "lift_distribution",
    "LinearConnection", "linear_connection", "tangent_connection",
    "lift_linear_connection", "horizontal_fields", "covariant_derivative",
]


class LiftContext:
    """Prolongation bookkeeping: base chart, order r, prolonged chart.

    The deformation parameter t lives in a private scratch chart (the
    prolonged variables plus one weight-zero variable); it never appears
    in results.
    """

    __slots__ = ("base", "r", "total", "_scratch", "_t", "_images")

    def __init__(self, base: Chart, r: int):
        if r < 0:
            raise GradcalcError("prolongation order must be >= 0")
        self.base = base
        self.r = r
        self.total = prolong_chart(base, r)
        names = self.total.names + ("_t",)
        if "_t" in base.names:
            raise GradcalcError("variable name _t is reserved for the lift parameter")
        weights = self.total.weights + ((0,) * self.total.grading_count,)
        self._scratch = Chart(names, weights, self.total.n_graded, "scratch")
        self._t = self.total.dim
        images = {}
        for i in range(base.dim):
            acc = Poly.zero(self._scratch)
            for mu in range(r + 1):
                xm = Poly.variable(self._scratch, self.var(i, mu))
                tm = Poly.variable(self._scratch, self._t) ** mu
                acc = acc + xm * tm
            images[i] = acc
        self._images = images

    def var(self, i: int, mu: int) -> int:
        """Prolonged-chart index of level mu of base variable i."""
        if not 0 <= mu <= self.r:
            raise GradcalcError(f"level {mu} outside 0..{self.r}")
        return mu * self.base.dim + i

    def __repr__(self) -> str:
        return f"<LiftContext r={self.r} of {self.base!r}>"


def lift_function_jets(f: Poly, ctx: LiftContext) -> list:
    """All lifts f^(0), ..., f^(r) in one substitution pass."""
    if f.chart is not ctx.base:
        raise ChartMismatchError("function does not live on the context's base chart")
    g = f.substitute(ctx._images, target=ctx._scratch)
    buckets: list = [dict() for _ in range(ctx.r + 1)]
    t = ctx._t
    for mono, coef in g.terms.items():
        k = 0
        rest = mono
        for pos, (v, e) in enumerate(mono):
            if v == t:
                k = e
                rest = mono[:pos] + mono[pos + 1:]
                break
        if k <= ctx.r:
            buckets[k][rest] = coef
    return [Poly(ctx.total, b) for b in buckets]


def lift_function(f: Poly, lam: int, ctx: LiftContext) -> Poly:
    """The lambda-lift of a function; zero outside 0 <= lambda <= r."""
    if lam < 0 or lam > ctx.r:
        return Poly.zero(ctx.total)
    return lift_function_jets(f, ctx)[lam]


def lift_tensor(t: TensorField, lam: int, ctx: LiftContext) -> TensorField:
    """The lambda-lift of an arbitrary (q, p) tensor field.

    Distributes lambda over the coefficient and every basis factor of each
    stored component; symmetry tags survive.  Zero outside 0..r.
    """
    if t.chart is not ctx.base:
        raise ChartMismatchError("tensor does not live on the context's base chart")
    r = ctx.r
    if lam < 0 or lam > r:
        return TensorField.zero(ctx.total, t.q, t.p, t.contra_sym, t.cov_sym)
    out: dict = {}
    levels = range(r + 1)
    for (up, down), coef in t.expand().items():
        jets = lift_function_jets(coef, ctx)
        slots = len(up) + len(down)
        if slots == 0:
            _acc(out, ((), ()), jets[lam])
            continue
        for assign in _cartesian(levels, repeat=slots):
            s = sum(assign)
            mu0 = lam - s
            if mu0 < 0 or mu0 > r:
                continue
            c = jets[mu0]
            if not c:
                continue
            nu = assign[:len(up)]
            kappa = assign[len(up):]
            nup = tuple(ctx.var(i, r - v) for i, v in zip(up, nu))
            ndown = tuple(ctx.var(j, k) for j, k in zip(down, kappa))
            _acc(out, (nup, ndown), c)
    return _from_expanded(ctx.total, t.q, t.p, out, t.contra_sym, t.cov_sym)


def lift_vector_field(x: TensorField, lam: int, ctx: LiftContext) -> TensorField:
    if (x.q, x.p) != (1, 0):
        raise ValenceError("expected a vector field")
    return lift_tensor(x, lam, ctx)


def lift_one_form(w: TensorField, lam: int, ctx: LiftContext) -> TensorField:
    if (w.q, w.p) != (0, 1):
        raise ValenceError("expected a one-form")
    return lift_tensor(w, lam, ctx)


def lift_weight_vector_field(ctx: LiftContext, component: int = 0) -> TensorField:
    """Lift of the base weight field: sum over levels of w_i x^i_mu d/dx^i_mu.

    Equals the top lift (lambda = r) of the base weight vector field and
    is the weight field of the inherited grading on the prolonged chart.
    """
    base = ctx.base
    if not 0 <= component < base.grading_count:
        raise GradcalcError("no such grading component")
    comps = {}
    for i in range(base.dim):
        w = base.weights[i][component]
        if not w:
            continue
        for mu in range(ctx.r + 1):
            v = ctx.var(i, mu)
            comps[((v,), ())] = Poly.variable(ctx.total, v) * w
    return TensorField(ctx.total, 1, 0, comps)


def lift_distribution(d, ctx: LiftContext):
    """All lifts of every generator: spans the prolonged distribution."""
    from .checkers import Distribution
    if d.chart is not ctx.base:
        raise ChartMismatchError("distribution does not live on the context's base chart")
    gens = []
    for x in d.generators:
        for nu in range(ctx.r + 1):
            gens.append(lift_vector_field(x, nu, ctx))
    return Distribution(ctx.total, tuple(gens))


# -- linear connections -------------------------------------------------------

class LinearConnection:
    """Linear connection on a vector-bundle chart.

    gamma maps (base var k, fibre var A, fibre var B) to the Christoffel
    symbol G^A_{kB}, a polynomial on the total chart in base variables
    only.  Horizontal lifts are X_k = d/dx^k - G^A_{kB} y^B d/dy^A.
    """

    __slots__ = ("chart", "vb_component", "gamma", "base", "fibre")

    def __init__(self, chart: Chart, vb_component: int, gamma: Mapping):
        self.chart = chart
        self.vb_component = vb_component
        self.base, self.fibre = vb_split(chart, vb_component)
        base_set, fibre_set = set(self.base), set(self.fibre)
        table = {}
        for (k, a, b), g in gamma.items():
            if k not in base_set:
                raise GradcalcError(f"Christoffel base index {chart.names[k]} is not a base variable")
            if a not in fibre_set or b not in fibre_set:
                raise GradcalcError("Christoffel fibre index is not a fibre variable")
            if not isinstance(g, Poly):
                g = Poly.const(chart, g)
            elif g.chart is not chart:
                raise ChartMismatchError("Christoffel symbol lives on the wrong chart")
            if g.variables_used() - base_set:
                raise GradcalcError("Christoffel symbols must depend on base variables only")
            if g:
                table[(k, a, b)] = g
        self.gamma = table

    def __repr__(self) -> str:
        return f"<LinearConnection on {self.chart!r} with {len(self.gamma)} symbols>"


def linear_connection(chart: Chart, vb_component: int, gamma: Mapping) -> LinearConnection:
    return LinearConnection(chart, vb_component, gamma)


def tangent_connection(base_chart: Chart, gamma: Mapping) -> LinearConnection:
    """Affine connection on a chart, stored on its tangent chart.

    gamma maps (k, j, l) base-variable index triples to G^j_{kl}, read as
    nabla_{d/dk} d/dl = G^j_{kl} d/dj.
    """
    total = tangent_chart(base_chart)
    n = base_chart.dim
    table = {}
    for (k, j, l), g in gamma.items():
        if isinstance(g, Poly):
            if g.chart is not base_chart:
                raise ChartMismatchError("Christoffel symbol lives on the wrong chart")
            g = g.reindex(total)
        table[(k, n + j, n + l)] = g
    return LinearConnection(total, base_chart.grading_count, table)


def horizontal_fields(conn: LinearConnection) -> list:
    """One horizontal field per base variable, in chart order."""
    chart = conn.chart
    out = []
    for k in conn.base:
        comps = {((k,), ()): Poly.const(chart, 1)}
        for (k2, a, b), g in conn.gamma.items():
            if k2 != k:
                continue
            yb = Poly.variable(chart, b)
            _acc(comps, ((a,), ()), -(g * yb))
        out.append(TensorField(chart, 1, 0, comps))
    return out


def lift_linear_connection(conn: LinearConnection, ctx: LiftContext) -> LinearConnection:
    """Prolong a linear connection.

    The lifted symbol attached to base level a, fibre target level rho and
    fibre source level nu is the (rho - a - nu)-lift of the original
    symbol (zero when that exponent leaves 0..r).
    """
    if conn.chart is not ctx.base:
        raise ChartMismatchError("connection does not live on the context's base chart")
    r = ctx.r
    lifted = {}
    for (k, a, b), g in conn.gamma.items():
        jets = lift_function_jets(g, ctx)
        for lev_k in range(r + 1):
            for lev_b in range(r + 1):
                for rho in range(r + 1):
                    e = rho - lev_k - lev_b
                    if e < 0 or e > r:
                        continue
                    je = jets[e]
                    if not je:
                        continue
                    key = (ctx.var(k, lev_k), ctx.var(a, rho), ctx.var(b, lev_b))
                    prev = lifted.get(key)
                    lifted[key] = je if prev is None else prev + je
    return LinearConnection(ctx.total, conn.vb_component, lifted)


def covariant_derivative(conn: LinearConnection, x: TensorField, y: TensorField) -> TensorField:
    """nabla_X Y for an affine connection (fibre identified with base).

    X and Y are vector fields on a chart containing the connection's base
    variables by name; the result lives on that chart.
    """
    if len(conn.fibre) != len(conn.base):
        raise GradcalcError("connection bundle is not a tangent bundle")
    if x.chart is not y.chart:
        raise ChartMismatchError("vector fields live on different charts")
    if (x.q, x.p) != (1, 0) or (y.q, y.p) != (1, 0):
        raise ValenceError("covariant_derivative needs two vector fields")
    chart = x.chart
    names = conn.chart.names
    pos = {b: chart.index(names[b]) for b in conn.base}
    allowed = set(pos.values())
    for t in (x, y):
        for ((i,), _) in t.components:
            if i not in allowed:
                raise GradcalcError(
                    f"vector field has a component along {chart.names[i]}, "
                    "outside the connection's base directions")
    fibre_partner = {f: pos[conn.base[m]] for m, f in enumerate(conn.fibre)}
    out: dict = {}
    for ((a,), _), g in y.components.items():
        for ((j,), _), xj in x.components.items():
            d = g.diff(j)
            if d:
                _acc(out, ((a,), ()), xj * d)
    for (k, a, b), g in conn.gamma.items():
        xk = x.component((pos[k],), ())
        if not xk:
            continue
        yb = y.component((fibre_partner[b],), ())
        if not yb:
            continue
        _acc(out, ((fibre_partner[a],), ()), g.reindex(chart) * xk * yb)
    return TensorField(chart, 1, 0, out)
