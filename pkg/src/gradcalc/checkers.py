"""Decision procedures for weighted geometric structures.

Each checker returns a CheckReport rather than a bare bool so callers see
a witness on failure, the degrees that were computed, and whether the
verdict relied on random sampling (distribution checks evaluate exact
ranks at finitely many random rational points, so a pass is probabilistic
while a fail is definite).

A (q, p) tensor K on a chart of degree k (in the chosen grading
component) is *weighted* when L along the weight field equals
-(q-1) k K; equivalently its combined degree is -(q-1) k.  Weighted
Poisson structures of degree k are bivectors of degree -k satisfying the
Jacobi identity, weighted (1,1) structures have degree 0, and the
associated algebraic conditions (N.N = -I, I, 0; skewness of N applied
to a bivector; vanishing compatibility concomitant) are checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .calculus import (
    concomitant, exterior_derivative, lie_bracket, lie_derivative,
    nijenhuis_torsion, schouten_bracket,
)
from .charts import Chart, phase_shifted_cotangent_chart, shifted_dual_grl_chart, \
    tangent_chart, vb_split
from .errors import ChartMismatchError, GradcalcError, ValenceError
from .poly import ANY_DEGREE, Poly, degree_of_function
from .render import render_tensor
from .sampling import sample_points
from .tensor import (
    TensorField, compose_11, degree_of_tensor, identity_tensor,
    wedge, weight_vector_field,
)

__all__ = [
    "CheckReport", "Distribution", "Section", "BundleMap",
    "is_weighted_tensor", "is_poisson", "is_weighted_poisson",
    "is_nijenhuis", "is_weighted_nijenhuis",
    "is_almost_complex", "is_almost_product", "is_almost_tangent",
    "is_weighted_pn", "sharp_map", "flat_map",
    "rank_at_point", "is_involutive", "is_weighted_distribution",
    "is_weighted_contact", "section_degree", "algebroid_bracket",
    "rational_rank", "invert_rational_matrix",
]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a structure check."""

    verdict: bool
    witness: str | None = None
    degrees: dict | None = None
    probabilistic: bool = False
    seed: int | None = None

    def __post_init__(self):
        if not self.verdict and self.witness is None:
            raise GradcalcError("failing check must carry a witness")

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        out: dict = {"verdict": "pass" if self.verdict else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.degrees is not None:
            out["degrees"] = {k: repr(v) if v is ANY_DEGREE else v
                              for k, v in self.degrees.items()}
        out["probabilistic"] = self.probabilistic
        if self.seed is not None:
            out["seed"] = self.seed
        return out


@dataclass(frozen=True)
class Distribution:
    """A distribution given by a finite family of generating vector fields."""

    chart: Chart
    generators: tuple

    def __post_init__(self):
        for x in self.generators:
            if x.chart is not self.chart:
                raise ChartMismatchError("generator lives on a different chart")
            if (x.q, x.p) != (1, 0):
                raise ValenceError("generators must be vector fields")


@dataclass(frozen=True)
class Section:
    """Section of a vector-bundle chart, one component per fibre variable.

    values maps fibre variable indices to polynomials in base variables;
    missing fibre variables mean zero components.
    """

    chart: Chart
    vb_component: int
    values: dict
    graded_component: int = 0


def _deg_str(d) -> str:
    return "any" if d is ANY_DEGREE else ("inhomogeneous" if d is None else str(d))


def _first_component(t: TensorField) -> str:
    key = sorted(t.components)[0]
    names = t.chart.names
    up = ",".join(names[i] for i in key[0])
    down = ",".join(names[j] for j in key[1])
    return f"component ({up};{down}) = {t.components[key]!r}"


# -- weighted tensors ---------------------------------------------------------

def is_weighted_tensor(t: TensorField, k: int, component: int = 0) -> CheckReport:
    """Check L along the weight field equals -(q-1) k times the tensor.

    k must be the chart's actual degree in the component (precondition).
    """
    chart = t.chart
    if chart.degree(component) != k:
        raise GradcalcError(
            f"chart degree in component {component} is {chart.degree(component)}, not k={k}")
    nabla = weight_vector_field(chart, component)
    want = -(t.q - 1) * k
    lhs = lie_derivative(nabla, t)
    rhs = TensorField(chart, t.q, t.p,
                      {key: c * want for key, c in t.components.items()},
                      t.contra_sym, t.cov_sym) if want else \
        TensorField.zero(chart, t.q, t.p, t.contra_sym, t.cov_sym)
    diff = lhs - rhs
    degrees = {"expected": want, "computed": _deg_str(degree_of_tensor(t, component))}
    if diff.is_zero():
        return CheckReport(True, degrees=degrees)
    return CheckReport(False, witness=_first_component(diff), degrees=degrees)


def is_poisson(lam: TensorField) -> CheckReport:
    """Jacobi identity: the bracket of the bivector with itself vanishes."""
    if (lam.q, lam.p) != (2, 0):
        raise ValenceError("expected a bivector")
    if lam.contra_sym != "antisym":
        raise ValenceError("bivector must be antisym-tagged")
    jac = schouten_bracket(lam, lam)
    if jac.is_zero():
        return CheckReport(True)
    return CheckReport(False, witness=_first_component(jac))


def is_weighted_poisson(lam: TensorField, k: int, component: int = 0) -> CheckReport:
    """Poisson plus combined degree -k in the chosen component."""
    p = is_poisson(lam)
    w = is_weighted_tensor(lam, k, component)
    if not p.verdict:
        return CheckReport(False, witness="Jacobi fails: " + p.witness, degrees=w.degrees)
    return w


def is_nijenhuis(n: TensorField) -> CheckReport:
    tor = nijenhuis_torsion(n)
    if tor.is_zero():
        return CheckReport(True)
    return CheckReport(False, witness="torsion: " + _first_component(tor))


def is_weighted_nijenhuis(n: TensorField, component: int = 0) -> CheckReport:
    """Vanishing torsion plus combined degree 0 (q = 1 forces the zero)."""
    d = degree_of_tensor(n, component)
    t = is_nijenhuis(n)
    degrees = {"expected": 0, "computed": _deg_str(d)}
    if not (d is ANY_DEGREE or d == 0):
        return CheckReport(False, witness=f"degree is {_deg_str(d)}, not 0", degrees=degrees)
    if not t.verdict:
        return CheckReport(False, witness=t.witness, degrees=degrees)
    return CheckReport(True, degrees=degrees)


def _square_is(n: TensorField, sign: int) -> CheckReport:
    if (n.q, n.p) != (1, 1):
        raise ValenceError("expected a (1,1) tensor")
    sq = compose_11(n, n)
    target = TensorField.zero(n.chart, 1, 1) if sign == 0 else \
        identity_tensor(n.chart) * sign
    diff = sq - target
    if diff.is_zero():
        return CheckReport(True)
    return CheckReport(False, witness=_first_component(diff))


def is_almost_complex(n: TensorField) -> CheckReport:
    """N.N = -identity."""
    return _square_is(n, -1)


def is_almost_product(n: TensorField) -> CheckReport:
    """N.N = identity."""
    return _square_is(n, 1)


def is_almost_tangent(n: TensorField) -> CheckReport:
    """N.N = 0."""
    return _square_is(n, 0)


def is_weighted_pn(lam: TensorField, n: TensorField, k: int,
                   component: int = 0) -> CheckReport:
    """Weighted Poisson-Nijenhuis pair.

    Four exact conditions: lam is weighted Poisson of degree k, n is
    weighted with vanishing torsion, n applied to lam stays
    antisymmetric, and the compatibility concomitant vanishes.
    """
    wp = is_weighted_poisson(lam, k, component)
    if not wp.verdict:
        return CheckReport(False, witness="weighted Poisson fails: " + wp.witness,
                           degrees=wp.degrees)
    wn = is_weighted_nijenhuis(n, component)
    if not wn.verdict:
        return CheckReport(False, witness="weighted Nijenhuis fails: " + wn.witness,
                           degrees=wn.degrees)
    le = lam.expand()
    ne = n.expand()
    dim = lam.chart.dim
    nl: dict = {}
    for ((i, l), _), a in le.items():
        for ((j,), (l2,)), b in ne.items():
            if l2 == l:
                key = (i, j)
                prev = nl.get(key)
                v = a * b
                nl[key] = v if prev is None else prev + v
    for i in range(dim):
        for j in range(i, dim):
            left = nl.get((i, j), Poly.zero(lam.chart))
            right = nl.get((j, i), Poly.zero(lam.chart))
            if left + right:
                names = lam.chart.names
                return CheckReport(
                    False,
                    witness=f"N applied to the bivector is not skew at ({names[i]},{names[j]})",
                    degrees=wp.degrees)
    c = concomitant(lam, n)
    if not c.is_zero():
        return CheckReport(False, witness="concomitant: " + _first_component(c),
                           degrees=wp.degrees)
    return CheckReport(True, degrees=wp.degrees)


# -- bundle maps --------------------------------------------------------------

@dataclass(frozen=True)
class BundleMap:
    """Component matrix of a musical bundle map plus its degree report."""

    matrix: tuple
    report: CheckReport | None


def sharp_map(lam: TensorField, k: int | None = None, component: int = 0) -> BundleMap:
    """Matrix of the bundle map sending a momentum to lam(., p).

    matrix[l][j] is the (l, j) expanded component.  With k given, the
    momenta functions sum_l p_l lam^{lj} are formed on the k-shifted
    cotangent chart and each must be homogeneous of the weight of x^j.
    """
    if (lam.q, lam.p) != (2, 0):
        raise ValenceError("expected a bivector")
    chart = lam.chart
    le = lam.expand()
    dim = chart.dim
    matrix = tuple(tuple(le.get(((l, j), ()), Poly.zero(chart))
                         for j in range(dim)) for l in range(dim))
    report = None
    if k is not None:
        phase = phase_shifted_cotangent_chart(chart, k, component)
        degrees = {}
        ok = True
        bad = None
        for j in range(dim):
            e = Poly.zero(phase)
            for l in range(dim):
                c = matrix[l][j]
                if c:
                    e = e + Poly.variable(phase, dim + l) * c.reindex(phase)
            d = degree_of_function(e, component)
            degrees[chart.names[j]] = _deg_str(d)
            if not (d is ANY_DEGREE or d == chart.weights[j][component]):
                ok = False
                if bad is None:
                    bad = f"momentum entry for {chart.names[j]} has degree {_deg_str(d)}, " \
                          f"expected {chart.weights[j][component]}"
        report = CheckReport(ok, witness=bad, degrees=degrees)
    return BundleMap(matrix, report)


def flat_map(w: TensorField, k: int | None = None, component: int = 0) -> BundleMap:
    """Matrix of the bundle map sending a velocity to w(v, .).

    matrix[l][j] is the (l, j) expanded component.  With k given, the
    velocity pairings sum_l v^l w_{lj} are formed on the tangent chart
    and each must be homogeneous of weight k minus the weight of x^j.
    """
    if (w.q, w.p) != (0, 2):
        raise ValenceError("expected a two-form")
    chart = w.chart
    we = w.expand()
    dim = chart.dim
    matrix = tuple(tuple(we.get(((), (l, j)), Poly.zero(chart))
                         for j in range(dim)) for l in range(dim))
    report = None
    if k is not None:
        tc = tangent_chart(chart)
        degrees = {}
        ok = True
        bad = None
        for j in range(dim):
            e = Poly.zero(tc)
            for l in range(dim):
                c = matrix[l][j]
                if c:
                    e = e + Poly.variable(tc, dim + l) * c.reindex(tc)
            d = degree_of_function(e, component)
            degrees[chart.names[j]] = _deg_str(d)
            want = k - chart.weights[j][component]
            if not (d is ANY_DEGREE or d == want):
                ok = False
                if bad is None:
                    bad = f"velocity entry for {chart.names[j]} has degree {_deg_str(d)}, " \
                          f"expected {want}"
        report = CheckReport(ok, witness=bad, degrees=degrees)
    return BundleMap(matrix, report)


# -- exact rational linear algebra -------------------------------------------

def rational_rank(rows: list) -> int:
    """Rank of a matrix of Fractions by Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    col = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(m)):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def invert_rational_matrix(rows: list) -> list:
    """Exact inverse of a square matrix of Fractions."""
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            raise GradcalcError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [a / pv for a in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


# -- distributions ------------------------------------------------------------

def rank_at_point(d: Distribution, point: dict) -> int:
    """Exact rank of the generator span at one rational point."""
    dim = d.chart.dim
    rows = []
    for x in d.generators:
        row = [Fraction(0)] * dim
        for ((i,), _), c in x.components.items():
            row[i] = c.evaluate(point)
        rows.append(row)
    return rational_rank(rows)


def _membership_by_rank(d: Distribution, extra: TensorField, points: list):
    """Point where adding extra raises the span's rank, or None."""
    dim = d.chart.dim
    for pt in points:
        rows = []
        for x in d.generators:
            row = [Fraction(0)] * dim
            for ((i,), _), c in x.components.items():
                row[i] = c.evaluate(pt)
            rows.append(row)
        base_rank = rational_rank(rows)
        row = [Fraction(0)] * dim
        for ((i,), _), c in extra.components.items():
            row[i] = c.evaluate(pt)
        if rational_rank(rows + [row]) != base_rank:
            return pt
    return None


def _point_str(chart: Chart, pt: dict) -> str:
    return "(" + ", ".join(f"{chart.names[i]}={pt[i]}" for i in sorted(pt)) + ")"


def is_involutive(d: Distribution, seed: int = 0, samples: int = 8) -> CheckReport:
    """Pairwise brackets stay in the span at every sample point.

    A pass is probabilistic (finitely many random points); a fail is exact
    at the witness point.
    """
    points = sample_points(d.chart, seed, samples)
    gens = d.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            br = lie_bracket(gens[i], gens[j])
            if br.is_zero():
                continue
            pt = _membership_by_rank(d, br, points)
            if pt is not None:
                return CheckReport(
                    False, probabilistic=True, seed=seed,
                    witness=f"bracket of generators {i},{j} leaves the span "
                            f"at {_point_str(d.chart, pt)}")
    return CheckReport(True, probabilistic=True, seed=seed)


def is_weighted_distribution(d: Distribution, component: int = 0,
                             seed: int = 0, samples: int = 8) -> CheckReport:
    """The weight field preserves the distribution at every sample point."""
    nabla = weight_vector_field(d.chart, component)
    points = sample_points(d.chart, seed, samples)
    for j, x in enumerate(d.generators):
        br = lie_bracket(nabla, x)
        if br.is_zero():
            continue
        pt = _membership_by_rank(d, br, points)
        if pt is not None:
            return CheckReport(
                False, probabilistic=True, seed=seed,
                witness=f"weight-field bracket of generator {j} leaves the span "
                        f"at {_point_str(d.chart, pt)}")
    return CheckReport(True, probabilistic=True, seed=seed)


# -- contact ------------------------------------------------------------------

def is_weighted_contact(alpha: TensorField, k: int, n: int,
                        component: int = 0) -> CheckReport:
    """alpha has degree k and alpha ^^ (d alpha)^n is a nonzero top form."""
    if (alpha.q, alpha.p) != (0, 1):
        raise ValenceError("expected a one-form")
    chart = alpha.chart
    if chart.dim != 2 * n + 1:
        raise GradcalcError(f"chart dimension {chart.dim} is not 2n+1 with n={n}")
    d = degree_of_tensor(alpha, component)
    degrees = {"alpha": _deg_str(d), "expected": k}
    if d is ANY_DEGREE or d != k:
        return CheckReport(False, witness=f"form degree is {_deg_str(d)}, expected {k}",
                           degrees=degrees)
    da = exterior_derivative(alpha)
    top = alpha
    for _ in range(n):
        top = wedge(top, da)
    if top.is_zero():
        return CheckReport(False, witness="alpha ^^ (d alpha)^n vanishes identically",
                           degrees=degrees)
    return CheckReport(True, degrees=degrees)


# -- sections and algebroid brackets ------------------------------------------

def section_degree(sec: Section):
    """Homogeneity degree of a section of a vector-bundle chart.

    The component at a fibre variable of graded weight s must be
    homogeneous of degree lambda + s for one common lambda.  Returns
    lambda, ANY_DEGREE for the zero section, or None when inhomogeneous.
    The result is cross-checked against the degree of the associated
    fibrewise-linear function on the plain dual chart.
    """
    chart = sec.chart
    base, fibre = vb_split(chart, sec.vb_component)
    fibre_set = set(fibre)
    base_set = set(base)
    gc = sec.graded_component
    lam = None
    for f, v in sec.values.items():
        if f not in fibre_set:
            raise GradcalcError(f"{chart.names[f]} is not a fibre variable")
        if not isinstance(v, Poly) or v.chart is not chart:
            raise ChartMismatchError("section components must be polynomials on the chart")
        if v.variables_used() - base_set:
            raise GradcalcError("section components must depend on base variables only")
        if not v:
            continue
        d = degree_of_function(v, gc)
        if d is None:
            return None
        cand = d - chart.weights[f][gc]
        if lam is None:
            lam = cand
        elif lam != cand:
            return None
    if lam is None:
        return ANY_DEGREE
    dual = shifted_dual_grl_chart(chart, 0, sec.vb_component, gc)
    iota = Poly.zero(dual)
    for f, v in sec.values.items():
        if v:
            iota = iota + Poly.variable(dual, f) * v.reindex(dual)
    dual_deg = degree_of_function(iota, gc)
    if dual_deg != lam:
        raise GradcalcError(
            f"internal: dual-pairing degree {dual_deg} disagrees with section degree {lam}")
    return lam


def algebroid_bracket(lam: TensorField, vb_component: int, x, y) -> list:
    """Bracket of two sections induced by a fibrewise-linear bivalent tensor.

    lam lives on the dual chart: base variables plus dual fibre
    coordinates, with components at most linear in the fibre variables.
    Sections of the primal bundle are coefficient lists against the basis
    dual to the fibre coordinates.  The defining property is that the
    linear function of the bracket is the lam-bracket of the linear
    functions: iota([x,y]) = {iota(x), iota(y)}.
    """
    chart = lam.chart
    if (lam.q, lam.p) != (2, 0):
        raise ValenceError("expected a bivalent contravariant tensor")
    base, fibre = vb_split(chart, vb_component)
    fibre_set = set(fibre)
    base_set = set(base)

    def fibre_degree(mono) -> int:
        return sum(e for v, e in mono if v in fibre_set)

    for (_, _), c in lam.components.items():
        for m in c.terms:
            if fibre_degree(m) > 1:
                raise GradcalcError("tensor is not linear in the fibre variables")

    def as_section(vals) -> list:
        out = []
        if len(vals) != len(fibre):
            raise GradcalcError(f"section needs {len(fibre)} components")
        for v in vals:
            if not isinstance(v, Poly):
                v = Poly.const(chart, v)
            elif v.chart is not chart:
                raise ChartMismatchError("section components must live on the dual chart")
            if v.variables_used() - base_set:
                raise GradcalcError("section components must depend on base variables only")
            out.append(v)
        return out

    xs = as_section(x)
    ys = as_section(y)
    iota_x = Poly.zero(chart)
    iota_y = Poly.zero(chart)
    for f, vx, vy in zip(fibre, xs, ys):
        xi = Poly.variable(chart, f)
        iota_x = iota_x + xi * vx
        iota_y = iota_y + xi * vy
    le = lam.expand()
    h = Poly.zero(chart)
    for ((i, j), _), c in le.items():
        di = iota_x.diff(i)
        if not di:
            continue
        dj = iota_y.diff(j)
        if not dj:
            continue
        h = h + c * di * dj
    out = [Poly.zero(chart) for _ in fibre]
    fpos = {f: m for m, f in enumerate(fibre)}
    for mono, coef in h.terms.items():
        hits = [(v, e) for v, e in mono if v in fibre_set]
        if len(hits) != 1 or hits[0][1] != 1:
            raise GradcalcError(
                "bracket of linear functions is not fibrewise linear; tensor is malformed")
        f = hits[0][0]
        rest = tuple(p for p in mono if p[0] != f)
        out[fpos[f]] = out[fpos[f]] + Poly(chart, {rest: coef})
    return out
