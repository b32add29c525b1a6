"""Tensor fields with polynomial components on a fixed chart.

A (q, p) tensor field is stored as a sparse dict mapping index keys
(up, down) -- up a q-tuple and down a p-tuple of variable indices -- to
nonzero Poly coefficients.  Symmetry tags ("none", "sym", "antisym") apply
to the whole contravariant and covariant block respectively and control
which keys are stored:

* antisym: strictly increasing index tuples, sign-normalized;
* sym: non-decreasing index tuples;
* none: every key.

expand() materializes the full component table (all permutations, signs
applied); two tensors are equal iff their expanded tables agree, so a
wedge and its explicit tensor-product expansion compare equal.

The wedge product is the unnormalized signed-shuffle product: on
one-forms a ^^ b = a ox b - b ox a, with no 1/k! factors anywhere.
Insertion operators pair against the leading slots of the other block.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping

from .charts import Chart
from .errors import ChartMismatchError, GradcalcError, ValenceError
from .poly import ANY_DEGREE, Poly, weight_of_monomial

__all__ = [
    "TensorField", "tensor_product", "wedge", "wedge_list", "contract",
    "insert_multivector", "insert_form", "degree_of_tensor",
    "compose_11", "identity_tensor", "weight_vector_field",
    "scalar_field", "vector_field", "one_form",
    "coordinate_vector_field", "coordinate_one_form", "tagged",
]

_SYMS = ("none", "sym", "antisym")


def _sort_with_parity(idx: tuple) -> tuple:
    """(sign, sorted tuple); sign 0 when an index repeats."""
    lst = list(idx)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(lst)):
        if lst[i - 1] == lst[i]:
            return 0, tuple(lst)
    return sign, tuple(lst)


def _canon_block(idx: tuple, sym: str):
    """Canonical (sign, key) for one index block; None when annihilated."""
    if sym == "none" or len(idx) < 2:
        return 1, idx
    if sym == "sym":
        return 1, tuple(sorted(idx))
    sign, key = _sort_with_parity(idx)
    if sign == 0:
        return None
    return sign, key


def _is_canonical(idx: tuple, sym: str) -> bool:
    if sym == "none" or len(idx) < 2:
        return True
    if sym == "sym":
        return all(idx[i] <= idx[i + 1] for i in range(len(idx) - 1))
    return all(idx[i] < idx[i + 1] for i in range(len(idx) - 1))


def _block_expansion(idx: tuple, sym: str) -> list:
    """All (sign, permuted key) pairs representing one stored block."""
    if sym == "none" or len(idx) < 2:
        return [(1, idx)]
    if sym == "sym":
        return [(1, p) for p in set(permutations(idx))]
    out = []
    for p in permutations(idx):
        s, _ = _sort_with_parity(p)
        out.append((s, p))
    return out


def _acc(store: dict, key, value: Poly) -> None:
    if not value:
        return
    prev = store.get(key)
    s = value if prev is None else prev + value
    if s:
        store[key] = s
    elif prev is not None:
        del store[key]


class TensorField:
    """Sparse (q, p) tensor field over one chart."""

    __slots__ = ("chart", "q", "p", "components", "contra_sym", "cov_sym", "_expanded")

    def __init__(self, chart: Chart, q: int, p: int, components: dict,
                 contra_sym: str = "none", cov_sym: str = "none"):
        # components must already be canonical for the given tags
        if contra_sym not in _SYMS or cov_sym not in _SYMS:
            raise ValenceError(f"unknown symmetry tag")
        self.chart = chart
        self.q = q
        self.p = p
        self.components = components
        self.contra_sym = contra_sym if q >= 2 else "none"
        self.cov_sym = cov_sym if p >= 2 else "none"
        self._expanded = None

    # -- construction ---------------------------------------------------

    @staticmethod
    def zero(chart: Chart, q: int, p: int,
             contra_sym: str = "none", cov_sym: str = "none") -> "TensorField":
        return TensorField(chart, q, p, {}, contra_sym, cov_sym)

    @staticmethod
    def from_components(chart: Chart, q: int, p: int, entries: Mapping | Iterable,
                        contra_sym: str = "none", cov_sym: str = "none") -> "TensorField":
        """Build from canonical-key components; keys are validated."""
        items = entries.items() if isinstance(entries, Mapping) else entries
        comps: dict = {}
        for (up, down), coef in items:
            up, down = tuple(up), tuple(down)
            if len(up) != q or len(down) != p:
                raise ValenceError(f"key {(up, down)} does not match valence ({q},{p})")
            if not _is_canonical(up, contra_sym if q >= 2 else "none"):
                raise ValenceError(f"non-canonical contravariant key {up} for tag {contra_sym}")
            if not _is_canonical(down, cov_sym if p >= 2 else "none"):
                raise ValenceError(f"non-canonical covariant key {down} for tag {cov_sym}")
            for i in up + down:
                if not 0 <= i < chart.dim:
                    raise GradcalcError(f"variable index {i} out of range")
            if not isinstance(coef, Poly):
                coef = Poly.const(chart, coef)
            elif coef.chart is not chart:
                raise ChartMismatchError("component polynomial lives on a different chart")
            _acc(comps, (up, down), coef)
        return TensorField(chart, q, p, comps, contra_sym, cov_sym)

    # -- basics -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def scalar_part(self) -> Poly:
        if self.q or self.p:
            raise ValenceError("not a scalar field")
        return self.components.get(((), ()), Poly.zero(self.chart))

    def expand(self) -> dict:
        """Full component table: every index order, signs applied."""
        if self._expanded is None:
            out: dict = {}
            for (up, down), coef in self.components.items():
                for su, pu in _block_expansion(up, self.contra_sym):
                    for sd, pd in _block_expansion(down, self.cov_sym):
                        s = su * sd
                        out[(pu, pd)] = coef if s == 1 else -coef
            self._expanded = out
        return self._expanded

    def component(self, up, down) -> Poly:
        """Component at an arbitrary index key (symmetry resolved)."""
        v = self.expand().get((tuple(up), tuple(down)))
        return v if v is not None else Poly.zero(self.chart)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorField):
            return NotImplemented
        return (self.chart is other.chart and self.q == other.q and self.p == other.p
                and self.expand() == other.expand())

    __hash__ = None

    def __repr__(self) -> str:
        from .render import render_tensor
        return render_tensor(self)

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "TensorField") -> None:
        if self.chart is not other.chart:
            raise ChartMismatchError("tensors live on different charts")
        if self.q != other.q or self.p != other.p:
            raise ValenceError(
                f"valence mismatch: ({self.q},{self.p}) vs ({other.q},{other.p})")

    def __add__(self, other: "TensorField") -> "TensorField":
        if not isinstance(other, TensorField):
            return NotImplemented
        self._check(other)
        if self.contra_sym == other.contra_sym and self.cov_sym == other.cov_sym:
            out = dict(self.components)
            for k, v in other.components.items():
                _acc(out, k, v)
            return TensorField(self.chart, self.q, self.p, out,
                               self.contra_sym, self.cov_sym)
        out = dict(self.expand())
        for k, v in other.expand().items():
            _acc(out, k, v)
        return TensorField(self.chart, self.q, self.p, out)

    def __neg__(self) -> "TensorField":
        return TensorField(self.chart, self.q, self.p,
                           {k: -v for k, v in self.components.items()},
                           self.contra_sym, self.cov_sym)

    def __sub__(self, other: "TensorField") -> "TensorField":
        if not isinstance(other, TensorField):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "TensorField":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.chart, other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.chart is not self.chart:
            raise ChartMismatchError("scalar lives on a different chart")
        out: dict = {}
        for k, v in self.components.items():
            _acc(out, k, v * other)
        return TensorField(self.chart, self.q, self.p, out,
                           self.contra_sym, self.cov_sym)

    __rmul__ = __mul__


def _from_expanded(chart: Chart, q: int, p: int, expanded: dict,
                   contra_sym: str = "none", cov_sym: str = "none") -> TensorField:
    """Canonical tensor from an expanded table known to have the symmetry."""
    cs = contra_sym if q >= 2 else "none"
    ps = cov_sym if p >= 2 else "none"
    comps = {}
    for (up, down), coef in expanded.items():
        if not coef:
            continue
        if _is_canonical(up, cs) and _is_canonical(down, ps):
            comps[(up, down)] = coef
    return TensorField(chart, q, p, comps, cs, ps)


def tagged(t: TensorField, contra_sym: str = "none", cov_sym: str = "none") -> TensorField:
    """Re-store a tensor under symmetry tags, verifying the symmetry holds.

    Verification is extensional: the retagged tensor must expand back to
    the same component table, so a lone dx ox dy is rejected as antisym
    rather than silently completed to dx ox dy - dy ox dx.
    """
    cs = contra_sym if t.q >= 2 else "none"
    ps = cov_sym if t.p >= 2 else "none"
    exp = t.expand()
    out = _from_expanded(t.chart, t.q, t.p, exp, cs, ps)
    if out.expand() != exp:
        raise ValenceError("tensor lacks the claimed symmetry")
    return out


# -- convenience builders ----------------------------------------------------

def scalar_field(chart: Chart, value) -> TensorField:
    if not isinstance(value, Poly):
        value = Poly.const(chart, value)
    comps = {((), ()): value} if value else {}
    return TensorField(chart, 0, 0, comps)


def vector_field(chart: Chart, entries: Mapping) -> TensorField:
    comps = {}
    for i, v in entries.items():
        if isinstance(i, str):
            i = chart.index(i)
        if not isinstance(v, Poly):
            v = Poly.const(chart, v)
        _acc(comps, ((i,), ()), v)
    return TensorField(chart, 1, 0, comps)

def one_form(chart: Chart, entries: Mapping) -> TensorField:
    comps = {}
    for i, v in entries.items():
        if isinstance(i, str):
            i = chart.index(i)
        if not isinstance(v, Poly):
            v = Poly.const(chart, v)
        _acc(comps, ((), (i,)), v)
    return TensorField(chart, 0, 1, comps)


def coordinate_vector_field(chart: Chart, var) -> TensorField:
    if isinstance(var, str):
        var = chart.index(var)
    return TensorField(chart, 1, 0, {((var,), ()): Poly.const(chart, 1)})


def coordinate_one_form(chart: Chart, var) -> TensorField:
    if isinstance(var, str):
        var = chart.index(var)
    return TensorField(chart, 0, 1, {((), (var,)): Poly.const(chart, 1)})


def identity_tensor(chart: Chart) -> TensorField:
    one = Poly.const(chart, 1)
    return TensorField(chart, 1, 1,
                       {((i,), (i,)): one for i in range(chart.dim)})


def weight_vector_field(chart: Chart, component: int = 0) -> TensorField:
    """The weight (Euler) vector field: sum of w_i x^i d/dx^i."""
    if not 0 <= component < chart.grading_count:
        raise GradcalcError("no such grading component")
    comps = {}
    for i in range(chart.dim):
        w = chart.weights[i][component]
        if w:
            comps[((i,), ())] = Poly.variable(chart, i) * w
    return TensorField(chart, 1, 0, comps)


# -- multiplicative operations ---------------------------------------------

def tensor_product(a: TensorField, b: TensorField) -> TensorField:
    """Tensor product; contravariant slots of a then b, likewise covariant.

    A scalar factor just scales the other operand.  A block coming from a
    single operand keeps that operand's symmetry tag.
    """
    if a.chart is not b.chart:
        raise ChartMismatchError("tensors live on different charts")
    if a.q == 0 and a.p == 0:
        return b * a.scalar_part()
    if b.q == 0 and b.p == 0:
        return a * b.scalar_part()
    cs = a.contra_sym if b.q == 0 else (b.contra_sym if a.q == 0 else "none")
    ps = a.cov_sym if b.p == 0 else (b.cov_sym if a.p == 0 else "none")
    out: dict = {}
    for (ua, da), ca in a.expand().items():
        for (ub, db), cb in b.expand().items():
            _acc(out, (ua + ub, da + db), ca * cb)
    return _from_expanded(a.chart, a.q + b.q, a.p + b.p, out, cs, ps)


def _merge_signed(i: tuple, j: tuple):
    """Signed merge of two strictly increasing tuples; None on overlap."""
    if set(i) & set(j):
        return None
    inv = 0
    for x in i:
        for y in j:
            if x > y:
                inv += 1
    return (1 if inv % 2 == 0 else -1), tuple(sorted(i + j))


def _wedge_keys(t: TensorField):
    """Stored keys of a pure antisymmetric tensor as increasing tuples."""
    if t.q and t.p:
        raise ValenceError("wedge operands must be pure co- or contravariant")
    block = 0 if t.q else 1
    deg = t.q + t.p
    if deg >= 2:
        sym = t.contra_sym if t.q else t.cov_sym
        if sym != "antisym":
            raise ValenceError("wedge operands of degree >= 2 must be antisym-tagged")
    return block, deg, {k[block]: v for k, v in t.components.items()}


def wedge(a: TensorField, b: TensorField) -> TensorField:
    """Unnormalized exterior product of forms or of multivector fields."""
    if a.chart is not b.chart:
        raise ChartMismatchError("tensors live on different charts")
    if a.q == 0 and a.p == 0:
        return b * a.scalar_part()
    if b.q == 0 and b.p == 0:
        return a * b.scalar_part()
    ba, da, ka = _wedge_keys(a)
    bb, db, kb = _wedge_keys(b)
    if ba != bb:
        raise ValenceError("cannot wedge a form with a multivector")
    out: dict = {}
    for i, ca in ka.items():
        for j, cb in kb.items():
            m = _merge_signed(i, j)
            if m is None:
                continue
            sign, key = m
            coef = ca * cb
            _acc(out, key, coef if sign == 1 else -coef)
    deg = da + db
    if ba == 0:
        comps = {(k, ()): v for k, v in out.items()}
        return TensorField(a.chart, deg, 0, comps, contra_sym="antisym")
    comps = {((), k): v for k, v in out.items()}
    return TensorField(a.chart, 0, deg, comps, cov_sym="antisym")


def wedge_list(fields: Iterable[TensorField]) -> TensorField:
    fields = list(fields)
    if not fields:
        raise ValenceError("empty wedge")
    acc = fields[0]
    for f in fields[1:]:
        acc = wedge(acc, f)
    return acc


def contract(t: TensorField, contra_slot: int, cov_slot: int) -> TensorField:
    """Trace one contravariant against one covariant slot (0-based)."""
    if not (0 <= contra_slot < t.q and 0 <= cov_slot < t.p):
        raise ValenceError("contraction slot out of range")
    out: dict = {}
    for (up, down), coef in t.expand().items():
        if up[contra_slot] != down[cov_slot]:
            continue
        nu = up[:contra_slot] + up[contra_slot + 1:]
        nd = down[:cov_slot] + down[cov_slot + 1:]
        _acc(out, (nu, nd), coef)
    return _from_expanded(t.chart, t.q - 1, t.p - 1, out)


def insert_multivector(x: TensorField, t: TensorField) -> TensorField:
    """Pair a multivector's slots against the leading covariant slots of t."""
    if x.chart is not t.chart:
        raise ChartMismatchError("tensors live on different charts")
    if x.p != 0:
        raise ValenceError("insertion argument must be purely contravariant")
    l = x.q
    if l > t.p:
        raise ValenceError(f"cannot insert a {l}-vector into a tensor with {t.p} covariant slots")
    if l == 0:
        return t * x.scalar_part()
    xe = x.expand()
    out: dict = {}
    for (up, down), coef in t.expand().items():
        xv = xe.get((down[:l], ()))
        if xv is not None:
            _acc(out, (up, down[l:]), coef * xv)
    return _from_expanded(t.chart, t.q, t.p - l, out, t.contra_sym, t.cov_sym)


def insert_form(w: TensorField, t: TensorField) -> TensorField:
    """Pair a form's slots against the leading contravariant slots of t."""
    if w.chart is not t.chart:
        raise ChartMismatchError("tensors live on different charts")
    if w.q != 0:
        raise ValenceError("insertion argument must be purely covariant")
    u = w.p
    if u > t.q:
        raise ValenceError(f"cannot insert a {u}-form into a tensor with {t.q} contravariant slots")
    if u == 0:
        return t * w.scalar_part()
    we = w.expand()
    out: dict = {}
    for (up, down), coef in t.expand().items():
        wv = we.get(((), up[:u]))
        if wv is not None:
            _acc(out, (up[u:], down), coef * wv)
    return _from_expanded(t.chart, t.q - u, t.p, out, t.contra_sym, t.cov_sym)


def compose_11(a: TensorField, b: TensorField) -> TensorField:
    """Composition of (1,1) tensors as endomorphisms: (a.b)(v) = a(b(v))."""
    if a.chart is not b.chart:
        raise ChartMismatchError("tensors live on different charts")
    if (a.q, a.p) != (1, 1) or (b.q, b.p) != (1, 1):
        raise ValenceError("compose_11 needs two (1,1) tensors")
    out: dict = {}
    for ((i,), (l,)), ca in a.components.items():
        for ((l2,), (j,)), cb in b.components.items():
            if l == l2:
                _acc(out, ((i,), (j,)), ca * cb)
    return TensorField(a.chart, 1, 1, out)


def degree_of_tensor(t: TensorField, component: int = 0) -> object:
    """Combined homogeneity degree of a tensor in one grading component.

    Each component contributes deg(coefficient monomial) + sum of covariant
    index weights - sum of contravariant index weights; all contributions
    must agree.  Returns the degree, ANY_DEGREE for the zero tensor, or
    None when inhomogeneous.
    """
    chart = t.chart
    if not 0 <= component < chart.grading_count:
        raise GradcalcError("no such grading component")
    ws = chart.weights
    seen = None
    for (up, down), coef in t.components.items():
        shift = sum(ws[j][component] for j in down) - sum(ws[i][component] for i in up)
        for m in coef.terms:
            d = weight_of_monomial(m, chart, component) + shift
            if seen is None:
                seen = d
            elif seen != d:
                return None
    return ANY_DEGREE if seen is None else seen
