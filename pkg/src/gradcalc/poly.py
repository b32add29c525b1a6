"""Sparse multivariate polynomials over the rationals, tied to a chart.

Representation
--------------
A monomial is a tuple of (variable index, exponent) pairs, sorted by
variable index, with every exponent >= 1.  The empty tuple is the constant
monomial.  A polynomial is a dict mapping monomials to nonzero Fraction
coefficients; the empty dict is the zero polynomial.  Both are canonical:
two polynomials on the same chart are equal iff their dicts are equal.

Every Poly carries the chart it lives on.  Mixing polynomials from two
different chart objects raises ChartMismatchError even when the variable
tables agree; use reindex() to move a polynomial onto another chart by
variable name.

Coefficients are fractions.Fraction throughout, so all arithmetic is
exact.  There is no division by non-constant polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .charts import Chart
from .errors import ChartMismatchError, GradcalcError

__all__ = [
    "Monomial", "Poly", "ANY_DEGREE",
    "weight_of_monomial", "degree_of_function", "homogeneous_components",
]

Monomial = tuple  # tuple[tuple[int, int], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class _AnyDegree:
    """Degree of the zero polynomial: compatible with every weight."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ANY_DEGREE"


ANY_DEGREE = _AnyDegree()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Merge two sorted exponent lists, adding exponents."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_total_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def weight_of_monomial(m: Monomial, chart: Chart, component: int = 0) -> int:
    """Sum of exponent * variable weight over the monomial."""
    ws = chart.weights
    return sum(e * ws[v][component] for v, e in m)


def _mono_sort_key(m: Monomial, dim: int):
    # graded lexicographic: total degree first, then the dense exponent row
    dense = [0] * dim
    for v, e in m:
        dense[v] = e
    return (mono_total_degree(m), tuple(dense))


class Poly:
    """Polynomial with exact rational coefficients on a fixed chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: dict):
        # terms must already be canonical (no zero coefficients, sorted keys)
        self.chart = chart
        self.terms = terms

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(chart: Chart) -> "Poly":
        return Poly(chart, {})

    @staticmethod
    def const(chart: Chart, value) -> "Poly":
        c = Fraction(value)
        return Poly(chart, {(): c} if c else {})

    @staticmethod
    def variable(chart: Chart, var) -> "Poly":
        if isinstance(var, str):
            var = chart.index(var)
        if not 0 <= var < chart.dim:
            raise GradcalcError(f"variable index {var} out of range")
        return Poly(chart, {((var, 1),): _ONE})

    @staticmethod
    def from_terms(chart: Chart, entries: Iterable) -> "Poly":
        """Sum arbitrary (monomial, coefficient) pairs into canonical form."""
        acc: dict = {}
        for m, c in entries:
            c = Fraction(c)
            if not c:
                continue
            prev = acc.get(m)
            s = c if prev is None else prev + c
            if s:
                acc[m] = s
            elif prev is not None:
                del acc[m]
        return Poly(chart, acc)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise GradcalcError("polynomial is not constant")
        return self.terms.get((), _ZERO)

    def total_degree(self) -> int:
        """Largest monomial degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(mono_total_degree(m) for m in self.terms)

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            for v, _ in m:
                used.add(v)
        return used

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.chart is not other.chart:
            raise ChartMismatchError("polynomials live on different charts")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.chart, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for m, c in b.items():
            prev = out.get(m)
            s = c if prev is None else prev + c
            if s:
                out[m] = s
            elif prev is not None:
                del out[m]
        return Poly(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly(self.chart, {})
            return Poly(self.chart, {m: k * c for m, k in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in o.terms.items():
                m = mono_mul(ma, mb)
                c = ca * cb
                prev = out.get(m)
                s = c if prev is None else prev + c
                if s:
                    out[m] = s
                elif prev is not None:
                    del out[m]
        return Poly(self.chart, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return self * (1 / c)
        if isinstance(other, Poly) and other.is_constant():
            return self / other.constant_value()
        raise GradcalcError("can only divide by a nonzero constant")

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise GradcalcError("exponent must be a nonnegative integer")
        out = Poly.const(self.chart, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.chart, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.chart is other.chart and self.terms == other.terms

    __hash__ = None  # mutable dict inside; equality is structural

    # -- calculus and structure -----------------------------------------

    def diff(self, var) -> "Poly":
        """Partial derivative with respect to one chart variable."""
        if isinstance(var, str):
            var = self.chart.index(var)
        out: dict = {}
        for m, c in self.terms.items():
            for pos, (v, e) in enumerate(m):
                if v != var:
                    continue
                if e == 1:
                    nm = m[:pos] + m[pos + 1:]
                else:
                    nm = m[:pos] + ((v, e - 1),) + m[pos + 1:]
                nc = c * e
                prev = out.get(nm)
                s = nc if prev is None else prev + nc
                if s:
                    out[nm] = s
                elif prev is not None:
                    del out[nm]
                break
        return Poly(self.chart, out)

    def substitute(self, images: Mapping, target: Chart | None = None) -> "Poly":
        """Replace every variable by its image polynomial.

        images maps every variable occurring in self (by index) to a Poly;
        all images must share one chart, which becomes the result chart.
        A missing variable is an error.
        """
        for im in images.values():
            if target is None:
                target = im.chart
            elif im.chart is not target:
                raise ChartMismatchError("substitution images live on different charts")
        if target is None:
            target = self.chart
        used = self.variables_used()
        missing = used - set(images.keys())
        if missing:
            names = ", ".join(self.chart.names[v] for v in sorted(missing))
            raise GradcalcError(f"substitution misses variables: {names}")
        out = Poly.zero(target)
        powers: dict = {}
        for m, c in self.terms.items():
            term = Poly.const(target, c)
            for v, e in m:
                cache = powers.setdefault(v, {0: Poly.const(target, 1), 1: images[v]})
                if e not in cache:
                    k = max(k0 for k0 in cache if k0 <= e)
                    acc = cache[k]
                    while k < e:
                        acc = acc * images[v]
                        k += 1
                        cache[k] = acc
                term = term * cache[e]
            out = out + term
        return out

    def evaluate(self, point: Mapping) -> Fraction:
        """Exact value at a point given as {variable index: Fraction}."""
        used = self.variables_used()
        missing = used - set(point.keys())
        if missing:
            names = ", ".join(self.chart.names[v] for v in sorted(missing))
            raise GradcalcError(f"evaluation point misses variables: {names}")
        total = _ZERO
        for m, c in self.terms.items():
            v = c
            for var, e in m:
                v *= Fraction(point[var]) ** e
            total += v
        return total

    def reindex(self, target: Chart) -> "Poly":
        """Move onto another chart, matching variables by name."""
        mapping = {}
        for v in self.variables_used():
            mapping[v] = target.index(self.chart.names[v])
        out = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((mapping[v], e) for v, e in m))
            out[nm] = c
        return Poly(target, out)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order (for rendering)."""
        dim = self.chart.dim
        return sorted(self.terms.items(),
                      key=lambda kv: _mono_sort_key(kv[0], dim), reverse=True)

    def __repr__(self) -> str:
        from .render import render_poly
        return render_poly(self)


def degree_of_function(f: Poly, component: int = 0) -> object:
    """Homogeneity weight of f in one grading component.

    Returns the common weight of all monomials, ANY_DEGREE for the zero
    polynomial, or None when f is inhomogeneous.
    """
    if not f.terms:
        return ANY_DEGREE
    it = iter(f.terms)
    w = weight_of_monomial(next(it), f.chart, component)
    for m in it:
        if weight_of_monomial(m, f.chart, component) != w:
            return None
    return w


def homogeneous_components(f: Poly, component: int = 0) -> dict:
    """Split f into its weight-homogeneous parts: {weight: Poly}."""
    parts: dict = {}
    for m, c in f.terms.items():
        w = weight_of_monomial(m, f.chart, component)
        parts.setdefault(w, {})[m] = c
    return {w: Poly(f.chart, t) for w, t in sorted(parts.items())}


def degree_matches(d, expected: int) -> bool:
    """True when a reported degree is the expected one (zero matches any)."""
    return d is ANY_DEGREE or d == expected
