"""Seeded random generators for polynomials, tensors and sample points.

Everything takes an explicit random.Random so callers control
determinism; the same seed always produces the same objects.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .charts import Chart
from .poly import Poly
from .tensor import TensorField

__all__ = [
    "sample_points", "random_fraction", "random_poly",
    "random_vector_field", "random_one_form", "random_form",
    "random_multivector", "random_vv_form", "random_tensor",
]


def random_fraction(rng: random.Random, low: int = -5, high: int = 5,
                    nonzero: bool = False) -> Fraction:
    while True:
        v = rng.randint(low, high)
        if v or not nonzero:
            return Fraction(v)


def sample_points(chart: Chart, seed: int, count: int = 8,
                  low: int = -5, high: int = 5) -> list:
    """Random rational points with nonzero coordinates."""
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        pts.append({i: random_fraction(rng, low, high, nonzero=True)
                    for i in range(chart.dim)})
    return pts


def random_poly(rng: random.Random, chart: Chart, max_terms: int = 3,
                max_degree: int = 2, coef_low: int = -3, coef_high: int = 3) -> Poly:
    entries = []
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        counts: dict = {}
        for _ in range(deg):
            v = rng.randrange(chart.dim) if chart.dim else 0
            counts[v] = counts.get(v, 0) + 1
        mono = tuple(sorted(counts.items()))
        entries.append((mono, random_fraction(rng, coef_low, coef_high, nonzero=True)))
    return Poly.from_terms(chart, entries)


def _random_keys(rng: random.Random, chart: Chart, length: int, count: int,
                 increasing: bool) -> list:
    if increasing:
        pool = list(combinations(range(chart.dim), length))
        if not pool:
            return []
        rng.shuffle(pool)
        return pool[:count]
    return [tuple(rng.randrange(chart.dim) for _ in range(length))
            for _ in range(count)]


def random_vector_field(rng: random.Random, chart: Chart, max_components: int = 2,
                        **poly_opts) -> TensorField:
    comps = {}
    for _ in range(rng.randint(1, max_components)):
        i = rng.randrange(chart.dim)
        comps[((i,), ())] = random_poly(rng, chart, **poly_opts)
    return TensorField(chart, 1, 0, {k: v for k, v in comps.items() if v})


def random_one_form(rng: random.Random, chart: Chart, max_components: int = 2,
                    **poly_opts) -> TensorField:
    comps = {}
    for _ in range(rng.randint(1, max_components)):
        i = rng.randrange(chart.dim)
        comps[((), (i,))] = random_poly(rng, chart, **poly_opts)
    return TensorField(chart, 0, 1, {k: v for k, v in comps.items() if v})


def random_form(rng: random.Random, chart: Chart, degree: int,
                max_components: int = 2, **poly_opts) -> TensorField:
    """Random antisymmetric (0, degree) form (may be zero if dim < degree)."""
    if degree == 0:
        from .tensor import scalar_field
        return scalar_field(chart, random_poly(rng, chart, **poly_opts))
    comps = {}
    for key in _random_keys(rng, chart, degree, max_components, increasing=True):
        comps[((), key)] = random_poly(rng, chart, **poly_opts)
    return TensorField(chart, 0, degree, {k: v for k, v in comps.items() if v},
                       cov_sym="antisym" if degree >= 2 else "none")


def random_multivector(rng: random.Random, chart: Chart, degree: int,
                       max_components: int = 2, **poly_opts) -> TensorField:
    if degree == 0:
        from .tensor import scalar_field
        return scalar_field(chart, random_poly(rng, chart, **poly_opts))
    comps = {}
    for key in _random_keys(rng, chart, degree, max_components, increasing=True):
        comps[(key, ())] = random_poly(rng, chart, **poly_opts)
    return TensorField(chart, degree, 0, {k: v for k, v in comps.items() if v},
                       contra_sym="antisym" if degree >= 2 else "none")


def random_vv_form(rng: random.Random, chart: Chart, degree: int,
                   max_components: int = 2, **poly_opts) -> TensorField:
    """Random (1, degree) vector-valued form, antisymmetric in the form slots."""
    comps = {}
    keys = _random_keys(rng, chart, degree, max_components, increasing=True)
    for key in keys:
        m = rng.randrange(chart.dim)
        comps[((m,), key)] = random_poly(rng, chart, **poly_opts)
    if degree == 0:
        for _ in range(rng.randint(1, max_components)):
            m = rng.randrange(chart.dim)
            comps[((m,), ())] = random_poly(rng, chart, **poly_opts)
    return TensorField(chart, 1, degree, {k: v for k, v in comps.items() if v},
                       cov_sym="antisym" if degree >= 2 else "none")


def random_tensor(rng: random.Random, chart: Chart, q: int, p: int,
                  max_components: int = 2, **poly_opts) -> TensorField:
    comps = {}
    for _ in range(rng.randint(1, max_components)):
        up = tuple(rng.randrange(chart.dim) for _ in range(q))
        down = tuple(rng.randrange(chart.dim) for _ in range(p))
        poly = random_poly(rng, chart, **poly_opts)
        prev = comps.get((up, down))
        comps[(up, down)] = poly if prev is None else prev + poly
    return TensorField(chart, q, p, {k: v for k, v in comps.items() if v})
