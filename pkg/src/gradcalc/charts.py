"""Graded coordinate charts.

A chart is an ordered list of variable names together with one integer
weight per grading component for every variable.  A chart with grading
count d assigns each variable a weight vector in Z^d; the homogeneity
structure h_t acts on a variable of weight w by x |-> t^w x, one scaling
parameter per component.  Components flagged N-graded only carry weights
>= 0; Z-graded components may carry negative weights (duals).

Charts are value objects compared by identity.  Every constructor below
returns a fresh chart; combining polynomials or tensors from two different
chart objects is an error even if their variable tables agree, because the
variables denote coordinates of distinct spaces.

Naming conventions used by the derived-chart constructors (these names are
what the DSL and the renderer show):

* prolongation level mu > 0 of x  ->  "x_1", "x_2", ...  (level 0 keeps "x")
* tangent-fibre velocity of x     ->  "x_dot"
* cotangent-fibre momentum of x   ->  "p_x"
* dual of a fibre coordinate z    ->  "p_z"
"""

from __future__ import annotations

from .errors import GradcalcError

__all__ = [
    "Chart",
    "make_chart",
    "prolong_chart",
    "tangent_chart",
    "cotangent_chart",
    "phase_shifted_cotangent_chart",
    "shifted_dual_grl_chart",
    "vb_split",
]


class Chart:
    """Ordered variable table with per-variable integer weight vectors."""

    __slots__ = ("names", "weights", "n_graded", "label", "_index")

    def __init__(self, names: tuple[str, ...], weights: tuple[tuple[int, ...], ...],
                 n_graded: tuple[bool, ...], label: str = ""):
        self.names = names
        self.weights = weights
        self.n_graded = n_graded
        self.label = label
        self._index = {n: i for i, n in enumerate(names)}

    # Charts compare and hash by identity (object default); no __eq__ override.

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def grading_count(self) -> int:
        return len(self.n_graded)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise GradcalcError(f"chart has no variable named {name!r}") from None

    def weight(self, var: int, component: int = 0) -> int:
        return self.weights[var][component]

    def degree(self, component: int = 0) -> int:
        """Largest absolute weight in the component; 0 for an empty chart."""
        if not self.weights:
            return 0
        return max(abs(w[component]) for w in self.weights)

    def component_weights(self, component: int = 0) -> tuple[int, ...]:
        return tuple(w[component] for w in self.weights)

    def __repr__(self) -> str:
        label = self.label or "chart"
        vars_part = ", ".join(
            f"{n}:{w[0] if len(w) == 1 else w}" for n, w in zip(self.names, self.weights))
        return f"<{label} {{{vars_part}}}>"


_NAME_OK = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"


def make_chart(names, weights, n_graded=None, label: str = "") -> Chart:
    """Build a chart from variable names and weight vectors.

    weights maps each variable to either a single int (grading count 1) or
    a sequence of ints, one per grading component.  n_graded gives one flag
    per component; by default a component is flagged N-graded exactly when
    all its weights are >= 0.
    """
    names = tuple(names)
    if len(set(names)) != len(names):
        raise GradcalcError("duplicate variable name in chart")
    for n in names:
        if not n or n[0].isdigit() or any(c not in _NAME_OK for c in n):
            raise GradcalcError(f"bad variable name {n!r}")
    rows = []
    for w in weights:
        if isinstance(w, int):
            rows.append((w,))
        else:
            rows.append(tuple(int(c) for c in w))
    if len(rows) != len(names):
        raise GradcalcError("one weight vector required per variable")
    d = len(rows[0]) if rows else (len(n_graded) if n_graded else 1)
    if any(len(r) != d for r in rows):
        raise GradcalcError("inconsistent weight vector lengths")
    if n_graded is None:
        flags = tuple(all(r[c] >= 0 for r in rows) for c in range(d))
    else:
        flags = tuple(bool(f) for f in n_graded)
        if len(flags) != d:
            raise GradcalcError("one N-graded flag required per grading component")
        for c, f in enumerate(flags):
            if f and any(r[c] < 0 for r in rows):
                raise GradcalcError(f"negative weight in N-graded component {c}")
    return Chart(names, tuple(rows), flags, label)


def _fresh_names(base: Chart, new_names: list[str]) -> None:
    taken = set(base.names)
    for n in new_names:
        if n in taken:
            raise GradcalcError(f"derived variable name {n!r} collides with an existing one")
        taken.add(n)


def prolong_chart(chart: Chart, r: int) -> Chart:
    """Order-r prolongation.

    Every variable x of weight vector w acquires copies x_mu for mu = 0..r
    (x_0 keeps the bare name) with weight vector w extended by a new
    N-graded component of weight mu.  Level blocks are appended in order,
    so the original variables sit at their old indices and level mu of
    variable i sits at index mu*dim + i.
    """
    if r < 0:
        raise GradcalcError("prolongation order must be >= 0")
    names = list(chart.names)
    weights = [w + (0,) for w in chart.weights]
    added = []
    for mu in range(1, r + 1):
        for i, n in enumerate(chart.names):
            added.append(f"{n}_{mu}")
            weights.append(chart.weights[i] + (mu,))
    _fresh_names(chart, added)
    names.extend(added)
    return Chart(tuple(names), tuple(weights), chart.n_graded + (True,),
                 f"{chart.label or 'chart'}^T{r}")


def tangent_chart(chart: Chart) -> Chart:
    """Tangent prolongation: appends velocities x_dot.

    A velocity carries the same graded weights as its base variable plus
    weight 1 in a new N-graded vector-bundle component.
    """
    added = [f"{n}_dot" for n in chart.names]
    _fresh_names(chart, added)
    names = chart.names + tuple(added)
    weights = tuple(w + (0,) for w in chart.weights) + \
        tuple(w + (1,) for w in chart.weights)
    return Chart(names, weights, chart.n_graded + (True,),
                 f"T{chart.label or 'chart'}")


def cotangent_chart(chart: Chart) -> Chart:
    """Cotangent prolongation: appends momenta p_x.

    A momentum carries minus the graded weights of its base variable plus
    weight 1 in a new vector-bundle component; graded components holding a
    nonzero weight therefore become Z-graded.
    """
    added = [f"p_{n}" for n in chart.names]
    _fresh_names(chart, added)
    names = chart.names + tuple(added)
    weights = tuple(w + (0,) for w in chart.weights) + \
        tuple(tuple(-c for c in w) + (1,) for w in chart.weights)
    flags = tuple(all(r[c] >= 0 for r in weights) for c in range(chart.grading_count)) + (True,)
    return Chart(names, weights, flags, f"T*{chart.label or 'chart'}")


def phase_shifted_cotangent_chart(chart: Chart, k: int, component: int = 0) -> Chart:
    """Shifted cotangent prolongation T*[k].

    Momentum p_x gets weight k - w in the chosen graded component (other
    components are negated as in cotangent_chart) plus weight 1 in a new
    vector-bundle component.  Requires k >= every weight in the component,
    so the shifted component stays N-graded.
    """
    if component < 0 or component >= chart.grading_count:
        raise GradcalcError("no such grading component")
    top = max((w[component] for w in chart.weights), default=0)
    if k < top:
        raise GradcalcError(
            f"shift k={k} is smaller than the top weight {top}; component would leave the N-grading")
    added = [f"p_{n}" for n in chart.names]
    _fresh_names(chart, added)
    names = chart.names + tuple(added)
    mom = []
    for w in chart.weights:
        row = tuple(k - c if j == component else -c for j, c in enumerate(w))
        mom.append(row + (1,))
    weights = tuple(w + (0,) for w in chart.weights) + tuple(mom)
    flags = tuple(all(r[c] >= 0 for r in weights) for c in range(chart.grading_count)) + (True,)
    return Chart(names, weights, flags, f"T*[{k}]{chart.label or 'chart'}")


def vb_split(chart: Chart, vb_component: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Indices of (base, fibre) variables of a vector-bundle component.

    The component must be N-graded with weights in {0, 1}; weight-0
    variables are the base, weight-1 variables the fibre.
    """
    if vb_component < 0 or vb_component >= chart.grading_count:
        raise GradcalcError("no such grading component")
    ws = chart.component_weights(vb_component)
    if any(w not in (0, 1) for w in ws):
        raise GradcalcError(
            f"component {vb_component} is not a vector-bundle grading (weights must lie in {{0,1}})")
    base = tuple(i for i, w in enumerate(ws) if w == 0)
    fibre = tuple(i for i, w in enumerate(ws) if w == 1)
    return base, fibre


def shifted_dual_grl_chart(chart: Chart, k: int, vb_component: int,
                           graded_component: int = 0) -> Chart:
    """Degree-k dual of a graded-linear chart.

    The chart must carry a vector-bundle grading component (weights in
    {0,1}).  Base variables (VB weight 0) keep their names and weights.
    Each fibre variable z of graded weight s is replaced by a dual
    variable p_z of graded weight k - s, keeping VB weight 1 and all other
    graded components negated.  Applying the construction twice restores
    all weights (names gain a p_ prefix each time).
    """
    base, fibre = vb_split(chart, vb_component)
    if graded_component == vb_component or not (0 <= graded_component < chart.grading_count):
        raise GradcalcError("graded_component must name a grading component other than the VB one")
    fibre_set = set(fibre)
    added = [f"p_{chart.names[i]}" for i in fibre]
    _fresh_names(chart, added)
    names = []
    rows = []
    for i, w in enumerate(chart.weights):
        if i in fibre_set:
            names.append(f"p_{chart.names[i]}")
            rows.append(tuple(
                1 if j == vb_component else
                (k - c if j == graded_component else -c)
                for j, c in enumerate(w)))
        else:
            names.append(chart.names[i])
            rows.append(w)
    d = chart.grading_count
    flags = tuple(all(r[c] >= 0 for r in rows) for c in range(d))
    return Chart(tuple(names), tuple(rows), flags, f"({chart.label or 'chart'})*[{k}]")
