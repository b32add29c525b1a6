"""Decision procedures for weighted structures, with witnesses on failure.

Run: python3 demos/03_weighted_structures.py
"""

from gradcalc.charts import make_chart
from gradcalc.checkers import (Distribution, is_involutive,
                               is_weighted_contact, is_weighted_distribution,
                               is_weighted_pn, is_weighted_poisson)
from gradcalc.lifts import LiftContext, lift_distribution, lift_tensor
from gradcalc.poly import Poly
from gradcalc.tensor import (coordinate_one_form, coordinate_vector_field,
                             identity_tensor, tensor_product, wedge)


def show(label, rep):
    mark = "PASS" if rep.verdict else "FAIL"
    extra = f" ({rep.witness})" if rep.witness else ""
    print(f"{label}: {mark}{extra}")


# the complete lift of a Poisson bivector is weighted Poisson of weight r
m = make_chart(["x", "y"], [0, 0], label="M")
ex, ey = coordinate_vector_field(m, "x"), coordinate_vector_field(m, "y")
lam = wedge(ex, ey) * Poly.variable(m, 0)
ctx = LiftContext(m, 2)
lifted = lift_tensor(lam, 2, ctx)
show("lifted bivector, weight 2", is_weighted_poisson(lifted, 2, component=1))

# a bivector that is weighted but fails Jacobi, with the offending component
w = make_chart(["x", "y", "z"], [1, 1, 2], label="W")
wx, wy, wz = (coordinate_vector_field(w, v) for v in "xyz")
bad = wedge(wx, wy) + wedge(wx, wz) * Poly.variable(w, 0)
show("deformed bivector", is_weighted_poisson(bad, 2))

# Poisson-Nijenhuis pair on the plane: constant symplectic + identity recursion
show("(L, I) pair", is_weighted_pn(wedge(ex, ey), identity_tensor(m), 0))

# the same recursion deformed off-diagonal breaks the concomitant in dim 3
e3 = make_chart(["x", "y", "z"], [0, 0, 1], label="E")
e3x, e3z = coordinate_vector_field(e3, "x"), coordinate_vector_field(e3, "z")
n = identity_tensor(e3) + tensor_product(e3z, coordinate_one_form(e3, "y")) \
    * Poly.variable(e3, 2)
show("(L, I + z d/dz ox dy) pair", is_weighted_pn(wedge(e3x, e3z), n, 1))

# contact form of weight 2 on a weighted 3-space
c = make_chart(["x", "y", "z"], [1, 1, 2], label="C")
alpha = coordinate_one_form(c, "z") \
    + coordinate_one_form(c, "y") * Poly.variable(c, 0)
show("dz + x dy, weight 2", is_weighted_contact(alpha, 2, n=1))

# involutive and non-involutive distributions
f3 = make_chart(["x", "y", "z"], [0, 0, 0], label="F")
fx, fy, fz = (coordinate_vector_field(f3, v) for v in "xyz")
good = Distribution(f3, (fx, fy * Poly.variable(f3, 0)))
heis = Distribution(f3, (fx + fz * Poly.variable(f3, 1), fy))
show("span{d/dx, x d/dy}", is_involutive(good, seed=0))
show("span{d/dx + y d/dz, d/dy}", is_involutive(heis, seed=0))
lifted_d = lift_distribution(good, LiftContext(f3, 1))
show("lifted distribution weighted",
     is_weighted_distribution(lifted_d, component=1, seed=0))
