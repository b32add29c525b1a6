"""Classical brackets and the lift compatibility that motivates them.

Run: python3 demos/02_brackets.py
"""

from gradcalc.calculus import (exterior_derivative, fn_bracket, lie_bracket,
                               lie_derivative, nijenhuis_torsion,
                               schouten_bracket)
from gradcalc.charts import make_chart
from gradcalc.lifts import LiftContext, lift_tensor
from gradcalc.poly import Poly
from gradcalc.render import render_tensor
from gradcalc.tensor import (compose_11, coordinate_one_form,
                             coordinate_vector_field, identity_tensor,
                             insert_multivector, tensor_product, wedge)

m = make_chart(["x", "y"], [0, 0], label="M")
x, y = Poly.variable(m, 0), Poly.variable(m, 1)
dx, dy = coordinate_one_form(m, "x"), coordinate_one_form(m, "y")
ex, ey = coordinate_vector_field(m, "x"), coordinate_vector_field(m, "y")

X = ex * x
Y = ey * y
print("[x d/dx, y d/dy] =", render_tensor(lie_bracket(X, Y)))

# Cartan magic formula, checked symbolically
w = wedge(dx, dy) * x
lhs = lie_derivative(X, w)
rhs = insert_multivector(X, exterior_derivative(w)) \
    + exterior_derivative(insert_multivector(X, w))
print("L_X w - (i_X d + d i_X) w =", render_tensor(lhs - rhs))

# the Schouten bracket of a bivector with itself detects Poisson
lam = wedge(ex, ey) * (Poly.const(m, 1) + x * y)
print("[L, L]_S =", render_tensor(schouten_bracket(lam, lam)))

# standard almost complex structure: zero torsion, [N,N]_FN = 2 T_N
N = tensor_product(ey, dx) - tensor_product(ex, dy)
print("T_N =", render_tensor(nijenhuis_torsion(N)))
print("[N, N]_FN =", render_tensor(fn_bracket(N, N)))
print("N.N + I =", render_tensor(compose_11(N, N) + identity_tensor(m)))

# every bracket commutes with lifting up to the level shift lambda+mu-r
r = 2
ctx = LiftContext(m, r)
for lam_i in range(r + 1):
    for mu in range(r + 1):
        got = lie_bracket(lift_tensor(X, lam_i, ctx), lift_tensor(Y, mu, ctx))
        want = lift_tensor(lie_bracket(X, Y), lam_i + mu - r, ctx)
        assert got == want
print("lie bracket commutes with every (lambda, mu) lift pair at r=2")
