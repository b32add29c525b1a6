"""Higher tangent lifts of functions, fields and forms.

Run: python3 demos/01_lifts.py
"""

from gradcalc.charts import make_chart
from gradcalc.lifts import LiftContext, lift_function, lift_tensor
from gradcalc.poly import Poly
from gradcalc.render import render_poly, render_tensor
from gradcalc.tensor import coordinate_one_form, coordinate_vector_field

# a plain 2-dimensional chart, both weights zero
m = make_chart(["x", "y"], [0, 0], label="M")
x = Poly.variable(m, 0)

# order-2 prolongation: adjoined jet variables x_1, x_2, y_1, y_2
ctx = LiftContext(m, 2)
print("prolonged chart:", ", ".join(ctx.total.names))

# the lift of a function extracts one Taylor coefficient of f(x + t x_1 + t^2 x_2)
f = x * x
for lam in range(3):
    print(f"(x^2)^({lam}) =", render_poly(lift_function(f, lam, ctx)))

# vector fields lift against the jet index, one-forms with it
vf = coordinate_vector_field(m, "y") * x
form = coordinate_one_form(m, "y") * x
for lam in range(3):
    print(f"(x d/dy)^({lam}) =", render_tensor(lift_tensor(vf, lam, ctx)))
for lam in range(3):
    print(f"(x dy)^({lam})   =", render_tensor(lift_tensor(form, lam, ctx)))

# lambda = r is the complete lift; lambda = 0 the vertical one
