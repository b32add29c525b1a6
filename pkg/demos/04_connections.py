"""Linear connections on the tangent bundle and their higher lifts.

Run: python3 demos/04_connections.py
"""

from gradcalc.charts import make_chart
from gradcalc.lifts import (LiftContext, covariant_derivative,
                            horizontal_fields, lift_linear_connection,
                            lift_tensor, tangent_connection)
from gradcalc.poly import Poly
from gradcalc.render import render_poly, render_tensor
from gradcalc.tensor import coordinate_vector_field

m = make_chart(["x", "y"], [0, 0], label="M")

# one nonzero Christoffel symbol on the base: Gamma^y_xx = 1
conn = tangent_connection(m, {(0, 1, 0): Poly.const(m, 1)})
print("connection chart:", ", ".join(conn.chart.names))
for (k, a, b), g in sorted(conn.gamma.items()):
    names = conn.chart.names
    print(f"Gamma[{names[k]}; {names[a]}, {names[b]}] =", render_poly(g))

# horizontal lifts of the base frame
for h in horizontal_fields(conn):
    print("horizontal:", render_tensor(h))

# lifting the connection doubles the chart again and spreads the symbol
ctx_vb = LiftContext(conn.chart, 1)
lifted = lift_linear_connection(conn, ctx_vb)
names = ctx_vb.total.names
print("lifted symbols:")
for (k, a, b), g in sorted(lifted.gamma.items()):
    print(f"  Gamma[{names[k]}; {names[a]}, {names[b]}] =", render_poly(g))

# the lifted covariant derivative reproduces lifts of base derivatives
ctx = LiftContext(m, 1)
X = coordinate_vector_field(m, "x") * Poly.variable(m, 0)
Y = coordinate_vector_field(m, "x")
base = covariant_derivative(conn, X, Y)
print("nabla_X Y =", render_tensor(base))
for lam in (0, 1):
    for mu in (0, 1):
        got = covariant_derivative(lifted, lift_tensor(X, lam, ctx),
                                   lift_tensor(Y, mu, ctx))
        assert got == lift_tensor(base, lam + mu - 1, ctx)
print("lifted derivative matches the lift of the derivative at r=1")
