"""The convolution algebra at (alpha, n, q) = (2, 2, 2): generators, relations and the filtration.

Run: python3 demos/02_relations.py
"""

from cosetiq import AlgebraContext
from cosetiq.algebra import m_report
from cosetiq.filtration import filtration_report
from cosetiq.linalg import Subspace, hyperplanes
from cosetiq.relations import theta_square_coeffs, verify_relations

ctx = AlgebraContext.build(2, 2, 2, method="quotient")
print(f"dim = {ctx.dim}, t = q^n = {ctx.t}")

L, M = hyperplanes(ctx.field, 2)[:2]
th = ctx.theta(L)
s, u = theta_square_coeffs(ctx.q, ctx.alpha, ctx.t)
print(f"theta(L)^2 = {s} theta(L) + {u} * (sum of a(h) over Xi(L))")
print("theta(L) theta(M) support:", [lam.key() for lam in (th * ctx.theta(M)).support()])
print("theta(0) =", ctx.theta(Subspace.zero(ctx.field, 2)))

rep = verify_relations(ctx)
print(rep.summary())
for fam in rep.families:
    print(f"  {fam.name}: {fam.instances} instances, {'PASS' if fam.passed else 'FAIL'}")

fil = filtration_report(ctx)
print(fil.summary())

m = m_report(ctx)
print("M(theta(L)) =", m["M(theta(L))"], "matches:", [k for k, v in m["formula_matches"].items() if v])
