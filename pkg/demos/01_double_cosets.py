"""Double cosets of H(n) in GL(alpha + n, F_q) and the partial bijections that label them.

Run: python3 demos/01_double_cosets.py
"""

from cosetiq import decompose
from cosetiq.cosets import check_decomposition, kappa_rho, pi, representative
from cosetiq.groups import gl_order
from cosetiq.pbl import pbl_count, sigma_rho

alpha, n, q = 2, 2, 2

print(f"GL({alpha + n},{q}) has {gl_order(alpha + n, q)} elements")
print("sigma (labels per corank):", [sigma_rho(alpha, q, r) for r in range(alpha + 1)])
print("kappa (coset size per corank):", [kappa_rho(alpha, n, q, r) for r in range(alpha + 1)])

dec = decompose(alpha, n, q)
chk = check_decomposition(dec)
print(f"{len(dec.buckets)} buckets, #PBL = {pbl_count(alpha, q)}, bijection {chk['bijection']}, "
      f"size law {chk['size_law']}")

# every label has a pinned representative whose projection is the label again
for b in dec.buckets[:4]:
    g = representative(b.label, n)
    print(b.label.key(), b.size, "rep ok" if pi(g, alpha, n) == b.label else "rep BAD")
