"""Structure constants as polynomials in t = q^n, and where the generic algebra can fail to be semisimple.

Run: python3 demos/03_generic_algebra.py
"""

from cosetiq.generic import check_associativity, check_generic_relations, discover, semisimplicity_locus

for alpha, q in [(1, 2), (1, 3), (2, 2)]:
    d = discover(alpha, q)
    ga = d.algebra
    print(f"alpha={alpha} q={q}: samples n={d.sample_ns}, held-out n={d.holdout_n}, max degree {ga.max_degree()}")
    for line in d.history:
        print("   ", line)
    print("    associativity", "PASS" if check_associativity(ga).passed else "FAIL")
    print("   ", check_generic_relations(ga).summary())
    rep = semisimplicity_locus(ga)
    print("    det G(t) =", rep.factorization)
    print("    exceptional t:", [str(r) for r, _ in rep.rational_roots] + [s for s, _ in rep.irrational_roots])
