import numpy as np
import pytest
import sympy

from cosetiq.gf import field_new, least_irreducible

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32, 49, 64]


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_field_axioms_exhaustive(q):
    f = field_new(q)
    A, M = f.add_table.astype(np.int64), f.mul_table.astype(np.int64)
    a = np.arange(q)
    # commutativity
    assert (A == A.T).all() and (M == M.T).all()
    # identities
    assert (A[0] == a).all() and (M[1] == a).all() and (M[0] == 0).all()
    # associativity: (a+b)+c == a+(b+c) for all triples
    assert (A[A[:, :, None], a[None, None, :]] == A[a[:, None, None], A[None, :, :]]).all()
    assert (M[M[:, :, None], a[None, None, :]] == M[a[:, None, None], M[None, :, :]]).all()
    # distributivity a(b+c) = ab + ac
    lhs = M[a[:, None, None], A[None, :, :]]
    rhs = A[M[:, :, None], M[:, None, :]]
    assert (lhs == rhs).all()
    # inverses
    for x in range(1, q):
        assert f.mul(x, f.inv(x)) == 1
        assert f.add(x, f.neg(x)) == 0


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_frobenius(q):
    f = field_new(q)
    assert all(f.pow(x, q) == x for x in range(q))


def test_small_examples():
    f2, f3, f4 = field_new(2), field_new(3), field_new(4)
    assert f2.add(0, 1) == 1 and f2.mul(1, 1) == 1
    assert f3.mul(2, 2) == 1
    assert all(f4.pow(x, 3) == 1 for x in range(1, 4))


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 65, 81, 128])
def test_rejects_bad_q(q):
    with pytest.raises(ValueError):
        field_new(q)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_modulus_is_least_irreducible(p, k):
    # independent oracle: scan monic polynomials by integer code with sympy's irreducibility test
    x = sympy.Symbol("x")
    expected = None
    for code in range(p**k):
        coeffs = [(code // p**i) % p for i in range(k)] + [1]
        poly = sympy.Poly(sum(c * x**i for i, c in enumerate(coeffs)), x, modulus=p)
        if poly.is_irreducible:
            expected = coeffs
            break
    assert least_irreducible(p, k) == expected


def test_tables_read_only_and_hashable():
    f = field_new(9)
    with pytest.raises(ValueError):
        f.add_table[0, 0] = 1
    assert field_new(9) is f
    assert {f: 1}[field_new(9)] == 1
