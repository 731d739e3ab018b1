from itertools import product

import numpy as np
import pytest

from cosetiq.gf import field_new
from cosetiq.groups import (BudgetExceeded, HSubgroup, enumerate_gl, gamma_involution, gl_order,
                            gl_order_bracket, h_order, involution_choices, maps_subspace,
                            pointwise_stabilizer, xi_subgroup, fixes_pointwise)
from cosetiq.linalg import MatF, Subspace, enumerate_subspaces, hyperplanes, invert, rank


def brute_gl(m, q):
    f = field_new(q)
    out = []
    for entries in product(range(q), repeat=m * m):
        g = MatF(f, np.array(entries, dtype=np.uint8).reshape(m, m))
        if rank(g) == m:
            out.append(g.key())
    return sorted(out)


@pytest.mark.parametrize("m", range(0, 6))
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_gl_order_forms_agree(m, q):
    assert gl_order(m, q) == gl_order_bracket(m, q)


def test_gl_order_values():
    assert gl_order(2, 2) == 6
    assert gl_order(3, 2) == 168
    assert gl_order(4, 2) == 20160
    assert gl_order(2, 3) == 48


@pytest.mark.parametrize("m,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (2, 4)])
def test_enumerate_matches_brute_force(m, q):
    g = enumerate_gl(m, q)
    assert list(int(k) for k in g.elements) == brute_gl(m, q)
    assert len(g) == gl_order(m, q)


@pytest.mark.parametrize("m,q", [(3, 2), (2, 3)])
def test_group_closed_under_product_and_inverse(m, q):
    g = enumerate_gl(m, q)
    rng = np.random.default_rng(0)
    for _ in range(30):
        a = g.matrix(int(rng.integers(len(g))))
        b = g.matrix(int(rng.integers(len(g))))
        assert a @ b in g
        assert invert(a) in g


def test_budget_refusal():
    with pytest.raises(BudgetExceeded) as err:
        enumerate_gl(5, 2, budget=1000)
    assert err.value.required == gl_order(5, 2)


@pytest.mark.parametrize("alpha,n,q", [(1, 1, 2), (1, 2, 2), (2, 2, 2), (1, 1, 3)])
def test_h_subgroup(alpha, n, q):
    h = HSubgroup(alpha, n, field_new(q))
    elems = list(h.elements())
    assert len(elems) == len(set(elems)) == h_order(alpha, n, q) == h.order()
    assert all(h.contains(x) for x in elems)
    gl = enumerate_gl(alpha + n, q)
    assert sum(h.contains(x) for x in gl) == h.order()


@pytest.mark.parametrize("alpha,q,expected", [(1, 2, 1), (2, 2, 2), (3, 2, 4), (2, 3, 6)])
def test_xi_counts(alpha, q, expected):
    # #Xi(L) = (q - 1) q^(alpha - 1)
    f = field_new(q)
    for L in hyperplanes(f, alpha):
        xs = xi_subgroup(L)
        assert len(xs) == len(set(xs)) == expected
        assert all(fixes_pointwise(g, L) for g in xs)


def test_xi_requires_hyperplane():
    f = field_new(2)
    with pytest.raises(ValueError):
        xi_subgroup(Subspace.zero(f, 3))


@pytest.mark.parametrize("alpha,q", [(2, 2), (2, 3), (3, 2)])
def test_pointwise_stabilizer_order(alpha, q):
    f = field_new(q)
    for N in enumerate_subspaces(f, alpha):
        k = alpha - N.dim
        stab = pointwise_stabilizer(N)
        assert len(stab) == gl_order(k, q) * q**(N.dim * k)
        assert all(fixes_pointwise(g, N) for g in stab)


@pytest.mark.parametrize("alpha,q", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_gamma_involution(alpha, q):
    f = field_new(q)
    ident = MatF.identity(f, alpha)
    hyps = hyperplanes(f, alpha)
    for L in hyps:
        for M in hyps:
            if L == M:
                continue
            g = gamma_involution(L, M)
            assert g @ g == ident
            assert maps_subspace(g, L) == M and maps_subspace(g, M) == L
            assert fixes_pointwise(g, L.intersect(M))


def test_involution_choices_contain_pinned():
    f = field_new(3)
    hyps = hyperplanes(f, 2)
    L, M = hyps[0], hyps[1]
    choices = involution_choices(L, M, L.intersect(M))
    assert gamma_involution(L, M) in choices
