from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cosetiq.filtration import Filtration, RationalSpan, filtration_report, hyperplane_decompositions
from cosetiq.gf import field_new
from cosetiq.linalg import Subspace, enumerate_subspaces, hyperplanes
from tests.conftest import context


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rational_span_rank(rows):
    span = RationalSpan(4)
    for r in rows:
        span.add(r)
    assert span.rank == sympy.Matrix(rows).rank()
    for r in rows:
        assert span.contains(r)


def test_rational_span_membership():
    span = RationalSpan(3)
    assert span.add([1, 2, 0])
    assert not span.add([2, 4, 0])
    assert span.contains([Fraction(1, 2), 1, 0])
    assert not span.contains([0, 0, 1])


@pytest.mark.parametrize("alpha,n,q,dims", [(1, 1, 2, [1, 1]), (2, 2, 2, [6, 9, 1]),
                                            (1, 1, 3, [2, 1]), (2, 3, 2, [6, 9, 1])])
def test_report_passes(alpha, n, q, dims):
    rep = filtration_report(context(alpha, n, q))
    assert rep.passed, rep.summary()
    assert rep.dims_gr == dims == rep.sigma


def test_alpha2_checks_are_exercised():
    rep = filtration_report(context(2, 2, 2))
    for name in ("th:filtration.c", "th:filtration.d", "eq:l1l2", "lemma:vanishing", "th:filtration.e"):
        assert rep.check(name).instances > 0, name
        assert rep.check(name).passed, name


def test_generator_degrees():
    ctx = context(2, 2, 2)
    fil = Filtration(ctx)
    f = ctx.field
    assert fil.degree_of(ctx.unit()) == 0
    for L in hyperplanes(f, 2):
        assert fil.degree_of(ctx.theta(L)) == 1
    assert fil.degree_of(ctx.theta(Subspace.zero(f, 2))) == 2
    assert fil.dims() == [6, 15, 16]


def test_theta_products_congruent():
    # theta(L1) theta(L2) =_2 theta(L1 & L2) for distinct lines
    ctx = context(2, 2, 2)
    fil = Filtration(ctx)
    hs = hyperplanes(ctx.field, 2)
    zero = Subspace.zero(ctx.field, 2)
    for a in hs:
        for b in hs:
            if a != b:
                assert fil.congruent(ctx.theta(a) * ctx.theta(b), ctx.theta(zero), 2)


@pytest.mark.parametrize("q,alpha", [(2, 2), (2, 3), (3, 2)])
def test_hyperplane_decompositions(q, alpha):
    f = field_new(q)
    for N in enumerate_subspaces(f, alpha):
        tups = list(hyperplane_decompositions(N))
        assert tups
        assert all(len(t) == N.codim for t in tups)
    zero = Subspace.zero(f, alpha)
    assert len(list(hyperplane_decompositions(zero, limit=2))) == 2
