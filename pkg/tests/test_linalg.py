from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosetiq.gf import field_new
from cosetiq.linalg import (MatF, Subspace, complete_to_basis, enumerate_subspaces, gaussian_binomial,
                            hyperplanes, image, invert, kernel, rank, rref, rref_bits, solve_coords)


def span_size(field, rows):
    """Brute force: number of distinct linear combinations of the rows."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return 1
    out = set()
    for coeffs in product(range(field.q), repeat=len(rows)):
        v = [0] * len(rows[0])
        for c, r in zip(coeffs, rows):
            v = [field.add(x, field.mul(c, y)) for x, y in zip(v, r)]
        out.add(tuple(v))
    return len(out)


def matrices(qs=(2, 3, 4), max_rows=3, max_cols=4):
    @st.composite
    def build(draw):
        q = draw(st.sampled_from(qs))
        r = draw(st.integers(1, max_rows))
        c = draw(st.integers(1, max_cols))
        entries = draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c))
        return MatF(field_new(q), np.array(entries, dtype=np.uint8).reshape(r, c))
    return build()


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_span_size(m):
    f = m.field
    assert f.q ** rank(m) == span_size(f, m.as_tuple())


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rref_is_canonical(m):
    red, r = rref(m)
    # same row space, idempotent, leading ones
    assert Subspace(m.field, m.cols, m.entries) == Subspace(m.field, m.cols, red.entries)
    assert rref(red)[0] == red
    for row in red.entries[:r]:
        nz = np.nonzero(row)[0]
        assert row[nz[0]] == 1
    assert not red.entries[r:].any()


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.cols
    assert image(m).dim == rank(m)
    for v in kernel(m).basis:
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices(qs=(2,), max_rows=4, max_cols=6))
def test_bit_rref_agrees(m):
    bits = rref_bits(m.bitrows())
    red, r = rref(m)
    assert bits == list(MatF(m.field, red.entries[:r]).bitrows()) if r else bits == []


def test_kernel_example():
    f = field_new(2)
    m = MatF(f, [[1, 1, 0], [0, 1, 1]])
    assert kernel(m) == Subspace.span(f, 3, [(1, 1, 1)])


@pytest.mark.parametrize("q", [2, 3, 4])
def test_invert_round_trip(q):
    f = field_new(q)
    rng = np.random.default_rng(q)
    for _ in range(20):
        m = MatF(f, rng.integers(0, q, size=(3, 3)))
        inv = invert(m)
        if rank(m) < 3:
            assert inv is None
        else:
            assert m @ inv == MatF.identity(f, 3) == inv @ m


def test_invert_singular():
    f = field_new(3)
    assert invert(MatF(f, [[1, 2], [2, 1]])) is None


def test_complete_to_basis():
    f = field_new(2)
    s = Subspace.span(f, 3, [(0, 1, 1)])
    b = complete_to_basis(s)
    assert b.column(0) == (0, 1, 1)
    assert b.column(1) == (1, 0, 0)
    assert b.column(2) == (0, 0, 1)
    assert invert(b) is not None


@pytest.mark.parametrize("q,amb", [(2, 3), (3, 3), (2, 4), (4, 2)])
def test_complete_to_basis_invertible(q, amb):
    f = field_new(q)
    for s in enumerate_subspaces(f, amb):
        b = complete_to_basis(s)
        assert invert(b) is not None
        assert Subspace(f, amb, b.entries.T[:s.dim]) == s


def test_solve_coords():
    f = field_new(3)
    cols = MatF.from_columns(f, [(1, 0, 2), (0, 1, 1)])
    c = solve_coords(f, cols, (2, 1, 2))
    assert cols.apply(c) == (2, 1, 2)
    assert solve_coords(f, cols, (0, 0, 1)) is None


@pytest.mark.parametrize("q,amb", [(2, 3), (2, 4), (3, 3), (4, 2), (5, 2)])
def test_subspace_counts(q, amb):
    f = field_new(q)
    for d in range(amb + 1):
        subs = list(enumerate_subspaces(f, amb, d))
        assert len(subs) == len(set(subs)) == gaussian_binomial(amb, d, q)
    assert len(hyperplanes(f, amb)) == gaussian_binomial(amb, amb - 1, q)


def test_intersection_and_sum():
    f = field_new(2)
    planes = list(enumerate_subspaces(f, 3, 2))
    for a in planes:
        for b in planes:
            inter = a.intersect(b)
            assert (a + b).dim + inter.dim == a.dim + b.dim
            assert all(a.contains(v) and b.contains(v) for v in inter.basis)


def test_subspace_vectors():
    f = field_new(3)
    s = Subspace.span(f, 3, [(1, 2, 0), (0, 1, 1)])
    vecs = set(s.vectors())
    assert len(vecs) == 9
    assert all(s.contains(v) for v in vecs)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_key_round_trip(q):
    f = field_new(q)
    rng = np.random.default_rng(7)
    for _ in range(10):
        m = MatF(f, rng.integers(0, q, size=(2, 3)))
        assert MatF.from_key(f, m.key(), 2, 3) == m
    with pytest.raises(ValueError):
        MatF.from_key(f, q**6, 2, 3)


def test_matf_rejects_bad_codes():
    with pytest.raises(ValueError):
        MatF(field_new(3), [[0, 3]])
