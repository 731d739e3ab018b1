"""Enumeration of GL(m, F_q), the subgroup H(n), and pointwise stabilizers.

Group elements are stored as packed integer keys (see :meth:`MatF.key`).
Enumeration builds invertible matrices row by row, each row chosen outside
the span of the previous ones, with all partial matrices processed as one
numpy batch per step.  The output order is ascending key order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .gf import FieldContext, field_new
from .linalg import MatF, Subspace, complete_to_basis, invert

DEFAULT_BUDGET = 20_000_000


class BudgetExceeded(RuntimeError):
    """Refusal to enumerate more than the configured number of objects."""

    def __init__(self, what: str, required: int, budget: int):
        super().__init__(f"{what} needs {required} elements, budget is {budget}")
        self.what = what
        self.required = required
        self.budget = budget


def gl_order(m: int, q: int) -> int:
    """#GL(m, F_q) = (q^m - 1)(q^m - q)...(q^m - q^(m-1)); 1 for m = 0."""
    if m < 0:
        raise ValueError("matrix size must be non-negative")
    out = 1
    for i in range(m):
        out *= q**m - q**i
    return out


def q_bracket(q: int, m: int) -> int:
    """[q; m] = (q^m - 1)(q^(m-1) - 1)...(q - 1)."""
    out = 1
    for i in range(1, m + 1):
        out *= q**i - 1
    return out


def gl_order_bracket(m: int, q: int) -> int:
    return q_bracket(q, m) * q**(m * (m - 1) // 2)


def h_order(alpha: int, n: int, q: int) -> int:
    """#H(n) = #GL(n) * q^(alpha n)."""
    return gl_order(n, q) * q**(alpha * n)


# --- vectorized enumeration of linearly independent tuples ---------------

def codes_to_digits(codes: np.ndarray, q: int, length: int) -> np.ndarray:
    """Decode base-q vector codes (first coordinate most significant)."""
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (length,), dtype=np.uint8)
    c = codes.copy()
    for j in range(length - 1, -1, -1):
        c, d = np.divmod(c, q)
        out[..., j] = d
    return out


def digits_to_codes(digits: np.ndarray, q: int) -> np.ndarray:
    length = digits.shape[-1]
    weights = q ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return digits.astype(np.int64) @ weights


def _span_codes(field: FieldContext, vecs: np.ndarray) -> np.ndarray:
    """Codes of every linear combination of the k vectors in each row of ``vecs``.

    ``vecs`` has shape (N, k, L); the result has shape (N, q^k).
    """
    n_rows, k, length = vecs.shape
    q = field.q
    if q == 2:
        codes = digits_to_codes(vecs, 2)
        span = np.zeros((n_rows, 1), dtype=np.int64)
        for j in range(k):
            span = np.concatenate([span, span ^ codes[:, j:j + 1]], axis=1)
        return span
    span = np.zeros((n_rows, 1, length), dtype=np.uint8)
    for j in range(k):
        v = vecs[:, j, :]
        parts = [field.add_table[span, field.mul_table[c, v][:, None, :]] for c in range(q)]
        span = np.concatenate(parts, axis=1)
    return digits_to_codes(span, q)


def enumerate_independent(field: FieldContext, count: int, length: int,
                          budget: int = DEFAULT_BUDGET, what: str = "tuple enumeration") -> np.ndarray:
    """Packed keys of all linearly independent ``count``-tuples in F_q^length.

    A tuple (v_1, ..., v_count) is packed as the base-q^length number with v_1
    most significant, so the keys come out in ascending order.
    """
    q = field.q
    total = 1
    for i in range(count):
        total *= q**length - q**i
    if total > budget:
        raise BudgetExceeded(what, total, budget)
    if q ** (length * count) >= 2**63:
        raise ValueError("packed keys would overflow 64 bits")
    base = q**length
    keys = np.arange(1, base, dtype=np.int64) if count else np.zeros(1, dtype=np.int64)
    for j in range(1, count):
        # decode parents, mark their spans as forbidden
        parents = codes_to_digits(
            np.stack([(keys // base**(j - 1 - i)) % base for i in range(j)], axis=1), q, length)
        span = _span_codes(field, parents)
        allowed = np.ones((keys.size, base), dtype=bool)
        np.put_along_axis(allowed, span, False, axis=1)
        del span, parents
        parent_idx, new_code = np.nonzero(allowed)
        del allowed
        keys = keys[parent_idx] * base + new_code
    return keys


def keys_to_matrices(keys: np.ndarray, field: FieldContext, count: int, length: int) -> np.ndarray:
    """Expand packed tuple keys to digit arrays of shape (N, count, length)."""
    base = field.q**length
    vec_codes = np.stack([(keys // base**(count - 1 - i)) % base for i in range(count)], axis=1)
    return codes_to_digits(vec_codes, field.q, length)


@dataclass
class GroupTable:
    """All invertible m x m matrices over F_q, as sorted packed keys."""

    m: int
    field: FieldContext
    elements: np.ndarray

    def __len__(self) -> int:
        return int(self.elements.size)

    def index(self, key: int) -> int:
        """Position of a packed key; KeyError if it is not a group element."""
        i = int(np.searchsorted(self.elements, key))
        if i >= self.elements.size or int(self.elements[i]) != key:
            raise KeyError(key)
        return i

    def __contains__(self, g) -> bool:
        key = g.key() if isinstance(g, MatF) else int(g)
        try:
            self.index(key)
        except KeyError:
            return False
        return True

    def matrix(self, i: int) -> MatF:
        return MatF.from_key(self.field, int(self.elements[i]), self.m, self.m)

    def __iter__(self):
        for i in range(len(self)):
            yield self.matrix(i)

    def digits(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Entries of elements[start:stop] as an (N, m, m) code array."""
        return keys_to_matrices(self.elements[start:stop], self.field, self.m, self.m)


def enumerate_gl(m: int, q: int, budget: int = DEFAULT_BUDGET) -> GroupTable:
    """Every element of GL(m, F_q); refuses if #GL exceeds ``budget``."""
    field = field_new(q)
    keys = enumerate_independent(field, m, m, budget, what=f"GL({m},{q})")
    keys.setflags(write=False)
    return GroupTable(m, field, keys)


def random_gl(field: FieldContext, m: int, rng: np.random.Generator) -> MatF:
    while True:
        g = MatF(field, rng.integers(0, field.q, size=(m, m)))
        if invert(g) is not None:
            return g


def block_diag(field: FieldContext, *blocks: MatF) -> MatF:
    size = sum(b.rows for b in blocks)
    out = np.zeros((size, size), dtype=np.uint8)
    o = 0
    for b in blocks:
        out[o:o + b.rows, o:o + b.cols] = b.entries
        o += b.rows
    return MatF(field, out)


@dataclass(frozen=True)
class HSubgroup:
    """H(n): block matrices [[1, u], [0, v]] in GL(alpha + n) with v invertible."""

    alpha: int
    n: int
    field: FieldContext

    def order(self) -> int:
        return h_order(self.alpha, self.n, self.field.q)

    def contains(self, g: MatF) -> bool:
        a, n = self.alpha, self.n
        e = g.entries
        if g.shape != (a + n, a + n):
            return False
        if not np.array_equal(e[:a, :a], np.eye(a, dtype=np.uint8)) or e[a:, :a].any():
            return False
        return invert(g.block(a, a + n, a, a + n)) is not None

    def element(self, u: np.ndarray, v: MatF) -> MatF:
        a, n = self.alpha, self.n
        out = np.zeros((a + n, a + n), dtype=np.uint8)
        out[:a, :a] = np.eye(a, dtype=np.uint8)
        out[:a, a:] = u
        out[a:, a:] = v.entries
        return MatF(self.field, out)

    def elements(self):
        """Iterate over all of H(n) (u over F^(alpha x n), v over GL(n))."""
        gl = enumerate_gl(self.n, self.field.q)
        a, n, q = self.alpha, self.n, self.field.q
        for v in gl:
            for u in product(range(q), repeat=a * n):
                yield self.element(np.array(u, dtype=np.uint8).reshape(a, n), v)

    def random_element(self, rng: np.random.Generator) -> MatF:
        u = rng.integers(0, self.field.q, size=(self.alpha, self.n))
        return self.element(u, random_gl(self.field, self.n, rng))


def fixes_pointwise(g: MatF, s: Subspace) -> bool:
    return all(g.apply(v) == tuple(int(x) for x in v) for v in s.basis)


def maps_subspace(g: MatF, s: Subspace) -> Subspace:
    """g(S) for a subspace S."""
    return Subspace(s.field, s.ambient, [g.apply(v) for v in s.basis])


def xi_subgroup(L: Subspace) -> list[MatF]:
    """All g in GL(alpha) fixing the hyperplane L pointwise.

    In the basis (RREF basis of L, completion vector) these are the matrices
    [[1, u], [0, c]] with c != 0.
    """
    alpha = L.ambient
    if L.dim != alpha - 1:
        raise ValueError(f"Xi(L) needs a hyperplane, got dim {L.dim} in F^{alpha}")
    f = L.field
    b = complete_to_basis(L)
    b_inv = invert(b)
    out = []
    for c in range(1, f.q):
        for u in product(range(f.q), repeat=alpha - 1):
            m = np.eye(alpha, dtype=np.uint8)
            m[:alpha - 1, alpha - 1] = u
            m[alpha - 1, alpha - 1] = c
            out.append(b @ MatF(f, m) @ b_inv)
    return sorted(out, key=MatF.key)


def pointwise_stabilizer(N: Subspace) -> list[MatF]:
    """All g in GL(alpha) with g x = x for x in N."""
    f = N.field
    alpha = N.ambient
    b = complete_to_basis(N)
    b_inv = invert(b)
    r = N.dim
    k = alpha - r
    out = []
    lower = enumerate_gl(k, f.q) if k else None
    for u in product(range(f.q), repeat=r * k):
        for v in (lower if lower is not None else [MatF.identity(f, 0)]):
            m = np.eye(alpha, dtype=np.uint8)
            m[:r, r:] = np.array(u, dtype=np.uint8).reshape(r, k)
            m[r:, r:] = v.entries
            out.append(b @ MatF(f, m) @ b_inv)
    return sorted(out, key=MatF.key)


def _first_outside(s: Subspace, other: Subspace):
    for v in s.basis:
        if not other.contains(v):
            return v
    raise ValueError("subspace is contained in the other one")


def gamma_involution(L: Subspace, M: Subspace) -> MatF:
    """The pinned involution swapping hyperplanes L and M and fixing L & M pointwise.

    Basis: RREF basis of L & M, then u (first RREF row of L not in M) and w
    (first RREF row of M not in L); the involution exchanges u and w.
    """
    alpha = L.ambient
    if L.dim != alpha - 1 or M.dim != alpha - 1:
        raise ValueError("gamma needs two hyperplanes")
    if L == M:
        raise ValueError("gamma needs distinct hyperplanes")
    f = L.field
    N = L.intersect(M)
    u = _first_outside(L, M)
    w = _first_outside(M, L)
    cols = [list(r) for r in N.rows()] + [list(u), list(w)]
    b = MatF.from_columns(f, cols)
    swap = np.eye(alpha, dtype=np.uint8)
    swap[[alpha - 2, alpha - 1]] = swap[[alpha - 1, alpha - 2]]
    return b @ MatF(f, swap) @ invert(b)


def involution_choices(T: Subspace, S: Subspace, N: Subspace) -> list[MatF]:
    """Every g with g T = S, g S = T, g^2 = 1 and g fixing N pointwise."""
    out = []
    ident = MatF.identity(T.field, T.ambient)
    for g in pointwise_stabilizer(N):
        if maps_subspace(g, T) == S and maps_subspace(g, S) == T and g @ g == ident:
            out.append(g)
    return out


def transport_choices(S: Subspace, T: Subspace, N: Subspace) -> list[MatF]:
    """Every g fixing N pointwise with g S = T."""
    return [g for g in pointwise_stabilizer(N) if maps_subspace(g, S) == T]

