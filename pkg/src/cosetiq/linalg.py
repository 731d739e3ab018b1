"""Dense exact linear algebra over F_q.

Matrices act on column vectors.  A :class:`Subspace` stores the reduced row
echelon form of a basis whose rows are the (transposed) basis vectors, so
structural equality is subspace equality and subspaces can be dict keys.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .gf import FieldContext


def fmatmul(field: FieldContext, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting matrix product of element-code arrays over ``field``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if field.is_prime:
        out = np.matmul(a.astype(np.int64), b.astype(np.int64)) % field.p
        return out.astype(np.uint8)
    add, mul = field.add_table, field.mul_table
    inner = a.shape[-1]
    acc = None
    for k in range(inner):
        term = mul[a[..., :, k:k + 1], b[..., k:k + 1, :]]
        acc = term if acc is None else add[acc, term]
    if acc is None:
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        return np.zeros(shape, dtype=np.uint8)
    return acc


class MatF:
    """An immutable matrix of element codes over a finite field."""

    __slots__ = ("field", "entries", "_key")

    def __init__(self, field: FieldContext, entries):
        arr = np.array(entries, dtype=np.uint8)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("MatF needs a 2-d array of element codes")
        if arr.size and int(arr.max()) >= field.q:
            raise ValueError(f"entry code out of range for q={field.q}")
        arr.setflags(write=False)
        self.field = field
        self.entries = arr
        self._key = None

    @classmethod
    def identity(cls, field: FieldContext, m: int) -> "MatF":
        return cls(field, np.eye(m, dtype=np.uint8))

    @classmethod
    def zeros(cls, field: FieldContext, rows: int, cols: int) -> "MatF":
        return cls(field, np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def from_columns(cls, field: FieldContext, columns, rows: int | None = None) -> "MatF":
        columns = [list(c) for c in columns]
        if not columns:
            return cls.zeros(field, rows or 0, 0)
        return cls(field, np.array(columns, dtype=np.uint8).T)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __getitem__(self, idx):
        return self.entries[idx]

    def __matmul__(self, other: "MatF") -> "MatF":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return MatF(self.field, fmatmul(self.field, self.entries, other.entries))

    def apply(self, vec) -> tuple[int, ...]:
        """Image of a column vector given as a sequence of codes."""
        v = np.asarray(vec, dtype=np.uint8).reshape(-1, 1)
        return tuple(int(x) for x in fmatmul(self.field, self.entries, v)[:, 0])

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "MatF":
        return MatF(self.field, self.entries[r0:r1, c0:c1])

    def transpose(self) -> "MatF":
        return MatF(self.field, self.entries.T)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.entries[:, j])

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.entries[i])

    def as_tuple(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in r) for r in self.entries)

    def key(self) -> int:
        """Base-q packed integer of the row-major entries, first entry most significant."""
        if self._key is None:
            k = 0
            q = self.field.q
            for x in self.entries.ravel():
                k = k * q + int(x)
            self._key = k
        return self._key

    @classmethod
    def from_key(cls, field: FieldContext, key: int, rows: int, cols: int) -> "MatF":
        q = field.q
        digits = []
        for _ in range(rows * cols):
            key, d = divmod(key, q)
            digits.append(d)
        if key:
            raise ValueError("packed key too large for the requested shape")
        return cls(field, np.array(digits[::-1], dtype=np.uint8).reshape(rows, cols))

    def bitrows(self) -> tuple[int, ...]:
        """One integer per row, bit j = entry in column j (q = 2 only)."""
        if self.field.q != 2:
            raise ValueError("bit rows exist only over F_2")
        return tuple(sum(int(x) << j for j, x in enumerate(r)) for r in self.entries)

    @classmethod
    def from_bitrows(cls, field: FieldContext, bits, cols: int) -> "MatF":
        return cls(field, [[(b >> j) & 1 for j in range(cols)] for b in bits])

    def __eq__(self, other):
        return (isinstance(other, MatF) and self.field == other.field
                and self.shape == other.shape and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.field.q, self.shape, self.key()))

    def __repr__(self):
        return f"MatF(q={self.field.q}, {self.as_tuple()})"


def _rref_array(field: FieldContext, arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = np.array(arr, dtype=np.uint8)
    rows, cols = a.shape
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = mul[inv[a[r, c]], a[r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = add[a[i], mul[neg[a[i, c]], a[r]]]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: MatF) -> tuple[MatF, int]:
    """Reduced row echelon form and rank."""
    a, pivots = _rref_array(m.field, m.entries)
    return MatF(m.field, a), len(pivots)


def rank(m: MatF) -> int:
    if m.field.q == 2:
        return rank_bits(m.bitrows())
    return rref(m)[1]


def rref_bits(rows) -> list[int]:
    """RREF over F_2 of rows packed as ints (bit j = column j); zero rows dropped.

    Pivot of a row is its lowest set bit, so the result agrees with :func:`rref`
    after conversion.
    """
    basis: list[int] = []
    for v in rows:
        for b in basis:
            low = b & -b
            if v & low:
                v ^= b
        if v:
            low = v & -v
            basis = [b ^ v if b & low else b for b in basis]
            basis.append(v)
    basis.sort(key=lambda b: b & -b)
    return basis


def rank_bits(rows) -> int:
    return len(rref_bits(rows))


class Subspace:
    """A subspace of F_q^ambient, stored as an RREF row basis without zero rows."""

    __slots__ = ("field", "ambient", "basis", "pivots", "_hash")

    def __init__(self, field: FieldContext, ambient: int, basis_rows=()):
        arr = np.array(basis_rows, dtype=np.uint8).reshape(-1, ambient)
        red, pivots = _rref_array(field, arr)
        red = red[:len(pivots)]
        red.setflags(write=False)
        self.field = field
        self.ambient = ambient
        self.basis = red
        self.pivots = tuple(pivots)
        self._hash = None

    @classmethod
    def span(cls, field: FieldContext, ambient: int, vectors) -> "Subspace":
        return cls(field, ambient, [list(v) for v in vectors])

    @classmethod
    def full(cls, field: FieldContext, ambient: int) -> "Subspace":
        return cls(field, ambient, np.eye(ambient, dtype=np.uint8))

    @classmethod
    def zero(cls, field: FieldContext, ambient: int) -> "Subspace":
        return cls(field, ambient, [])

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in r) for r in self.basis)

    def basis_matrix(self) -> MatF:
        """r x ambient matrix whose rows are the canonical basis vectors."""
        return MatF(self.field, self.basis)

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.uint8)
        return Subspace(self.field, self.ambient, np.vstack([self.basis, v[None, :]])).dim == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return (self + other).dim == self.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient, np.vstack([self.basis, other.basis]))

    def intersect(self, other: "Subspace") -> "Subspace":
        # x in both iff x = B1^T a = B2^T b; solve via kernel of [B1^T | -B2^T]
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        f = self.field
        stacked = np.hstack([self.basis.T, f.neg_table[other.basis.T]])
        ker = kernel(MatF(f, stacked))
        vecs = [fmatmul(f, self.basis.T, r[:self.dim].reshape(-1, 1))[:, 0] for r in ker.basis]
        return Subspace(f, self.ambient, vecs)

    def vectors(self):
        """All vectors of the subspace as tuples (q^dim of them)."""
        f = self.field
        for coeffs in product(range(f.q), repeat=self.dim):
            if self.dim == 0:
                yield (0,) * self.ambient
                continue
            c = np.array(coeffs, dtype=np.uint8).reshape(1, -1)
            yield tuple(int(x) for x in fmatmul(f, c, self.basis)[0])

    def sort_key(self):
        return (self.dim, tuple(int(x) for x in self.basis.ravel()))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.q, self.ambient, self.basis.tobytes(), self.basis.shape))
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Subspace(q={self.field.q}, ambient={self.ambient}, basis={self.rows()})"


def kernel(m: MatF) -> Subspace:
    """All column vectors x with m x = 0."""
    f = m.field
    red, pivots = _rref_array(f, m.entries)
    free = [c for c in range(m.cols) if c not in pivots]
    vecs = []
    for j in free:
        v = np.zeros(m.cols, dtype=np.uint8)
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = f.neg_table[red[i, j]]
        vecs.append(v)
    return Subspace(f, m.cols, vecs)


def image(m: MatF) -> Subspace:
    """Column space of m."""
    return Subspace(m.field, m.rows, m.entries.T)


def invert(m: MatF) -> MatF | None:
    """Exact inverse, or None if m is singular."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    f = m.field
    n = m.rows
    aug = np.hstack([m.entries, np.eye(n, dtype=np.uint8)])
    red, pivots = _rref_array(f, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return MatF(f, red[:, n:])


def complete_to_basis(s: Subspace) -> MatF:
    """Invertible matrix whose first dim(s) columns are the RREF basis of s.

    The remaining columns are the standard vectors e_i at the non-pivot
    positions of the RREF, in increasing i.
    """
    cols = [list(r) for r in s.rows()]
    for i in non_pivot_positions(s):
        e = [0] * s.ambient
        e[i] = 1
        cols.append(e)
    return MatF.from_columns(s.field, cols, rows=s.ambient) if cols else MatF.zeros(s.field, 0, 0)


def non_pivot_positions(s: Subspace) -> list[int]:
    return [i for i in range(s.ambient) if i not in s.pivots]


def solve_coords(field: FieldContext, columns: MatF, vec) -> tuple[int, ...] | None:
    """Coordinates c with columns @ c = vec, or None if vec is not in the span."""
    v = np.asarray(vec, dtype=np.uint8).reshape(-1, 1)
    aug = np.hstack([columns.entries, v])
    red, pivots = _rref_array(field, aug)
    if columns.cols in pivots:
        return None
    c = [0] * columns.cols
    for i, pc in enumerate(pivots):
        c[pc] = int(red[i, -1])
    return tuple(c)


def enumerate_rref(field: FieldContext, dim: int, ambient: int):
    """Yield every dim x ambient RREF matrix of full rank, as a Subspace."""
    q = field.q
    for pivots in combinations(range(ambient), dim):
        free_slots = [(i, c) for i, pc in enumerate(pivots)
                      for c in range(pc + 1, ambient) if c not in pivots]
        for vals in product(range(q), repeat=len(free_slots)):
            a = np.zeros((dim, ambient), dtype=np.uint8)
            for i, pc in enumerate(pivots):
                a[i, pc] = 1
            for (i, c), x in zip(free_slots, vals):
                a[i, c] = x
            yield Subspace(field, ambient, a)


def enumerate_subspaces(field: FieldContext, ambient: int, dim: int | None = None):
    """All subspaces of F^ambient (of one dimension if given), in canonical order."""
    dims = range(ambient + 1) if dim is None else [dim]
    for d in dims:
        yield from enumerate_rref(field, d, ambient)


def hyperplanes(field: FieldContext, ambient: int, containing: Subspace | None = None) -> list[Subspace]:
    """Codimension-1 subspaces, optionally only those containing a given subspace."""
    out = list(enumerate_subspaces(field, ambient, ambient - 1)) if ambient >= 1 else []
    if containing is not None:
        out = [h for h in out if h.contains_subspace(containing)]
    return out


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if k < 0 or k > m:
        return 0
    num = den = 1
    for i in range(k):
        num *= q**(m - i) - 1
        den *= q**(i + 1) - 1
    return num // den
