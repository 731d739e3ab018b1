"""The projection GL(alpha + n, F_q) -> PBL(alpha, F_q) and double-coset bucketing.

For g = [[A, B], [C, D]] (blocks alpha and n) the label Pi(g) is x -> A x on
ker C.  It only depends on the first alpha columns X = [A; C] of g, i.e. on the
left coset gH.  In batch code such column blocks are (N, alpha + n, alpha) code
arrays, and a label is identified by its *graph key*: the list, over all
nonzero v in F^alpha, of the code of A v if C v = 0 and 0 otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

import numpy as np

from .gf import FieldContext, field_new
from .groups import (DEFAULT_BUDGET, GroupTable, block_diag, digits_to_codes, enumerate_gl,
                     gl_order, h_order)
from .linalg import MatF, Subspace, complete_to_basis, fmatmul, invert, kernel
from .pbl import PartialBijection, extend_to_gl, pbl_count, sigma_rho

CHUNK = 1 << 19


def pi(g: MatF, alpha: int, n: int) -> PartialBijection:
    """The partial bijection x -> A x on ker C of g = [[A, B], [C, D]]."""
    if g.shape != (alpha + n, alpha + n):
        raise ValueError(f"expected a {alpha + n}x{alpha + n} matrix")
    if invert(g) is None:
        raise ValueError("pi is only defined on invertible matrices")
    a = g.block(0, alpha, 0, alpha)
    c = g.block(alpha, alpha + n, 0, alpha)
    dom = kernel(c)
    lam = PartialBijection.restriction(a, dom)
    assert lam.rank == dom.dim
    return lam


def j_rho(field: FieldContext, alpha: int, n: int, rho: int) -> MatF:
    """The permutation matrix exchanging coordinates alpha-rho+i and alpha+i, i < rho."""
    if not 0 <= rho <= min(alpha, n):
        raise ValueError("need 0 <= rho <= min(alpha, n)")
    perm = list(range(alpha + n))
    for i in range(rho):
        perm[alpha - rho + i], perm[alpha + i] = perm[alpha + i], perm[alpha - rho + i]
    m = np.zeros((alpha + n, alpha + n), dtype=np.uint8)
    m[np.arange(alpha + n), perm] = 1
    return MatF(field, m)


def representative(lam: PartialBijection, n: int) -> MatF:
    """A pinned element of the double coset labelled by ``lam``.

    diag(P, 1) diag(Q, 1) J_rho diag(Q^-1, 1) with Q = complete_to_basis(dom),
    P = extend_to_gl(lam) and rho the corank.
    """
    f = lam.field
    alpha = lam.alpha
    rho = alpha - lam.rank
    one = MatF.identity(f, n)
    q_mat = complete_to_basis(lam.dom)
    p_mat = extend_to_gl(lam)
    return (block_diag(f, p_mat @ q_mat, one) @ j_rho(f, alpha, n, rho)
            @ block_diag(f, invert(q_mat), one))


# --- batch projection ------------------------------------------------------

def _nonzero_vectors(field: FieldContext, alpha: int) -> np.ndarray:
    vs = np.array(list(product(range(field.q), repeat=alpha)), dtype=np.uint8)[1:]
    return vs.reshape(-1, alpha)


def _key_words(q: int, alpha: int) -> list[tuple[int, int]]:
    """Split the graph-key digits into int64-sized words: [(start, stop), ...]."""
    base = q**alpha
    n_digits = base - 1
    per_word = 1
    while base ** (per_word + 1) < 2**62:
        per_word += 1
    return [(s, min(s + per_word, n_digits)) for s in range(0, n_digits, per_word)]


def graph_keys(field: FieldContext, alpha: int, cols: np.ndarray) -> np.ndarray:
    """Graph keys of a batch of (alpha+n) x alpha column blocks.

    Returns an (N, W) int64 array; W = 1 unless q^alpha is large.
    """
    q = field.q
    vs = _nonzero_vectors(field, alpha)
    if cols.shape[0] == 0:
        return np.zeros((0, len(_key_words(q, alpha))), dtype=np.int64)
    w = fmatmul(field, cols, vs.T)
    in_ker = ~w[:, alpha:, :].any(axis=1)
    top = digits_to_codes(np.swapaxes(w[:, :alpha, :], 1, 2), q)
    vals = np.where(in_ker, top, 0)
    base = q**alpha
    words = []
    for s, e in _key_words(q, alpha):
        weights = base ** np.arange(e - s - 1, -1, -1, dtype=np.int64)
        words.append(vals[:, s:e] @ weights)
    return np.stack(words, axis=1)


def label_graph_key(lam: PartialBijection) -> tuple[int, ...]:
    """Graph key of a label computed directly from the partial bijection."""
    f = lam.field
    alpha = lam.alpha
    q = f.q
    base = q**alpha
    vals = []
    for v in _nonzero_vectors(f, alpha):
        if lam.dom.contains(v):
            img = lam.apply(v)
            vals.append(int(digits_to_codes(np.array(img, dtype=np.uint8), q)))
        else:
            vals.append(0)
    out = []
    for s, e in _key_words(q, alpha):
        k = 0
        for x in vals[s:e]:
            k = k * base + x
        out.append(k)
    return tuple(out)


class LabelIndexer:
    """Vectorized map from column blocks to positions in a fixed label list."""

    def __init__(self, labels: list[PartialBijection]):
        self.labels = labels
        keys = np.array([label_graph_key(l) for l in labels], dtype=np.int64)
        self.width = keys.shape[1]
        if self.width == 1:
            order = np.argsort(keys[:, 0])
            self._sorted = keys[order, 0]
            self._order = order
        else:
            self._lookup = {tuple(int(x) for x in k): i for i, k in enumerate(keys)}
        self.field = labels[0].field
        self.alpha = labels[0].alpha

    def index_keys(self, keys: np.ndarray) -> np.ndarray:
        if self.width == 1:
            pos = np.searchsorted(self._sorted, keys[:, 0])
            pos = np.minimum(pos, self._sorted.size - 1)
            if not np.array_equal(self._sorted[pos], keys[:, 0]):
                raise KeyError("column block with an unknown label")
            return self._order[pos].astype(np.int64)
        return np.array([self._lookup[tuple(int(x) for x in k)] for k in keys], dtype=np.int64)

    def __call__(self, cols: np.ndarray) -> np.ndarray:
        return self.index_keys(graph_keys(self.field, self.alpha, cols))


# --- counting formulas -----------------------------------------------------

def kappa_rho(alpha: int, n: int, q: int, rho: int) -> int:
    """Size of a double coset whose label has rank alpha - rho."""
    if not 0 <= rho <= alpha <= n:
        raise ValueError("need 0 <= rho <= alpha <= n")
    num = gl_order(n, q) ** 2 * q**(2 * alpha * n)
    den = gl_order(n - rho, q) * q**((alpha + rho) * (n - rho))
    val, rem = divmod(num, den)
    assert rem == 0
    return val


def kappa_1(alpha: int, n: int, q: int) -> int:
    return (q**n - 1) * q**alpha * h_order(alpha, n, q)


def kappa_2(alpha: int, n: int, q: int) -> int:
    return (q**n - 1) * (q**(n - 1) - 1) * q**(2 * alpha + 1) * h_order(alpha, n, q)


def chu_vandermonde_check(alpha: int, n: int, q: int) -> bool:
    """sum_rho sigma_rho kappa_rho == #GL(alpha + n)."""
    total = sum(sigma_rho(alpha, q, r) * kappa_rho(alpha, n, q, r) for r in range(alpha + 1))
    return total == gl_order(alpha + n, q)


# --- full decomposition ----------------------------------------------------

@dataclass
class Bucket:
    label: PartialBijection
    size: int
    representative: int


@dataclass
class CosetDecomposition:
    """All double cosets H(n) g H(n) of GL(alpha + n, F_q), keyed by label."""

    alpha: int
    n: int
    q: int
    buckets: list[Bucket]
    total: int
    group: GroupTable | None = None
    element_bucket: np.ndarray | None = dc_field(default=None, repr=False)

    @property
    def field(self) -> FieldContext:
        return field_new(self.q)

    @property
    def has_members(self) -> bool:
        return self.element_bucket is not None

    def labels(self) -> list[PartialBijection]:
        return [b.label for b in self.buckets]

    def bucket(self, lam: PartialBijection) -> Bucket:
        for b in self.buckets:
            if b.label == lam:
                return b
        raise KeyError(lam.key())

    def members(self, lam: PartialBijection) -> np.ndarray:
        """Packed keys of all group elements in the coset labelled ``lam``."""
        if not self.has_members:
            raise ValueError("decomposition was built without member lists")
        i = next(i for i, b in enumerate(self.buckets) if b.label == lam)
        return self.group.elements[self.element_bucket == i]

    def to_json(self) -> str:
        m = self.alpha + self.n
        width = (m * m * (self.q.bit_length()) + 3) // 4
        doc = {
            "alpha": self.alpha,
            "n": self.n,
            "q": self.q,
            "buckets": [{"label": b.label.key(), "size": str(b.size),
                         "rep": format(b.representative, "x").zfill(max(width, 1))}
                        for b in self.buckets],
            "total": str(self.total),
        }
        return json.dumps(doc, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CosetDecomposition":
        doc = json.loads(text)
        f = field_new(doc["q"])
        buckets = [Bucket(PartialBijection.from_key(f, doc["alpha"], b["label"]), int(b["size"]),
                          int(b["rep"], 16)) for b in doc["buckets"]]
        return cls(doc["alpha"], doc["n"], doc["q"], buckets, int(doc["total"]))


def decompose(alpha: int, n: int, q: int, keep_members: bool = False,
              budget: int = DEFAULT_BUDGET) -> CosetDecomposition:
    """Bucket every element of GL(alpha + n, F_q) by its label."""
    if alpha < 1 or n < 1:
        raise ValueError("alpha and n must be positive")
    if alpha > n:
        raise ValueError(f"alpha={alpha} > n={n}: outside the regime alpha <= n")
    f = field_new(q)
    m = alpha + n
    group = enumerate_gl(m, q, budget)
    keys_all = []
    for start in range(0, len(group), CHUNK):
        cols = group.digits(start, start + CHUNK)[:, :, :alpha]
        keys_all.append(graph_keys(f, alpha, cols))
    keys = np.concatenate(keys_all)
    del keys_all
    if keys.shape[1] == 1:
        uniq, first, inverse, counts = np.unique(keys[:, 0], return_index=True,
                                                 return_inverse=True, return_counts=True)
    else:
        uniq, first, inverse, counts = np.unique(keys, axis=0, return_index=True,
                                                 return_inverse=True, return_counts=True)
    del keys
    inverse = inverse.reshape(-1)
    raw = []
    for b in range(len(first)):
        rep_key = int(group.elements[first[b]])
        lam = pi(MatF.from_key(f, rep_key, m, m), alpha, n)
        raw.append((lam, int(counts[b]), rep_key))
    order = sorted(range(len(raw)), key=lambda i: raw[i][0].sort_key())
    if len({r[0] for r in raw}) != len(raw):
        raise AssertionError("two buckets received the same label")
    buckets = [Bucket(*raw[i]) for i in order]
    element_bucket = None
    if keep_members:
        remap = np.empty(len(order), dtype=np.int32)
        remap[np.array(order)] = np.arange(len(order), dtype=np.int32)
        element_bucket = remap[inverse]
    return CosetDecomposition(alpha, n, q, buckets, len(group),
                              group if keep_members else None, element_bucket)


def check_decomposition(dec: CosetDecomposition) -> dict:
    """Bijection and size-law checks against the counting formulas."""
    expected_count = pbl_count(dec.alpha, dec.q)
    bad_sizes = [(b.label.key(), b.size) for b in dec.buckets
                 if b.size != kappa_rho(dec.alpha, dec.n, dec.q, dec.alpha - b.label.rank)]
    return {
        "bucket_count": len(dec.buckets),
        "expected_bucket_count": expected_count,
        "bijection": len(dec.buckets) == expected_count,
        "size_law": not bad_sizes,
        "bad_sizes": bad_sizes,
        "total_ok": dec.total == sum(b.size for b in dec.buckets) == gl_order(dec.alpha + dec.n, dec.q),
    }


# --- matrix-entry distribution ---------------------------------------------

def entry_distribution_check(m: int, q: int, k: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Exact counts of first-row prefixes (g_11, ..., g_1k) over GL(m, F_q)."""
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    group = enumerate_gl(m, q, budget)
    total = len(group)
    # first row code is the most significant base-q^m digit of the packed key
    first_row = group.elements // (q**m) ** (m - 1)
    prefix = first_row // q ** (m - k)
    counts = np.bincount(prefix, minlength=q**k)
    zero_p = Fraction(q ** (m - k) - 1, q**m - 1)
    nonzero_p = Fraction(q ** (m - k), q**m - 1)
    observed = {int(v): int(c) for v, c in enumerate(counts)}
    ok = Fraction(observed[0], total) == zero_p and all(
        Fraction(observed[v], total) == nonzero_p for v in range(1, q**k))
    return {
        "m": m, "q": q, "k": k, "total": total,
        "zero_count": observed[0], "zero_probability": zero_p,
        "nonzero_counts": sorted(set(observed[v] for v in range(1, q**k))),
        "nonzero_probability": nonzero_p,
        "passed": ok,
    }
