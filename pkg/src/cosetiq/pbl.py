"""Partial linear bijections F_q^alpha -> F_q^alpha.

A partial bijection is stored by the canonical RREF basis y_1..y_r of its
domain together with the images lambda(y_i), one per row.  Equivalently it is
the RREF of its graph {(x, lambda x)} in F^(2 alpha); the two descriptions
coincide because the x-part of the graph has full rank.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldContext
from .groups import BudgetExceeded, DEFAULT_BUDGET, enumerate_independent, gl_order, keys_to_matrices
from .linalg import (MatF, Subspace, _rref_array, complete_to_basis, enumerate_subspaces,
                     fmatmul, invert, kernel, non_pivot_positions, solve_coords)

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+/"


class PartialBijection:
    """An invertible linear map from a subspace of F^alpha onto a subspace of F^alpha."""

    __slots__ = ("field", "alpha", "dom", "images", "_key")

    def __init__(self, dom: Subspace, images):
        f = dom.field
        imgs = np.array(images, dtype=np.uint8).reshape(dom.dim, dom.ambient)
        if dom.dim and Subspace(f, dom.ambient, imgs).dim != dom.dim:
            raise ValueError("images of the domain basis are linearly dependent")
        imgs.setflags(write=False)
        self.field = f
        self.alpha = dom.ambient
        self.dom = dom
        self.images = imgs
        self._key = None

    @classmethod
    def from_pairs(cls, field: FieldContext, alpha: int, xs, ys) -> "PartialBijection":
        """Canonical form of the map sending each xs[i] to ys[i] (extended linearly)."""
        graph = np.hstack([np.array(xs, dtype=np.uint8).reshape(-1, alpha),
                           np.array(ys, dtype=np.uint8).reshape(-1, alpha)])
        red, pivots = _rref_array(field, graph)
        if any(p >= alpha for p in pivots):
            raise ValueError("pairs do not define a map")
        r = len(pivots)
        return cls(Subspace(field, alpha, red[:r, :alpha]), red[:r, alpha:])

    @classmethod
    def total(cls, g: MatF) -> "PartialBijection":
        """The everywhere-defined bijection x -> g x."""
        f = g.field
        return cls(Subspace.full(f, g.rows), g.entries.T)

    @classmethod
    def restriction(cls, a: MatF, dom: Subspace) -> "PartialBijection":
        """x -> a x on ``dom`` (a must be injective there)."""
        imgs = fmatmul(a.field, dom.basis, a.entries.T) if dom.dim else np.zeros((0, dom.ambient))
        return cls(dom, imgs)

    @property
    def rank(self) -> int:
        return self.dom.dim

    def image(self) -> Subspace:
        return Subspace(self.field, self.alpha, self.images)

    def apply(self, x) -> tuple[int, ...]:
        c = solve_coords(self.field, MatF(self.field, self.dom.basis.T), x)
        if c is None:
            raise ValueError(f"{x} is outside the domain")
        if not c:
            return (0,) * self.alpha
        v = fmatmul(self.field, np.array(c, dtype=np.uint8).reshape(1, -1), self.images)
        return tuple(int(t) for t in v[0])

    def inverse(self) -> "PartialBijection":
        return PartialBijection.from_pairs(self.field, self.alpha, self.images, self.dom.basis)

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """self after other, defined on {x in dom other : other(x) in dom self}."""
        f = self.field
        # x = sum c_i y_i with other(x) = sum c_i images_i in dom self
        if other.rank == 0:
            return PartialBijection(Subspace.zero(f, self.alpha), [])
        n_dom = self.dom.dim
        stacked = np.hstack([other.images.T, f.neg_table[self.dom.basis.T]]) if n_dom else other.images.T
        ker = kernel(MatF(f, stacked))
        xs, ys = [], []
        for row in ker.basis:
            c = row[:other.rank].reshape(1, -1)
            xs.append(fmatmul(f, c, other.dom.basis)[0])
            ys.append(self.apply(fmatmul(f, c, other.images)[0]))
        if not xs:
            return PartialBijection(Subspace.zero(f, self.alpha), [])
        return PartialBijection.from_pairs(f, self.alpha, xs, ys)

    def act(self, g: MatF, h: MatF) -> "PartialBijection":
        """The left-right action g lambda h^{-1}."""
        h_inv = invert(h)
        if h_inv is None:
            raise ValueError("h must be invertible")
        f = self.field
        xs = [h.apply(y) for y in self.dom.basis]
        ys = [g.apply(v) for v in self.images]
        if not xs:
            return self
        return PartialBijection.from_pairs(f, self.alpha, xs, ys)

    def key(self) -> str:
        """Packed text ``r|dom-digits|image-digits`` in base-q digits."""
        if self._key is None:
            dom = "".join(DIGITS[int(x)] for x in self.dom.basis.ravel())
            img = "".join(DIGITS[int(x)] for x in self.images.ravel())
            self._key = f"{self.rank}|{dom}|{img}"
        return self._key

    @classmethod
    def from_key(cls, field: FieldContext, alpha: int, key: str) -> "PartialBijection":
        r_txt, dom, img = key.split("|")
        r = int(r_txt)
        d = [DIGITS.index(c) for c in dom]
        i = [DIGITS.index(c) for c in img]
        if len(d) != r * alpha or len(i) != r * alpha:
            raise ValueError(f"malformed partial bijection key {key!r}")
        dom_s = Subspace(field, alpha, np.array(d, dtype=np.uint8).reshape(r, alpha))
        out = cls(dom_s, np.array(i, dtype=np.uint8).reshape(r, alpha))
        if out.key() != key:
            raise ValueError(f"key {key!r} is not in canonical form")
        return out

    def sort_key(self):
        return (-self.rank, tuple(int(x) for x in self.dom.basis.ravel()),
                tuple(int(x) for x in self.images.ravel()))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        return (isinstance(other, PartialBijection) and self.field == other.field
                and self.alpha == other.alpha and self.key() == other.key())

    def __hash__(self):
        return hash((self.field.q, self.alpha, self.key()))

    def __repr__(self):
        return f"PartialBijection(q={self.field.q}, alpha={self.alpha}, {self.key()!r})"


def idempotent(S: Subspace) -> PartialBijection:
    """T[S]: the identity map on S."""
    return PartialBijection(S, S.basis)


def sigma_rho(alpha: int, q: int, rho: int) -> int:
    """Number of partial bijections of rank alpha - rho."""
    if not 0 <= rho <= alpha:
        raise ValueError("need 0 <= rho <= alpha")
    num = gl_order(alpha, q) ** 2
    den = gl_order(rho, q) ** 2 * gl_order(alpha - rho, q) * q**(2 * rho * (alpha - rho))
    val, rem = divmod(num, den)
    assert rem == 0, "orbit count is not an integer"
    return val


def pbl_count(alpha: int, q: int) -> int:
    return sum(sigma_rho(alpha, q, rho) for rho in range(alpha + 1))


def enumerate_pbl(alpha: int, field: FieldContext, budget: int = DEFAULT_BUDGET) -> list[PartialBijection]:
    """All of PBL(alpha, F_q), sorted by rank (descending) then packed encoding."""
    total = pbl_count(alpha, field.q)
    if total > budget:
        raise BudgetExceeded(f"PBL({alpha},{field.q})", total, budget)
    out = []
    for dom in enumerate_subspaces(field, alpha):
        r = dom.dim
        if r == 0:
            out.append(PartialBijection(dom, []))
            continue
        keys = enumerate_independent(field, r, alpha, budget)
        for imgs in keys_to_matrices(keys, field, r, alpha):
            out.append(PartialBijection(dom, imgs))
    out.sort()
    return out


def extend_to_gl(lam: PartialBijection) -> MatF:
    """A pinned invertible matrix agreeing with lambda on its domain.

    Domain basis = complete_to_basis(dom); target basis = (lambda(y_i), the
    completion vectors of the image); completion vectors map in order.
    """
    f = lam.field
    a = lam.alpha
    b_dom = complete_to_basis(lam.dom)
    im = lam.image()
    cols = [list(v) for v in lam.images]
    for i in non_pivot_positions(im):
        e = [0] * a
        e[i] = 1
        cols.append(e)
    b_im = MatF.from_columns(f, cols)
    return b_im @ invert(b_dom)


def pbw_hyperplanes(N: Subspace) -> list[Subspace]:
    """The pinned hyperplanes L_1, ..., L_k with intersection N (k = codim N).

    With B = complete_to_basis(N), L_j is spanned by every column of B except
    the j-th completion vector.
    """
    b = complete_to_basis(N)
    r = N.dim
    a = N.ambient
    cols = [b.column(j) for j in range(a)]
    return [Subspace.span(N.field, a, cols[:r + j] + cols[r + j + 1:]) for j in range(a - r)]
