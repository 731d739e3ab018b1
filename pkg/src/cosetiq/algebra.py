"""The double-coset convolution algebra on H(n)-biinvariant functions.

Basis vectors are the normalized coset sums e~_lam = (1/#H) * sum_{Pi(g)=lam} g,
so theta(S) = e~_{T[S]} and a(g) = e~_g.  The structure constants in this
basis are integers:

    e~_lam e~_mu = sum_nu c[lam, mu, nu] e~_nu,
    c[lam, mu, nu] = #{z : Pi(z) = mu*, Pi(g_nu z) = lam} / #H,

where mu* is the label of the inverse coset and g_nu a representative.  The
count can run over the whole group (members of the decomposition) or over the
left cosets zH, i.e. over injective column blocks (the quotient route); the
latter divides by #H for free and scales to much larger n.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational

import numpy as np

from .cosets import (CHUNK, CosetDecomposition, LabelIndexer, decompose, kappa_rho, pi,
                     representative)
from .gf import FieldContext, field_new
from .groups import DEFAULT_BUDGET, enumerate_independent, h_order, keys_to_matrices
from .linalg import MatF, Subspace, fmatmul, invert
from .pbl import PartialBijection, enumerate_pbl, extend_to_gl, idempotent, pbw_hyperplanes
from .ratpoly import det_fraction


class MembersUnavailable(ValueError):
    """The decomposition was built without member lists."""


def _count_table(field: FieldContext, alpha: int, n: int, labels, batches, divisor: int) -> np.ndarray:
    k = len(labels)
    indexer = LabelIndexer(labels)
    reps = [representative(l, n) for l in labels]
    star = np.array([labels.index(pi(invert(r), alpha, n)) for r in reps], dtype=np.int64)
    counts = np.zeros((k, k, k), dtype=np.int64)
    for cols, lab in batches:
        mu = star[lab]
        for nu, g in enumerate(reps):
            lam = indexer(fmatmul(field, g.entries, cols))
            counts[:, :, nu] += np.bincount(lam * k + mu, minlength=k * k).reshape(k, k)
    table, rem = np.divmod(counts, divisor)
    if rem.any():
        raise AssertionError("coset counts are not divisible by #H(n)")
    return table


def _member_batches(dec: CosetDecomposition):
    group = dec.group
    for start in range(0, len(group), CHUNK):
        cols = group.digits(start, start + CHUNK)[:, :, :dec.alpha]
        yield cols, dec.element_bucket[start:start + CHUNK].astype(np.int64)


def _quotient_batches(field: FieldContext, alpha: int, n: int, indexer: LabelIndexer, budget: int):
    keys = enumerate_independent(field, alpha, alpha + n, budget,
                                 what=f"injective blocks in F^({alpha + n}x{alpha})")
    for start in range(0, keys.size, CHUNK):
        cols = np.swapaxes(keys_to_matrices(keys[start:start + CHUNK], field, alpha, alpha + n), 1, 2)
        yield cols, indexer(cols)


class AlgebraContext:
    """One concrete algebra: labels, #H(n), and the coset-basis structure constants."""

    def __init__(self, alpha: int, n: int, q: int, labels: list[PartialBijection],
                 table: np.ndarray, method: str, decomposition: CosetDecomposition | None = None):
        self.alpha = alpha
        self.n = n
        self.q = q
        self.field = field_new(q)
        self.labels = labels
        self.index = {lam.key(): i for i, lam in enumerate(labels)}
        self.ranks = [lam.rank for lam in labels]
        self.h_order = h_order(alpha, n, q)
        self.table = table
        self.method = method
        self.decomposition = decomposition
        self._rows: dict[tuple[int, int], list[tuple[int, int]]] = {}
        self._pbw: list[AlgebraElement] | None = None

    # construction -----------------------------------------------------
    @classmethod
    def from_decomposition(cls, dec: CosetDecomposition) -> "AlgebraContext":
        """Structure constants from the member lists of a full decomposition."""
        if not dec.has_members:
            raise MembersUnavailable("decomposition was built without member lists; "
                                     "rebuild it with keep_members=True")
        f = dec.field
        labels = dec.labels()
        table = _count_table(f, dec.alpha, dec.n, labels, _member_batches(dec),
                             h_order(dec.alpha, dec.n, dec.q))
        return cls(dec.alpha, dec.n, dec.q, labels, table, "members", dec)

    @classmethod
    def from_quotient(cls, alpha: int, n: int, q: int, budget: int = DEFAULT_BUDGET) -> "AlgebraContext":
        """Structure constants by counting left cosets zH (injective column blocks)."""
        if alpha > n:
            raise ValueError(f"alpha={alpha} > n={n}: outside the regime alpha <= n")
        f = field_new(q)
        labels = enumerate_pbl(alpha, f)
        indexer = LabelIndexer(labels)
        table = _count_table(f, alpha, n, labels, _quotient_batches(f, alpha, n, indexer, budget), 1)
        return cls(alpha, n, q, labels, table, "quotient")

    @classmethod
    def build(cls, alpha: int, n: int, q: int, method: str = "members",
              budget: int = DEFAULT_BUDGET) -> "AlgebraContext":
        if method == "members":
            return cls.from_decomposition(decompose(alpha, n, q, keep_members=True, budget=budget))
        if method == "quotient":
            return cls.from_quotient(alpha, n, q, budget)
        raise ValueError(f"unknown method {method!r}")

    # basis elements ----------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    def label_index(self, lam: PartialBijection) -> int:
        return self.index[lam.key()]

    def basis(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: Fraction(1)})

    def coset(self, lam: PartialBijection) -> "AlgebraElement":
        return self.basis(self.label_index(lam))

    def unit(self) -> "AlgebraElement":
        return self.a(MatF.identity(self.field, self.alpha))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def a(self, g: MatF) -> "AlgebraElement":
        if invert(g) is None:
            raise ValueError("a(g) needs an invertible matrix")
        return self.coset(PartialBijection.total(g))

    def theta(self, S: Subspace) -> "AlgebraElement":
        return self.coset(idempotent(S))

    @property
    def t(self) -> Fraction:
        """q^n, the value of the interpolation variable at this algebra."""
        return Fraction(self.q**self.n)

    def sparse_row(self, i: int, j: int) -> list[tuple[int, int]]:
        row = self._rows.get((i, j))
        if row is None:
            nz = np.nonzero(self.table[i, j])[0]
            row = [(int(k), int(self.table[i, j, k])) for k in nz]
            self._rows[(i, j)] = row
        return row

    def kappa(self, i: int) -> int:
        return kappa_rho(self.alpha, self.n, self.q, self.alpha - self.ranks[i])

    # pbw basis ---------------------------------------------------------
    def pbw_element(self, lam: PartialBijection) -> "AlgebraElement":
        """a(g°) theta(L_1°) ... theta(L_k°) for the pinned choices of g° and L_j°."""
        out = self.a(extend_to_gl(lam))
        for L in pbw_hyperplanes(lam.dom):
            out = out * self.theta(L)
        return out

    def pbw_elements(self) -> list["AlgebraElement"]:
        if self._pbw is None:
            self._pbw = [self.pbw_element(lam) for lam in self.labels]
        return self._pbw

    def pbw_matrix(self) -> np.ndarray:
        """Coset coordinates of the pbw vectors, one column per label (object ints)."""
        k = self.dim
        p = np.zeros((k, k), dtype=object)
        for j, x in enumerate(self.pbw_elements()):
            for i, c in x.items_idx():
                p[i, j] = c
        return p


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"not an exact rational: {c!r}")


class AlgebraElement:
    """A sparse exact-rational combination of normalized coset vectors."""

    __slots__ = ("ctx", "_c")

    def __init__(self, ctx: AlgebraContext, coeffs: dict[int, Fraction]):
        self.ctx = ctx
        self._c = {i: _as_fraction(c) for i, c in coeffs.items() if c != 0}

    @property
    def coeffs(self) -> dict[str, Fraction]:
        return {self.ctx.labels[i].key(): c for i, c in sorted(self._c.items())}

    def items_idx(self):
        return sorted(self._c.items())

    def coefficient(self, lam: PartialBijection | int) -> Fraction:
        i = lam if isinstance(lam, int) else self.ctx.label_index(lam)
        return self._c.get(i, Fraction(0))

    def support(self) -> list[PartialBijection]:
        return [self.ctx.labels[i] for i in sorted(self._c)]

    def is_zero(self) -> bool:
        return not self._c

    def _check(self, other):
        if other.ctx is not self.ctx:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = dict(self._c)
        for i, c in other._c.items():
            out[i] = out.get(i, 0) + c
        return AlgebraElement(self.ctx, out)

    def __neg__(self):
        return AlgebraElement(self.ctx, {i: -c for i, c in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return AlgebraElement(self.ctx, {i: c * _as_fraction(other) for i, c in self._c.items()})

    def __rmul__(self, other):
        return AlgebraElement(self.ctx, {i: _as_fraction(other) * c for i, c in self._c.items()})

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and other.ctx is self.ctx and other._c == self._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __repr__(self):
        terms = " + ".join(f"{c}*[{self.ctx.labels[i].key()}]" for i, c in sorted(self._c.items()))
        return f"AlgebraElement({terms or '0'})"


def convolve(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Exact product in the double-coset algebra."""
    x._check(y)
    ctx = x.ctx
    out: dict[int, Fraction] = {}
    for i, c in x._c.items():
        for j, d in y._c.items():
            cd = c * d
            for k, v in ctx.sparse_row(i, j):
                out[k] = out.get(k, 0) + cd * v
    return AlgebraElement(ctx, out)


def m_functional(x: AlgebraElement) -> Fraction:
    """Sum of group-algebra coefficients: e~_lam has mass kappa(rank lam) / #H."""
    ctx = x.ctx
    return sum((c * Fraction(ctx.kappa(i), ctx.h_order) for i, c in x._c.items()), Fraction(0))


M_CANDIDATES = {
    "(q^n-1)(q^(n-1)-1)q^(2alpha-1)": lambda q, a, n: Fraction((q**n - 1) * (q**(n - 1) - 1) * q**(2 * a - 1)),
    "(q^n-1)q^(alpha-1)": lambda q, a, n: Fraction(q**n - 1) * Fraction(q)**(a - 1),
    "(q^n-1)q^alpha": lambda q, a, n: Fraction((q**n - 1) * q**a),
}


def m_report(ctx: AlgebraContext) -> dict:
    """Multiplicativity of M on all basis pairs, M(a(g)) = 1, and which printed value of M(theta(L)) matches."""
    k = ctx.dim
    masses = [Fraction(ctx.kappa(i), ctx.h_order) for i in range(k)]
    bad = []
    for i in range(k):
        for j in range(k):
            prod = sum((masses[c] * v for c, v in ctx.sparse_row(i, j)), Fraction(0))
            if prod != masses[i] * masses[j]:
                bad.append((ctx.labels[i].key(), ctx.labels[j].key()))
    units_ok = all(masses[i] == 1 for i in range(k) if ctx.ranks[i] == ctx.alpha)
    gen = None
    matches = {}
    if ctx.alpha >= 1:
        gen = next(masses[i] for i in range(k)
                   if ctx.ranks[i] == ctx.alpha - 1 and ctx.labels[i] == idempotent(ctx.labels[i].dom))
        matches = {name: f(ctx.q, ctx.alpha, ctx.n) == gen for name, f in M_CANDIDATES.items()}
    return {"alpha": ctx.alpha, "n": ctx.n, "q": ctx.q, "pairs": k * k,
            "multiplicative": not bad, "non_multiplicative": bad[:20], "M(a(g)) = 1": units_ok,
            "M(theta(L))": None if gen is None else f"{gen.numerator}/{gen.denominator}",
            "formula_matches": matches,
            "passed": not bad and units_ok}


# --- structure tables ------------------------------------------------------

def unitriangular_inverse(p: np.ndarray) -> np.ndarray:
    """Exact inverse of an upper unitriangular matrix (object dtype)."""
    k = p.shape[0]
    inv = np.zeros((k, k), dtype=object)
    for col in range(k):
        inv[col, col] = 1
        for row in range(col - 1, -1, -1):
            s = sum((p[row, j] * inv[j, col] for j in range(row + 1, col + 1)), 0)
            inv[row, col] = -s
    return inv


def is_rank_unitriangular(p: np.ndarray, ranks: list[int]) -> bool:
    """Diagonal 1 and p[i, j] != 0 only if i == j or rank i > rank j."""
    k = p.shape[0]
    for i in range(k):
        for j in range(k):
            v = p[i, j]
            if i == j and v != 1:
                return False
            if i != j and v != 0 and not ranks[i] > ranks[j]:
                return False
    return True


def _contract(a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
    return np.tensordot(a, b, axes=axes)


class StructureTable:
    """Structure constants c[mu, nu, kappa] with e_mu e_nu = sum_kappa c e_kappa."""

    def __init__(self, basis: str, alpha: int, n: int, q: int, labels: list[str], constants: np.ndarray):
        if basis not in ("coset", "pbw"):
            raise ValueError("basis must be 'coset' or 'pbw'")
        self.basis = basis
        self.alpha = alpha
        self.n = n
        self.q = q
        self.labels = labels
        self.constants = constants

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __getitem__(self, idx):
        return self.constants[idx]

    def associativity_failures(self, limit: int = 10) -> list[tuple[int, int, int, int]]:
        """Quadruples (mu, nu, pi, psi) violating associativity (empty if associative)."""
        c = self.constants
        lhs = _contract(c, c, ([2], [0]))                        # [mu, nu, pi, psi]
        rhs = np.transpose(_contract(c, c, ([1], [2])), (0, 2, 3, 1))  # [mu, psi, nu, pi] -> [mu, nu, pi, psi]
        bad = np.argwhere(lhs != rhs)
        return [tuple(int(x) for x in b) for b in bad[:limit]]

    def is_associative(self) -> bool:
        return not self.associativity_failures(1)

    def unit_index(self) -> int:
        ident = "".join(["1" if i == j else "0" for i in range(self.alpha) for j in range(self.alpha)])
        return self.labels.index(f"{self.alpha}|{ident}|{ident}")

    def to_json(self) -> str:
        k = self.dim
        triples = []
        for mu in range(k):
            for nu in range(k):
                for ka in range(k):
                    v = self.constants[mu, nu, ka]
                    if v != 0:
                        triples.append({"mu": mu, "nu": nu, "kappa": ka, "c": _frac_str(v)})
        doc = {"basis": self.basis, "alpha": self.alpha, "n": self.n, "q": self.q,
               "labels": self.labels, "constants": triples}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "StructureTable":
        doc = json.loads(text)
        k = len(doc["labels"])
        c = np.zeros((k, k, k), dtype=object)
        for t in doc["constants"]:
            c[t["mu"], t["nu"], t["kappa"]] = _frac_parse(t["c"])
        return cls(doc["basis"], doc["alpha"], doc["n"], doc["q"], doc["labels"], c)


def _frac_str(v) -> str:
    f = _as_fraction(v)
    return f"{f.numerator}/{f.denominator}"


def _frac_parse(s: str):
    f = Fraction(s)
    return int(f) if f.denominator == 1 else f


def structure_constants(ctx: AlgebraContext, basis: str = "coset") -> StructureTable:
    """The full structure tensor in the coset or pbw basis."""
    labels = [lam.key() for lam in ctx.labels]
    coset = ctx.table.astype(object)
    if basis == "coset":
        return StructureTable("coset", ctx.alpha, ctx.n, ctx.q, labels, coset)
    if basis != "pbw":
        raise ValueError("basis must be 'coset' or 'pbw'")
    p = ctx.pbw_matrix()
    if not is_rank_unitriangular(p, ctx.ranks):
        raise ArithmeticError("pbw change of basis is not unitriangular; it may be singular")
    p_inv = unitriangular_inverse(p)
    # products of pbw vectors in coset coordinates, then back to pbw coordinates
    t = _contract(p, coset, ([0], [0]))            # [mu', b, k]
    t = _contract(p, t, ([0], [1]))                # [nu', mu', k]
    t = np.transpose(t, (1, 0, 2))                 # [mu', nu', k]
    pbw = _contract(t, p_inv, ([2], [1]))          # [mu', nu', j]
    return StructureTable("pbw", ctx.alpha, ctx.n, ctx.q, labels, pbw)


def table_gram_det(table: StructureTable) -> Fraction:
    """Determinant of the regular-representation trace form of a concrete table."""
    c = table.constants
    k = table.dim
    traces = [sum(c[i, j, j] for j in range(k)) for i in range(k)]
    gram = [[sum(c[m, n, i] * traces[i] for i in range(k)) for n in range(k)] for m in range(k)]
    return det_fraction(gram)
