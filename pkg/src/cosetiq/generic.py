"""The interpolated algebra family A[alpha; nu] with structure constants in t = q^nu.

Concrete structure tables at several n are interpolated entrywise (Lagrange in
t = q^n).  The resulting tensor of polynomials is checked for associativity,
for the defining relations with symbolic t, and for semisimplicity through
the determinant of the trace form.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import sympy

from .algebra import AlgebraContext, StructureTable, structure_constants, table_gram_det
from .gf import field_new
from .groups import DEFAULT_BUDGET
from .linalg import MatF, Subspace, invert
from .pbl import PartialBijection, idempotent
from .ratpoly import RatPoly, det_fraction, lagrange
from .relations import GENERIC_FAMILIES, verify_relations


class InterpolationError(RuntimeError):
    """Entrywise interpolants did not stabilize within the sample budget."""


def table_hash(table: StructureTable) -> str:
    return hashlib.sha256(table.to_json().encode()).hexdigest()


def concrete_table(alpha: int, n: int, q: int, basis: str = "pbw", method: str = "quotient",
                   budget: int = DEFAULT_BUDGET) -> StructureTable:
    return structure_constants(AlgebraContext.build(alpha, n, q, method, budget), basis)


def _entries(table: StructureTable) -> dict[tuple[int, int, int], Fraction]:
    c = table.constants
    return {tuple(int(x) for x in idx): Fraction(c[tuple(idx)]) for idx in np.argwhere(c != 0)}


class GenericAlgebra:
    """Structure constants as polynomials in t; sparse map (mu, nu, kappa) -> RatPoly."""

    def __init__(self, alpha: int, q: int, basis: str, labels: list[str],
                 constants: dict[tuple[int, int, int], RatPoly], samples: list[dict],
                 holdout: dict | None = None):
        self.alpha = alpha
        self.q = q
        self.basis = basis
        self.labels = labels
        self.constants = {k: v for k, v in constants.items() if not v.is_zero()}
        self.samples = samples
        self.holdout = holdout
        self._rows: dict[tuple[int, int], list[tuple[int, RatPoly]]] | None = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def entry(self, mu: int, nu: int, kappa: int) -> RatPoly:
        return self.constants.get((mu, nu, kappa), RatPoly())

    def degrees(self) -> dict[tuple[int, int, int], int]:
        return {k: v.degree for k, v in self.constants.items()}

    def max_degree(self) -> int:
        return max((v.degree for v in self.constants.values()), default=-1)

    def rows(self) -> dict[tuple[int, int], list[tuple[int, RatPoly]]]:
        if self._rows is None:
            rows: dict[tuple[int, int], list[tuple[int, RatPoly]]] = {}
            for (mu, nu, ka), v in sorted(self.constants.items()):
                rows.setdefault((mu, nu), []).append((ka, v))
            self._rows = rows
        return self._rows

    def evaluate(self, t) -> np.ndarray:
        """Dense object tensor of the constants at a value of t."""
        k = self.dim
        out = np.zeros((k, k, k), dtype=object)
        for idx, v in self.constants.items():
            val = v(t)
            out[idx] = int(val) if val.denominator == 1 else val
        return out

    def at(self, n: int) -> StructureTable:
        return StructureTable(self.basis, self.alpha, n, self.q, list(self.labels),
                              self.evaluate(Fraction(self.q**n)))

    def matches(self, table: StructureTable) -> bool:
        if table.labels != self.labels or table.basis != self.basis:
            return False
        return bool(np.all(self.evaluate(Fraction(self.q**table.n)) == table.constants))

    def to_json(self) -> str:
        triples = [{"mu": mu, "nu": nu, "kappa": ka, "c": v.to_strings()}
                   for (mu, nu, ka), v in sorted(self.constants.items())]
        doc = {"alpha": self.alpha, "q": self.q, "basis": self.basis, "variable": "t = q^n",
               "labels": self.labels, "constants": triples, "samples": self.samples,
               "holdout": self.holdout}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "GenericAlgebra":
        doc = json.loads(text)
        consts = {(t["mu"], t["nu"], t["kappa"]): RatPoly.from_strings(t["c"]) for t in doc["constants"]}
        return cls(doc["alpha"], doc["q"], doc["basis"], doc["labels"], consts, doc["samples"],
                   doc.get("holdout"))


def interpolate(alpha: int, q: int, samples: list[StructureTable],
                holdout: StructureTable | None = None) -> GenericAlgebra:
    """Entrywise Lagrange interpolation through the points t_i = q^(n_i).

    If ``holdout`` is given, its exact agreement with the interpolant is
    recorded in ``GenericAlgebra.holdout``.
    """
    if not samples:
        raise ValueError("need at least one sample table")
    ns = [s.n for s in samples]
    if len(set(ns)) != len(ns):
        raise ValueError("sample n values must be distinct")
    base = samples[0]
    for s in samples:
        if s.alpha != alpha or s.q != q:
            raise ValueError("sample tables belong to a different (alpha, q)")
        if s.labels != base.labels or s.basis != base.basis:
            raise ValueError("sample tables differ in basis or label order")
        if s.n < alpha:
            raise ValueError(f"sample n={s.n} is below alpha={alpha}")
    entries = [_entries(s) for s in samples]
    keys = sorted(set().union(*entries))
    consts = {}
    for key in keys:
        pts = [(Fraction(q**s.n), e.get(key, Fraction(0))) for s, e in zip(samples, entries)]
        consts[key] = lagrange(pts)
    prov = [{"n": s.n, "t": str(q**s.n), "source": table_hash(s)} for s in samples]
    ga = GenericAlgebra(alpha, q, base.basis, list(base.labels), consts, prov)
    if holdout is not None:
        ga.holdout = {"n": holdout.n, "source": table_hash(holdout), "predicted": ga.matches(holdout)}
    return ga


@dataclass
class Discovery:
    algebra: GenericAlgebra
    sample_ns: list[int]
    holdout_n: int
    stable: bool
    history: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.stable and bool(self.algebra.holdout and self.algebra.holdout["predicted"])


def discover(alpha: int, q: int, basis: str = "pbw", max_n: int | None = None,
             method: str = "quotient", budget: int = DEFAULT_BUDGET, tables=None) -> Discovery:
    """Adaptive interpolation: add n = alpha, alpha+1, ... until the interpolant is
    unchanged by the last added sample, then demand an exact prediction at the next n.

    ``tables`` may map n -> StructureTable to reuse precomputed samples.
    """
    cache = dict(tables or {})

    def table(n):
        if n not in cache:
            cache[n] = concrete_table(alpha, n, q, basis, method, budget)
        return cache[n]

    limit = max_n if max_n is not None else alpha + 8
    ns = [alpha, alpha + 1]
    history = []
    ga = interpolate(alpha, q, [table(n) for n in ns])
    while True:
        nxt = ns[-1] + 1
        if nxt + 1 > limit:
            raise InterpolationError(f"no stabilization for alpha={alpha}, q={q} up to n={limit}")
        grown = interpolate(alpha, q, [table(n) for n in ns + [nxt]])
        ns.append(nxt)
        if grown.constants != ga.constants:
            history.append(f"n={nxt}: interpolant changed (max degree {grown.max_degree()})")
            ga = grown
            continue
        history.append(f"n={nxt}: interpolant unchanged (max degree {grown.max_degree()})")
        hold = nxt + 1
        final = interpolate(alpha, q, [table(n) for n in ns], holdout=table(hold))
        if final.holdout["predicted"]:
            history.append(f"n={hold}: held-out table predicted exactly")
            return Discovery(final, ns, hold, True, history)
        history.append(f"n={hold}: held-out table NOT predicted; adding it as a sample")
        ga = interpolate(alpha, q, [table(n) for n in ns + [hold]])
        ns.append(hold)


def round_trip(ga: GenericAlgebra, tables) -> dict[int, bool]:
    """Exact agreement of the interpolant with concrete tables, keyed by n."""
    return {t.n: ga.matches(t) for t in tables}


# --- associativity ---------------------------------------------------------

def _coefficient_tensors(ga: GenericAlgebra) -> tuple[list[np.ndarray], int]:
    """Integer tensors C_d (one per power of t) and the common denominator D: c = sum C_d t^d / D."""
    k = ga.dim
    deg = max(ga.max_degree(), 0)
    den = 1
    for v in ga.constants.values():
        for c in v.coeffs:
            den = den * c.denominator // np.gcd(den, c.denominator)
    tensors = [np.zeros((k, k, k), dtype=object) for _ in range(deg + 1)]
    for idx, v in ga.constants.items():
        for d, c in enumerate(v.coeffs):
            tensors[d][idx] = int(c * den)
    big = max((abs(int(x)) for t in tensors for x in t.ravel()), default=0)
    if big and big * big * k * (deg + 1) < 2**62:
        tensors = [t.astype(np.int64) for t in tensors]
    return tensors, den


@dataclass
class AssociativityReport:
    quadruples: int
    failures: list[dict]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_associativity(ga: GenericAlgebra, limit: int = 10) -> AssociativityReport:
    """sum_k c^k_{mu nu} c^psi_{k pi} = sum_k c^psi_{mu k} c^k_{nu pi} as polynomials in t."""
    tensors, den = _coefficient_tensors(ga)
    k = ga.dim
    deg = len(tensors) - 1
    dt = tensors[0].dtype
    lhs = [np.zeros((k, k, k, k), dtype=dt) for _ in range(2 * deg + 1)]
    rhs = [np.zeros((k, k, k, k), dtype=dt) for _ in range(2 * deg + 1)]
    for i, a in enumerate(tensors):
        for j, b in enumerate(tensors):
            lhs[i + j] = lhs[i + j] + np.tensordot(a, b, axes=([2], [0]))
            # c^psi_{mu k} c^k_{nu pi}: index order (mu, k, psi) x (nu, pi, k) -> (mu, psi, nu, pi)
            rhs[i + j] = rhs[i + j] + np.transpose(np.tensordot(a, b, axes=([1], [2])), (0, 2, 3, 1))
    bad = set()
    for d in range(2 * deg + 1):
        for idx in np.argwhere(lhs[d] != rhs[d]):
            bad.add(tuple(int(x) for x in idx))
    failures = []
    for idx in sorted(bad)[:limit]:
        scale = Fraction(1, den * den)
        lp = RatPoly([Fraction(int(lhs[d][idx])) * scale for d in range(2 * deg + 1)])
        rp = RatPoly([Fraction(int(rhs[d][idx])) * scale for d in range(2 * deg + 1)])
        failures.append({"mu": idx[0], "nu": idx[1], "pi": idx[2], "psi": idx[3],
                         "lhs": str(lp), "rhs": str(rp)})
    return AssociativityReport(k**4, failures)


# --- the generic algebra as a relation backend ------------------------------

class GenericElement:
    """Sparse combination of basis vectors with polynomial coefficients."""

    __slots__ = ("alg", "_c")

    def __init__(self, alg: "GenericBackend", coeffs: dict[int, RatPoly]):
        self.alg = alg
        self._c = {i: c for i, c in coeffs.items() if not c.is_zero()}

    def items_idx(self):
        return sorted(self._c.items())

    def coefficient(self, i: int) -> RatPoly:
        return self._c.get(i, RatPoly())

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other):
        out = dict(self._c)
        for i, c in other._c.items():
            out[i] = out.get(i, RatPoly()) + c
        return GenericElement(self.alg, out)

    def __neg__(self):
        return GenericElement(self.alg, {i: -c for i, c in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GenericElement):
            rows = self.alg.ga.rows()
            out: dict[int, RatPoly] = {}
            for i, c in self._c.items():
                for j, d in other._c.items():
                    cd = c * d
                    for k, v in rows.get((i, j), ()):
                        out[k] = out.get(k, RatPoly()) + cd * v
            return GenericElement(self.alg, out)
        return GenericElement(self.alg, {i: c * other for i, c in self._c.items()})

    def __rmul__(self, other):
        return GenericElement(self.alg, {i: c * other for i, c in self._c.items()})

    def __eq__(self, other):
        return isinstance(other, GenericElement) and self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __repr__(self):
        return "GenericElement(" + " + ".join(f"({c})*[{self.alg.ga.labels[i]}]"
                                                for i, c in sorted(self._c.items())) + ")"


class GenericBackend:
    """Relation-checking view of a pbw-basis GenericAlgebra: a(g), Theta(L) are basis vectors."""

    def __init__(self, ga: GenericAlgebra):
        if ga.basis != "pbw":
            raise ValueError("generic relations are checked in the pbw basis")
        self.ga = ga
        self.alpha = ga.alpha
        self.q = ga.q
        self.n = None
        self.field = field_new(ga.q)
        self.t = RatPoly.t()
        self.index = {key: i for i, key in enumerate(ga.labels)}

    def basis(self, i: int) -> GenericElement:
        return GenericElement(self, {i: RatPoly([1])})

    def a(self, g: MatF) -> GenericElement:
        if invert(g) is None:
            raise ValueError("a(g) needs an invertible matrix")
        return self.basis(self.index[PartialBijection.total(g).key()])

    def theta(self, L: Subspace) -> GenericElement:
        if L.codim > 1:
            raise ValueError("only generators Theta(L) with codim L <= 1 are basis vectors")
        return self.basis(self.index[idempotent(L).key()])

    def unit(self) -> GenericElement:
        return self.a(MatF.identity(self.field, self.alpha))

    def zero(self) -> GenericElement:
        return GenericElement(self, {})


def check_generic_relations(ga: GenericAlgebra, diagnostics: bool = True):
    return verify_relations(GenericBackend(ga), concrete=False, families=GENERIC_FAMILIES,
                            diagnostics=diagnostics)


# --- semisimplicity --------------------------------------------------------

def gram_matrix(ga: GenericAlgebra) -> list[list[RatPoly]]:
    """G[mu][nu] = trace of left multiplication by e_mu e_nu, as polynomials in t."""
    k = ga.dim
    traces = [RatPoly() for _ in range(k)]
    for (ka, pi_, psi), v in ga.constants.items():
        if pi_ == psi:
            traces[ka] = traces[ka] + v
    gram = [[RatPoly() for _ in range(k)] for _ in range(k)]
    for (mu, nu, ka), v in ga.constants.items():
        if not traces[ka].is_zero():
            gram[mu][nu] = gram[mu][nu] + v * traces[ka]
    return gram


def gram_determinant(ga: GenericAlgebra, extra_checks: int = 2) -> RatPoly:
    """det G(t), by exact evaluation at enough points plus Lagrange interpolation."""
    gram = gram_matrix(ga)
    bound = sum(max((e.degree for e in row), default=-1) for row in gram)
    if bound < 0:
        return RatPoly()
    nodes = [Fraction(i) for i in range(bound + 1 + extra_checks)]

    def det_at(t):
        return det_fraction([[e(t) for e in row] for row in gram])

    values = [(t, det_at(t)) for t in nodes]
    poly = lagrange(values[:bound + 1])
    for t, v in values[bound + 1:]:
        if poly(t) != v:
            raise ArithmeticError("determinant interpolation failed its verification points")
    return poly


@dataclass
class SemisimplicityReport:
    det: RatPoly
    rational_roots: list[tuple[Fraction, int]]
    irrational_roots: list[tuple[str, int]]
    grid: dict[int, bool]
    concrete_agreement: dict[int, bool]
    factorization: str = ""

    @property
    def passed(self) -> bool:
        return (not self.det.is_zero() and all(self.grid.values())
                and all(self.concrete_agreement.values()))

    def as_dict(self) -> dict:
        return {"det": self.det.to_strings(), "det_text": str(self.det), "factorization": self.factorization,
                "rational_roots": [{"t": f"{r.numerator}/{r.denominator}", "multiplicity": m}
                                   for r, m in self.rational_roots],
                "irrational_roots": [{"t": s, "multiplicity": m} for s, m in self.irrational_roots],
                "grid_nonvanishing": {str(n): ok for n, ok in sorted(self.grid.items())},
                "concrete_agreement": {str(n): ok for n, ok in sorted(self.concrete_agreement.items())},
                "passed": self.passed}


def polynomial_roots(poly: RatPoly) -> tuple[list[tuple[Fraction, int]], list[tuple[str, int]], str]:
    """Exact rational roots and numerically localized irrational roots, with multiplicities."""
    if poly.degree <= 0:
        return [], [], str(poly)
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(poly.coeffs))
    const, factors = sympy.factor_list(sympy.Poly(expr, t, domain="QQ"))
    rational, irrational = [], []
    for fac, mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            rational.append((Fraction(int(r.p), int(r.q)), int(mult)))
        else:
            for z in fac.nroots(n=30):
                irrational.append((str(z), int(mult)))
    rational.sort()
    text = str(sympy.factor(expr))
    return rational, irrational, text


def semisimplicity_locus(ga: GenericAlgebra, grid_ns=None, tables=None) -> SemisimplicityReport:
    """det of the trace Gram matrix, its roots, and nonvanishing at t = q^n.

    ``tables`` (concrete StructureTables) are used to cross-check the
    polynomial determinant against the determinant computed from concrete data.
    """
    det = gram_determinant(ga)
    if det.is_zero():
        raise ArithmeticError("trace-form determinant vanishes identically")
    rational, irrational, text = polynomial_roots(det)
    ns = grid_ns if grid_ns is not None else [s["n"] for s in ga.samples]
    grid = {n: det(Fraction(ga.q**n)) != 0 for n in ns}
    agree = {t.n: table_gram_det(t) == det(Fraction(ga.q**t.n)) for t in (tables or [])}
    return SemisimplicityReport(det, rational, irrational, grid, agree, text)
