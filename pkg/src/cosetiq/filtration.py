"""The Theta-degree filtration A_0 c A_1 c ... c A_alpha of a concrete algebra.

A_k is spanned by the pbw vectors a(g°) theta(L_1°)...theta(L_j°) with j <= k.
Congruences X =_k Y (equality in gr_k) are decided as exact membership of
X - Y in A_(k-1), by Gaussian elimination over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import permutations, product

from .algebra import AlgebraContext, AlgebraElement, is_rank_unitriangular
from .groups import enumerate_gl, maps_subspace, pointwise_stabilizer, xi_subgroup
from .linalg import Subspace, enumerate_subspaces, hyperplanes
from .pbl import PartialBijection, pbw_hyperplanes, sigma_rho


class RationalSpan:
    """Incrementally built row space over Q, kept in reduced echelon form."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, list[Fraction]] = {}

    def copy(self) -> "RationalSpan":
        out = RationalSpan(self.dim)
        out.rows = {p: list(r) for p, r in self.rows.items()}
        return out

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        for p, row in self.rows.items():
            c = v[p]
            if c:
                for j, r in enumerate(row):
                    if r:
                        v[j] -= c * r
        return v

    def add(self, vec) -> bool:
        """Insert a vector; True if it enlarged the span."""
        v = self.reduce(vec)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for q, row in self.rows.items():
            c = row[p]
            if c:
                self.rows[q] = [a - c * b for a, b in zip(row, v)]
        self.rows[p] = v
        return True

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))


def dense(x: AlgebraElement) -> list[Fraction]:
    v = [Fraction(0)] * x.ctx.dim
    for i, c in x.items_idx():
        v[i] = c
    return v


def theta_hat(ctx: AlgebraContext, planes) -> AlgebraElement:
    out = ctx.unit()
    for L in planes:
        out = out * ctx.theta(L)
    return out


def hyperplane_decompositions(N: Subspace, limit: int | None = None):
    """Ordered tuples (L_1, ..., L_k) of hyperplanes with intersection exactly N."""
    f, alpha = N.field, N.ambient
    k = alpha - N.dim
    around = hyperplanes(f, alpha, containing=N)
    count = 0
    for tup in permutations(around, k):
        inter = Subspace.full(f, alpha)
        for L in tup:
            inter = inter.intersect(L)
        if inter == N:
            yield tup
            count += 1
            if limit is not None and count >= limit:
                return


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, msg: str):
        self.instances += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(msg)

    def as_dict(self) -> dict:
        return {"name": self.name, "instances": self.instances, "passed": self.passed,
                "failures": self.failures}


@dataclass
class FiltrationReport:
    alpha: int
    n: int
    q: int
    dims_gr: list[int]
    sigma: list[int]
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return self.dims_gr == self.sigma and all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        bad = [c.name for c in self.checks if not c.passed]
        tail = f"; failing: {', '.join(bad)}" if bad else ""
        return (f"filtration {word}: dims gr = {tuple(self.dims_gr)}, sigma = {tuple(self.sigma)}, "
                f"{len(self.checks)} checks, {sum(c.instances for c in self.checks)} instances{tail}")

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "n": self.n, "q": self.q, "passed": self.passed,
                "dims_gr": self.dims_gr, "sigma": self.sigma, "summary": self.summary(),
                "checks": [c.as_dict() for c in self.checks]}


class Filtration:
    """The subspaces A_0 c ... c A_alpha of one concrete algebra."""

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self.alpha = ctx.alpha
        pbw = ctx.pbw_elements()
        self.degree = [ctx.alpha - r for r in ctx.ranks]
        self.levels: list[RationalSpan] = []
        span = RationalSpan(ctx.dim)
        for k in range(ctx.alpha + 1):
            for i, x in enumerate(pbw):
                if self.degree[i] == k:
                    span.add(dense(x))
            self.levels.append(span.copy())

    def level(self, k: int) -> RationalSpan:
        if k < 0:
            return RationalSpan(self.ctx.dim)
        return self.levels[min(k, self.alpha)]

    def dims(self) -> list[int]:
        return [s.rank for s in self.levels]

    def dims_gr(self) -> list[int]:
        d = self.dims()
        return [d[0]] + [d[k] - d[k - 1] for k in range(1, len(d))]

    def in_level(self, x: AlgebraElement, k: int) -> bool:
        return self.level(k).contains(dense(x))

    def congruent(self, x: AlgebraElement, y: AlgebraElement, k: int) -> bool:
        """x =_k y, i.e. x - y in A_(k-1)."""
        return self.in_level(x - y, k - 1)

    def degree_of(self, x: AlgebraElement) -> int:
        for k in range(self.alpha + 1):
            if self.in_level(x, k):
                return k
        raise AssertionError("element outside A_alpha")


def filtration_report(ctx: AlgebraContext, decomposition_limit: int | None = None) -> FiltrationReport:
    """Check the filtration theorem and its supporting lemmas on one concrete algebra.

    ``decomposition_limit`` caps the number of hyperplane decompositions tried
    per subspace N (None = all of them).
    """
    f, alpha, q = ctx.field, ctx.alpha, ctx.q
    fil = Filtration(ctx)
    dims_gr = fil.dims_gr()
    sigma = [sigma_rho(alpha, q, k) for k in range(alpha + 1)]
    gl = list(enumerate_gl(alpha, q))
    hyps = hyperplanes(f, alpha)
    checks = []

    # (a) every element has degree <= alpha; dim A = #PBL
    c = CheckResult("th:filtration.a")
    c.record(fil.level(alpha).rank == ctx.dim, f"dim A_alpha = {fil.level(alpha).rank} != {ctx.dim}")
    checks.append(c)

    # unitriangularity of the pbw change of basis
    c = CheckResult("pbw-unitriangular")
    c.record(is_rank_unitriangular(ctx.pbw_matrix(), ctx.ranks), "pbw matrix not unitriangular")
    checks.append(c)

    # A_k is also the span of all words a(g) theta(L_1)...theta(L_j), j <= k
    c = CheckResult("words-span")
    words = RationalSpan(ctx.dim)
    prefixes = [ctx.unit()]
    for k in range(alpha + 1):
        if k > 0:
            prefixes = [x * ctx.theta(L) for x in prefixes for L in hyps]
        for x in prefixes:
            for g in gl:
                words.add(dense(ctx.a(g) * x))
        c.record(words.rank == fil.level(k).rank
                 and all(fil.level(k).contains(r) for r in words.rows.values()),
                 f"k={k}: words span {words.rank}, A_k has {fil.level(k).rank}")
    checks.append(c)

    # (e) degree-k pbw vectors are independent modulo A_(k-1)
    c = CheckResult("th:filtration.e")
    for k in range(alpha + 1):
        c.record(dims_gr[k] == sigma[k], f"gr_{k}: {dims_gr[k]} vs sigma {sigma[k]}")
    checks.append(c)

    # (c) Theta-hat(N) in gr_k does not depend on the decomposition
    c = CheckResult("th:filtration.c")
    for N in enumerate_subspaces(f, alpha):
        k = N.codim
        if k == 0:
            continue
        ref = theta_hat(ctx, pbw_hyperplanes(N))
        for tup in hyperplane_decompositions(N, decomposition_limit):
            c.record(fil.congruent(theta_hat(ctx, tup), ref, k), f"N={N.rows()} planes={[L.rows() for L in tup]}")
    checks.append(c)

    # (d) a(g) Theta-hat(N) in gr_k depends only on g restricted to N
    c = CheckResult("th:filtration.d")
    pbw = ctx.pbw_elements()
    for N in enumerate_subspaces(f, alpha):
        k = N.codim
        th = theta_hat(ctx, pbw_hyperplanes(N))
        for g in gl:
            lam = PartialBijection.restriction(g, N)
            ref = pbw[ctx.label_index(lam)]
            c.record(fil.congruent(ctx.a(g) * th, ref, k), f"g={g.as_tuple()} N={N.rows()}")
    checks.append(c)

    # xi fixing N pointwise: A(xi) Theta-hat(N) =_k Theta-hat(N)
    c = CheckResult("fix-N-pointwise")
    for N in enumerate_subspaces(f, alpha):
        k = N.codim
        th = theta_hat(ctx, pbw_hyperplanes(N))
        for xi in pointwise_stabilizer(N):
            c.record(fil.congruent(ctx.a(xi) * th, th, k), f"xi={xi.as_tuple()} N={N.rows()}")
    checks.append(c)

    # Theta(L)^2 =_2 0 and Theta(L) Theta(M) =_2 Theta(M) Theta(L)
    c = CheckResult("eq:l1l2")
    if alpha >= 1:
        for L in hyps:
            th = ctx.theta(L)
            c.record(fil.in_level(th * th, 1), f"Theta(L)^2, L={L.rows()}")
        for L, M in product(hyps, hyps):
            if L != M:
                x, y = ctx.theta(L), ctx.theta(M)
                c.record(fil.congruent(x * y, y * x, 2), f"commutator L={L.rows()} M={M.rows()}")
    checks.append(c)

    # Theta(L1) Theta(L2) =_2 Theta(M) Theta(L2), pairwise distinct, M containing L1 & L2
    c = CheckResult("lemma:L1L2M")
    for L1, L2, M in product(hyps, hyps, hyps):
        if len({L1, L2, M}) == 3 and M.contains_subspace(L1.intersect(L2)):
            c.record(fil.congruent(ctx.theta(L1) * ctx.theta(L2), ctx.theta(M) * ctx.theta(L2), 2),
                     f"L1={L1.rows()} L2={L2.rows()} M={M.rows()}")
    checks.append(c)

    # Corollary: any two decompositions of a codim-2 subspace agree in gr_2
    c = CheckResult("cor:LLMM")
    if alpha >= 2:
        for N in enumerate_subspaces(f, alpha, alpha - 2):
            decs = list(hyperplane_decompositions(N, decomposition_limit))
            ref = theta_hat(ctx, decs[0])
            for tup in decs[1:]:
                c.record(fil.congruent(theta_hat(ctx, tup), ref, 2), f"N={N.rows()}")
    checks.append(c)

    # Theta(K) Theta-hat(N) =_(k+1) 0 for K a hyperplane containing N
    c = CheckResult("lemma:vanishing")
    for N in enumerate_subspaces(f, alpha):
        k = N.codim
        if k == 0:
            continue
        for tup in hyperplane_decompositions(N, decomposition_limit):
            th = theta_hat(ctx, tup)
            for K in hyps:
                if K.contains_subspace(N):
                    c.record(fil.in_level(ctx.theta(K) * th, k), f"K={K.rows()} planes={[L.rows() for L in tup]}")
    checks.append(c)

    # Xi(L) acts transitively on lines transversal to L
    c = CheckResult("xi-transitive")
    lines = list(enumerate_subspaces(f, alpha, 1))
    for L in hyps:
        transversal = [l for l in lines if not L.contains_subspace(l)]
        if not transversal:
            continue
        orbit = {maps_subspace(h, transversal[0]) for h in xi_subgroup(L)}
        c.record(orbit == set(transversal), f"L={L.rows()}")
    checks.append(c)

    return FiltrationReport(alpha, ctx.n, q, dims_gr, sigma, checks)
