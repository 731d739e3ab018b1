"""Exhaustive verification of the defining relations.

Every relation is instantiated for all admissible tuples and checked as an
exact equality.  The checks only use ``a(g)``, ``theta(S)``, ring operations
and the scalar ``t`` of the backend, so the same code runs on a concrete
algebra (t = q^n, rational coefficients) and on the interpolated algebra
(t a formal variable, polynomial coefficients).

Backend protocol: attributes ``field``, ``alpha``, ``q``, ``t``; methods
``a(g)``, ``theta(S)``, ``unit()``, ``zero()``.  Concrete-only families also
need ``coset(lam)`` and element ``coefficient``/``items_idx`` access.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .groups import (enumerate_gl, gamma_involution, involution_choices, maps_subspace,
                     pointwise_stabilizer, transport_choices, xi_subgroup)
from .linalg import MatF, Subspace, enumerate_subspaces, hyperplanes, invert
from .pbl import PartialBijection, idempotent


def _sub(s: Subspace) -> str:
    return "<" + ",".join("".join(str(x) for x in r) for r in s.rows()) + ">"


def _mat(g: MatF) -> str:
    return "[" + ";".join("".join(str(x) for x in r) for r in g.as_tuple()) + "]"


@dataclass
class FamilyResult:
    name: str
    instances: int = 0
    failures: list[str] = dc_field(default_factory=list)
    choice_dependent: list[str] = dc_field(default_factory=list)
    diagnostic: bool = False
    note: str = ""

    @property
    def vacuous(self) -> bool:
        return self.instances == 0

    @property
    def passed(self) -> bool:
        return not self.failures and not self.choice_dependent

    def fail(self, msg: str, limit: int = 20):
        if len(self.failures) < limit:
            self.failures.append(msg)
        elif len(self.failures) == limit:
            self.failures.append("...")

    def as_dict(self) -> dict:
        return {"name": self.name, "instances": self.instances, "passed": self.passed,
                "failures": self.failures, "choice_dependent": self.choice_dependent,
                "diagnostic": self.diagnostic, "note": self.note}


@dataclass
class RelationReport:
    alpha: int
    q: int
    n: int | None
    families: list[FamilyResult]

    def core(self) -> list[FamilyResult]:
        return [f for f in self.families if not f.diagnostic and not f.vacuous]

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families if not f.diagnostic)

    @property
    def instance_count(self) -> int:
        return sum(f.instances for f in self.core())

    def summary(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        bad = [f.name for f in self.families if not f.diagnostic and not f.passed]
        tail = f"; failing: {', '.join(bad)}" if bad else ""
        return (f"all relations {word} ({len(self.core())} relation families, "
                f"{self.instance_count} instances){tail}")

    def family(self, name: str) -> FamilyResult:
        for f in self.families:
            if f.name == name:
                return f
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "q": self.q, "n": self.n, "passed": self.passed,
                "summary": self.summary(), "families": [f.as_dict() for f in self.families]}


# --- coefficients of the second group, as functions of t ------------------

def theta_square_coeffs(q: int, alpha: int, t):
    """(s, u) with Theta(L)^2 = s Theta(L) + u sum_{h in Xi(L)} A(h)."""
    s = (t * q - 2 * q + 1) * q**(alpha - 1)
    u = (t - 1) * q**alpha
    return s, u


def _pinned_gamma(T: Subspace, S: Subspace) -> MatF:
    if T == S:
        return MatF.identity(T.field, T.ambient)
    return gamma_involution(T, S)


def _commutator(x, y):
    return x * y - y * x


def _distinct(elems) -> list:
    out = []
    for e in elems:
        if not any(e == o for o in out):
            out.append(e)
    return out


# --- families --------------------------------------------------------------

def check_g1g2(alg, gl) -> FamilyResult:
    res = FamilyResult("eq:g1g2")
    for g1 in gl:
        for g2 in gl:
            res.instances += 1
            if alg.a(g1) * alg.a(g2) != alg.a(g1 @ g2):
                res.fail(f"g1={_mat(g1)} g2={_mat(g2)}")
    return res


def check_gL(alg, gl, hyps) -> FamilyResult:
    res = FamilyResult("eq:gL")
    for g in gl:
        a_g, a_inv = alg.a(g), alg.a(invert(g))
        for L in hyps:
            res.instances += 1
            if a_g * alg.theta(L) * a_inv != alg.theta(maps_subspace(g, L)):
                res.fail(f"g={_mat(g)} L={_sub(L)}")
    return res


def check_hL(alg, hyps) -> FamilyResult:
    res = FamilyResult("eq:hL")
    for L in hyps:
        th = alg.theta(L)
        for h in xi_subgroup(L):
            res.instances += 1
            if alg.a(h) * th != th:
                res.fail(f"h={_mat(h)} L={_sub(L)}")
    return res


def check_kgh(alg, gl, hyps) -> FamilyResult:
    """Both parts: Theta(L) A(h) = Theta(L), and A(kgh) Theta(L) = A(g) Theta(L)."""
    res = FamilyResult("cor:kgh")
    xi = {L: xi_subgroup(L) for L in hyps}
    for L in hyps:
        th = alg.theta(L)
        for h in xi[L]:
            res.instances += 1
            if th * alg.a(h) != th:
                res.fail(f"(a) h={_mat(h)} L={_sub(L)}")
    for g in gl:
        for L in hyps:
            target = alg.a(g) * alg.theta(L)
            gL = maps_subspace(g, L)
            for h in xi[L]:
                for k in xi[gL]:
                    res.instances += 1
                    if alg.a(k @ g @ h) * alg.theta(L) != target:
                        res.fail(f"(b) g={_mat(g)} h={_mat(h)} k={_mat(k)} L={_sub(L)}")
    return res


def check_theta_square(alg, hyps) -> FamilyResult:
    res = FamilyResult("eq:Theta-square")
    s, u = theta_square_coeffs(alg.q, alg.alpha, alg.t)
    for L in hyps:
        res.instances += 1
        th = alg.theta(L)
        xi_sum = alg.zero()
        for h in xi_subgroup(L):
            xi_sum = xi_sum + alg.a(h)
        if th * th != s * th + u * xi_sum:
            res.fail(f"L={_sub(L)}")
    return res


def _gamma_term(alg, T: Subspace, S: Subspace, N: Subspace, X: Subspace, res: FamilyResult, kind: str):
    """Pinned value of a gamma-dependent summand, after checking every admissible choice agrees.

    ``kind`` is "comm" for [A(gamma_{T,S}), Theta(X)] and "left" for A(gamma_{T,S}) Theta(X).
    """
    th = alg.theta(X)

    def value(g):
        return _commutator(alg.a(g), th) if kind == "comm" else alg.a(g) * th

    pinned = value(_pinned_gamma(T, S))
    for g in involution_choices(T, S, N):
        if value(g) != pinned:
            msg = f"gamma_{{{_sub(T)},{_sub(S)}}} with {kind} on {_sub(X)}"
            if msg not in res.choice_dependent:
                res.choice_dependent.append(msg)
            break
    return pinned


def check_theta_theta(alg, hyps) -> FamilyResult:
    res = FamilyResult("eq:Theta-Theta")
    q, alpha = alg.q, alg.alpha
    coef = (q - 1) * q**(alpha - 2) if alpha >= 2 else 0
    cache = {}

    def term(T, S, X):
        key = (T, S, X)
        if key not in cache:
            cache[key] = _gamma_term(alg, T, S, T.intersect(S), X, res, "comm")
        return cache[key]

    for L in hyps:
        for M in hyps:
            if L == M:
                continue
            res.instances += 1
            N = L.intersect(M)
            lhs = _commutator(alg.theta(L), alg.theta(M))
            inner = term(L, M, L)
            for T in hyps:
                if T == L or T == M or not T.contains_subspace(N):
                    continue
                inner = inner + term(T, L, L) - term(T, M, M)
            if lhs != coef * inner:
                res.fail(f"L={_sub(L)} M={_sub(M)}")
    return res


def check_theta_theta_choice_sum(alg, hyps) -> FamilyResult:
    """Diagnostic: each gamma-commutator replaced by the sum over every admissible gamma."""
    res = FamilyResult("eq:Theta-Theta/choice-sum", diagnostic=True,
                       note="sum over all involutions gamma, coefficient 1 each")
    cache = {}

    def term(T, S, X):
        key = (T, S, X)
        if key not in cache:
            th = alg.theta(X)
            tot = alg.zero()
            for g in involution_choices(T, S, T.intersect(S)):
                tot = tot + _commutator(alg.a(g), th)
            cache[key] = tot
        return cache[key]

    for L in hyps:
        for M in hyps:
            if L == M:
                continue
            res.instances += 1
            N = L.intersect(M)
            inner = term(L, M, L)
            for T in hyps:
                if T == L or T == M or not T.contains_subspace(N):
                    continue
                inner = inner + term(T, L, L) - term(T, M, M)
            if _commutator(alg.theta(L), alg.theta(M)) != inner:
                res.fail(f"L={_sub(L)} M={_sub(M)}")
    return res


def check_relation_last_map_sum(alg, hyps) -> FamilyResult:
    """Diagnostic: A(gamma_{T,S}) Theta(T) replaced by the sum over all restrictions T -> S fixing N."""
    res = FamilyResult("eq:relation-last/map-sum", diagnostic=True,
                       note="sum over all maps T->S fixing N, coefficient 1 each")
    unit = alg.unit()
    for L in hyps:
        for M in hyps:
            if L == M:
                continue
            N = L.intersect(M)
            around = [T for T in hyps if T.contains_subspace(N)]
            inner = alg.theta(L) * alg.theta(M)
            for T in around:
                if T == M:
                    continue
                th = alg.theta(T)
                for S in around:
                    if S == L:
                        continue
                    for v in _distinct(alg.a(g) * th for g in transport_choices(T, S, N)):
                        inner = inner - v
            for eta in pointwise_stabilizer(N):
                res.instances += 1
                if not ((alg.a(eta) - unit) * inner).is_zero():
                    res.fail(f"L={_sub(L)} M={_sub(M)} eta={_mat(eta)}")
    return res


def check_relation_last(alg, hyps) -> FamilyResult:
    res = FamilyResult("eq:relation-last")
    unit = alg.unit()
    for L in hyps:
        for M in hyps:
            if L == M:
                continue
            N = L.intersect(M)
            around = [T for T in hyps if T.contains_subspace(N)]
            inner = alg.theta(L) * alg.theta(M)
            for T in around:
                if T == M:
                    continue
                for S in around:
                    if S == L:
                        continue
                    inner = inner - _gamma_term(alg, T, S, N, T, res, "left")
            for eta in pointwise_stabilizer(N):
                res.instances += 1
                if not ((alg.a(eta) - unit) * inner).is_zero():
                    res.fail(f"L={_sub(L)} M={_sub(M)} eta={_mat(eta)}")
    return res


def check_pr_theta_theta(alg, hyps) -> tuple[FamilyResult, FamilyResult]:
    """The expansion of theta(L) theta(M) around N = L & M (concrete algebras only).

    Returns the literal form (one beta_{S,T} per pair, weight (q-1) q^(alpha-2))
    and, as a diagnostic, the form summing over every restriction S -> T that
    fixes N pointwise, each with weight 1.
    """
    res = FamilyResult("pr:ThetaTheta")
    diag = FamilyResult("pr:ThetaTheta/map-sum", diagnostic=True,
                        note="sum over all maps S->T fixing N, coefficient 1 each")
    q, alpha = alg.q, alg.alpha
    coef = (q - 1) * q**(alpha - 2) if alpha >= 2 else 0
    for L in hyps:
        for M in hyps:
            if L == M:
                continue
            res.instances += 1
            diag.instances += 1
            N = L.intersect(M)
            around = [T for T in hyps if T.contains_subspace(N)]
            lhs = alg.theta(L) * alg.theta(M)
            literal = alg.coset(idempotent(N))
            mapsum = alg.coset(idempotent(N))
            for S in around:
                if S == M:
                    continue
                th = alg.theta(S)
                for T in around:
                    if T == L:
                        continue
                    pinned = alg.a(_pinned_gamma(S, T)) * th
                    values = _distinct(alg.a(g) * th for g in transport_choices(S, T, N))
                    if len(values) > 1:
                        msg = f"beta_{{{_sub(S)},{_sub(T)}}}: {len(values)} distinct values"
                        if msg not in res.choice_dependent:
                            res.choice_dependent.append(msg)
                    literal = literal + coef * pinned
                    for v in values:
                        mapsum = mapsum + v
            if lhs != literal:
                res.fail(f"L={_sub(L)} M={_sub(M)}")
            if lhs != mapsum:
                diag.fail(f"L={_sub(L)} M={_sub(M)}")
    return res, diag


def check_l_thetatheta(alg) -> FamilyResult:
    """theta(L) theta(M) = theta(L & M) + nonnegative terms of rank >= max(dim L, dim M)."""
    res = FamilyResult("l:thetatheta")
    f, alpha = alg.field, alg.alpha
    subs = list(enumerate_subspaces(f, alpha))
    for L in subs:
        for M in subs:
            if (L + M).dim != alpha:
                continue
            res.instances += 1
            prod = alg.theta(L) * alg.theta(M)
            bottom = alg.label_index(idempotent(L.intersect(M)))
            floor = max(L.dim, M.dim)
            ok = prod.coefficient(bottom) == 1
            for i, c in prod.items_idx():
                if i == bottom:
                    continue
                if c <= 0 or alg.ranks[i] < floor:
                    ok = False
            if not ok:
                res.fail(f"L={_sub(L)} M={_sub(M)}")
    return res


GENERIC_FAMILIES = ("eq:g1g2", "eq:gL", "eq:hL", "cor:kgh", "eq:Theta-square", "eq:Theta-Theta",
                    "eq:relation-last")


def verify_relations(alg, concrete: bool = True, families=None, diagnostics: bool = True) -> RelationReport:
    """Run every relation family on ``alg``; ``concrete`` enables the coset-level families.

    Diagnostic families (summed-over-choices variants) are reported but do not
    enter the pass/fail verdict.
    """
    f, alpha = alg.field, alg.alpha
    gl = list(enumerate_gl(alpha, f.q))
    hyps = hyperplanes(f, alpha)
    want = set(families) if families is not None else None

    def on(name):
        return want is None or name in want

    out = []
    if on("eq:g1g2"):
        out.append(check_g1g2(alg, gl))
    if on("eq:gL"):
        out.append(check_gL(alg, gl, hyps))
    if on("eq:hL"):
        out.append(check_hL(alg, hyps))
    if on("cor:kgh"):
        out.append(check_kgh(alg, gl, hyps))
    if on("eq:Theta-square"):
        out.append(check_theta_square(alg, hyps))
    if on("eq:Theta-Theta"):
        out.append(check_theta_theta(alg, hyps))
    if on("eq:relation-last"):
        out.append(check_relation_last(alg, hyps))
    if diagnostics and alpha >= 2:
        out.append(check_theta_theta_choice_sum(alg, hyps))
        out.append(check_relation_last_map_sum(alg, hyps))
    if concrete:
        if on("pr:ThetaTheta"):
            lit, diag = check_pr_theta_theta(alg, hyps)
            out.append(lit)
            if diagnostics:
                out.append(diag)
        if on("l:thetatheta"):
            out.append(check_l_thetatheta(alg))
    return RelationReport(alpha, f.q, getattr(alg, "n", None), out)
