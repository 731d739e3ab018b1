import numpy as np
import pytest

from cosetiq.algebra import AlgebraContext
from cosetiq.pbl import idempotent
from cosetiq.relations import GENERIC_FAMILIES, verify_relations
from tests.conftest import context

GRID = [(1, 1, 2), (1, 2, 2), (2, 2, 2), (1, 1, 3)]
CORE = list(GENERIC_FAMILIES) + ["pr:ThetaTheta", "l:thetatheta"]


@pytest.mark.parametrize("alpha,n,q", GRID)
def test_all_families_pass(alpha, n, q):
    rep = verify_relations(context(alpha, n, q))
    assert rep.passed, rep.summary()
    for f in rep.families:
        assert f.passed, (f.name, f.failures[:3], f.choice_dependent[:3])


def test_summary_alpha1():
    rep = verify_relations(context(1, 1, 2))
    assert rep.summary() == "all relations PASS (6 relation families, 9 instances)"


def test_family_names_alpha2():
    rep = verify_relations(context(2, 2, 2))
    assert {f.name for f in rep.core()} == set(CORE)
    assert rep.instance_count == 204
    assert all(rep.family(name).instances > 0 for name in CORE)


def test_diagnostics_do_not_enter_verdict():
    rep = verify_relations(context(2, 2, 2))
    diags = [f for f in rep.families if f.diagnostic]
    assert diags and all(f.passed for f in diags)
    rep2 = verify_relations(context(2, 2, 2), diagnostics=False)
    assert not any(f.diagnostic for f in rep2.families)
    assert rep2.instance_count == rep.instance_count


def test_family_filter():
    rep = verify_relations(context(2, 2, 2), families=["eq:g1g2"], diagnostics=False)
    assert [f.name for f in rep.families] == ["eq:g1g2"]
    with pytest.raises(KeyError):
        rep.family("eq:hL")


def perturbed(ctx, i, j, k, delta=1):
    table = ctx.table.copy()
    table[i, j, k] += delta
    return AlgebraContext(ctx.alpha, ctx.n, ctx.q, ctx.labels, table, ctx.method)


@pytest.mark.parametrize("alpha,n,q", [(1, 1, 2), (2, 2, 2)])
def test_perturbation_is_detected(alpha, n, q):
    # every product (generator) * theta(L) is exercised by some relation
    ctx = context(alpha, n, q)
    k = ctx.dim
    gens = [i for i, lam in enumerate(ctx.labels)
            if lam.rank == alpha or (lam.rank == alpha - 1 and lam == idempotent(lam.dom))]
    thetas = [i for i in gens if ctx.ranks[i] == alpha - 1]
    rng = np.random.default_rng(11)
    for _ in range(8):
        i = gens[int(rng.integers(len(gens)))]
        j = thetas[int(rng.integers(len(thetas)))]
        l = int(rng.integers(k))
        rep = verify_relations(perturbed(ctx, i, j, l))
        assert not rep.passed
        assert "FAIL" in rep.summary()


def test_choice_dependence_reported_at_q3():
    # at alpha = 2, q = 3 a(gamma) theta(L) depends on the choice of gamma
    rep = verify_relations(context(2, 2, 3))
    assert rep.family("eq:Theta-Theta").choice_dependent
    assert rep.family("eq:Theta-Theta/choice-sum").passed
    for name in ("eq:g1g2", "eq:gL", "eq:hL", "cor:kgh", "eq:Theta-square", "l:thetatheta"):
        assert rep.family(name).passed, name
