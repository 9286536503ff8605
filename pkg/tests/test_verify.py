import json
import shutil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidmono.braid import BraidWord, delta, equals, full_twist, power
from braidmono.engine import Arrangement, degenerate_bmf
from braidmono.factorization import Factor, Factorization, LabelError, LabelMap
from braidmono.notation import parse_factorization
from braidmono.verify import (FixtureError, assemble, canonical_key, conjugate_all, degree_audit, forget,
                              forget_degree, full_audit, hurwitz_equiv_bounded, hurwitz_move,
                              invariance_check, load_f222, product_check, twist_with_pair_powers,
                              vertex_product_check)
from braidmono.data import fixture_dir

from conftest import braid_words, random_word


def sigma(n, i, k=1):
    return BraidWord.sigma(n, i, k)


def factorization(words):
    n = words[0].strands
    return Factorization(n, tuple(Factor(w) for w in words), LabelMap.numbered(n))


@pytest.fixture(scope="module")
def surface():
    return load_f222()


# ---------------------------------------------------------------------------
# forgetting


def test_forget():
    assert forget(BraidWord.identity(6), (1, 4)) == BraidWord.identity(2)
    with pytest.raises(ValueError):
        forget(sigma(3, 1), ())


def test_forget_degree_of_doubled_fibers():
    f = parse_factorization("@doubled 3\nFullTwist<1,3'>")
    assert [forget_degree(f, i) for i in (1, 2, 3)] == [2, 2, 2]
    g = parse_factorization("@doubled 2\nZ[1,1'] Z2[1',2] Zsq[1,1',2,2']")
    assert forget_degree(g, "1") == 1
    assert forget_degree(g, 2) == 0
    with pytest.raises(LabelError):
        forget_degree(g, "3")


# ---------------------------------------------------------------------------
# Hurwitz moves


def test_hurwitz_move_by_hand():
    f = factorization([sigma(3, 1), sigma(3, 2)])
    g = hurwitz_move(f, 1)
    assert g[0].braid.letters == (1, 2, -1)
    assert g[1].braid == sigma(3, 1)
    assert equals(g.product(), f.product())
    with pytest.raises(IndexError):
        hurwitz_move(f, 2)
    with pytest.raises(ValueError):
        hurwitz_move(f, 1, 0)


def test_moves_on_random_factorizations(rng):
    for _ in range(200):
        m = rng.randint(2, 6)
        f = factorization([random_word(rng, 6, rng.randint(1, 5)) for _ in range(m)])
        k = rng.randint(1, m - 1)
        g = hurwitz_move(f, k)
        assert equals(g.product(), f.product())
        back = hurwitz_move(g, k, -1)
        assert canonical_key(back.braids()) == canonical_key(f.braids())


@settings(max_examples=40, deadline=None)
@given(st.lists(braid_words(min_strands=4, max_strands=4, max_len=4), min_size=4, max_size=5), st.data())
def test_distant_moves_commute(words, data):
    f = factorization(words)
    k = data.draw(st.integers(1, len(f) - 1))
    j = data.draw(st.integers(1, len(f) - 1))
    if abs(k - j) < 2:
        return
    a = hurwitz_move(hurwitz_move(f, k), j)
    b = hurwitz_move(hurwitz_move(f, j), k)
    assert canonical_key(a.braids()) == canonical_key(b.braids())


def test_search_trivial_cases():
    f = factorization([sigma(3, 1), sigma(3, 2), sigma(3, 1, 2)])
    assert hurwitz_equiv_bounded(f, f).depth == 0
    assert hurwitz_equiv_bounded(f, hurwitz_move(f, 2)).depth == 1
    g = factorization([sigma(3, 2), sigma(3, 1), sigma(3, 1, 2)])
    res = hurwitz_equiv_bounded(f, g)
    assert res.status == "not-equivalent" and "products" in res.reason
    assert hurwitz_equiv_bounded(f, factorization([sigma(3, 1)])).status == "not-equivalent"
    with pytest.raises(ValueError):
        hurwitz_equiv_bounded(f, f, nodes=0)


def test_search_budget_is_inconclusive():
    f = factorization([sigma(4, 1), sigma(4, 2), sigma(4, 3), sigma(4, 1)])
    g = factorization([sigma(4, 1), sigma(4, 2), sigma(4, 1), sigma(4, 3)])
    # same product in a different order, far from the start
    h = Factorization(4, (Factor(g.product()), Factor(BraidWord.identity(4)),
                          Factor(BraidWord.identity(4)), Factor(BraidWord.identity(4))))
    res = hurwitz_equiv_bounded(f, h, depth=2, nodes=50)
    assert res.status == "not-found"


def test_triangle_under_the_full_twist():
    f = degenerate_bmf(Arrangement([1, 2, 3], [(1, 2), (1, 3), (2, 3)]))
    res = hurwitz_equiv_bounded(conjugate_all(f, full_twist(3)), f, 6, 10**6)
    assert res.equivalent
    # the half twist permutes the nodes; three moves undo it
    res = hurwitz_equiv_bounded(f, conjugate_all(f, delta(3)), 6, 10**6)
    assert res.equivalent and res.depth == 3


def test_invariance():
    f = parse_factorization("@doubled 3\nZ[1,1']")
    for j in (2, 3):
        h = BraidWord.sigma(6, f.labels.pos(str(j)))
        res = invariance_check(f, h)
        assert res.equivalent and res.depth == 0
    any_f = factorization([sigma(4, 1), sigma(4, 3, 2), sigma(4, 2)])
    assert invariance_check(any_f, BraidWord.identity(4)).equivalent


@pytest.mark.parametrize("label, m", [("1", 1), ("1", -1), ("2", 1), ("2", -1), ("1", 2)])
def test_parasitic_block_invariance(label, m):
    # [DERIVED] the search itself is the oracle; it finds the moves
    g = parse_factorization("@doubled 2\nZsqb[1,1',2,2']{above}")
    h = power(BraidWord.sigma(4, g.labels.pos(label)), m)
    res = invariance_check(g, h, depth=4)
    assert res.equivalent and res.depth > 0


# ---------------------------------------------------------------------------
# products


def test_product_check():
    node = parse_factorization("@strands 2\nZ2[1,2]")
    assert product_check(node, full_twist(2)).equal
    bad = product_check(parse_factorization("@strands 3\nZ2[1,2] Z2[2,3]"), full_twist(3))
    assert not bad.equal and bad.degree_delta == -2 and bad.permutation_equal
    wrong = product_check(parse_factorization("@strands 3\nZ[1,2]"), BraidWord.identity(3))
    assert wrong.permutation_mismatch == (1, 2)
    assert product_check(node, full_twist(2), normal_forms=False).equal is None


@settings(max_examples=100, deadline=None)
@given(braid_words(max_len=10), braid_words(max_len=10))
def test_product_check_is_sound(a, b):
    if a.strands != b.strands:
        return
    res = product_check(a, b)
    if res.equal:
        assert res.necessary


def test_twist_with_pair_powers():
    labels = LabelMap.doubled(2)
    t = twist_with_pair_powers(labels, {"1": -2, "2": -2})
    zsq = parse_factorization("@doubled 2\nZsq[1,1',2,2']").product()
    assert equals(t, zsq)
    with pytest.raises(LabelError):
        twist_with_pair_powers(LabelMap(("1", "2", "1'")), {"1": 1})


# ---------------------------------------------------------------------------
# the surface


def test_audit(surface):
    r = degree_audit(surface)
    assert (r.parasitic, r.three_points, r.branch, r.six_points) == (800, 80, 2, 378)
    assert r.total == r.expected_total == 36 * 35
    assert r.parasitic_squares == 100
    assert r.vertex_degrees[2] == 10
    assert r.six_point_split[5] == {1: 6, 2: 24, 3: 24}
    assert r.passed


def test_audit_without_the_extra_branch_point(surface):
    r = degree_audit(surface.without(14))
    assert r.total == 1259 and not r.passed and r.missing == (14,)


def test_forgetting_degrees(surface):
    r = full_audit(surface)
    assert [r.forgetting[f"f{i}"] for i in range(1, 19)] == [2] * 18
    assert r.forgetting["f7(v3)"] == 1
    assert r.forgetting["f7(v7)"] == 0
    assert r.forgetting["f16(v7)"] == 2
    assert r.passed
    doc = r.to_json()
    assert doc["schema"].startswith("braidmono.report/")
    assert json.loads(json.dumps(doc)) == doc
    short = full_audit(surface.without(14))
    assert short.forgetting["f7"] == 1 and not short.checks["forgetting"]


def test_assembly(surface):
    eps = assemble(surface)
    assert eps.strands == 36 and eps.degree == 1260
    assert eps.labels == LabelMap.doubled(18)


def test_vertex_product_necessary_conditions(surface):
    res = vertex_product_check(surface, 7)
    assert res.degree_delta == 0 and res.permutation_equal and res.equal is None


def test_missing_components_are_named(tmp_path):
    with pytest.raises(FixtureError) as err:
        load_f222(tmp_path)
    assert err.value.missing == ("arrangement.json",)
    src = fixture_dir() / "f222"
    shutil.copy(src / "arrangement.json", tmp_path)
    shutil.copy(src / "vertex_01.dsl", tmp_path)
    with pytest.raises(FixtureError) as err:
        load_f222(tmp_path)
    assert "vertex_02.dsl" in err.value.missing and "vertex_01.dsl" not in err.value.missing
    assert len(err.value.missing) == 13
