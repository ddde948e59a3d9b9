import math
import random
from fractions import Fraction
from itertools import product as iter_product

import pytest

from anticonc.bounds import theorem1_bound, theorem2_bound
from anticonc.dist import TwoPointVar
from anticonc.groups import make_cyclic, make_cyclic_power, make_dihedral, make_symmetric
from anticonc.search import (
    MODE_ANY,
    MODE_SYMMETRIC,
    SearchSpaceError,
    _search_fractions,
    any_pair_vars,
    conjecture_probe,
    exhaustive_rho,
    lemma1_check,
    symmetric_pair_vars,
    verify_theorem1,
    verify_theorem2,
)

from conftest import brute_force_law

F = Fraction


def test_eligible_symmetric_pairs():
    g6 = make_cyclic(6)
    assert [(v.a, v.b) for v in symmetric_pair_vars(g6, 5)] == [(1, 5)]
    # order-2 element 3 is skipped; {1,5} and {2,4} survive for min_order 2
    assert [(v.a, v.b) for v in symmetric_pair_vars(g6, 2)] == [(1, 5), (2, 4)]
    no_dedup = symmetric_pair_vars(g6, 2, dedup=False)
    assert len(no_dedup) == 4


def test_any_pair_vars_count():
    g = make_cyclic(5)
    assert len(any_pair_vars(g)) == math.comb(5, 2)


def test_exhaustive_rho_z6_symmetric():
    r = exhaustive_rho(make_cyclic(6), 2, 1, min_order=5, mode=MODE_SYMMETRIC)
    assert r.max_value == F(1, 2)
    assert r.laws_evaluated == 1
    assert r.enumeration == "multisets"
    assert [(v.a, v.b) for v in r.argmax] == [(1, 5), (1, 5)]


def test_exhaustive_rho_trivial_n1():
    for g in (make_cyclic(5), make_cyclic(7), make_dihedral(5)):
        r = exhaustive_rho(g, 1, 1, min_order=3, mode=MODE_SYMMETRIC)
        assert r.max_value == F(1, 2)


def test_exhaustive_rho_empty_eligible():
    with pytest.raises(ValueError, match="no admissible"):
        exhaustive_rho(make_cyclic(4), 2, 1, min_order=5, mode=MODE_SYMMETRIC)


def test_exhaustive_rho_cap():
    g = make_cyclic(12)
    with pytest.raises(SearchSpaceError) as err:
        exhaustive_rho(g, 6, 1, mode=MODE_ANY, laws_cap=1000)
    n_vars = len(any_pair_vars(g))
    assert err.value.laws == math.comb(n_vars + 5, 6)  # exact count reported


def test_verify_theorem1_z6_tight():
    g6 = make_cyclic(6)
    for n in range(1, 8):
        for k in (1, 2):
            r = verify_theorem1(g6, n, k, 5)
            assert r.slack == 0 and r.tight, (n, k)


def test_verify_theorem1_z5_slack():
    g5 = make_cyclic(5)
    # oracle-resolved: the +-1 walk mod 5 cannot wrap yet at n=4, so the
    # mod-6 bound is still attained; from n=5 the slack is positive
    r4 = verify_theorem1(g5, 4, 1, 5)
    assert r4.max_value == F(3, 8) and r4.tight
    r5 = verify_theorem1(g5, 5, 1, 5)
    assert r5.max_value == F(5, 16)
    assert r5.bound_value == F(11, 32)
    assert r5.slack == F(1, 32) and not r5.tight


def test_verify_theorem1_m2_trivial():
    r = verify_theorem1(make_cyclic(6), 1, 1, 2)
    assert r.bound_value == 1
    assert r.slack >= 0


def test_verify_theorem2_z5_tight():
    g5 = make_cyclic(5)
    for n in range(1, 5):
        for k in (1, 2):
            r = verify_theorem2(g5, n, k, 5)
            assert r.tight, (n, k)
            assert r.mode == MODE_ANY


def test_verify_theorem2_z3z3():
    r = verify_theorem2(make_cyclic_power(3, 2), 4, 1, 3)
    assert r.bound_value == F(6, 16)
    assert r.max_value == F(6, 16)  # oracle: exhaustive over all 36 pairs
    assert r.laws_evaluated == math.comb(36 + 3, 4)


def test_verify_theorem2_k_at_least_m():
    r = verify_theorem2(make_cyclic(7), 1, 7, 7)
    assert r.bound_value == 1


def test_verify_theorem2_rejects_even_orders():
    with pytest.raises(ValueError, match="even order"):
        verify_theorem2(make_cyclic(6), 2, 1, 3)
    with pytest.raises(ValueError, match="even order"):
        verify_theorem2(make_dihedral(5), 2, 1, 3)


def test_verify_theorem2_rejects_small_orders():
    with pytest.raises(ValueError, match="minimal"):
        verify_theorem2(make_cyclic(3), 2, 1, 5)
    with pytest.raises(ValueError):
        verify_theorem2(make_cyclic(5), 2, 1, 4)  # even m


def test_nonabelian_uses_sequences_and_matches_brute_force():
    s3 = make_symmetric(3)
    r = exhaustive_rho(s3, 3, 1, min_order=2, mode=MODE_SYMMETRIC)
    assert r.enumeration == "sequences"
    vars = symmetric_pair_vars(s3, 2)
    assert r.laws_evaluated == len(vars) ** 3
    best = F(0)
    for combo in iter_product(range(len(vars)), repeat=3):
        law = brute_force_law(s3, [vars[i] for i in combo])
        best = max(best, max(law.values()))
    assert r.max_value == best


def test_nonabelian_any_pairs_matches_brute_force():
    s3 = make_symmetric(3)
    vars = any_pair_vars(s3)  # 15 pairs, 225 ordered sequences at n=2
    r = exhaustive_rho(s3, 2, 1, mode=MODE_ANY)
    assert r.laws_evaluated == len(vars) ** 2
    best = F(0)
    for combo in iter_product(range(len(vars)), repeat=2):
        law = brute_force_law(s3, [vars[i] for i in combo])
        best = max(best, max(law.values()))
    assert r.max_value == best


def test_conjecture_counterexample_reporting_path(monkeypatch):
    # force an artificially tiny case-one bound so the (otherwise unreached)
    # counterexample branch runs: it must re-verify by brute force and
    # attach the argmax with its witness set
    import anticonc.search as search_mod

    monkeypatch.setattr(search_mod, "signed_interval_mass", lambda n, k, M: F(1, 1000))
    v = conjecture_probe(make_cyclic(12), 3, 2, 1)
    assert v.counterexample is not None
    assert v.counterexample["reverified"] is True
    assert v.counterexample["max_value"] == v.exhaustive_max > F(1, 1000)
    assert v.notes


def test_brute_force_topk_agrees_with_dist_core():
    from anticonc.dist import product_walk, top_k_mass
    from anticonc.search import _brute_force_topk

    g = make_dihedral(4)
    rng = random.Random(5)
    for _ in range(10):
        vars = []
        for _ in range(rng.randint(1, 4)):
            a, b = rng.sample(range(g.size), 2)
            vars.append(TwoPointVar(g, a, b))
        k = rng.randint(1, 3)
        assert _brute_force_topk(g, vars, k) == top_k_mass(product_walk(g, vars), k)


def test_conjecture_probe_case_two_with_nonempty_s():
    # Z20, m=5: even orders above 5 are {10, 20}, so m1 = 10 >= 2m: the
    # binary-walk bound is conjectured, and no counterexample exists at
    # these sizes
    g20 = make_cyclic(20)
    for n in (1, 2, 3, 4):
        v = conjecture_probe(g20, 5, n, 1)
        assert v.even_orders_above_m == (10, 20)
        assert v.case == "m1 >= 2m or S empty"
        assert v.conjectured_bound == theorem2_bound(n, 1, 5)
        assert v.counterexample is None


def test_dedup_soundness():
    # enumerating {g, g^-1} once per inverse pair changes no maximum
    g7 = make_cyclic(7)
    for n in (2, 3):
        with_dedup = exhaustive_rho(g7, n, 1, min_order=2, dedup=True)
        without = exhaustive_rho(g7, n, 1, min_order=2, dedup=False)
        assert with_dedup.max_value == without.max_value


def test_threads_do_not_change_results():
    g = make_cyclic(9)
    serial = exhaustive_rho(g, 4, 2, min_order=3, mode=MODE_ANY, threads=1)
    threaded = exhaustive_rho(g, 4, 2, min_order=3, mode=MODE_ANY, threads=3)
    assert serial.max_value == threaded.max_value
    assert serial.argmax == threaded.argmax
    assert serial.laws_evaluated == threaded.laws_evaluated


def test_long_walks_route_to_fraction_path():
    # beyond 62 factors the int64 numerators would overflow; the exact
    # Fraction enumeration takes over (here: a single admissible variable,
    # so one law with denominator 2^70)
    r = verify_theorem1(make_cyclic(6), 70, 1, 5)
    assert r.laws_evaluated == 1
    assert r.max_value.denominator == 2**69  # reduced from 2^70
    assert r.tight


def test_fraction_path_agrees_with_kernel():
    g = make_cyclic(7)
    vars = symmetric_pair_vars(g, 2)
    for n, k in ((3, 1), (4, 2)):
        kernel_result = exhaustive_rho(g, n, k, min_order=2)
        value, combo, laws = _search_fractions(g, vars, n, k, ordered=False)
        assert value == kernel_result.max_value
        assert laws == kernel_result.laws_evaluated
        assert tuple(vars[i] for i in combo) == kernel_result.argmax


def test_lemma1_examples():
    g6 = make_cyclic(6)
    # boundary: s < m/|A| fails (m=2, |A|=2), translation by the order-2
    # element fixes the set
    assert lemma1_check(g6, {0, 3}, 3, 1) is True
    g5 = make_cyclic(5)
    assert lemma1_check(g5, {0, 1}, 1, 1) is False
    assert lemma1_check(g5, set(), 1, 1) is True  # vacuous


def test_lemma1_property():
    rng = random.Random(99)
    groups = [make_cyclic(m) for m in (5, 6, 7, 9, 12)] + [make_dihedral(5), make_symmetric(4)]
    checked = 0
    while checked < 500:
        g = rng.choice(groups)
        x = rng.randrange(1, g.size)
        if x == g.identity:
            continue
        m = g.order_of(x)
        size_cap = m - 1  # need s*|A| < m with s >= 1
        if size_cap < 1:
            continue
        a_size = rng.randint(1, min(size_cap, g.size))
        s_cap = (m - 1) // a_size
        if s_cap < 1:
            continue
        s = rng.randint(1, s_cap)
        a = set(rng.sample(range(g.size), a_size))
        assert lemma1_check(g, a, x, s) is False, (g.name, sorted(a), x, s)
        checked += 1


def test_conjecture_probe_z12():
    v = conjecture_probe(make_cyclic(12), 3, 4, 1)
    assert v.even_orders_above_m == (4, 6, 12)
    assert v.m1 == 4
    assert v.case == "m1 < 2m"
    assert v.conjectured_bound == F(1, 2)  # signed walk mod 4 in (-1, 1]
    assert v.exhaustive_max <= v.conjectured_bound
    assert v.counterexample is None


def test_conjecture_probe_s_empty_is_theorem2_case():
    v = conjecture_probe(make_cyclic(5), 5, 3, 1)
    assert v.even_orders_above_m == ()
    assert v.m1 is None
    assert v.case == "m1 >= 2m or S empty"
    assert v.conjectured_bound == theorem2_bound(3, 1, 5)
    assert v.counterexample is None

    v3 = conjecture_probe(make_cyclic(3), 3, 2, 1)
    assert v3.conjectured_bound == F(1, 2)
    assert v3.exhaustive_max == F(1, 2)
    assert v3.counterexample is None


def test_conjecture_probe_nonabelian():
    # S4 with m=3: S = (4,), case one; the walk mod 4 is uniform on its
    # parity class, so the conjectured bound is 1/2 for every n and the
    # 4-cycles attain it
    s4 = make_symmetric(4)
    for n in (1, 2, 3):
        v = conjecture_probe(s4, 3, n, 1)
        assert v.even_orders_above_m == (4,)
        assert v.case == "m1 < 2m"
        assert v.conjectured_bound == F(1, 2)
        assert v.exhaustive_max == F(1, 2)
        assert v.counterexample is None
        assert v.laws_evaluated == 7**n  # ordered sequences over 7 pairs


def test_conjecture_probe_rejects_even_m():
    with pytest.raises(ValueError):
        conjecture_probe(make_cyclic(12), 4, 2, 1)


def test_argmax_reproduces_max(catalog):
    # re-verification is built in, but check through the public path too
    from anticonc.dist import product_walk, top_k_mass

    r = verify_theorem1(catalog["Z12"], 3, 2, 3)
    law = product_walk(catalog["Z12"], r.argmax)
    assert top_k_mass(law, 2) == r.max_value


def test_validity_suite_theorem1():
    # randomized instances over the catalog: slack >= 0 always
    rng = random.Random(4242)
    groups = [
        make_cyclic(5),
        make_cyclic(6),
        make_cyclic(7),
        make_cyclic(9),
        make_cyclic(12),
        make_cyclic_power(3, 2),
        make_dihedral(4),
        make_symmetric(3),
    ]
    for _ in range(60):
        g = rng.choice(groups)
        orders = sorted({int(o) for o in g.orders if o >= 3})
        if not orders:
            continue
        m = rng.choice([2] + orders)
        if not symmetric_pair_vars(g, m):
            continue
        n = rng.randint(1, 4 if g.is_abelian else 3)
        k = rng.randint(1, 3)
        r = verify_theorem1(g, n, k, m)
        assert r.slack >= 0


def test_validity_suite_theorem2_random_multisets():
    # random admissible V_n on the odd-order catalog: top-k never beats the bound
    from anticonc.dist import product_walk, top_k_mass

    rng = random.Random(777)
    groups = [make_cyclic(m) for m in (3, 5, 7, 9)] + [make_cyclic_power(3, 2), make_cyclic_power(5, 2)]
    for _ in range(60):
        g = rng.choice(groups)
        m = min(int(o) for o in g.orders if o > 1)
        n = rng.randint(1, 5)
        k = rng.randint(1, 3)
        vars = []
        for _ in range(n):
            a, b = rng.sample(range(g.size), 2)
            vars.append(TwoPointVar(g, a, b))
        value = top_k_mass(product_walk(g, vars), k)
        assert value <= theorem2_bound(n, k, m), (g.name, n, k)
