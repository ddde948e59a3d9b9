from fractions import Fraction

import pytest

from anticonc.bounds import signed_walk_dist
from anticonc.dist import TwoPointVar, product_walk, top_k_mass
from anticonc.groups import make_cyclic
from anticonc.montecarlo import (
    MatrixPair,
    estimate_matrix_walk,
    estimate_rho,
    wilson_interval,
)

F = Fraction


def z7_vars(n=10):
    g = make_cyclic(7)
    return g, [TwoPointVar(g, 1, 6)] * n


def test_wilson_against_statsmodels():
    from statsmodels.stats.proportion import proportion_confint

    for count, total in ((0, 10), (10, 10), (50, 100), (246, 1000), (1, 3)):
        low, high = wilson_interval(count, total)
        ref_low, ref_high = proportion_confint(count, total, alpha=0.01, method="wilson")
        assert low == pytest.approx(ref_low, abs=1e-12)
        assert high == pytest.approx(ref_high, abs=1e-12)


def test_wilson_contains_estimate():
    for count, total in ((0, 5), (5, 5), (3, 7), (123, 456)):
        low, high = wilson_interval(count, total)
        assert low <= count / total <= high


def test_determinism_bit_identical():
    g, vars = z7_vars()
    a = estimate_rho(g, vars, 20000, seed=42)
    b = estimate_rho(g, vars, 20000, seed=42)
    assert a == b
    c = estimate_rho(g, vars, 20000, seed=43)
    assert c != a


def test_threads_do_not_change_report(monkeypatch):
    import anticonc.montecarlo as mc

    monkeypatch.setattr(mc, "_CHUNK", 1000)  # force several chunks
    g, vars = z7_vars()
    serial = estimate_rho(g, vars, 5_000, seed=7, threads=1)
    threaded = estimate_rho(g, vars, 5_000, seed=7, threads=4)
    assert serial == threaded


def test_single_sample():
    g, vars = z7_vars(3)
    report = estimate_rho(g, vars, 1, seed=0)
    assert report.estimate == 1.0
    assert sum(report.counts.values()) == 1


def test_counts_sum_to_samples():
    g, vars = z7_vars()
    report = estimate_rho(g, vars, 12345, seed=9)
    assert sum(report.counts.values()) == 12345


def test_calibration_smoke():
    # exact top-1 of the ten-step {1,6} walk on Z7 is 252/1024
    g, vars = z7_vars()
    exact = top_k_mass(product_walk(g, vars), 1)
    assert exact == F(252, 1024)
    covered = 0
    for seed in range(5):
        report = estimate_rho(g, vars, 100_000, seed=seed, target=exact)
        assert report.target_in_interval() is not None
        covered += report.target_in_interval()
    assert covered >= 4


def test_mixing_sanity():
    # after ~4 m_tilde^2 steps the maximal cell is near 2/m_tilde
    g = make_cyclic(6)
    vars = [TwoPointVar(g, 1, 5)] * 144
    report = estimate_rho(g, vars, 200_000, seed=11)
    assert abs(report.estimate - 2 / 6) < 0.02


def test_rejects_bad_inputs():
    g, vars = z7_vars()
    with pytest.raises(ValueError):
        estimate_rho(g, [], 100, seed=1)
    with pytest.raises(ValueError):
        estimate_rho(g, vars, 0, seed=1)
    other = make_cyclic(5)
    with pytest.raises(ValueError):
        estimate_rho(other, vars, 10, seed=1)


def test_matrix_pair_validation():
    with pytest.raises(ValueError, match="singular"):
        MatrixPair(5, (1, 0, 0, 1), (2, 4, 1, 2))  # det = 0 mod 5
    with pytest.raises(ValueError, match="distinct"):
        MatrixPair(5, (1, 0, 0, 1), (6, 5, 5, 6))  # reduces to the identity too
    with pytest.raises(ValueError, match="prime"):
        estimate_matrix_walk(6, [MatrixPair(5, (2, 0, 0, 2), (3, 0, 0, 3))], 10, seed=0)
    with pytest.raises(ValueError, match="factor"):
        estimate_matrix_walk(3, [], 10, seed=0)  # empty factor list rejected


def test_matrix_walk_p2_single_pair():
    pair = MatrixPair(2, (1, 0, 0, 1), (0, 1, 1, 0))
    report = estimate_matrix_walk(2, [pair], 50_000, seed=3)
    assert set(report.counts) == {"[[1,0],[0,1]]", "[[0,1],[1,0]]"}
    for count in report.counts.values():
        assert abs(count / 50_000 - 0.5) < 0.01


def test_matrix_walk_scalar_subgroup_matches_signed_walk():
    # diag(2,2) has order 4 mod 5: endpoints follow the signed walk mod 4
    n = 6
    pair = MatrixPair(5, (2, 0, 0, 2), (3, 0, 0, 3))
    report = estimate_matrix_walk(5, [pair] * n, 200_000, seed=21)
    walk = signed_walk_dist(n, 4)
    pow2 = {0: 1, 1: 2, 2: 4, 3: 3}  # 2^r mod 5
    for r, mass in walk.masses.items():
        name = f"[[{pow2[r]},0],[0,{pow2[r]}]]"
        assert abs(report.counts.get(name, 0) / 200_000 - float(mass)) < 0.02
    assert sum(report.counts.values()) == 200_000


def test_matrix_walk_deterministic(monkeypatch):
    import anticonc.montecarlo as mc

    pair = MatrixPair(11, (2, 1, 0, 2), (7, 5, 0, 6))
    a = estimate_matrix_walk(11, [pair] * 5, 30_000, seed=5)
    monkeypatch.setattr(mc, "_CHUNK", 4096)
    b = estimate_matrix_walk(11, [pair] * 5, 30_000, seed=5, threads=3)
    assert a == b
