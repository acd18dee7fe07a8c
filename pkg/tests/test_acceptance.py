"""Acceptance criteria 1-11, one test each.

Every test records a PASS/FAIL line in ``RESULTS``; the terminal summary
hook in conftest prints them after the run.  Running this file directly
(``python tests/test_acceptance.py``) prints the same lines.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from binrep.fitness import DEJONG, OneMaxTarget, count_local_maxima
from binrep.gea import ESConfig, GAConfig, SAConfig, run_es, run_ga, run_sa
from binrep.locality import (expected_point_locality, general_locality,
                             general_locality_lower_bound, general_locality_sum,
                             monte_carlo_expected_locality, point_locality,
                             point_locality_bounds, rothlauf_dm, verify_bounds_exhaustive)
from binrep.markov import MarkovModel, absorption_probabilities, phenotype_trajectory
from binrep.representation import (Representation, is_gray, make_brg, make_harper_max,
                                   make_harper_min, make_ngg32, make_random, make_sb,
                                   make_suboptimal_gray, make_ubl32, named)

RESULTS: dict[int, str] = {}

SIM_TRIALS = 100_000
GA_TRIALS = 3000
REPS = ("sb", "brg", "ngg", "ubl")


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, detail


# -- shared simulations -------------------------------------------------------

@pytest.fixture(scope="module")
def sa_runs():
    """SA statistics for every 5-bit representation at a=15 and a=31."""
    return {(rep, a): run_sa(SAConfig(a=a, trials=SIM_TRIALS, master_seed=2024), named(rep))
            for a in (15, 31) for rep in REPS}


# -- criteria -----------------------------------------------------------------

def test_criterion_01_bound_attainment():
    start = time.perf_counter()
    bad = []
    for ell in range(1, 11):
        lo, hi = point_locality_bounds(ell)
        if lo != Fraction((1 << ell) - 1, ell) or hi != 1 << (ell - 1):
            bad.append(f"bounds ell={ell}")
        for name, r in (("sb", make_sb(ell)), ("brg", make_brg(ell)),
                        ("harper-min", make_harper_min(ell, ell))):
            if point_locality(r) != lo:
                bad.append(f"{name} ell={ell}")
        if point_locality(make_harper_max(ell, ell)) != hi:
            bad.append(f"harper-max ell={ell}")
    elapsed = time.perf_counter() - start
    record(1, not bad and elapsed < 1.0,
           f"40 exact checks, {len(bad)} mismatches {bad}, {elapsed:.2f}s (< 1s)")


def test_criterion_02_locality_constants():
    p_ngg = point_locality(make_ngg32())
    p_ubl = point_locality(make_ubl32())
    example = Representation(3, [0, 1, 3, 7, 5, 4, 6, 2])
    p_ex = point_locality(example)
    # the same list read as the phenotype ordering (genotype of phenotype k)
    p_ex_order = point_locality(make_suboptimal_gray(3))
    ok = (p_ngg == Fraction(835, 100) and p_ubl == 16
          and abs(float(p_ex) - 11 / 3) <= 1e-9)
    record(2, ok, f"NGG32 {p_ngg} (want 167/20), UBL32 {p_ubl} (want 16), "
                  f"example perm {p_ex} = {float(p_ex):.4f} (want 11/3; as ordering "
                  f"{p_ex_order})")


def test_criterion_03_exhaustive():
    start = time.perf_counter()
    reports = [verify_bounds_exhaustive(ell) for ell in (1, 2, 3)]
    elapsed = time.perf_counter() - start
    desc = "; ".join(f"ell={r.ell} min {r.minimum} max {r.maximum} mean {r.mean}"
                     for r in reports)
    record(3, all(r.ok for r in reports) and reports[2].count == 40320 and elapsed < 10,
           f"{desc}; {elapsed:.2f}s (< 10s)")


def test_criterion_04_monte_carlo():
    parts, ok = [], True
    for ell in range(4, 9):
        mean, se = monte_carlo_expected_locality(ell, SIM_TRIALS, seed=ell)
        target = float(expected_point_locality(ell))
        z = (mean - target) / se
        ok &= abs(z) <= 3
        parts.append(f"ell={ell} z={z:+.2f}")
    record(4, ok, ", ".join(parts) + " (|z| <= 3)")


def test_criterion_05_general_locality():
    start = time.perf_counter()
    g_sb = general_locality(make_sb(11))
    g_brg = general_locality(make_brg(11))
    elapsed = time.perf_counter() - start
    gap = abs(g_sb - g_brg) / max(g_sb, g_brg)
    ok = (abs(g_sb - 677.497) <= 1e-3 and abs(g_brg - 677.502) <= 1e-3
          and gap < 1e-5 and elapsed < 60)
    record(5, ok, f"g_SB={g_sb:.5f} (want 677.497), g_BRG={g_brg:.5f} (want 677.502), "
                  f"gap {gap:.2e}, {elapsed:.1f}s")


def test_criterion_06_local_maxima():
    def count(r, a):
        return count_local_maxima(OneMaxTarget(r.ell, a), r).count

    got = (count(make_sb(5), 15), count(make_ubl32(), 15), count(make_sb(5), 29))
    grays = [make_brg(5), make_ngg32()] + [make_suboptimal_gray(5, s) for s in range(4)]
    grays += [make_brg(ell) for ell in (3, 4, 6, 7)]
    grays += [make_suboptimal_gray(ell, 1) for ell in (3, 4, 6, 7)]
    gray_counts = {count(r, a) for r in grays for a in range(r.size)}
    record(6, got == (2, 4, 3) and gray_counts == {1},
           f"SB a=15 {got[0]}, UBL a=15 {got[1]}, SB a=29 {got[2]}, "
           f"{len(grays)} Gray codes over all targets -> {sorted(gray_counts)}")


def test_criterion_07_sa(sa_runs):
    final = {k: v[-1].fraction_at_optimum for k, v in sa_runs.items()}
    sb = final["sb", 15]
    gray_ok = all(final[rep, a] >= 0.999 for rep in ("brg", "ngg") for a in (15, 31))
    ubl_ok = final["ubl", 31] < min(final[rep, 31] for rep in ("sb", "brg", "ngg"))
    record(7, abs(sb - 0.60) <= 0.02 and gray_ok and ubl_ok,
           f"SB a=15 {sb:.4f} (0.60 +- 0.02); BRG/NGG min "
           f"{min(final[r, a] for r in ('brg', 'ngg') for a in (15, 31)):.4f}; "
           f"UBL a=31 {final['ubl', 31]:.4f} vs SB {final['sb', 31]:.4f}")


ES_REFERENCE = {31: (17.5, 23.8, 28.3, 184.8), 15: (103.6, 21.3, 23.3, 124.8)}
ORDER = {31: ("sb", "brg", "ngg", "ubl"), 15: ("brg", "ngg", "sb", "ubl")}


def test_criterion_08_es():
    ok, parts = True, []
    for a, ref in ES_REFERENCE.items():
        means = {}
        for rep, want in zip(REPS, ref):
            res = run_es(ESConfig(a=a, trials=SIM_TRIALS, master_seed=2024), named(rep))
            means[rep] = res.mean_generations_to_optimum
            ok &= abs(means[rep] - want) <= 0.10 * want
        order = tuple(sorted(means, key=means.get))
        ok &= order == ORDER[a]
        parts.append(f"a={a}: " + " ".join(f"{r}={means[r]:.1f}" for r in REPS)
                     + f" order {'<'.join(order)}")
    record(8, ok, "; ".join(parts) + " (+-10% of reference, orderings exact)")


def test_criterion_09_ga():
    ok, parts = True, []
    for fid, spec in DEJONG.items():
        online = {}
        for rep in REPS:
            r = named(rep, spec.bits_per_dim, 0)
            stats = run_ga(GAConfig(spec, r, trials=GA_TRIALS, master_seed=2024))
            online[rep] = stats[-1].online_performance
        close = abs(online["brg"] - online["ngg"]) <= 0.05 * min(abs(online["brg"]),
                                                                 abs(online["ngg"]))
        ordered = max(online["brg"], online["ngg"]) < online["sb"] < online["ubl"]
        ok &= close and ordered
        parts.append(f"{fid} " + "/".join(f"{online[r]:.4g}" for r in REPS)
                     + ("" if close and ordered else " [order violated]"))
    record(9, ok, "online SB/BRG/NGG/UBL: " + "; ".join(parts))


def test_criterion_10_markov(sa_runs):
    ok, worst, total = True, (0.0, ""), 0.0
    for (rep, a), stats in sa_runs.items():
        r = named(rep)
        model = MarkovModel(r, a)
        traj = phenotype_trajectory(model, 2000)
        for g in (100, 500, 2000):
            # masses drift by ~1e-14 over 2000 steps; clamp before the binomial error
            p = min(max(float(traj[g, a]), 0.0), 1.0)
            se = math.sqrt(p * (1 - p) / SIM_TRIALS)
            diff = abs(stats[g].fraction_at_optimum - p)
            z = diff / se if se > 0 else (0.0 if diff <= 1e-12 else math.inf)
            ok &= z <= 3
            if z >= worst[0]:
                worst = (z, f"{rep} a={a} g={g}")
        absorbed = sum(c.probability for c in absorption_probabilities(model))
        total = max(total, abs(absorbed - 1))
        ok &= total <= 1e-10
    record(10, ok, f"24 comparisons, worst |z|={worst[0]:.2f} at {worst[1]} (<= 3); "
                   f"absorption sums off by <= {total:.1e}")


# -- criterion 11: property suite, each property over >= 100 random cases --------

reprs = st.integers(1, 7).flatmap(
    lambda ell: st.permutations(range(1 << ell)).map(lambda p: Representation(ell, p)))
PROPERTY_CASES = 150
PASSED_PROPERTIES = set()


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(reprs)
def test_property_dm_identity(r):
    assert point_locality(r) == Fraction(rothlauf_dm(r), r.ell << (r.ell - 1)) + 1


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**63))
def test_property_permutation_validity(ell, seed):
    for maker in (make_random, make_harper_min, make_harper_max):
        perm = maker(ell, seed).perm
        assert np.array_equal(np.sort(perm), np.arange(1 << ell))


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(st.integers(3, 10), st.integers(0, 10**6))
def test_property_gray_constructors(ell, seed):
    assert is_gray(make_brg(ell))
    assert is_gray(make_suboptimal_gray(ell, seed))


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(reprs)
def test_property_general_lower_bound(r):
    pairs = (r.size * (r.size - 1)) // 2
    assert Fraction(general_locality_sum(r), pairs) >= general_locality_lower_bound(r.ell)


@settings(max_examples=PROPERTY_CASES, deadline=None)
@given(st.integers(0, 2**63), st.sampled_from(REPS))
def test_property_determinism_under_seed(seed, rep):
    cfg = SAConfig(trials=16, max_generations=8, master_seed=seed)
    assert run_sa(cfg, named(rep)) == run_sa(cfg, named(rep))
    assert make_random(6, seed) == make_random(6, seed)
    es = ESConfig(trials=8, max_generations=5, master_seed=seed)
    assert run_es(es, named(rep)).stats == run_es(es, named(rep)).stats


PROPERTIES = ("dm_identity", "permutation_validity", "gray_constructors",
              "general_lower_bound", "determinism_under_seed")


def test_criterion_11_properties():
    # runs after the property tests above (file order) and reads their outcomes
    from conftest import PROPERTY_OUTCOMES

    def hits(bucket):
        return [n for n in PROPERTIES if any(n in node for node in PROPERTY_OUTCOMES[bucket])]

    failed = hits("failed")
    ran = [n for n in hits("passed") if n not in failed]
    missing = sorted(set(PROPERTIES) - set(ran) - set(failed))
    record(11, not failed and not missing,
           f"{len(ran)}/{len(PROPERTIES)} properties green at {PROPERTY_CASES} cases each"
           + (f"; failing {failed}" if failed else "")
           + (f"; not run {missing}" if missing else ""))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
