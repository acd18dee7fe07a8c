import numpy as np
import pytest
from hypothesis import given, strategies as st

from binrep import gea
from binrep.errors import ShapeError
from binrep.fitness import DEJONG
from binrep.gea import (ESConfig, GAConfig, SAConfig, ga_trial, roulette, run_es, run_ga,
                        run_sa, single_point_crossover)
from binrep.representation import make_brg, make_sb, make_ubl32
from binrep.streams import TrialStreams


def test_streams_depend_only_on_trial_id():
    whole = TrialStreams(7, np.arange(10)).uniform(3, 2)
    part = TrialStreams(7, np.arange(5, 10)).uniform(3, 2)
    assert np.array_equal(whole[5:], part)
    assert not np.array_equal(whole, TrialStreams(8, np.arange(10)).uniform(3, 2))


def test_streams_roughly_uniform():
    u = TrialStreams(0, np.arange(200_000)).uniform(1, 0)
    assert 0 <= u.min() and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.005
    k = TrialStreams(0, np.arange(200_000)).integers(5, 2)
    assert np.bincount(k).tolist() == pytest.approx([40_000] * 5, rel=0.03)


def test_sa_chunking_does_not_change_results(monkeypatch):
    cfg = SAConfig(trials=500, max_generations=60, master_seed=3)
    ref = run_sa(cfg, make_sb(5))
    monkeypatch.setattr(gea, "CHUNK", 64)
    assert run_sa(cfg, make_sb(5)) == ref


def test_es_chunking_does_not_change_results(monkeypatch):
    cfg = ESConfig(trials=300, max_generations=40, master_seed=5)
    ref = run_es(cfg, make_sb(5))
    monkeypatch.setattr(gea, "CHUNK", 50)
    got = run_es(cfg, make_sb(5))
    assert got.stats == ref.stats
    assert got.mean_generations_to_optimum == ref.mean_generations_to_optimum


def test_sa_shape_and_start():
    stats = run_sa(SAConfig(trials=20_000, max_generations=10), make_sb(5))
    assert [s.generation for s in stats] == list(range(11))
    assert stats[0].fraction_at_optimum == pytest.approx(1 / 32, abs=0.004)
    assert stats[0].mean_fitness == stats[0].online_performance
    assert all(b.best_fitness >= b.mean_fitness for b in stats)


def test_sa_seed_matters():
    a = run_sa(SAConfig(trials=100, max_generations=5, master_seed=1), make_sb(5))
    b = run_sa(SAConfig(trials=100, max_generations=5, master_seed=2), make_sb(5))
    assert a != b


def test_sa_gray_finds_optimum():
    stats = run_sa(SAConfig(trials=2000, a=31), make_brg(5))
    assert stats[-1].fraction_at_optimum == 1.0


def test_es_counts_initial_parent():
    # a single generation: only trials that start on the optimum count, scoring 1
    res = run_es(ESConfig(trials=3000, max_generations=0), make_sb(5))
    assert res.mean_generations_to_optimum == 1
    assert res.converged_fraction == pytest.approx(1 / 32, abs=0.01)


def test_es_is_elitist():
    res = run_es(ESConfig(trials=500, max_generations=100, a=15), make_ubl32())
    means = [s.mean_fitness for s in res.stats]
    assert all(b >= a for a, b in zip(means, means[1:]))
    mean, stats = res
    assert mean == res.mean_generations_to_optimum and stats is res.stats


def test_config_validation():
    with pytest.raises(ValueError):
        SAConfig(cooling_factor=1.0)
    with pytest.raises(ValueError):
        ESConfig(mutation_rate=0)
    with pytest.raises(ShapeError):
        run_sa(SAConfig(ell=4, a=3), make_sb(5))
    with pytest.raises(ShapeError):
        GAConfig(DEJONG["f1"], make_sb(5))
    with pytest.raises(ValueError):
        GAConfig(DEJONG["f1"], make_sb(10), population_size=31)


def test_roulette_proportions():
    rng = np.random.default_rng(0)
    picks = roulette(np.array([1.0, 0.0, 3.0]), 40_000, rng)
    counts = np.bincount(picks, minlength=3)
    assert counts[1] == 0
    assert counts[2] / counts[0] == pytest.approx(3, rel=0.05)


@given(st.integers(1, 11), st.booleans())
def test_crossover_swaps_tails(point, mate):
    a = np.zeros((1, 12), dtype=np.uint8)
    b = np.ones((1, 12), dtype=np.uint8)
    c, d = single_point_crossover(a, b, np.array([mate]), np.array([point]))
    if mate:
        assert c[0].tolist() == [0] * point + [1] * (12 - point)
    else:
        assert c[0].tolist() == [0] * 12
    assert (c + d == 1).all()


def test_ga_trial_is_deterministic():
    cfg = GAConfig(DEJONG["f1"], make_sb(10), generations=5, trials=1, master_seed=9)
    assert np.array_equal(ga_trial(cfg, 0), ga_trial(cfg, 0))
    assert not np.array_equal(ga_trial(cfg, 0), ga_trial(cfg, 1))


def test_ga_statistics_match_trials():
    cfg = GAConfig(DEJONG["f2"], make_brg(12), generations=6, trials=4, master_seed=2)
    stats = run_ga(cfg)
    runs = [ga_trial(cfg, t) for t in range(4)]
    online = np.mean([r[:4].mean() for r in runs])
    assert stats[3].online_performance == pytest.approx(online)
    assert stats[5].best_fitness == pytest.approx(np.mean([r[5].min() for r in runs]))


def test_ga_improves_on_parabola():
    stats = run_ga(GAConfig(DEJONG["f1"], make_brg(10), trials=20))
    assert stats[-1].mean_fitness < stats[0].mean_fitness / 3
