import math

import pytest

import netcache


def test_zipf_popularity_normalizes():
    q = netcache.zipf_popularity(1.0, 3)
    assert q[0] == pytest.approx(6 / 11)
    assert q[1] == pytest.approx(3 / 11)
    assert q[2] == pytest.approx(2 / 11)
    assert math.fsum(netcache.zipf_popularity(1.0, 1000)) == pytest.approx(1.0, abs=1e-12)


def test_frozen_state_matches_lru_form():
    q = [0.5, 0.3, 0.2]
    assert netcache.pi_lru(q, [1, 2]) == pytest.approx(0.3)
    assert netcache.pi_sel(q, [1, 2]) == pytest.approx(netcache.pi_lru(q, [1, 2]), abs=1e-15)
    assert netcache.hit_ratio_closed_form(q, 2, "LRU") == pytest.approx(0.719286, abs=1e-5)


def test_oracle_agrees_with_closed_form():
    q = [0.5, 0.3, 0.2]
    oracle = netcache.lru_stationary_oracle(q, 2)
    assert oracle[(1, 2)] == pytest.approx(0.3, abs=1e-7)
    assert math.fsum(oracle.values()) == pytest.approx(1.0, abs=1e-9)


def test_simulated_hit_ratio():
    q = netcache.zipf_popularity(1.0, 5)
    closed = netcache.hit_ratio_closed_form(q, 2, "LRU")
    measured = netcache.simulate_irm_hit_ratio(q, 2, "SEL", requests=200000, seed=3)
    assert measured == pytest.approx(closed, abs=0.01)


def test_stack_distances_worked_example():
    stream = [4, 5, 1, 3, 2, 7, 2, 3, 1, 6]
    sds = netcache.stack_distances(stream)
    assert sds[8] == 3
    stats = netcache.sd_stats(stream)
    assert stats.avg_sd == pytest.approx(2.0)
    assert stats.min_sd == 1 and stats.max_sd == 3


def test_tandem_filter_effect():
    fifo = netcache.tandem_run("FIFO", capacity=10, contents=200, requests=100000, seed=1)
    assert fifo.miss_sd.min_sd >= 10
    assert fifo.second_hit_ratio_lru == 0.0
    sel = netcache.tandem_run("SEL", capacity=10, contents=200, requests=100000, seed=1)
    assert sel.second_hit_ratio_lru > fifo.second_hit_ratio_lru


def test_topologies():
    tree = netcache.build_binary_tree(5)
    assert tree.router_count == 31
    assert tree.edge_count == 16
    assert netcache.router_avg(tree) == pytest.approx(4.0)
    abilene = netcache.build_abilene()
    assert abilene.router_count == 22
    assert abilene.total_contents == 1100


def test_simulation_is_deterministic():
    topo = netcache.build_binary_tree(3, consumers_per_group=10, contents=100)
    scenario = netcache.make_scenario(topo, "SEL-EQU", capacity=10, duration=20.0,
                                      mean_size=5.0)
    a = netcache.run_simulation(scenario, seed=7)
    b = netcache.run_simulation(scenario, seed=7)
    assert a.to_json() == b.to_json()
    assert a.hit_net is not None and 0.0 <= a.hit_net <= 1.0
