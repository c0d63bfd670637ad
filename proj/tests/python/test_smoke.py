import math

import pytest

import mpc_mst


def triangle():
    return mpc_mst.Graph(3, [mpc_mst.Edge(0, 1, 1, True), mpc_mst.Edge(1, 2, 2, True), mpc_mst.Edge(0, 2, 3, False)])


def test_triangle_verify_and_sensitivity():
    g = triangle()
    r = mpc_mst.verify(g, seed=1)
    assert r["yes"]
    assert r["witness_non_tree"] is None
    assert r["path_max"] == [None, None, 2]
    s = mpc_mst.sensitivity(g, seed=1)
    assert s["sens"] == [2, 1, 1]
    assert s["is_mst"]


def test_parse_and_witness():
    text = "4\n0 1 5 T\n1 2 1 T\n1 3 7 T\n2 3 4 N\n0 2 2 N\n"
    g = mpc_mst.parse_edge_list(text)
    assert g.n == 4 and len(g.edges) == 5
    r = mpc_mst.verify(g, seed=3)
    assert not r["yes"]
    assert r["witness_non_tree"] == 3
    assert r["witness_tree"] == 2
    assert r["stats"]["rounds_total"] > 0
    assert g.to_text() == text


def test_generated_instances_match_oracle():
    for seed in range(5):
        g = mpc_mst.generate("planted_mst", 300, m=900, diameter=25, seed=seed, max_weight=100)
        assert mpc_mst.verify(g, seed=seed)["yes"]
        assert mpc_mst.sensitivity(g, seed=seed)["sens"] == mpc_mst.oracle.sensitivity(g)
        assert mpc_mst.lca(g, seed=seed)["lca"] == mpc_mst.oracle.lca(g)
        bad = mpc_mst.generate("perturbed_mst", 300, m=900, diameter=25, seed=seed)
        assert mpc_mst.verify(bad, seed=seed)["yes"] == mpc_mst.oracle.verify(bad) == False


def test_bridges_are_none_and_lower_bound_weights():
    g = mpc_mst.generate("random_tree", 50, diameter=10, seed=2)
    assert all(s is None for s in mpc_mst.sensitivity(g, seed=2)["sens"])
    for n in (6, 100):
        assert mpc_mst.oracle.mst_weight(mpc_mst.generate("lower_bound", n, cycles=1)) == n + 1
        assert mpc_mst.oracle.mst_weight(mpc_mst.generate("lower_bound", n, cycles=2)) == n + 2


def test_errors_and_determinism():
    with pytest.raises(mpc_mst.ParseError):
        mpc_mst.parse_edge_list("3\n0 0 1 T\n")
    with pytest.raises(mpc_mst.ConfigError):
        mpc_mst.verify(triangle(), delta=2.0)
    with pytest.raises(mpc_mst.AccountingFault):
        mpc_mst.verify(mpc_mst.generate("planted_mst", 200, m=600, diameter=20), c_g=1)
    g = mpc_mst.generate("planted_mst", 400, m=1200, diameter=30, seed=9)
    assert mpc_mst.sensitivity(g, seed=4) == mpc_mst.sensitivity(g, seed=4)
    stats = mpc_mst.verify(g, seed=4)["stats"]
    assert stats["total_global_words"] <= 8 * (400 + 1200)
    assert math.isclose(stats["config"]["delta"], 0.5)
