import math

import pytest

import isinglo as il

PAIR_JSON = (
    '{"vertices": ["a", "b"], "region": ["a", "b"],'
    ' "edges": [{"u": "a", "v": "b", "J": 1.0}]}'
)


def test_enumerate_pair():
    g = il.parse_instance(PAIR_JSON)
    d = il.enumerate_gibbs(g)
    assert d.n == 2
    assert abs(sum(d.prob) - 1.0) < 1e-12
    disagree = d.prob[1] + d.prob[2]
    assert abs(disagree - 1.0 / (math.e + 1.0)) < 1e-12


def test_instance_round_trip():
    g = il.parse_instance(PAIR_JSON)
    g2 = il.parse_instance(il.instance_to_text(g))
    assert il.total_variation(il.enumerate_gibbs(g).prob,
                              il.enumerate_gibbs(g2).prob) == 0.0


def test_absorb_field_budget():
    g = il.make_family("path", 3, J=1.0, h=0.5)
    za = il.absorb_field(g)
    assert za.region_size == g.region_size
    assert il.interaction_budget(za) <= 2.0 * il.interaction_budget(g) + 1e-12
    tv = il.total_variation(il.enumerate_gibbs(g).prob,
                            il.enumerate_gibbs(za).prob)
    assert tv <= 1e-12


def test_fksw_marginal_matches_gibbs():
    g = il.absorb_field(il.make_family("cycle", 3, J=-0.8))
    je = il.enumerate_fksw(g)
    d = il.enumerate_gibbs(g)
    assert il.total_variation(je.spin_marginal, d.prob) <= 1e-12


def test_reduction_identity():
    g = il.absorb_field(il.make_family("path", 4, J=0.7, h=0.25))
    sampler = il.JointSampler(g, seed=11)
    v = [1.5, -2.0, 1.0, 2.5]
    for _ in range(50):
        spins, open_edges = sampler.next()
        d = il.cluster_decompose(g, open_edges)
        weights, offset = il.reduce_weights(g, d, v)
        lhs = sum(vi * si for vi, si in zip(v, spins))
        pos = {name: i for i, name in enumerate(g.region_names)}
        rhs = offset
        for k in range(d.inner_count):
            rep = d.representatives[k]
            rhs += weights[k] * spins[pos[g.name(rep)]]
        assert abs(lhs - rhs) <= 1e-12


def test_erdos_and_sup():
    assert il.erdos_bound(3) == 0.375
    g = il.make_family("independent", 3)
    rep = il.concentration_sup_x(g, [1.0, 1.0, 1.0])
    assert rep.exact
    assert rep.value == 0.375


def test_weight_precondition():
    g = il.make_family("independent", 2)
    with pytest.raises(ValueError):
        il.concentration_exact(g, [0.5, 1.0], 0.0)


def test_monte_carlo_agrees():
    g = il.make_family("independent", 6)
    exact = il.concentration_sup_x(g, [1.0] * 6)
    rng = il.Rng(3)
    center = il.mc_window_center(g, [1.0] * 6, 5000, rng)
    rep = il.concentration_mc(g, [1.0] * 6, center, 20000, rng)
    assert abs(rep.value - exact.value) <= rep.ci_halfwidth + 0.02


def test_certificate_passes():
    cert = il.lower_bound_certificate(il.make_family("independent", 5))
    assert cert.passes
    assert cert.exhaustive
    assert cert.bound == il.erdos_bound(5)


def test_exploration_coupling():
    inst = il.make_percolation(3, [0, 1, 2], [(0, 1, 0.5), (1, 2, 0.5)])
    rng = il.Rng(7)
    for _ in range(200):
        open_edges = il.sample_edge_config(inst, rng)
        trace = il.search_isolated_on(inst, open_edges)
        assert trace.isolated_count == il.isolated_count_direct(
            inst, open_edges)
        covered = sum(len(s.revealed) + 1 for s in trace.steps)
        assert covered >= len(inst.target)


def test_domination_tight_case():
    inst = il.make_percolation(2, [0], [(0, 1, 0.5)])
    rep = il.domination_check(inst, 0, il.Rng(5))
    assert rep.exact
    assert rep.pass_
    assert abs(rep.rate - math.log(2.0)) < 1e-14


def test_conditioned_instance_and_fraction():
    g = il.make_family("path", 8, J=0.5)
    inst = il.conditioned_instance(g, [1] * 8)
    assert len(inst.target) == 8
    assert len(inst.edges) == 7
    report = il.isolated_fraction_experiment(g, 200, il.Rng(9))
    assert report.n == 8
    assert 0.0 < report.mean_fraction <= 1.0


def test_scaling_rows():
    rows = il.scaling_experiment("independent", [8, 16], 4000, il.Rng(13))
    assert [r.n for r in rows] == [8, 16]
    for r in rows:
        assert r.q_hat_sqrt_n == pytest.approx(
            r.q_hat * math.sqrt(r.n), abs=1e-12)
        assert r.ci > 0.0
