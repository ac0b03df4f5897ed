#include "isinglo/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "isinglo/edwards_sokal.hpp"

namespace isinglo {

namespace {

std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adjacency(
    const PercolationInstance& inst) {
    std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adj(
        inst.vertex_count);
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        adj[inst.edges[e].u].emplace_back(inst.edges[e].v, e);
        adj[inst.edges[e].v].emplace_back(inst.edges[e].u, e);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

// The walk: probe the least-index unremoved target vertex, decide its
// still-undecided incident edges, drop it and every newly revealed open
// neighbor from the queue. Once a vertex has been probed, all its incident
// edges are decided, so an empty reveal set certifies isolation.
template <class Decide>
ExplorationTrace run_search(const PercolationInstance& inst, Decide&& decide) {
    if (inst.target.empty())
        throw std::invalid_argument("exploration target is empty");
    const auto adj = adjacency(inst);
    std::vector<std::uint8_t> decided(inst.edges.size(), 0);
    std::vector<std::uint8_t> queued(inst.vertex_count, 0);
    for (std::uint32_t t : inst.target) queued[t] = 1;

    ExplorationTrace trace;
    // Removals never precede the cursor: the probed vertex is the minimum
    // of the queue, so the next minimum lies strictly beyond it.
    std::size_t cursor = 0;
    while (true) {
        while (cursor < inst.target.size() && !queued[inst.target[cursor]])
            ++cursor;
        if (cursor == inst.target.size()) break;
        const std::uint32_t v = inst.target[cursor];
        queued[v] = 0;
        ExplorationStep step;
        step.vertex = v;
        for (const auto& [w, e] : adj[v]) {
            if (decided[e]) continue;
            decided[e] = 1;
            if (decide(e)) {
                step.revealed.push_back(w);
                queued[w] = 0;
            }
        }
        if (step.revealed.empty()) ++trace.isolated_count;
        trace.steps.push_back(std::move(step));
    }
    trace.turns = trace.steps.size();
    return trace;
}

// Exact 2^E sweep over edge fates; feasible for small instances only.
std::vector<double> exact_search_dist(const PercolationInstance& inst) {
    const std::size_t ec = inst.edges.size();
    std::vector<double> dist(inst.target.size() + 1, 0.0);
    std::vector<std::uint8_t> open(ec, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << ec); ++mask) {
        double w = 1.0;
        for (std::size_t e = 0; e < ec; ++e) {
            open[e] = (mask >> e) & 1u;
            w *= open[e] ? inst.edges[e].p : 1.0 - inst.edges[e].p;
        }
        const ExplorationTrace t = search_isolated_on(inst, open);
        dist[t.isolated_count] += w;
    }
    return dist;
}

// Exact law of the dominating process' zero count. State (r, z): r spins
// still owed (stop at r <= 0), z zero draws so far. A draw y <= r-2 keeps
// the walk alive; everything else stops it, and that stopping mass is the
// exact complement of the survivor mass, so no truncation is needed.
std::vector<double> poisson_zero_count_dist(std::uint64_t m, double rate) {
    const double p0 = std::exp(-rate);
    std::vector<std::vector<double>> active(m + 1,
                                            std::vector<double>(m + 1, 0.0));
    std::vector<double> out(m + 1, 0.0);
    active[m][0] = 1.0;
    for (std::uint64_t step = 1; step <= m; ++step) {
        std::vector<std::vector<double>> next(m + 1,
                                              std::vector<double>(m + 1, 0.0));
        for (std::uint64_t r = 1; r <= m; ++r)
            for (std::uint64_t z = 0; z < step; ++z) {
                const double pr = active[r][z];
                if (pr == 0.0) continue;
                if (r == 1)
                    out[z + 1] += pr * p0;
                else
                    next[r - 1][z + 1] += pr * p0;
                double pmf = p0;
                double cum = p0;
                for (std::uint64_t y = 1; y + 1 < r; ++y) {
                    pmf *= rate / double(y);
                    cum += pmf;
                    next[r - 1 - y][z] += pr * pmf;
                }
                const double tail = 1.0 - cum;
                if (tail > 0.0) out[z] += pr * tail;
            }
        active.swap(next);
    }
    return out;
}

std::vector<double> tail_from_dist(const std::vector<double>& dist) {
    std::vector<double> tail(dist.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = dist.size(); k-- > 0;) {
        acc += dist[k];
        tail[k] = acc;
    }
    return tail;
}

}  // namespace

PercolationInstance make_percolation(std::uint32_t vertex_count,
                                     std::vector<std::uint32_t> target,
                                     std::vector<PercolationInstance::Edge> edges,
                                     std::vector<std::string> labels) {
    if (vertex_count == 0)
        throw std::invalid_argument("percolation instance needs vertices");
    if (!labels.empty() && labels.size() != vertex_count)
        throw std::invalid_argument("label count does not match vertex count");
    std::sort(target.begin(), target.end());
    if (std::adjacent_find(target.begin(), target.end()) != target.end())
        throw std::invalid_argument("duplicate target vertex");
    for (std::uint32_t t : target)
        if (t >= vertex_count)
            throw std::invalid_argument("target vertex out of range");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto& e : edges) {
        if (e.u == e.v) throw std::invalid_argument("self-loop edge");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.v >= vertex_count)
            throw std::invalid_argument("edge endpoint out of range");
        if (!(e.p > 0.0 && e.p < 1.0))
            throw std::invalid_argument(
                "edge open probability must lie in (0,1)");
        seen.emplace_back(e.u, e.v);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("duplicate edge");
    PercolationInstance inst;
    inst.vertex_count = vertex_count;
    inst.labels = std::move(labels);
    inst.target = std::move(target);
    inst.edges = std::move(edges);
    return inst;
}

double percolation_budget(const PercolationInstance& inst) {
    std::vector<double> load(inst.vertex_count, 0.0);
    for (const auto& e : inst.edges) {
        const double w = -std::log1p(-e.p);
        load[e.u] += w;
        load[e.v] += w;
    }
    double budget = 0.0;
    for (std::uint32_t t : inst.target) budget = std::max(budget, load[t]);
    return budget;
}

PercolationInstance conditioned_instance(const CouplingGraph& g,
                                         const SpinConfig& sc) {
    const auto& closed = g.closed_region();
    std::vector<std::uint32_t> pos(g.vertex_count(), 0);
    std::vector<std::string> labels(closed.size());
    for (std::size_t i = 0; i < closed.size(); ++i) {
        pos[closed[i]] = std::uint32_t(i);
        labels[i] = g.name(closed[i]);
    }

    std::size_t plus = 0;
    for (std::size_t i = 0; i < g.region_size(); ++i)
        if (sc.s[i] > 0) ++plus;
    const int majority = 2 * plus >= g.region_size() ? 1 : -1;
    std::vector<std::uint32_t> target;
    for (std::size_t i = 0; i < g.region_size(); ++i)
        if (sc.s[i] == majority) target.push_back(pos[g.region()[i]]);

    std::vector<PercolationInstance::Edge> edges;
    for (const std::size_t idx : g.region_edges()) {
        const Edge& e = g.edges()[idx];
        const int si = spin_at(g, sc, e.u);
        const int sj = spin_at(g, sc, e.v);
        const bool satisfied = e.coupling > 0 ? si == sj : si != sj;
        if (!satisfied) continue;
        const double p = -std::expm1(-std::abs(e.coupling));
        edges.push_back({pos[e.u], pos[e.v], p});
    }
    return make_percolation(std::uint32_t(closed.size()), std::move(target),
                            std::move(edges), std::move(labels));
}

ExplorationTrace search_isolated(const PercolationInstance& inst, Rng& rng) {
    return run_search(inst,
                      [&](std::size_t e) { return rng.bernoulli(inst.edges[e].p); });
}

ExplorationTrace search_isolated_on(const PercolationInstance& inst,
                                    const std::vector<std::uint8_t>& open) {
    if (open.size() != inst.edges.size())
        throw std::invalid_argument("edge configuration size mismatch");
    return run_search(inst, [&](std::size_t e) { return open[e] != 0; });
}

std::vector<std::uint8_t> sample_edge_config(const PercolationInstance& inst,
                                             Rng& rng) {
    std::vector<std::uint8_t> open(inst.edges.size(), 0);
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        open[e] = rng.bernoulli(inst.edges[e].p) ? 1 : 0;
    return open;
}

std::uint64_t isolated_count_direct(const PercolationInstance& inst,
                                    const std::vector<std::uint8_t>& open) {
    if (open.size() != inst.edges.size())
        throw std::invalid_argument("edge configuration size mismatch");
    std::vector<std::uint8_t> touched(inst.vertex_count, 0);
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        if (open[e]) {
            touched[inst.edges[e].u] = 1;
            touched[inst.edges[e].v] = 1;
        }
    std::uint64_t isolated = 0;
    for (std::uint32_t t : inst.target)
        if (!touched[t]) ++isolated;
    return isolated;
}

DominatingOutcome dominating_process(std::uint64_t m, double rate, Rng& rng) {
    if (m == 0) throw std::invalid_argument("dominating process needs m >= 1");
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("rate must be finite and nonnegative");
    DominatingOutcome out;
    std::uint64_t sum = 0;
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t y = rng.poisson(rate);
        sum += y;
        if (y == 0) ++out.zero_steps;
        if (sum + k >= m) {  // the walk owes m - k more, covered by the sum
            out.turns = k;
            return out;
        }
    }
}

DominationReport domination_check(const PercolationInstance& inst,
                                  std::uint64_t trials, Rng& rng) {
    if (inst.target.empty())
        throw std::invalid_argument("exploration target is empty");
    DominationReport rep;
    rep.rate = percolation_budget(inst);
    rep.target_size = inst.target.size();
    const std::uint64_t m = rep.target_size;

    std::vector<double> search_tail, poisson_tail;
    if (inst.edges.size() <= 10) {
        rep.exact = true;
        rep.band = 1e-12;
        search_tail = tail_from_dist(exact_search_dist(inst));
        poisson_tail = tail_from_dist(poisson_zero_count_dist(m, rep.rate));
    } else {
        if (trials == 0)
            throw std::invalid_argument("empirical domination check needs trials");
        rep.trials = trials;
        std::vector<double> ds(m + 1, 0.0), dy(m + 1, 0.0);
        for (std::uint64_t t = 0; t < trials; ++t) {
            ds[search_isolated(inst, rng).isolated_count] += 1.0;
            dy[dominating_process(m, rep.rate, rng).zero_steps] += 1.0;
        }
        for (double& x : ds) x /= double(trials);
        for (double& x : dy) x /= double(trials);
        search_tail = tail_from_dist(ds);
        poisson_tail = tail_from_dist(dy);
        // Simultaneous band: one DKW envelope per empirical cdf.
        const double eps =
            std::sqrt(std::log(2.0 / 1e-6) / (2.0 * double(trials)));
        rep.band = 2.0 * eps;
    }

    rep.worst_margin = 1.0;
    for (std::uint64_t k = 1; k <= m; ++k) {
        DominationRow row;
        row.k = k;
        row.p_search = search_tail[k];
        row.p_poisson = poisson_tail[k];
        rep.worst_margin = std::min(rep.worst_margin, row.p_search - row.p_poisson);
        rep.rows.push_back(row);
    }
    rep.pass = rep.worst_margin >= -rep.band;
    return rep;
}

IsolatedFractionReport isolated_fraction_experiment(const CouplingGraph& g,
                                                    std::uint64_t trials,
                                                    Rng& rng,
                                                    std::vector<double> c_grid,
                                                    std::size_t cap,
                                                    GlauberOptions opts) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const CouplingGraph zero_field = absorb_field(g);
    const std::uint64_t n = zero_field.region_size();

    IsolatedFractionReport rep;
    rep.n = n;
    rep.trials = trials;
    std::vector<std::uint64_t> thresholds, counts(c_grid.size(), 0);
    for (const double c : c_grid) {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("tail grid entries must be nonnegative");
        thresholds.push_back(
            std::uint64_t(std::ceil(c * double(n) - 1e-9)));
    }

    JointSampler sampler(zero_field, Rng(rng.next_u64()), cap, opts);
    std::uint64_t total = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto [spins, edge_cfg] = sampler.next();
        const ClusterDecomposition d = cluster_decompose(zero_field, edge_cfg);
        std::uint64_t isolated = 0;
        for (std::size_t k = 0; k < d.inner_count; ++k)
            if (d.clusters[k].size() == 1) ++isolated;
        total += isolated;
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            if (isolated >= thresholds[i]) ++counts[i];
    }
    rep.mean_fraction = double(total) / (double(trials) * double(n));
    for (std::size_t i = 0; i < c_grid.size(); ++i)
        rep.rows.push_back({c_grid[i], thresholds[i],
                            double(counts[i]) / double(trials)});
    return rep;
}

}  // namespace isinglo
