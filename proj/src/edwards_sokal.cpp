#include "isinglo/edwards_sokal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace isinglo {

namespace {

void require_zero_field(const CouplingGraph& g, const char* op) {
    if (g.has_field())
        throw std::invalid_argument(std::string(op) +
                                    ": instance carries an external field; apply absorb_field first");
}

// Does the spin pair satisfy the open-edge constraint of this coupling?
bool edge_satisfied(double coupling, int si, int sj) {
    return coupling > 0.0 ? si == sj : si != sj;
}

struct UnionFind {
    std::vector<VertexId> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), VertexId{0});
    }
    VertexId find(VertexId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

double open_probability(double coupling) { return -std::expm1(-std::abs(coupling)); }

double fksw_weight(const CouplingGraph& g, const SpinConfig& sc, const EdgeConfig& ec) {
    require_zero_field(g, "fksw_weight");
    if (ec.open.size() != g.region_edges().size())
        throw std::invalid_argument("edge configuration size does not match region edges");
    double weight = 1.0;
    for (std::size_t pos = 0; pos < ec.open.size(); ++pos) {
        const Edge& e = g.edges()[g.region_edges()[pos]];
        const double p = open_probability(e.coupling);
        if (!ec.open[pos]) {
            weight *= 1.0 - p;
        } else if (edge_satisfied(e.coupling, spin_at(g, sc, e.u), spin_at(g, sc, e.v))) {
            weight *= p;
        } else {
            return 0.0;
        }
    }
    return weight;
}

JointEnumeration enumerate_fksw(const CouplingGraph& g, std::size_t cap_bits) {
    require_zero_field(g, "enumerate_fksw");
    const std::size_t n = g.region_size();
    const std::size_t m = g.region_edges().size();
    if (n + m > cap_bits)
        throw std::invalid_argument("joint enumeration needs " + std::to_string(n + m) +
                                    " bits, cap is " + std::to_string(cap_bits));
    JointEnumeration out;
    out.n = static_cast<std::uint32_t>(n);
    out.edge_count = static_cast<std::uint32_t>(m);
    out.joint.assign(std::size_t{1} << (n + m), 0.0);
    out.spin_marginal.assign(std::size_t{1} << n, 0.0);
    out.edge_marginal.assign(std::size_t{1} << m, 0.0);

    SpinConfig sc;
    sc.s.resize(n);
    EdgeConfig ec;
    ec.open.resize(m);
    for (std::uint64_t smask = 0; smask < (std::uint64_t{1} << n); ++smask) {
        for (unsigned p = 0; p < n; ++p)
            sc.s[p] = static_cast<std::int8_t>(ExactDistribution::spin_from_mask(smask, p));
        for (std::uint64_t emask = 0; emask < (std::uint64_t{1} << m); ++emask) {
            for (unsigned b = 0; b < m; ++b) ec.open[b] = (emask >> b) & 1u;
            const double w = fksw_weight(g, sc, ec);
            out.joint[(smask << m) | emask] = w;
            out.weight_sum += w;
        }
    }
    for (std::uint64_t smask = 0; smask < (std::uint64_t{1} << n); ++smask)
        for (std::uint64_t emask = 0; emask < (std::uint64_t{1} << m); ++emask) {
            const double p = out.joint[(smask << m) | emask] / out.weight_sum;
            out.joint[(smask << m) | emask] = p;
            out.spin_marginal[smask] += p;
            out.edge_marginal[emask] += p;
        }
    return out;
}

EdgeConfig sample_edges_given_spins(const CouplingGraph& g, const SpinConfig& sc, Rng& rng) {
    const auto& en = g.region_edges();
    EdgeConfig ec;
    ec.open.assign(en.size(), 0);
    for (std::size_t pos = 0; pos < en.size(); ++pos) {
        const Edge& e = g.edges()[en[pos]];
        if (!edge_satisfied(e.coupling, spin_at(g, sc, e.u), spin_at(g, sc, e.v)))
            continue;  // constraint forces the edge closed
        ec.open[pos] = rng.bernoulli(open_probability(e.coupling)) ? 1 : 0;
    }
    return ec;
}

ClusterDecomposition cluster_decompose(const CouplingGraph& g, const EdgeConfig& ec) {
    const auto& en = g.region_edges();
    if (ec.open.size() != en.size())
        throw std::invalid_argument("edge configuration size does not match region edges");
    const std::size_t nv = g.vertex_count();

    UnionFind uf(nv);
    for (std::size_t pos = 0; pos < en.size(); ++pos) {
        if (!ec.open[pos]) continue;
        const Edge& e = g.edges()[en[pos]];
        uf.unite(e.u, e.v);
    }

    // Gather clusters over the closed region, keyed by root.
    std::vector<std::ptrdiff_t> cluster_of(nv, -1);
    std::vector<std::vector<VertexId>> clusters;
    std::vector<bool> inner;
    for (VertexId v : g.closed_region()) {
        const VertexId root = uf.find(v);
        if (cluster_of[root] < 0) {
            cluster_of[root] = static_cast<std::ptrdiff_t>(clusters.size());
            clusters.emplace_back();
            inner.push_back(true);
        }
        const auto k = static_cast<std::size_t>(cluster_of[root]);
        clusters[k].push_back(v);  // closed_region() is ascending
        if (!g.in_region(v)) inner[k] = false;
    }

    // Inner clusters first, then boundary clusters; both by smallest vertex.
    // Clusters were created in ascending order of their smallest member, so a
    // stable partition preserves it within each group.
    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_partition(order.begin(), order.end(), [&](std::size_t k) { return inner[k]; });

    ClusterDecomposition d;
    d.relative_sign.assign(nv, 0);
    for (std::size_t k : order) {
        if (inner[k]) ++d.inner_count;
        else ++d.boundary_count;
        d.representatives.push_back(clusters[k].front());
        d.clusters.push_back(std::move(clusters[k]));
    }

    // Relative signs by breadth-first propagation from each representative.
    std::vector<std::vector<std::pair<VertexId, double>>> open_adj(nv);
    for (std::size_t pos = 0; pos < en.size(); ++pos) {
        if (!ec.open[pos]) continue;
        const Edge& e = g.edges()[en[pos]];
        open_adj[e.u].emplace_back(e.v, e.coupling);
        open_adj[e.v].emplace_back(e.u, e.coupling);
    }
    for (std::size_t k = 0; k < d.clusters.size(); ++k) {
        std::deque<VertexId> queue{d.representatives[k]};
        d.relative_sign[d.representatives[k]] = +1;
        while (!queue.empty()) {
            const VertexId v = queue.front();
            queue.pop_front();
            for (const auto& [w, coupling] : open_adj[v]) {
                const std::int8_t expect =
                    coupling > 0.0 ? d.relative_sign[v]
                                   : static_cast<std::int8_t>(-d.relative_sign[v]);
                if (d.relative_sign[w] == 0) {
                    d.relative_sign[w] = expect;
                    queue.push_back(w);
                } else if (d.relative_sign[w] != expect) {
                    throw std::runtime_error(
                        "frustrated edge configuration: conflicting sign at vertex '" +
                        g.name(w) + "'");
                }
            }
        }
    }
    return d;
}

std::vector<std::int8_t> boundary_cluster_spins(const CouplingGraph& g,
                                                const ClusterDecomposition& d) {
    std::vector<std::int8_t> spins(d.boundary_count, 0);
    for (std::size_t k = d.inner_count; k < d.clusters.size(); ++k) {
        std::int8_t spin = 0;
        for (VertexId v : d.clusters[k]) {
            if (g.in_region(v)) continue;
            const auto demanded =
                static_cast<std::int8_t>(g.boundary_spin(v) * d.relative_sign[v]);
            if (spin == 0) {
                spin = demanded;
            } else if (spin != demanded) {
                throw std::runtime_error("frustrated boundary: cluster through vertex '" +
                                         g.name(v) + "' receives conflicting spins");
            }
        }
        spins[k - d.inner_count] = spin;
    }
    return spins;
}

SpinConfig sample_spins_given_edges(const CouplingGraph& g, const EdgeConfig& ec, Rng& rng) {
    require_zero_field(g, "sample_spins_given_edges");
    const ClusterDecomposition d = cluster_decompose(g, ec);
    const std::vector<std::int8_t> bspins = boundary_cluster_spins(g, d);

    SpinConfig sc;
    sc.s.assign(g.region_size(), 0);
    for (std::size_t k = 0; k < d.clusters.size(); ++k) {
        const std::int8_t eta = d.is_inner(k) ? static_cast<std::int8_t>(rng.spin())
                                              : bspins[k - d.inner_count];
        for (VertexId v : d.clusters[k]) {
            const auto pos = g.region_position(v);
            if (pos >= 0)
                sc.s[static_cast<std::size_t>(pos)] =
                    static_cast<std::int8_t>(eta * d.relative_sign[v]);
        }
    }
    return sc;
}

JointSampler::JointSampler(const CouplingGraph& g, Rng rng, std::size_t cap,
                           GlauberOptions opts)
    : g_(&g), rng_(rng) {
    require_zero_field(g, "JointSampler");
    if (g.region_size() <= cap) {
        exact_ = enumerate_gibbs(g, cap);
        cdf_.resize(exact_.prob.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < exact_.prob.size(); ++i) {
            acc += exact_.prob[i];
            cdf_[i] = acc;
        }
        cdf_.back() = 1.0;
    } else {
        chain_.emplace_back(g, rng_.stream(0), opts);
    }
}

SpinConfig JointSampler::next_spins() {
    if (!chain_.empty()) return chain_.front().next();
    const double u = rng_.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto mask = static_cast<std::uint64_t>(it - cdf_.begin());
    return exact_.config(std::min<std::uint64_t>(mask, cdf_.size() - 1));
}

std::pair<SpinConfig, EdgeConfig> JointSampler::next() {
    SpinConfig sc = next_spins();
    EdgeConfig ec = sample_edges_given_spins(*g_, sc, rng_);
    return {std::move(sc), std::move(ec)};
}

std::pair<SpinConfig, EdgeConfig> joint_sample(const CouplingGraph& g, Rng& rng,
                                               std::size_t cap) {
    JointSampler sampler(g, Rng(rng.next_u64()), cap);
    return sampler.next();
}

ReducedSeries reduce_weights(const CouplingGraph& g, const ClusterDecomposition& d,
                             const std::vector<double>& v,
                             const std::vector<std::int8_t>& boundary_spins) {
    if (v.size() != g.region_size())
        throw std::invalid_argument("weight vector size does not match region");
    if (boundary_spins.size() != d.boundary_count)
        throw std::invalid_argument("boundary spin count does not match decomposition");
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) < 1.0) {
            std::cerr << "reduce_weights: |v[" << i << "]| < 1 (the reduction identity"
                      << " still holds)\n";
            break;
        }

    ReducedSeries out;
    out.weights.reserve(d.inner_count);
    for (std::size_t k = 0; k < d.clusters.size(); ++k) {
        double w = 0.0;
        for (VertexId vert : d.clusters[k]) {
            const auto pos = g.region_position(vert);
            if (pos >= 0)
                w += d.relative_sign[vert] * v[static_cast<std::size_t>(pos)];
        }
        if (d.is_inner(k))
            out.weights.push_back(w);
        else
            out.offset += boundary_spins[k - d.inner_count] * w;
    }
    return out;
}

ReducedSeries reduce_weights(const CouplingGraph& g, const ClusterDecomposition& d,
                             const std::vector<double>& v) {
    return reduce_weights(g, d, v, boundary_cluster_spins(g, d));
}

}  // namespace isinglo
