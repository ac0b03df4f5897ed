#include "isinglo/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace isinglo {

int spin_at(const CouplingGraph& g, const SpinConfig& sc, VertexId v) {
    const auto pos = g.region_position(v);
    if (pos >= 0) return sc.s[static_cast<std::size_t>(pos)];
    return g.boundary_spin(v);
}

double hamiltonian(const CouplingGraph& g, const SpinConfig& sc) {
    if (sc.s.size() != g.region_size())
        throw std::invalid_argument("spin configuration size does not match region");
    double h = 0.0;
    for (std::size_t idx : g.region_edges()) {
        const Edge& e = g.edges()[idx];
        if (spin_at(g, sc, e.u) == spin_at(g, sc, e.v)) h -= e.coupling;
    }
    for (VertexId v : g.region()) {
        const double f = g.field_at(v);
        if (f != 0.0) h -= f * sc.s[static_cast<std::size_t>(g.region_position(v))];
    }
    return h;
}

SpinConfig ExactDistribution::config(std::uint64_t mask) const {
    SpinConfig sc;
    sc.s.resize(n);
    for (unsigned p = 0; p < n; ++p)
        sc.s[p] = static_cast<std::int8_t>(spin_from_mask(mask, p));
    return sc;
}

std::uint64_t ExactDistribution::mask_of(const SpinConfig& sc) const {
    std::uint64_t mask = 0;
    for (unsigned p = 0; p < n; ++p)
        if (sc.s[p] > 0) mask |= std::uint64_t{1} << p;
    return mask;
}

namespace {

// Energy change from flipping the spin at region position `pos` in place.
double flip_spin(const CouplingGraph& g, SpinConfig& sc, std::size_t pos) {
    const VertexId v = g.region()[pos];
    const int before = sc.s[pos];
    const int after = -before;
    double delta = 0.0;
    for (const auto& inc : g.incident(v)) {
        const Edge& e = g.edges()[g.region_edges()[inc.edge_pos]];
        const int other = spin_at(g, sc, inc.neighbor);
        delta -= e.coupling * ((other == after ? 1.0 : 0.0) - (other == before ? 1.0 : 0.0));
    }
    const double f = g.field_at(v);
    if (f != 0.0) delta -= f * (after - before);
    sc.s[pos] = static_cast<std::int8_t>(after);
    return delta;
}

}  // namespace

ExactDistribution enumerate_gibbs(const CouplingGraph& g, std::size_t cap) {
    const std::size_t n = g.region_size();
    if (n > cap)
        throw std::invalid_argument("region size " + std::to_string(n) +
                                    " exceeds enumeration cap " + std::to_string(cap));
    const std::uint64_t total = std::uint64_t{1} << n;

    ExactDistribution dist;
    dist.n = static_cast<std::uint32_t>(n);
    dist.energy.resize(total);

    SpinConfig sc;
    sc.s.assign(n, -1);  // mask 0
    double h = hamiltonian(g, sc);
    dist.energy[0] = h;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        const unsigned low = static_cast<unsigned>(std::countr_zero(mask));
        for (unsigned b = 0; b <= low; ++b) h += flip_spin(g, sc, b);
        if ((mask & 0xFFFu) == 0) h = hamiltonian(g, sc);  // curb float drift
        dist.energy[mask] = h;
    }

    const double lowest = *std::min_element(dist.energy.begin(), dist.energy.end());
    dist.prob.resize(total);
    double sum = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        const double w = std::exp(-(dist.energy[mask] - lowest));
        dist.prob[mask] = w;
        sum += w;
    }
    for (double& p : dist.prob) p /= sum;
    dist.log_partition = -lowest + std::log(sum);
    return dist;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("total_variation: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

GlauberChain::GlauberChain(const CouplingGraph& g, Rng rng, GlauberOptions opts)
    : g_(&g), rng_(rng), opts_(opts) {
    const std::size_t n = g.region_size();
    if (opts_.burn_in_updates == 0) opts_.burn_in_updates = 100 * n;
    if (opts_.updates_per_sample == 0) opts_.updates_per_sample = n;

    neighbors_.resize(n);
    fixed_local_.assign(n, 0.0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const VertexId v = g.region()[pos];
        for (const auto& inc : g.incident(v)) {
            const Edge& e = g.edges()[g.region_edges()[inc.edge_pos]];
            const auto npos = g.region_position(inc.neighbor);
            if (npos >= 0)
                neighbors_[pos].push_back({npos, e.coupling});
            else
                fixed_local_[pos] += e.coupling * g.boundary_spin(inc.neighbor);
        }
        fixed_local_[pos] += 2.0 * g.field_at(v);
    }

    config_.s.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        config_.s[pos] = static_cast<std::int8_t>(rng_.spin());
    for (std::uint64_t i = 0; i < opts_.burn_in_updates; ++i) update_once();
}

double GlauberChain::heat_bath_plus_probability(std::size_t pos) const {
    double local = fixed_local_[pos];
    for (const auto& nb : neighbors_[pos])
        local += nb.coupling * config_.s[static_cast<std::size_t>(nb.pos)];
    return 1.0 / (1.0 + std::exp(-local));
}

void GlauberChain::set_state(const SpinConfig& sc) {
    if (sc.s.size() != config_.s.size())
        throw std::invalid_argument("set_state: configuration size mismatch");
    config_ = sc;
}

void GlauberChain::update_once() {
    const std::size_t pos = rng_.below(config_.s.size());
    const double p_plus = heat_bath_plus_probability(pos);
    config_.s[pos] = rng_.uniform01() < p_plus ? +1 : -1;
}

const SpinConfig& GlauberChain::next() {
    for (std::uint64_t i = 0; i < opts_.updates_per_sample; ++i) update_once();
    return config_;
}

SpinConfig glauber_sample(const CouplingGraph& g, std::uint64_t sweeps, Rng& rng) {
    if (sweeps < 1) throw std::invalid_argument("glauber_sample: sweeps must be >= 1");
    const std::size_t n = g.region_size();
    GlauberOptions opts;
    opts.burn_in_updates = sweeps * n;
    opts.updates_per_sample = 1;  // unused; the burn-in does the work
    GlauberChain chain(g, Rng(rng.next_u64()), opts);
    return chain.state();
}

}  // namespace isinglo
