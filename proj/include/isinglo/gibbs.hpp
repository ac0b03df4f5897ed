// Hamiltonian evaluation, exact enumeration of the Gibbs distribution for
// small regions, and single-site heat-bath (Glauber) sampling for large ones.
#pragma once

#include <cstdint>
#include <vector>

#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"

namespace isinglo {

inline constexpr std::size_t kDefaultEnumerationCap = 20;

// Spins of the region vertices, indexed by region() order. Exterior vertices
// take their value from the boundary condition.
struct SpinConfig {
    std::vector<std::int8_t> s;
};

// Spin at any vertex, extending the configuration by the boundary condition.
int spin_at(const CouplingGraph& g, const SpinConfig& sc, VertexId v);

// -sum_{E_n} J_ij 1[s_i = s_j]  -  sum_region h_i s_i
double hamiltonian(const CouplingGraph& g, const SpinConfig& sc);

// Full distribution over the 2^n region configurations. Configuration `mask`
// assigns spin +1 to region position p iff bit p of mask is set.
struct ExactDistribution {
    std::uint32_t n = 0;
    std::vector<double> prob;    // 2^n entries, mask-indexed
    std::vector<double> energy;  // Hamiltonian per mask
    double log_partition = 0.0;

    static int spin_from_mask(std::uint64_t mask, unsigned pos) {
        return (mask >> pos) & 1u ? +1 : -1;
    }
    SpinConfig config(std::uint64_t mask) const;
    std::uint64_t mask_of(const SpinConfig& sc) const;
};

// Exact Gibbs distribution by enumeration in binary-counter order with
// incremental energy updates. Weights are normalized against the minimum
// energy so no exponential overflows; refuses regions above the cap.
ExactDistribution enumerate_gibbs(const CouplingGraph& g,
                                  std::size_t cap = kDefaultEnumerationCap);

// Total variation distance between two mask-indexed distributions.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

struct GlauberOptions {
    // Defaults (applied when a field is 0): burn-in of 100*n single-site
    // updates, one retained sample every n updates.
    std::uint64_t burn_in_updates = 0;
    std::uint64_t updates_per_sample = 0;
};

// Streaming heat-bath sampler. Stationary distribution is the Gibbs
// distribution; single-site updates on uniformly chosen region vertices.
class GlauberChain {
public:
    GlauberChain(const CouplingGraph& g, Rng rng, GlauberOptions opts = {});

    const SpinConfig& next();
    const SpinConfig& state() const { return config_; }
    void set_state(const SpinConfig& sc);
    void update_once();

    // Heat-bath probability of spin +1 at region position `pos` given the
    // rest of the current configuration.
    double heat_bath_plus_probability(std::size_t pos) const;

private:
    struct Neighbor {
        std::ptrdiff_t pos;  // region position, or -1 for a fixed spin
        double coupling;
    };

    const CouplingGraph* g_;
    Rng rng_;
    GlauberOptions opts_;
    SpinConfig config_;
    std::vector<std::vector<Neighbor>> neighbors_;  // per region position
    std::vector<double> fixed_local_;               // boundary + field offset
};

// One configuration after `sweeps` full sweeps (n single-site updates each)
// from a uniform random start.
SpinConfig glauber_sample(const CouplingGraph& g, std::uint64_t sweeps, Rng& rng);

}  // namespace isinglo
