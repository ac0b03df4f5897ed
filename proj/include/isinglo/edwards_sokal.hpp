// Joint spin-edge coupling for Ising models with couplings of either sign:
// joint weight evaluation, the two conditional samplers, cluster
// decomposition with relative signs, and the reduction of a weighted spin
// sum to an independent-sign series over inner clusters.
//
// All operations here assume a vanishing external field; instances carrying
// a field must pass through absorb_field first.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "isinglo/gibbs.hpp"
#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"

namespace isinglo {

// Open/closed state per region-adjacent edge, indexed like region_edges().
struct EdgeConfig {
    std::vector<std::uint8_t> open;
};

// Probability that an edge of coupling J is open when its constraint allows:
// 1 - e^{-|J|}.
double open_probability(double coupling);

// Unnormalized joint weight of (spins, edges). Zero exactly when an open
// positive edge joins disagreeing spins or an open negative edge joins
// agreeing spins.
double fksw_weight(const CouplingGraph& g, const SpinConfig& sc, const EdgeConfig& ec);

// Exhaustive joint distribution over (spin mask, edge mask). Small instances
// only; the joint index is (spin_mask << edge_count) | edge_mask.
struct JointEnumeration {
    std::uint32_t n = 0;
    std::uint32_t edge_count = 0;
    std::vector<double> joint;
    std::vector<double> spin_marginal;   // 2^n, mask-indexed
    std::vector<double> edge_marginal;   // 2^edge_count, mask-indexed
    double weight_sum = 0.0;
};
JointEnumeration enumerate_fksw(const CouplingGraph& g, std::size_t cap_bits = 24);

// Conditional edge sampler: Bernoulli bond percolation. Constraint-violating
// edges are forced closed; the rest open independently with probability
// 1 - e^{-|J|}.
EdgeConfig sample_edges_given_spins(const CouplingGraph& g, const SpinConfig& sc, Rng& rng);

// Connected components of the region-plus-neighbors vertex set under open
// edges. Inner clusters (contained in the region) come first, then boundary
// clusters; both groups are ordered by their smallest vertex. The relative
// sign is +1 at each representative, kept across open positive edges and
// flipped across open negative ones; it depends on the edge configuration
// alone.
struct ClusterDecomposition {
    std::vector<std::vector<VertexId>> clusters;  // each ascending
    std::size_t inner_count = 0;                  // leading clusters
    std::size_t boundary_count = 0;
    std::vector<VertexId> representatives;        // smallest vertex per cluster
    std::vector<std::int8_t> relative_sign;       // per vertex id; 0 off the closed region

    bool is_inner(std::size_t k) const { return k < inner_count; }
};

// Throws std::runtime_error("frustrated edge configuration ...") if sign
// propagation hits a conflict; impossible for edge configurations of
// positive joint probability.
ClusterDecomposition cluster_decompose(const CouplingGraph& g, const EdgeConfig& ec);

// Cluster spins of the boundary clusters as dictated by the boundary
// condition (length = boundary_count). Throws
// std::runtime_error("frustrated boundary ...") on conflicting demands.
std::vector<std::int8_t> boundary_cluster_spins(const CouplingGraph& g,
                                                const ClusterDecomposition& d);

// Conditional spin sampler: boundary clusters follow the boundary condition,
// inner cluster spins are independent uniform signs, and each vertex takes
// its cluster spin times its relative sign.
SpinConfig sample_spins_given_edges(const CouplingGraph& g, const EdgeConfig& ec, Rng& rng);

// One draw from the joint law: spins from the Gibbs distribution (inverse
// CDF over the enumerated distribution for regions up to `cap`, a fresh
// Glauber chain beyond), then conditional edges. Prefer JointSampler for
// repeated draws.
std::pair<SpinConfig, EdgeConfig> joint_sample(const CouplingGraph& g, Rng& rng,
                                               std::size_t cap = kDefaultEnumerationCap);

class JointSampler {
public:
    JointSampler(const CouplingGraph& g, Rng rng, std::size_t cap = kDefaultEnumerationCap,
                 GlauberOptions opts = {});

    std::pair<SpinConfig, EdgeConfig> next();
    SpinConfig next_spins();
    const CouplingGraph& graph() const { return *g_; }

private:
    const CouplingGraph* g_;
    Rng rng_;
    ExactDistribution exact_;       // empty when the chain is used
    std::vector<double> cdf_;
    std::vector<GlauberChain> chain_;  // 0 or 1 elements
};

// The weighted spin sum collapsed onto cluster spins: one weight per inner
// cluster plus a fixed offset carried by the boundary clusters.
struct ReducedSeries {
    std::vector<double> weights;  // per inner cluster
    double offset = 0.0;          // boundary cluster contribution
};

// weights[k] = sum over region vertices of cluster k of sign * v; offset
// aggregates the boundary clusters with their determined cluster spins.
// Weight entries below magnitude 1 are legal (the identity holds regardless);
// a note is emitted to stderr when the input vector itself dips below 1.
ReducedSeries reduce_weights(const CouplingGraph& g, const ClusterDecomposition& d,
                             const std::vector<double>& v,
                             const std::vector<std::int8_t>& boundary_spins);
ReducedSeries reduce_weights(const CouplingGraph& g, const ClusterDecomposition& d,
                             const std::vector<double>& v);

}  // namespace isinglo
