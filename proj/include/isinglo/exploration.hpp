// Isolated-vertex search on the bond-percolation instance a spin
// configuration induces, the Poisson process that dominates its outcome
// counts, and exact/empirical verification of that domination.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isinglo/gibbs.hpp"
#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"

namespace isinglo {

// Self-contained percolation instance: vertices 0..vertex_count-1, a target
// subset to probe for isolation, and edges opening independently with their
// own probabilities.
struct PercolationInstance {
    struct Edge {
        std::uint32_t u = 0;
        std::uint32_t v = 0;  // u < v after validation
        double p = 0.0;       // open probability, in (0,1)
    };

    std::uint32_t vertex_count = 0;
    std::vector<std::string> labels;      // empty, or one name per vertex
    std::vector<std::uint32_t> target;    // ascending vertex indices
    std::vector<Edge> edges;
};

// Validates and normalizes (orders endpoints, sorts the target).
PercolationInstance make_percolation(std::uint32_t vertex_count,
                                     std::vector<std::uint32_t> target,
                                     std::vector<PercolationInstance::Edge> edges,
                                     std::vector<std::string> labels = {});

// max over target vertices of sum of -ln(1 - p) over incident edges: the
// per-vertex interaction budget of the instance, and the rate of the
// dominating Poisson process.
double percolation_budget(const PercolationInstance& inst);

// Percolation instance conditioned on a spin configuration: vertices are
// the closed region, the surviving edges are those whose constraint the
// spins satisfy (p = 1 - exp(-|J|)), and the target is the larger spin
// class of the region (ties go to +1).
PercolationInstance conditioned_instance(const CouplingGraph& g,
                                         const SpinConfig& sc);

struct ExplorationStep {
    std::uint32_t vertex = 0;               // the probed vertex
    std::vector<std::uint32_t> revealed;    // newly opened neighbors, ascending
};

struct ExplorationTrace {
    std::vector<ExplorationStep> steps;
    std::uint64_t turns = 0;           // == steps.size()
    std::uint64_t isolated_count = 0;  // steps with no revealed neighbor
};

// Probes the least-index unremoved target vertex, sampling each of its
// still-undecided incident edges once; newly opened neighbors are removed
// from the queue. Edges are never resampled: each is decided at most once
// across the run.
ExplorationTrace search_isolated(const PercolationInstance& inst, Rng& rng);

// Same walk with every edge fate fixed up front; drives coupling tests
// against the direct count.
ExplorationTrace search_isolated_on(const PercolationInstance& inst,
                                    const std::vector<std::uint8_t>& open);

// One independent Bernoulli draw per edge, in edge order.
std::vector<std::uint8_t> sample_edge_config(const PercolationInstance& inst,
                                             Rng& rng);

// Target vertices with no incident open edge.
std::uint64_t isolated_count_direct(const PercolationInstance& inst,
                                    const std::vector<std::uint8_t>& open);

struct DominatingOutcome {
    std::uint64_t turns = 0;       // first k with Y_1+...+Y_k >= m-k
    std::uint64_t zero_steps = 0;  // draws equal to zero up to that point
};

// i.i.d. Poisson(rate) surrogate for the exploration; stops within m steps.
DominatingOutcome dominating_process(std::uint64_t m, double rate, Rng& rng);

struct DominationRow {
    std::uint64_t k = 0;
    double p_search = 0.0;   // P(isolated_count >= k)
    double p_poisson = 0.0;  // P(zero_steps >= k)
};

struct DominationReport {
    bool exact = false;
    double rate = 0.0;
    std::uint64_t target_size = 0;
    std::uint64_t trials = 0;  // 0 in exact mode
    double band = 0.0;         // allowed slack: float budget or DKW width
    std::vector<DominationRow> rows;
    double worst_margin = 0.0;  // min over k of p_search - p_poisson
    bool pass = false;          // worst_margin >= -band
};

// Verifies P(M >= k) >= P(M^Y >= k) for all k, with M the exploration's
// isolated count and M^Y the Poisson surrogate's zero count at rate equal
// to the instance budget. Exact (full enumeration of edge fates against an
// exact stopped-Poisson recursion) when the instance has at most 10 edges;
// empirical with simultaneous DKW bands otherwise.
DominationReport domination_check(const PercolationInstance& inst,
                                  std::uint64_t trials, Rng& rng);

struct IsolatedFractionRow {
    double c = 0.0;
    std::uint64_t threshold = 0;  // smallest integer >= c*n
    double frequency = 0.0;       // empirical P(N >= threshold)
};

struct IsolatedFractionReport {
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double mean_fraction = 0.0;  // mean of N/n
    std::vector<IsolatedFractionRow> rows;
};

// Joint-samples (spins, edges), counts N = singleton inner clusters, and
// reports tail frequencies P(N >= c*n) over the grid. The field is absorbed
// internally first.
IsolatedFractionReport isolated_fraction_experiment(
    const CouplingGraph& g, std::uint64_t trials, Rng& rng,
    std::vector<double> c_grid = {0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5},
    std::size_t cap = kDefaultEnumerationCap, GlauberOptions opts = {});

}  // namespace isinglo
