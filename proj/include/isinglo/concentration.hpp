// Concentration function Q(x, v) = P(sum_i sigma_i v_i in (x-1, x+1)) for
// the weighted spin sum: exact evaluation, the exact sup over x, Monte Carlo
// estimation at scale, the Rademacher benchmark value, the symmetrization
// law, the lower-bound certificate, and the scaling experiment driver.
//
// The interval (x-1, x+1) is open and membership is tested with exact float
// comparison; dyadic inputs therefore give deterministic boundary behavior.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isinglo/families.hpp"
#include "isinglo/gibbs.hpp"
#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"

namespace isinglo {

// Weights for the linear statistic. Every entry must satisfy |v_i| >= 1:
// the unit window is only meaningful on that scale.
struct WeightVector {
    std::vector<double> v;

    static WeightVector ones(std::size_t n);
    // Validates |v_i| >= 1 and rejects non-finite entries.
    static WeightVector checked(std::vector<double> v);
};

struct ConcentrationReport {
    double x_star = 0.0;
    double value = 0.0;
    bool exact = true;
    double ci_halfwidth = 0.0;      // 0 for exact results
    std::uint64_t samples = 0;      // 0 for exact results
    std::uint64_t hits = 0;
};

// binom(n, floor(n/2)) / 2^n, computed in exact integer arithmetic and
// converted to double at the end.
double erdos_bound(std::uint64_t n);

// P(sum sigma_i v_i in (x - halfwidth, x + halfwidth)), exact enumeration.
double concentration_window(const CouplingGraph& g, const WeightVector& v,
                            double x, double halfwidth,
                            std::size_t cap = kDefaultEnumerationCap);

// The halfwidth-1 window of the definition.
double concentration_exact(const CouplingGraph& g, const WeightVector& v,
                           double x, std::size_t cap = kDefaultEnumerationCap);

// Exact sup over x: slides a window over the sorted atom support, so the
// result is attained and a witnessing x is reported (midpoint of the
// extreme atoms of the best window; ties resolved toward the window seen
// first in ascending order).
ConcentrationReport concentration_sup_x(const CouplingGraph& g,
                                        const WeightVector& v,
                                        std::size_t cap = kDefaultEnumerationCap);

// Pilot pass for Monte Carlo runs: draws pilot_samples weighted sums and
// returns the center of the unit-halfwidth window that captures the most of
// them, scanning quantile-spaced candidates.
double mc_window_center(const CouplingGraph& g, const WeightVector& v,
                        std::uint64_t pilot_samples, Rng& rng,
                        const GlauberOptions& opts = {});

// Monte Carlo estimate of the unit-window probability at a fixed center.
// ci_halfwidth is the 3-sigma normal approximation; with fewer than 30 hits
// it switches to an exact (Clopper-Pearson) interval at the same nominal
// level. Sampling is exact per-site for edge-free graphs and Glauber
// otherwise.
ConcentrationReport concentration_mc(const CouplingGraph& g,
                                     const WeightVector& v, double x,
                                     std::uint64_t samples, Rng& rng,
                                     GlauberOptions opts = {});

// Exact law of (sigma_1 tau_1, ..., sigma_n tau_n) with tau uniform on
// {-1,+1}^n independent of sigma. Always the uniform distribution; computed
// by honest convolution over all 4^n pairs, so the claim is testable.
// energy is left empty and log_partition is n*ln(2) for this derived law.
ExactDistribution symmetrized_distribution(const CouplingGraph& g,
                                           std::size_t cap = 13);

struct CertificateResult {
    double bound = 0.0;             // max over checked tau of sup_x Q(x, tau)
    double rademacher = 0.0;        // erdos_bound(n)
    bool passes = false;            // bound >= rademacher - 1e-12
    bool exhaustive = false;        // all 2^n tau checked
    std::uint64_t tau_checked = 0;
    std::vector<int> best_tau;
};

// Checks the universal lower bound sup_{x,tau} Q(x, tau) >= erdos_bound(n)
// over sign vectors tau. Exhaustive for n <= 12; beyond that it checks the
// all-ones tau plus 1000 random ones, making a failure inconclusive.
CertificateResult lower_bound_certificate(const CouplingGraph& g,
                                          std::size_t cap = kDefaultEnumerationCap,
                                          std::uint64_t seed = 0x15EEDCE27Eull);

struct ScalingRow {
    std::uint64_t n = 0;
    std::uint64_t samples = 0;
    double x_star = 0.0;
    double q_hat = 0.0;
    double ci = 0.0;
    double q_hat_sqrt_n = 0.0;
};

struct ScalingOptions {
    // Pilot draws used to place the window center at the empirical mode;
    // capped at 50000 and at the main sample count.
    std::uint64_t pilot = 10000;
    GlauberOptions glauber;
};

// For each size, builds the family instance, places the window center by a
// quantile scan over a pilot run, then estimates Q with fresh samples at
// v = all-ones.
std::vector<ScalingRow> scaling_experiment(const FamilyConfig& base,
                                           const std::vector<std::uint64_t>& sizes,
                                           std::uint64_t samples, Rng& rng,
                                           const ScalingOptions& opts = {});

}  // namespace isinglo
