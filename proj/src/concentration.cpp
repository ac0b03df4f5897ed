#include "isinglo/concentration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace isinglo {

namespace {

// Two-sided tail mass of the 3-sigma normal interval; the exact binomial
// interval below targets the same nominal level.
constexpr double kThreeSigmaAlpha = 0.0026997960632601866;

void require_weights(const CouplingGraph& g, const WeightVector& v) {
    if (v.v.size() != g.region_size())
        throw std::invalid_argument(
            "weight vector length " + std::to_string(v.v.size()) +
            " does not match region size " + std::to_string(g.region_size()));
}

void require_entry(double x) {
    if (!(std::abs(x) >= 1.0))
        throw std::invalid_argument("weight entry " + std::to_string(x) +
                                    " violates |v_i| >= 1");
}

// sum_i sigma_i v_i for every spin mask, in mask order. Bit p of the mask
// set means spin +1 at region position p.
std::vector<double> statistic_sums(std::size_t n, const std::vector<double>& v) {
    std::vector<double> s(std::size_t(1) << n);
    for (std::uint64_t mask = 0; mask < s.size(); ++mask) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += (mask >> i & 1u) ? v[i] : -v[i];
        s[mask] = acc;
    }
    return s;
}

double ci_halfwidth(std::uint64_t hits, std::uint64_t samples) {
    const double p = double(hits) / double(samples);
    if (hits >= 30) return 3.0 * std::sqrt(p * (1.0 - p) / double(samples));
    using dist = boost::math::binomial_distribution<double>;
    const double tail = kThreeSigmaAlpha / 2.0;
    const double lo =
        hits == 0 ? 0.0
                  : dist::find_lower_bound_on_p(double(samples), double(hits), tail);
    const double hi =
        hits == samples
            ? 1.0
            : dist::find_upper_bound_on_p(double(samples), double(hits), tail);
    return std::max(p - lo, hi - p);
}

// Draws the weighted spin sum under the Gibbs distribution. Edge-free
// regions factor into independent sites and are sampled exactly; anything
// else runs a thinned heat-bath chain.
class SumSampler {
  public:
    SumSampler(const CouplingGraph& g, const WeightVector& v, Rng& rng,
               GlauberOptions opts)
        : n_(g.region_size()), v_(v.v), rng_(rng) {
        if (!g.region_edges().empty()) {
            chain_.emplace(g, Rng(rng.next_u64()), opts);
            mode_ = Mode::chain;
            return;
        }
        p_plus_.resize(n_);
        bool fair = true, unit = true;
        for (std::size_t i = 0; i < n_; ++i) {
            const double h = g.field_at(g.region()[i]);
            p_plus_[i] = 1.0 / (1.0 + std::exp(-2.0 * h));
            fair = fair && h == 0.0;
            unit = unit && v_[i] == 1.0;
        }
        mode_ = fair && unit ? Mode::fair_ones : Mode::site;
    }

    double next() {
        switch (mode_) {
            case Mode::fair_ones: {
                std::uint64_t pop = 0;
                std::size_t left = n_;
                for (; left >= 64; left -= 64) pop += std::popcount(rng_.next_u64());
                if (left > 0)
                    pop += std::popcount(rng_.next_u64() &
                                         ((std::uint64_t(1) << left) - 1));
                return 2.0 * double(pop) - double(n_);
            }
            case Mode::site: {
                double acc = 0.0;
                for (std::size_t i = 0; i < n_; ++i)
                    acc += rng_.uniform01() < p_plus_[i] ? v_[i] : -v_[i];
                return acc;
            }
            case Mode::chain: {
                const SpinConfig& sc = chain_->next();
                double acc = 0.0;
                for (std::size_t i = 0; i < n_; ++i) acc += double(sc.s[i]) * v_[i];
                return acc;
            }
        }
        return 0.0;
    }

  private:
    enum class Mode { fair_ones, site, chain };
    std::size_t n_;
    std::vector<double> v_;
    Rng& rng_;
    Mode mode_ = Mode::site;
    std::vector<double> p_plus_;
    std::optional<GlauberChain> chain_;
};

// Window center with the most pilot hits; ties go to the smaller |c|, then
// the smaller c. Candidates are pilot quantiles, so the scan adapts to
// where the mass actually sits.
double pick_window_center(std::vector<double> sums) {
    std::sort(sums.begin(), sums.end());
    const std::size_t m = sums.size();
    std::vector<double> cand;
    cand.reserve(201);
    for (std::size_t i = 0; i <= 200; ++i) cand.push_back(sums[i * (m - 1) / 200]);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    double best_c = cand.front();
    std::size_t best_hits = 0;
    bool first = true;
    for (double c : cand) {
        const auto lo = std::upper_bound(sums.begin(), sums.end(), c - 1.0);
        const auto hi = std::lower_bound(sums.begin(), sums.end(), c + 1.0);
        const auto hits = std::size_t(hi - lo);
        const bool better =
            first || hits > best_hits ||
            (hits == best_hits && (std::abs(c) < std::abs(best_c) ||
                                   (std::abs(c) == std::abs(best_c) && c < best_c)));
        if (better) {
            best_c = c;
            best_hits = hits;
            first = false;
        }
    }
    return best_c;
}

}  // namespace

WeightVector WeightVector::ones(std::size_t n) {
    return WeightVector{std::vector<double>(n, 1.0)};
}

WeightVector WeightVector::checked(std::vector<double> v) {
    for (double x : v) {
        if (!std::isfinite(x))
            throw std::invalid_argument("weight entries must be finite");
        require_entry(x);
    }
    return WeightVector{std::move(v)};
}

double erdos_bound(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("erdos_bound needs n >= 1");
    namespace mp = boost::multiprecision;
    const std::uint64_t k = n / 2;
    mp::cpp_int binom = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        binom *= n - k + i;
        binom /= i;
    }
    const mp::cpp_rational q(binom, mp::cpp_int(1) << n);
    return q.convert_to<double>();
}

double concentration_window(const CouplingGraph& g, const WeightVector& v,
                            double x, double halfwidth, std::size_t cap) {
    require_weights(g, v);
    for (double e : v.v) require_entry(e);
    if (!(halfwidth > 0.0))
        throw std::invalid_argument("window halfwidth must be positive");
    const ExactDistribution dist = enumerate_gibbs(g, cap);
    const std::vector<double> sums = statistic_sums(dist.n, v.v);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < sums.size(); ++mask)
        if (x - halfwidth < sums[mask] && sums[mask] < x + halfwidth)
            total += dist.prob[mask];
    return total;
}

double concentration_exact(const CouplingGraph& g, const WeightVector& v,
                           double x, std::size_t cap) {
    return concentration_window(g, v, x, 1.0, cap);
}

ConcentrationReport concentration_sup_x(const CouplingGraph& g,
                                        const WeightVector& v, std::size_t cap) {
    require_weights(g, v);
    for (double e : v.v) require_entry(e);
    const ExactDistribution dist = enumerate_gibbs(g, cap);
    const std::vector<double> raw = statistic_sums(dist.n, v.v);

    std::vector<std::pair<double, double>> atoms(raw.size());
    for (std::uint64_t mask = 0; mask < raw.size(); ++mask)
        atoms[mask] = {raw[mask], dist.prob[mask]};
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> prefix(atoms.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        prefix[i + 1] = prefix[i] + atoms[i].second;

    // Maximal window of atoms with spread strictly below 2; its total mass
    // is attained at the midpoint center, and no real x does better.
    ConcentrationReport rep;
    rep.exact = true;
    std::size_t i = 0, best_i = 0, best_j = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        while (atoms[j].first - atoms[i].first >= 2.0) ++i;
        const double mass = prefix[j + 1] - prefix[i];
        if (mass > best) {
            best = mass;
            best_i = i;
            best_j = j;
        }
    }
    // Direct summation over the winning window avoids the cancellation the
    // prefix differences would otherwise leak into the reported value.
    for (std::size_t k = best_i; k <= best_j; ++k) rep.value += atoms[k].second;
    rep.x_star = (atoms[best_i].first + atoms[best_j].first) / 2.0;
    return rep;
}

double mc_window_center(const CouplingGraph& g, const WeightVector& v,
                        std::uint64_t pilot_samples, Rng& rng,
                        const GlauberOptions& opts) {
    require_weights(g, v);
    for (double e : v.v) require_entry(e);
    if (pilot_samples == 0)
        throw std::invalid_argument("pilot_samples must be positive");
    SumSampler sampler(g, v, rng, opts);
    std::vector<double> sums(pilot_samples);
    for (double& s : sums) s = sampler.next();
    return pick_window_center(std::move(sums));
}

ConcentrationReport concentration_mc(const CouplingGraph& g,
                                     const WeightVector& v, double x,
                                     std::uint64_t samples, Rng& rng,
                                     GlauberOptions opts) {
    require_weights(g, v);
    for (double e : v.v) require_entry(e);
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    SumSampler sampler(g, v, rng, opts);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double sum = sampler.next();
        if (x - 1.0 < sum && sum < x + 1.0) ++hits;
    }
    ConcentrationReport rep;
    rep.exact = false;
    rep.x_star = x;
    rep.samples = samples;
    rep.hits = hits;
    rep.value = double(hits) / double(samples);
    rep.ci_halfwidth = ci_halfwidth(hits, samples);
    return rep;
}

ExactDistribution symmetrized_distribution(const CouplingGraph& g,
                                           std::size_t cap) {
    const std::size_t n = g.region_size();
    if (n > cap)
        throw std::invalid_argument("region size " + std::to_string(n) +
                                    " exceeds symmetrization cap " +
                                    std::to_string(cap));
    const ExactDistribution base = enumerate_gibbs(g, std::max(cap, n));
    const std::uint64_t full = (std::uint64_t(1) << n) - 1;
    ExactDistribution out;
    out.n = n;
    out.prob.assign(std::size_t(1) << n, 0.0);
    out.log_partition = double(n) * std::log(2.0);
    const double tau_mass = std::ldexp(1.0, -int(n));
    for (std::uint64_t s = 0; s <= full; ++s) {
        const double ps = base.prob[s] * tau_mass;
        for (std::uint64_t t = 0; t <= full; ++t) out.prob[(s ^ t) ^ full] += ps;
    }
    return out;
}

CertificateResult lower_bound_certificate(const CouplingGraph& g,
                                          std::size_t cap, std::uint64_t seed) {
    const std::size_t n = g.region_size();
    const ExactDistribution dist = enumerate_gibbs(g, cap);
    const std::uint64_t full = (std::uint64_t(1) << n) - 1;

    // With tau in {-1,+1}^n the sum lives on the lattice {2k - n : k}, whose
    // spacing 2 means the open unit window holds exactly one atom; the sup
    // over x is therefore the largest bucket mass.
    std::vector<double> bucket(n + 1);
    const auto value_for = [&](std::uint64_t taumask) {
        std::fill(bucket.begin(), bucket.end(), 0.0);
        const std::uint64_t flip = taumask ^ full;
        for (std::uint64_t mask = 0; mask <= full; ++mask)
            bucket[std::size_t(std::popcount(mask ^ flip))] += dist.prob[mask];
        return *std::max_element(bucket.begin(), bucket.end());
    };
    const auto tau_of = [n](std::uint64_t mask) {
        std::vector<int> tau(n);
        for (std::size_t i = 0; i < n; ++i) tau[i] = (mask >> i & 1u) ? 1 : -1;
        return tau;
    };

    CertificateResult res;
    res.rademacher = erdos_bound(n);
    res.bound = value_for(full);
    res.best_tau = tau_of(full);
    res.tau_checked = 1;
    if (n <= 12) {
        res.exhaustive = true;
        for (std::uint64_t t = 0; t < full; ++t) {
            const double val = value_for(t);
            ++res.tau_checked;
            if (val > res.bound) {
                res.bound = val;
                res.best_tau = tau_of(t);
            }
        }
    } else {
        res.exhaustive = false;
        Rng rng(seed);
        for (int r = 0; r < 1000; ++r) {
            const std::uint64_t t = rng.next_u64() & full;
            const double val = value_for(t);
            ++res.tau_checked;
            if (val > res.bound) {
                res.bound = val;
                res.best_tau = tau_of(t);
            }
        }
    }
    res.passes = res.bound >= res.rademacher - 1e-12;
    return res;
}

std::vector<ScalingRow> scaling_experiment(const FamilyConfig& base,
                                           const std::vector<std::uint64_t>& sizes,
                                           std::uint64_t samples, Rng& rng,
                                           const ScalingOptions& opts) {
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    std::vector<ScalingRow> rows;
    rows.reserve(sizes.size());
    for (const std::uint64_t size : sizes) {
        FamilyConfig cfg = base;
        cfg.size = size;
        const CouplingGraph g = make_family(cfg);
        const WeightVector v = WeightVector::ones(g.region_size());

        std::uint64_t pilot = std::min({opts.pilot, samples, std::uint64_t(50000)});
        if (pilot == 0) pilot = std::min<std::uint64_t>(samples, 1000);
        Rng pilot_rng(rng.next_u64());
        Rng main_rng(rng.next_u64());

        const double center = mc_window_center(g, v, pilot, pilot_rng, opts.glauber);

        SumSampler main_sampler(g, v, main_rng, opts.glauber);
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < samples; ++s) {
            const double sum = main_sampler.next();
            if (center - 1.0 < sum && sum < center + 1.0) ++hits;
        }
        const double q = double(hits) / double(samples);
        rows.push_back({g.region_size(), samples, center, q,
                        ci_halfwidth(hits, samples),
                        q * std::sqrt(double(g.region_size()))});
    }
    return rows;
}

}  // namespace isinglo
