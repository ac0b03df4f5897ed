#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "isinglo/gibbs.hpp"
#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"
#include "test_support.hpp"

using namespace isinglo;

namespace {

CouplingGraph two_site(double j) {
    CouplingGraph::Input in;
    in.vertices = {"a", "b"};
    in.region = {"a", "b"};
    in.edges = {{"a", "b", j}};
    return CouplingGraph::build(in);
}

}  // namespace

TEST_CASE("hamiltonian on a single edge") {
    const CouplingGraph g = two_site(1.0);
    CHECK(hamiltonian(g, {{+1, +1}}) == -1.0);
    CHECK(hamiltonian(g, {{+1, -1}}) == 0.0);
    CHECK(hamiltonian(g, {{-1, -1}}) == -1.0);
}

TEST_CASE("hamiltonian with boundary and field") {
    CouplingGraph::Input in;
    in.vertices = {"p0", "p1", "p2"};
    in.region = {"p1"};
    in.edges = {{"p0", "p1", 1.0}, {"p1", "p2", -2.0}};
    in.boundary = {{"p0", 1}, {"p2", -1}};
    in.field = {{"p1", 0.5}};
    const CouplingGraph g = CouplingGraph::build(in);
    // sigma_1 = +1 agrees with p0 only: -(1*1) - (-2*0) - 0.5*1
    CHECK(hamiltonian(g, {{+1}}) == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("single free spin is a fair coin") {
    CouplingGraph::Input in;
    in.vertices = {"a"};
    in.region = {"a"};
    const ExactDistribution d = enumerate_gibbs(CouplingGraph::build(in));
    CHECK(d.prob[0] == 0.5);
    CHECK(d.prob[1] == 0.5);
}

TEST_CASE("disagreement probability on one edge") {
    for (const double j : {0.3, 1.0, 2.5}) {
        const ExactDistribution d = enumerate_gibbs(two_site(j));
        const double disagree = d.prob[0b01] + d.prob[0b10];
        CHECK(disagree ==
              doctest::Approx(1.0 / (std::exp(j) + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("enumeration cap refusal") {
    CouplingGraph::Input in;
    for (int i = 0; i < 21; ++i) {
        in.vertices.push_back("v" + std::to_string(i));
        in.region.push_back(in.vertices.back());
    }
    CHECK_THROWS_WITH_AS(enumerate_gibbs(CouplingGraph::build(in)),
                         doctest::Contains("cap"), std::invalid_argument);
}

TEST_CASE("enumeration matches the naive oracle on the corpus") {
    for (const auto& g : testsup::corpus(31, 24, 1, 4)) {
        const ExactDistribution d = enumerate_gibbs(g);
        const auto oracle = testsup::naive_gibbs_probs(g);
        CHECK(total_variation(d.prob, oracle) <= 1e-12);
        double sum = 0.0;
        for (const double p : d.prob) {
            CHECK(p > 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("probability ratios invert energy differences") {
    for (const auto& g : testsup::corpus(37, 8, 1, 3)) {
        const ExactDistribution d = enumerate_gibbs(g);
        for (std::uint64_t a = 0; a < d.prob.size(); ++a)
            for (std::uint64_t b = 0; b < d.prob.size(); ++b)
                CHECK(d.prob[a] / d.prob[b] ==
                      doctest::Approx(std::exp(d.energy[b] - d.energy[a]))
                          .epsilon(1e-9));
    }
}

TEST_CASE("log partition matches a from-scratch evaluation") {
    for (const auto& g : testsup::corpus(41, 8, 1, 4)) {
        const ExactDistribution d = enumerate_gibbs(g);
        long double z = 0.0L;
        for (std::uint64_t mask = 0; mask < d.prob.size(); ++mask)
            z += std::exp((long double)-hamiltonian(g, d.config(mask)));
        CHECK(double(std::log(z)) ==
              doctest::Approx(d.log_partition).epsilon(1e-10));
    }
}

TEST_CASE("global spin flip symmetry without field or boundary") {
    for (const auto& g : testsup::corpus(43, 10, 1, 4)) {
        if (g.has_field() || g.vertex_count() != g.region_size()) continue;
        const ExactDistribution d = enumerate_gibbs(g);
        const std::uint64_t full = d.prob.size() - 1;
        for (std::uint64_t mask = 0; mask < d.prob.size(); ++mask)
            CHECK(d.prob[mask] ==
                  doctest::Approx(d.prob[mask ^ full]).epsilon(1e-12));
    }
}

TEST_CASE("heat-bath kernel is in detailed balance with the Gibbs law") {
    for (const auto& g : testsup::corpus(47, 12, 1, 4)) {
        const ExactDistribution d = enumerate_gibbs(g);
        GlauberChain chain(g, Rng(1));
        const std::size_t n = g.region_size();
        for (std::uint64_t mask = 0; mask < d.prob.size(); ++mask) {
            chain.set_state(d.config(mask));
            for (std::size_t pos = 0; pos < n; ++pos) {
                const double q_plus = chain.heat_bath_plus_probability(pos);
                const std::uint64_t up = mask | (std::uint64_t(1) << pos);
                const std::uint64_t down = up ^ (std::uint64_t(1) << pos);
                // flow up == flow down through the single-site kernel
                CHECK(d.prob[down] * q_plus ==
                      doctest::Approx(d.prob[up] * (1.0 - q_plus))
                          .epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("glauber matches symmetry on a lone spin") {
    CouplingGraph::Input in;
    in.vertices = {"a"};
    in.region = {"a"};
    const CouplingGraph g = CouplingGraph::build(in);
    Rng rng(5);
    const std::uint64_t draws = 100000;
    std::uint64_t plus = 0;
    GlauberOptions opts;
    opts.burn_in_updates = 10;
    opts.updates_per_sample = 1;
    GlauberChain chain(g, Rng(rng.next_u64()), opts);
    for (std::uint64_t i = 0; i < draws; ++i)
        if (chain.next().s[0] > 0) ++plus;
    const double se = std::sqrt(0.25 / double(draws));
    CHECK(std::abs(double(plus) / double(draws) - 0.5) <= 3.0 * se);
}

TEST_CASE("glauber reproduces the disagreement probability") {
    const CouplingGraph g = two_site(1.0);
    Rng rng(7);
    const std::uint64_t draws = 100000;
    std::uint64_t disagree = 0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const SpinConfig sc = glauber_sample(g, 50, rng);
        if (sc.s[0] != sc.s[1]) ++disagree;
    }
    const double target = 1.0 / (std::exp(1.0) + 1.0);
    const double se = std::sqrt(target * (1.0 - target) / double(draws));
    CHECK(std::abs(double(disagree) / double(draws) - target) <= 3.0 * se);
}

TEST_CASE("glauber empirical law approaches the enumerated one") {
    CouplingGraph::Input in;
    in.vertices = {"a", "b", "c"};
    in.region = {"a", "b", "c"};
    in.edges = {{"a", "b", 1.0}, {"b", "c", -1.0}, {"a", "c", 1.0}};
    const CouplingGraph g = CouplingGraph::build(in);
    const ExactDistribution d = enumerate_gibbs(g);

    GlauberChain chain(g, Rng(11));
    const std::uint64_t draws = 100000;
    std::vector<double> freq(d.prob.size(), 0.0);
    for (std::uint64_t i = 0; i < draws; ++i)
        freq[d.mask_of(chain.next())] += 1.0;
    for (double& f : freq) f /= double(draws);
    CHECK(total_variation(freq, d.prob) < 0.02);
}
