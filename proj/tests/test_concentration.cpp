#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "isinglo/concentration.hpp"
#include "isinglo/families.hpp"
#include "isinglo/gibbs.hpp"
#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"
#include "test_support.hpp"

using namespace isinglo;

namespace {

CouplingGraph independent(std::uint64_t n) {
    return make_family({.name = "independent", .size = n});
}

}  // namespace

TEST_CASE("central binomial values are exact") {
    const std::vector<double> expected{
        1.0 / 2,    1.0 / 2,    3.0 / 8,    3.0 / 8,
        10.0 / 32,  10.0 / 32,  35.0 / 128, 70.0 / 256,
        126.0 / 512, 252.0 / 1024, 462.0 / 2048, 924.0 / 4096};
    for (std::uint64_t n = 1; n <= 12; ++n)
        CHECK(erdos_bound(n) == expected[n - 1]);
    CHECK_THROWS_AS(erdos_bound(0), std::invalid_argument);
    // large n stays finite and follows the n^{-1/2} decay scale
    CHECK(erdos_bound(4096) * std::sqrt(4096.0) ==
          doctest::Approx(std::sqrt(2.0 / 3.14159265358979323846)).epsilon(1e-3));
}

TEST_CASE("unit window probabilities on independent spins") {
    CHECK(concentration_exact(independent(1), WeightVector::ones(1), 1.0) == 0.5);
    CHECK(concentration_exact(independent(3), WeightVector::ones(3), 1.0) == 0.375);
    // window strictly beyond the achievable range
    CHECK(concentration_exact(independent(3), WeightVector::ones(3), 4.5) == 0.0);
}

TEST_CASE("sup over x on independent spins equals the central binomial value") {
    for (std::uint64_t n = 1; n <= 10; ++n) {
        const ConcentrationReport rep =
            concentration_sup_x(independent(n), WeightVector::ones(n));
        CHECK(rep.value == erdos_bound(n));
        CHECK(rep.exact);
        CHECK(rep.ci_halfwidth == 0.0);
    }
}

TEST_CASE("well separated atoms cap the sup at a single mass") {
    const ConcentrationReport rep = concentration_sup_x(
        independent(2), WeightVector::checked({1.0, 1000.0}));
    CHECK(rep.value == 0.25);
}

TEST_CASE("strong coupling concentrates the sup on the agreeing atoms") {
    CouplingGraph::Input in;
    in.vertices = {"a", "b"};
    in.region = {"a", "b"};
    in.edges = {{"a", "b", 10.0}};
    const CouplingGraph g = CouplingGraph::build(in);
    const ExactDistribution d = enumerate_gibbs(g);
    const ConcentrationReport rep =
        concentration_sup_x(g, WeightVector::ones(2));
    CHECK(rep.value == doctest::Approx(d.prob[0b11]).epsilon(1e-15));
    CHECK(std::abs(rep.x_star) == 2.0);
}

TEST_CASE("no grid point beats the two-pointer sup") {
    for (const auto& g : testsup::corpus(83, 12, 1, 4)) {
        Rng rng(g.vertex_count() + 1000);
        const WeightVector v{testsup::random_dyadic_weights(rng, g.region_size())};
        const ConcentrationReport sup = concentration_sup_x(g, v);

        const ExactDistribution d = enumerate_gibbs(g);
        std::vector<double> sums(d.prob.size());
        for (std::uint64_t mask = 0; mask < sums.size(); ++mask) {
            double acc = 0.0;
            for (std::size_t i = 0; i < v.v.size(); ++i)
                acc += (mask >> i & 1u) ? v.v[i] : -v.v[i];
            sums[mask] = acc;
        }
        double lo = 0.0, hi = 0.0;
        for (const double w : v.v) {
            lo -= std::abs(w);
            hi += std::abs(w);
        }
        double grid_best = 0.0;
        const std::size_t points = 100000;
        for (std::size_t i = 0; i < points; ++i) {
            const double x =
                lo - 1.1 + (hi - lo + 2.2) * double(i) / double(points - 1);
            double q = 0.0;
            for (std::uint64_t mask = 0; mask < sums.size(); ++mask)
                if (x - 1.0 < sums[mask] && sums[mask] < x + 1.0)
                    q += d.prob[mask];
            grid_best = std::max(grid_best, q);
        }
        CHECK(grid_best <= sup.value + 1e-13);
        CHECK(concentration_exact(g, v, sup.x_star) >= grid_best - 1e-13);
    }
}

TEST_CASE("weight preconditions are enforced") {
    CHECK_THROWS_AS(WeightVector::checked({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector::checked({1.0, -0.25}), std::invalid_argument);
    const CouplingGraph g = independent(2);
    CHECK_THROWS_AS(concentration_exact(g, WeightVector{{0.5, 1.0}}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(concentration_exact(g, WeightVector::ones(3), 0.0),
                    std::invalid_argument);
}

TEST_CASE("window probability grows with the window") {
    Rng rng(87);
    for (const auto& g : testsup::corpus(89, 10, 1, 4)) {
        const WeightVector v{testsup::random_dyadic_weights(rng, g.region_size())};
        for (const double x : {-1.5, 0.0, 0.75, 2.0}) {
            double prev = 0.0;
            for (const double hw : {0.5, 1.0, 1.9, 3.0, 6.0}) {
                const double q = concentration_window(g, v, x, hw);
                CHECK(q >= prev);
                prev = q;
            }
        }
    }
}

TEST_CASE("window probability is symmetric without field or boundary") {
    for (const auto& g : testsup::corpus(91, 12, 1, 4)) {
        if (g.has_field() || g.vertex_count() != g.region_size()) continue;
        const WeightVector v = WeightVector::ones(g.region_size());
        for (const double x : {0.25, 0.5, 1.0, 1.75, 3.0})
            CHECK(concentration_exact(g, v, x) ==
                  doctest::Approx(concentration_exact(g, v, -x)).epsilon(1e-12));
    }
}

TEST_CASE("monte carlo agrees with exact evaluation") {
    Rng rng(93);
    std::size_t inside = 0;
    for (const auto& g : testsup::corpus(95, 20, 1, 4)) {
        const WeightVector v = WeightVector::ones(g.region_size());
        const double x = double(rng.below(5)) - 2.0;
        const double exact = concentration_exact(g, v, x);
        const ConcentrationReport mc = concentration_mc(g, v, x, 20000, rng);
        CHECK(std::abs(mc.value - exact) <=
              std::max(mc.ci_halfwidth, 1e-9) + 0.02);
        if (std::abs(mc.value - exact) <= mc.ci_halfwidth) ++inside;
        CHECK(mc.samples == 20000);
        CHECK_FALSE(mc.exact);
    }
    // 3-sigma intervals: nearly all cases land inside even with the mild
    // autocorrelation the thinned chain leaves behind
    CHECK(inside >= 15);
}

TEST_CASE("monte carlo far outside the range is exactly zero") {
    Rng rng(97);
    const ConcentrationReport mc =
        concentration_mc(independent(3), WeightVector::ones(3), 50.0, 5000, rng);
    CHECK(mc.value == 0.0);
    CHECK(mc.hits == 0);
    CHECK(mc.ci_halfwidth > 0.0);  // exact interval still has width at zero hits
}

TEST_CASE("symmetrized law is uniform") {
    SUBCASE("lone spin") {
        const ExactDistribution d = symmetrized_distribution(independent(1));
        CHECK(d.prob[0] == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(d.prob[1] == doctest::Approx(0.5).epsilon(1e-13));
    }
    SUBCASE("any two-vertex instance") {
        CouplingGraph::Input in;
        in.vertices = {"a", "b"};
        in.region = {"a", "b"};
        in.edges = {{"a", "b", 1.7}};
        const ExactDistribution d =
            symmetrized_distribution(CouplingGraph::build(in));
        for (const double p : d.prob)
            CHECK(std::abs(p - 0.25) <= 1e-12);
    }
    SUBCASE("strongly coupled triangle") {
        CouplingGraph::Input in;
        in.vertices = {"a", "b", "c"};
        in.region = {"a", "b", "c"};
        in.edges = {{"a", "b", 5.0}, {"b", "c", 5.0}, {"a", "c", 5.0}};
        const ExactDistribution d =
            symmetrized_distribution(CouplingGraph::build(in));
        for (const double p : d.prob)
            CHECK(std::abs(p - 0.125) <= 1e-12);
    }
    SUBCASE("corpus instances") {
        for (const auto& g : testsup::corpus(99, 16, 1, 4)) {
            const ExactDistribution d = symmetrized_distribution(g);
            const double u = std::ldexp(1.0, -int(g.region_size()));
            for (const double p : d.prob) CHECK(std::abs(p - u) <= 1e-12);
        }
    }
    SUBCASE("cap refusal") {
        CHECK_THROWS_WITH_AS(symmetrized_distribution(independent(14)),
                             doctest::Contains("cap"), std::invalid_argument);
    }
}

TEST_CASE("lower bound certificate") {
    SUBCASE("independent spins pass with equality") {
        for (std::uint64_t n = 1; n <= 8; ++n) {
            const CertificateResult c = lower_bound_certificate(independent(n));
            CHECK(c.passes);
            CHECK(c.exhaustive);
            CHECK(c.bound == erdos_bound(n));
            CHECK(c.tau_checked == (std::uint64_t(1) << n));
            // ties resolve to the all-ones vector, checked first
            for (const int t : c.best_tau) CHECK(t == 1);
        }
    }
    SUBCASE("strongly coupled triangle passes") {
        CouplingGraph::Input in;
        in.vertices = {"a", "b", "c"};
        in.region = {"a", "b", "c"};
        in.edges = {{"a", "b", 5.0}, {"b", "c", 5.0}, {"a", "c", 5.0}};
        const CertificateResult c =
            lower_bound_certificate(CouplingGraph::build(in));
        CHECK(c.passes);
        CHECK(c.bound >= c.rademacher);
    }
    SUBCASE("single spin never drops below one half") {
        for (const auto& g : testsup::corpus(101, 6, 1, 1)) {
            const CertificateResult c = lower_bound_certificate(g);
            CHECK(c.passes);
            CHECK(c.bound >= 0.5 - 1e-12);
        }
    }
    SUBCASE("whole corpus passes") {
        for (const auto& g : testsup::corpus(103, 30, 1, 4))
            CHECK(lower_bound_certificate(g).passes);
    }
}

TEST_CASE("scaling experiment on the independent family") {
    Rng rng(105);
    const FamilyConfig base{.name = "independent"};
    const auto rows = scaling_experiment(base, {16, 64}, 20000, rng);
    REQUIRE(rows.size() == 2);
    const double target = std::sqrt(2.0 / 3.14159265358979323846);
    for (const auto& row : rows) {
        CHECK(row.samples == 20000);
        CHECK(std::abs(row.q_hat_sqrt_n - target) < 0.15);
        CHECK(row.q_hat * std::sqrt(double(row.n)) ==
              doctest::Approx(row.q_hat_sqrt_n));
        CHECK(row.ci > 0.0);
        // even spin count: the mode window sits at an even integer center
        CHECK(std::abs(row.x_star - std::round(row.x_star / 2.0) * 2.0) < 1e-9);
    }
}

TEST_CASE("confidence width shrinks like the square root of the samples") {
    Rng a(107), b(107);
    const FamilyConfig base{.name = "independent"};
    const auto r1 = scaling_experiment(base, {64}, 20000, a);
    const auto r2 = scaling_experiment(base, {64}, 40000, b);
    const double ratio = r2[0].ci / r1[0].ci;
    CHECK(ratio > 0.60);
    CHECK(ratio < 0.82);
}
