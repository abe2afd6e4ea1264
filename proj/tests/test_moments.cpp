#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "fincmp/moments.hpp"
#include "fincmp/montecarlo.hpp"
#include "helpers.hpp"

using Catch::Approx;
using namespace fincmp;

static_assert(double_factorial(0) == 1);
static_assert(double_factorial(1) == 1);
static_assert(double_factorial(5) == 15);
static_assert(double_factorial(7) == 105);

TEST_CASE("double_factorial small values", "[moments]") {
    CHECK(double_factorial(2) == 2);
    CHECK(double_factorial(3) == 3);
    CHECK(double_factorial(6) == 48);
    CHECK(double_factorial(8) == 384);
    CHECK(double_factorial(9) == 945);
}

TEST_CASE("gaussian_moments unit variance", "[moments]") {
    const CentralMoments m = gaussian_moments(1.0);
    CHECK(m.m2 == 1.0);
    CHECK(m.m3 == 0.0);
    CHECK(m.m4 == 3.0);
    CHECK(m.m5 == 0.0);
    CHECK(m.m6 == 15.0);
    CHECK(m.m7 == 0.0);
    CHECK(m.m8 == 105.0);
}

TEST_CASE("gaussian_moments sigma2=4 against quadrature oracle", "[moments]") {
    // Independent values first: integrate (z - mu)^k against the N(mu, 4)
    // density directly.
    const double oracle_m4 = testutil::gaussian_moment_quadrature(4, 0.5, 4.0);
    const double oracle_m6 = testutil::gaussian_moment_quadrature(6, 0.5, 4.0);
    REQUIRE(oracle_m4 == Approx(48.0).epsilon(1e-8));
    REQUIRE(oracle_m6 == Approx(960.0).epsilon(1e-8));

    const CentralMoments m = gaussian_moments(4.0);
    CHECK(m.m4 == 48.0);
    CHECK(m.m6 == 960.0);
    CHECK(m.m4 == Approx(oracle_m4).epsilon(1e-8));
    CHECK(m.m6 == Approx(oracle_m6).epsilon(1e-8));
}

TEST_CASE("gaussian_moments rejects non-positive variance", "[moments]") {
    CHECK_THROWS_AS(gaussian_moments(0.0), std::domain_error);
    CHECK_THROWS_AS(gaussian_moments(-1.0), std::domain_error);
}

TEST_CASE("gaussian_moments double-factorial identity holds exactly", "[moments]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 50.0);
    for (int k = 0; k < 200; ++k) {
        const double sigma2 = u(rng);
        const CentralMoments m = gaussian_moments(sigma2);
        const double s4 = sigma2 * sigma2;
        const double s6 = s4 * sigma2;
        const double s8 = s6 * sigma2;
        CHECK(m.m2 == sigma2);
        CHECK(m.m4 == 3.0 * s4);
        CHECK(m.m6 == 15.0 * s6);
        CHECK(m.m8 == 105.0 * s8);
    }
}

TEST_CASE("empirical_moments degenerate and tiny samples", "[moments]") {
    SECTION("constant sample has exactly zero moments") {
        const std::vector<double> xs(17, 3.7);
        const CentralMoments m = empirical_moments(xs);
        CHECK(m.m2 == 0.0);
        CHECK(m.m3 == 0.0);
        CHECK(m.m4 == 0.0);
        CHECK(m.m8 == 0.0);
    }
    SECTION("two-point sample uses the unbiased divisor for m2") {
        const std::vector<double> xs{-1.0, 1.0};
        const CentralMoments m = empirical_moments(xs);
        CHECK(m.m2 == 2.0);  // (1 + 1) / (2 - 1)
        CHECK(m.m3 == 0.0);
        CHECK(m.m4 == 1.0);  // divisor n for k >= 3
    }
    SECTION("fewer than two samples is an error") {
        const std::vector<double> one{1.0};
        CHECK_THROWS_AS(empirical_moments(one), std::invalid_argument);
        CHECK_THROWS_AS(empirical_moments(std::vector<double>{}), std::invalid_argument);
    }
}

TEST_CASE("empirical_moments matches gaussian_moments on large samples", "[moments]") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> norm(0.0, 1.0);
    std::vector<double> xs(1000000);
    for (double& x : xs) x = norm(rng);

    const CentralMoments emp = empirical_moments(xs);
    const CentralMoments exact = gaussian_moments(1.0);

    for (int k = 2; k <= 8; ++k) {
        const auto batched = testutil::batch_statistic(
            xs, 100, [k](std::span<const double> b) { return empirical_moments(b).central(k); });
        INFO("moment order " << k);
        CHECK(std::abs(emp.central(k) - exact.central(k)) <= 5.0 * batched.se);
    }
}

TEST_CASE("var_of_centered_power closed forms", "[moments]") {
    const CentralMoments m = gaussian_moments(1.0);

    SECTION("k=2 equals m4 - m2^2, confirmed by a Monte Carlo oracle") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> norm(0.0, 1.0);
        std::vector<double> sq(400000);
        for (double& x : sq) {
            const double z = norm(rng);
            x = z * z;
        }
        const double mc = sample_variance(sq);
        const auto batched = testutil::batch_statistic(
            sq, 100, [](std::span<const double> b) { return sample_variance(b); });
        REQUIRE(std::abs(mc - 2.0) <= 5.0 * batched.se);
        CHECK(var_of_centered_power(m, 2) == 2.0);
    }
    SECTION("k=4 equals m8 - m4^2") { CHECK(var_of_centered_power(m, 4) == 96.0); }
    SECTION("k=3 reduces to m6 for a symmetric density") {
        CHECK(var_of_centered_power(m, 3) == 15.0);
    }
    SECTION("k outside 2..4 is rejected") {
        CHECK_THROWS_AS(var_of_centered_power(m, 1), std::domain_error);
        CHECK_THROWS_AS(var_of_centered_power(m, 5), std::domain_error);
    }
}

TEST_CASE("var_of_centered_power is non-negative on valid moment sets", "[moments]") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const CentralMoments m = testutil::random_symmetric_moments(rng);
        CHECK(var_of_centered_power(m, 2) >= 0.0);
        CHECK(var_of_centered_power(m, 3) >= 0.0);
        CHECK(var_of_centered_power(m, 4) >= 0.0);
    }
}
