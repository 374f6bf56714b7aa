#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>

#include "nlx/choquet.hpp"
#include "nlx/closedform.hpp"

using namespace nlx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DriverSpec kappa_const(double mu, double nu, double T = 1.0) {
    return DriverSpec::kappa_ignorance(TimeFunction::constant(mu, T),
                                       TimeFunction::constant(nu, T));
}

}  // namespace

TEST_CASE("capacity normalization") {
    const Capacity cap(kappa_const(0.5, 0.0), 1.0, 200);
    CHECK(std::abs(cap({})) <= 1e-12);
    CHECK(std::abs(cap({{-kInf, kInf}}) - 1.0) <= 1e-12);
}

TEST_CASE("capacity rejects overlapping unions and bad parameters") {
    const Capacity cap(DriverSpec::zero(), 1.0, 50);
    CHECK_THROWS_AS(cap({{0.0, 2.0}, {1.0, 3.0}}), std::domain_error);
    CHECK_THROWS_AS(Capacity(DriverSpec::zero(), -1.0, 50), std::invalid_argument);
    CHECK_THROWS_AS(Capacity(DriverSpec::zero(), 1.0, 0), std::invalid_argument);
}

TEST_CASE("capacity of rays against the closed forms") {
    const Capacity zero_cap(DriverSpec::zero(), 1.0, 2000);
    CHECK(std::abs(zero_cap({{1.0, kInf}}) - 0.15865525393145707) <= 2e-3);

    // kappa ray: the raw n=2000 value sits ~2.2e-3 off; average the pair
    const DriverSpec d = kappa_const(0.5, 0.0);
    const double v2000 = Capacity(d, 1.0, 2000)({{1.0, kInf}});
    const double v4000 = Capacity(d, 1.0, 4000)({{1.0, kInf}});
    CHECK(std::abs(0.5 * (v2000 + v4000) - 0.3085375387259869) <= 2e-3);
}

TEST_CASE("capacity is monotone in the set") {
    const Capacity cap(kappa_const(0.5, 0.0), 1.0, 300);

    // nested rays
    double prev = 0.0;
    for (double a : {2.0, 1.5, 1.0, 0.5, 0.0, -1.0}) {
        const double v = cap({{a, kInf}});
        CHECK(v >= prev - 1e-12);
        prev = v;
    }

    // random unions A contained in B
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 10; ++k) {
        double a1 = u(rng), b1 = u(rng);
        if (a1 > b1) std::swap(a1, b1);
        double a2 = u(rng) + 4.0, b2 = u(rng) + 4.0;
        if (a2 > b2) std::swap(a2, b2);
        if (b1 >= a2) continue;
        const std::vector<Interval> big{{a1, b1}, {a2, b2}};
        const double w1 = 0.25 * (b1 - a1), w2 = 0.25 * (b2 - a2);
        const std::vector<Interval> small{{a1 + w1, b1 - w1}, {a2 + w2, b2 - w2}};
        CHECK(cap(small) <= cap(big) + 1e-12);
    }
}

TEST_CASE("choquet of an indicator is a single layer") {
    const Capacity cap(kappa_const(0.5, 0.0), 1.0, 400);
    const auto claim = TerminalClaim::indicator(1.0, 2.0);
    const auto res = choquet_expectation(cap, claim, 100);
    CHECK(std::abs(res.value - cap({{1.0, 2.0}})) <= 1e-12);
    CHECK(res.quadrature_error_estimate <= 1e-12);
    REQUIRE(res.per_threshold.size() == 100);
    CHECK(res.per_threshold.front().s == doctest::Approx(0.005));
    CHECK(res.per_threshold.back().partial_integral == doctest::Approx(res.value));
}

TEST_CASE("choquet of a constant claim") {
    const Capacity cap(DriverSpec::zero(), 1.0, 50);
    const auto res = choquet_expectation(cap, TerminalClaim::constant(2.5), 10);
    CHECK(res.value == 2.5);
    CHECK(res.quadrature_error_estimate == 0.0);
    CHECK_THROWS_AS(choquet_expectation(cap, TerminalClaim::constant(1.0), 1),
                    std::invalid_argument);
}

TEST_CASE("linear-driver choquet matches the girsanov oracle") {
    const auto nu = TimeFunction::constant(0.3, 1.0);
    const Capacity cap(DriverSpec::linear(nu), 1.0, 1000);
    const auto f = TerminalClaim::logistic(2.0);
    const auto res = choquet_expectation(cap, f, 100);
    const double oracle = girsanov_linear_expectation(f, nu, 1.0);
    CHECK(std::abs(res.value - oracle) <= 2e-3 + res.quadrature_error_estimate);
}

TEST_CASE("choquet positive homogeneity") {
    const Capacity cap(kappa_const(0.5, 0.0), 1.0, 300);
    const auto f = TerminalClaim::logistic(2.0);
    const auto base = choquet_expectation(cap, f, 60);
    for (double lam : {0.5, 2.0}) {
        const auto scaled = choquet_expectation(cap, f.scaled(lam), 60);
        const double tol =
            scaled.quadrature_error_estimate + lam * base.quadrature_error_estimate + 1e-9;
        CHECK(std::abs(scaled.value - lam * base.value) <= tol);
    }
}

TEST_CASE("choquet monotonicity") {
    const Capacity cap(kappa_const(0.5, 0.0), 1.0, 300);
    const auto lo = choquet_expectation(cap, TerminalClaim::indicator(1.0, 2.0), 80);
    const auto hi = choquet_expectation(cap, TerminalClaim::threshold(1.0), 80);
    CHECK(lo.value <= hi.value + lo.quadrature_error_estimate + hi.quadrature_error_estimate + 1e-12);
}

TEST_CASE("choquet comonotonic additivity") {
    const Capacity cap(kappa_const(0.5, 0.0), 1.0, 500);
    const auto thr = TerminalClaim::threshold(1.0);
    const auto ind = TerminalClaim::indicator(1.0, 2.0);
    const auto id3 = TerminalClaim::identity_capped(3.0);
    const auto log2 = TerminalClaim::logistic(2.0);

    const std::vector<std::pair<TerminalClaim, TerminalClaim>> pairs{
        {thr, ind}, {thr, id3}, {thr, log2}, {id3, log2}};
    for (const auto& [f, h] : pairs) {
        REQUIRE(comonotonic_check(f, h, 101).comonotonic);
        const auto cf = choquet_expectation(cap, f, 200);
        const auto ch = choquet_expectation(cap, h, 200);
        const auto cs = choquet_expectation(cap, f + h, 200);
        const double tol = cf.quadrature_error_estimate + ch.quadrature_error_estimate +
                           cs.quadrature_error_estimate + 1e-12;
        CHECK(std::abs(cs.value - cf.value - ch.value) <= tol);
    }
}

TEST_CASE("additivity gaps per driver class") {
    const auto thr = TerminalClaim::threshold(1.0);
    const auto ind = TerminalClaim::indicator(1.0, 2.0);

    const auto zero = additivity_gaps(DriverSpec::zero(), thr, ind, 1.0, 400, 100);
    CHECK(std::abs(zero.g_gap) <= 1e-12);
    CHECK(std::abs(zero.choquet_gap) <= zero.choquet_gap_estimate);

    const auto lin = additivity_gaps(DriverSpec::linear(TimeFunction::constant(0.3, 1.0)), thr,
                                     ind, 1.0, 400, 100);
    CHECK(std::abs(lin.g_gap) <= 1e-12);

    const auto kap = additivity_gaps(kappa_const(0.5, 0.0), thr, ind, 1.0, 1000, 100);
    CHECK(kap.g_gap < 0.0);
    CHECK(std::abs(kap.g_gap) > 5.0 * kap.g_gap_estimate);
    CHECK(std::abs(kap.choquet_gap) <= kap.choquet_gap_estimate);
    CHECK(kap.e_g_joint == doctest::Approx(kap.e_g_f + kap.e_g_h + kap.g_gap).epsilon(1e-9));

    // non-comonotonic pairs are rejected up front
    CHECK_THROWS_AS(additivity_gaps(DriverSpec::zero(), ind,
                                    TerminalClaim::identity_capped(3.0), 1.0, 100, 10),
                    std::invalid_argument);
}

TEST_CASE("threaded capacity evaluation matches sequential bit for bit") {
    const auto f = TerminalClaim::logistic(1.0);
    const auto run = [&]() {
        const Capacity cap(kappa_const(0.5, 0.0), 1.0, 200);
        return choquet_expectation(cap, f, 40);
    };
    unsetenv("NLX_THREADS");
    const auto seq = run();
    setenv("NLX_THREADS", "3", 1);
    const auto par = run();
    unsetenv("NLX_THREADS");
    CHECK(seq.value == par.value);
    CHECK(seq.quadrature_error_estimate == par.quadrature_error_estimate);
}
