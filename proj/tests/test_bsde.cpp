#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nlx/bsde.hpp"
#include "nlx/closedform.hpp"
#include "nlx/errors.hpp"

using namespace nlx;

namespace {

DriverSpec kappa_const(double mu, double nu, double T = 1.0) {
    return DriverSpec::kappa_ignorance(TimeFunction::constant(mu, T),
                                       TimeFunction::constant(nu, T));
}

std::vector<DriverSpec> driver_matrix(double T = 1.0) {
    return {DriverSpec::zero(), DriverSpec::linear(TimeFunction::constant(0.3, T)),
            kappa_const(0.5, 0.0, T)};
}

}  // namespace

TEST_CASE("constant claims are preserved at every node") {
    const LatticeGrid grid(1.0, 64);
    for (const auto& d : driver_matrix()) {
        const auto surf = solve_bsde(grid, TerminalClaim::constant(2.5), d);
        for (int i = 0; i <= grid.n_steps(); ++i) {
            for (int j = 0; j <= i; ++j) CHECK(surf.y(i, j) == 2.5);
        }
        for (int i = 0; i < grid.n_steps(); ++i) {
            for (int j = 0; j <= i; ++j) CHECK(surf.z(i, j) == 0.0);
        }
    }
}

TEST_CASE("zero driver reproduces the plain binomial expectation") {
    const LatticeGrid grid(1.0, 100);
    const auto claim = TerminalClaim::threshold(1.0);
    const auto surf = solve_bsde(grid, claim, DriverSpec::zero());
    const auto slice = grid.terminal_slice(claim);
    const auto w = grid.terminal_weights();
    double plain = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) plain += w[j] * slice[j];
    CHECK(surf.value() == doctest::Approx(plain).epsilon(1e-13));
}

TEST_CASE("kappa threshold value against the closed-form solution") {
    // The raw n=2000 value carries a ~2.2e-3 grid-offset error, slightly
    // outside the 2e-3 band; the (n, 2n) pair average is well inside it.
    const auto mu = TimeFunction::constant(0.5, 1.0);
    const double oracle = threshold_claim_solution(mu, 1.0, 0.0, 0.0).y;
    CHECK(oracle == doctest::Approx(0.308538).epsilon(1e-5));

    const auto r = g_expectation_richardson(TerminalClaim::threshold(1.0), kappa_const(0.5, 0.0),
                                            1.0, 2000);
    CHECK(std::abs(r.value - oracle) <= 2e-3);
    CHECK(std::abs(r.coarse - oracle) <= 3e-3);  // raw-value regression pin
    CHECK(r.estimate <= 5e-3);
}

TEST_CASE("g_expectation oracle cases") {
    // monotone capped-identity claim: z is exactly 1, the drift adds kappa*T
    const double v1 = g_expectation(TerminalClaim::identity_capped(100.0), kappa_const(0.5, 0.0),
                                    1.0, 2000);
    CHECK(std::abs(v1 - 0.5) <= 1e-12);

    const double v2 = g_expectation(TerminalClaim::threshold(1.0), DriverSpec::zero(), 1.0, 2000);
    CHECK(std::abs(v2 - 0.15865525393145707) <= 2e-3);

    const double v3 = g_expectation(TerminalClaim::threshold(1.0),
                                    DriverSpec::linear(TimeFunction::constant(0.3, 1.0)), 1.0,
                                    2000);
    CHECK(std::abs(v3 - 0.24196365222307303) <= 2e-3);
}

TEST_CASE("conditional slices") {
    const LatticeGrid grid(1.0, 32);
    const auto claim = TerminalClaim::indicator(1.0, 2.0);
    const auto surf = solve_bsde(grid, claim, kappa_const(0.5, 0.0));

    const auto terminal = surf.conditional_slice(32);
    const auto slice = grid.terminal_slice(claim);
    REQUIRE(terminal.size() == 33);
    for (int j = 0; j <= 32; ++j) {
        CHECK(terminal[j].first == grid.node_state(32, j));
        CHECK(terminal[j].second == slice[j]);
    }

    const auto root = surf.conditional_slice(0);
    REQUIRE(root.size() == 1);
    CHECK(root[0].first == 0.0);
    CHECK(root[0].second == surf.value());

    CHECK_THROWS_AS(surf.conditional_slice(33), std::out_of_range);

    const auto const_surf = solve_bsde(grid, TerminalClaim::constant(1.5), kappa_const(0.5, 0.0));
    for (const auto& [state, y] : const_surf.conditional_slice(17)) CHECK(y == 1.5);
}

TEST_CASE("solver preconditions") {
    // contraction: Lipschitz bound times dt must stay below 1/2
    const auto stiff = DriverSpec::custom([](double, double z, double) { return 10.0 * z; }, 10.0);
    CHECK_THROWS_AS(g_expectation(TerminalClaim::threshold(1.0), stiff, 1.0, 10), ConfigError);
    CHECK_NOTHROW(g_expectation(TerminalClaim::threshold(1.0), stiff, 1.0, 100));

    const auto offset =
        DriverSpec::custom([](double, double z, double) { return std::abs(z) + 0.1; }, 1.0);
    CHECK_THROWS_AS(g_expectation(TerminalClaim::threshold(1.0), offset, 1.0, 100),
                    std::invalid_argument);

    // coefficients must cover [0, T]
    const auto short_nu = DriverSpec::linear(TimeFunction::constant(0.3, 0.5));
    CHECK_THROWS_AS(g_expectation(TerminalClaim::threshold(1.0), short_nu, 1.0, 100),
                    std::domain_error);
}

TEST_CASE("one-step implicit relation holds at every node") {
    const LatticeGrid grid(1.0, 50);
    // y-dependent driver to exercise the fixed-point path
    const auto d = DriverSpec::custom(
        [](double y, double z, double) { return 0.3 * std::tanh(y) * z; }, 1.0);
    const auto surf = solve_bsde(grid, TerminalClaim::logistic(2.0), d);
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double ybar = 0.5 * (surf.y(i + 1, j + 1) + surf.y(i + 1, j));
            const double resid =
                surf.y(i, j) - ybar - d.eval(surf.y(i, j), surf.z(i, j), grid.time_at(i)) * grid.dt();
            CHECK(std::abs(resid) <= 1e-12);
        }
    }
}

TEST_CASE("martingale representation restates the scheme") {
    const LatticeGrid grid(1.0, 60);
    const auto d = kappa_const(0.5, 0.1);
    const auto surf = solve_bsde(grid, TerminalClaim::logistic(2.0), d);
    for (int i : {0, 13, 47}) {
        for (int j = 0; j <= i; ++j) {
            const double lhs =
                surf.y(i, j) - d.eval(surf.y(i, j), surf.z(i, j), grid.time_at(i)) * grid.dt();
            const double rhs = 0.5 * (surf.y(i + 1, j + 1) + surf.y(i + 1, j));
            CHECK(std::abs(lhs - rhs) <= 1e-14);
        }
    }
}

TEST_CASE("monotone comparison at every node") {
    const LatticeGrid grid(1.0, 200);
    const auto f = TerminalClaim::threshold(1.0);       // dominates the window claim
    const auto h = TerminalClaim::indicator(1.0, 2.0);  // pointwise
    for (const auto& d : driver_matrix()) {
        const auto sf = solve_bsde(grid, f, d);
        const auto sh = solve_bsde(grid, h, d);
        for (int i = 0; i <= 200; ++i) {
            for (int j = 0; j <= i; ++j) {
                CHECK(sf.y(i, j) >= sh.y(i, j) - 1e-12);
            }
        }
    }
}

TEST_CASE("tower consistency: re-solving on a prefix reproduces the root") {
    for (const auto& d : driver_matrix()) {
        for (int n : {512, 300}) {
            const LatticeGrid grid(1.0, n);
            const auto surf = solve_bsde(grid, TerminalClaim::indicator(1.0, 2.0), d);
            const int i = n / 2;
            std::vector<double> mid(i + 1);
            for (int j = 0; j <= i; ++j) mid[j] = surf.y(i, j);
            const LatticeGrid prefix(grid.time_at(i), i);
            const auto re = solve_bsde_terminal(prefix, std::move(mid), d);
            CHECK(std::abs(re.value() - surf.value()) <= 1e-12);
        }
    }
}

TEST_CASE("linear drivers are additive at every node") {
    const LatticeGrid grid(1.0, 800);
    const auto d = DriverSpec::linear(TimeFunction::constant(0.3, 1.0));
    const auto f = TerminalClaim::threshold(1.0);
    const auto h = TerminalClaim::indicator(1.0, 2.0);
    const auto sf = solve_bsde(grid, f, d);
    const auto sh = solve_bsde(grid, h, d);
    const auto sum = solve_bsde(grid, f + h, d);
    double worst = 0.0;
    for (int i = 0; i <= 800; ++i) {
        for (int j = 0; j <= i; ++j) {
            worst = std::max(worst, std::abs(sum.y(i, j) - sf.y(i, j) - sh.y(i, j)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("convex and concave drivers bound the sum") {
    const std::vector<TerminalClaim> claims{
        TerminalClaim::threshold(1.0), TerminalClaim::indicator(1.0, 2.0),
        TerminalClaim::identity_capped(3.0), TerminalClaim::logistic(2.0)};
    for (std::size_t a = 0; a < claims.size(); ++a) {
        for (std::size_t b = a; b < claims.size(); ++b) {
            const auto joint = claims[a] + claims[b];
            const double plus = g_expectation(joint, kappa_const(0.5, 0.0), 1.0, 800);
            const double pa = g_expectation(claims[a], kappa_const(0.5, 0.0), 1.0, 800);
            const double pb = g_expectation(claims[b], kappa_const(0.5, 0.0), 1.0, 800);
            CHECK(plus <= pa + pb + 1e-12);

            const double minus = g_expectation(joint, kappa_const(-0.5, 0.0), 1.0, 800);
            const double ma = g_expectation(claims[a], kappa_const(-0.5, 0.0), 1.0, 800);
            const double mb = g_expectation(claims[b], kappa_const(-0.5, 0.0), 1.0, 800);
            CHECK(minus >= ma + mb - 1e-12);
        }
    }
}

TEST_CASE("strict conditional non-additivity for the window pair") {
    const auto d = kappa_const(0.5, 0.0);
    const auto f = TerminalClaim::threshold(1.0);
    const auto h = TerminalClaim::indicator(1.0, 2.0);

    double gap_at[2];
    double max_node_violation = 0.0;
    for (int k = 0; k < 2; ++k) {
        const int n = k == 0 ? 1000 : 2000;
        const LatticeGrid grid(1.0, n);
        const auto sf = solve_bsde(grid, f, d);
        const auto sh = solve_bsde(grid, h, d);
        const auto sum = solve_bsde(grid, f + h, d);
        gap_at[k] = sum.value() - sf.value() - sh.value();
        if (k == 1) {
            for (int i = 0; i <= n; i += 40) {
                for (int j = 0; j <= i; ++j) {
                    max_node_violation = std::max(
                        max_node_violation, sf.y(i, j) + sh.y(i, j) - sum.y(i, j));
                }
            }
        }
    }
    const double estimate = std::abs(gap_at[1] - gap_at[0]);
    CHECK(gap_at[1] < 0.0);
    CHECK(std::abs(gap_at[1]) > 5.0 * estimate);
    CHECK(max_node_violation >= std::abs(gap_at[1]));
}

TEST_CASE("z sign census") {
    const auto d = kappa_const(0.5, 0.0);
    const LatticeGrid grid(1.0, 500);

    const auto inc = solve_bsde(grid, TerminalClaim::threshold(1.0), d).z_sign_report();
    CHECK(inc.min_z >= -1e-12);
    CHECK(inc.fraction_negative == 0.0);
    CHECK(inc.fraction_positive > 0.0);

    const auto window = solve_bsde(grid, TerminalClaim::indicator(1.0, 2.0), d).z_sign_report();
    CHECK(window.fraction_negative > 0.0);
    CHECK(window.fraction_positive > 0.0);
    CHECK(window.min_z < 0.0);
    CHECK(window.max_z > 0.0);

    const auto dec_claim = TerminalClaim::constant(1.0) + TerminalClaim::logistic(2.0).scaled(-1.0);
    const auto dec = solve_bsde(grid, dec_claim, d).z_sign_report();
    CHECK(dec.max_z <= 1e-12);
    CHECK(dec.fraction_positive == 0.0);
}

TEST_CASE("representation slope recovers the driver at the origin") {
    const std::vector<double> horizons{0.1, 0.05};
    const auto kappa_slopes = representation_slope(kappa_const(0.5, 0.0, 0.2), 2.0, horizons);
    for (const auto& [s, slope] : kappa_slopes) {
        CHECK(std::abs(slope - 1.0) <= 5e-3);
    }

    const auto zero_slopes = representation_slope(DriverSpec::zero(), 3.0, horizons);
    for (const auto& [s, slope] : zero_slopes) {
        CHECK(std::abs(slope) <= 1e-12);
    }

    const std::vector<double> s01{0.1};
    const auto lin = representation_slope(
        DriverSpec::linear(TimeFunction::constant(0.3, 0.2)), -1.0, s01);
    CHECK(std::abs(lin[0].second - (-0.3)) <= 5e-3);

    CHECK_THROWS_AS(representation_slope(DriverSpec::zero(), 1.0, std::vector<double>{-0.1}),
                    std::invalid_argument);
}
