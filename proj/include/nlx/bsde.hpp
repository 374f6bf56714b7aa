#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nlx/claim.hpp"
#include "nlx/driver.hpp"
#include "nlx/lattice.hpp"

namespace nlx {

/// Sign census of the z table, node-weighted by binomial probability times
/// dt. Values within 1e-12 of zero count as zero for the fractions, matching
/// the deadband used to assert one-sided z results.
struct ZSignReport {
    double min_z = 0.0;
    double max_z = 0.0;
    double fraction_negative = 0.0;
    double fraction_positive = 0.0;
};

/// Backward-induction solution of the one-dimensional BSDE on a binomial
/// lattice. y[i][j] is the conditional g-expectation at node (i, j); z[i][j]
/// the martingale-representation integrand, defined for i < n_steps.
class SolutionSurface {
public:
    SolutionSurface(LatticeGrid grid, std::vector<std::vector<double>> y,
                    std::vector<std::vector<double>> z)
        : grid_(grid), y_(std::move(y)), z_(std::move(z)) {}

    const LatticeGrid& grid() const { return grid_; }
    double y(int i, int j) const { return y_.at(i).at(j); }
    double z(int i, int j) const { return z_.at(i).at(j); }
    const std::vector<double>& y_slice(int i) const { return y_.at(i); }

    /// y at the root: the g-expectation of the terminal claim.
    double value() const { return y_[0][0]; }

    /// Pairs (node state, y value) along time slice i.
    std::vector<std::pair<double, double>> conditional_slice(int i) const;

    ZSignReport z_sign_report() const;

private:
    LatticeGrid grid_;
    std::vector<std::vector<double>> y_;  // slices 0..n
    std::vector<std::vector<double>> z_;  // slices 0..n-1
};

/// Solves the backward recursion
///   z[i][j] = (y[i+1][j+1] - y[i+1][j]) / (2 sqrt(dt))
///   y[i][j] = ybar + g(y[i][j], z[i][j], t_i) dt,   ybar = mean of children,
/// the implicit step resolved by fixed-point iteration from ybar (tolerance
/// 1e-12, at most 100 iterations). For drivers with no y-dependence the
/// iteration closes after one application, so the step is evaluated directly.
/// Requires lipschitz_bound * dt < 1/2; throws ConfigError otherwise with a
/// hint to raise n_steps.
SolutionSurface solve_bsde(const LatticeGrid& grid, const TerminalClaim& f,
                           const DriverSpec& spec);

/// Same recursion from caller-supplied terminal data (used by the tower
/// consistency check and by conditional re-solves).
SolutionSurface solve_bsde_terminal(const LatticeGrid& grid, std::vector<double> terminal,
                                    const DriverSpec& spec);

/// E_g of the claim: the root value of the solved surface.
double g_expectation(const TerminalClaim& f, const DriverSpec& spec, double T, int n_steps);

/// Root value computed on the (n, 2n) lattice pair: `value` is the pair
/// average, `estimate` the absolute difference. The average damps the
/// oscillatory discretization error of discontinuous claims, for which the
/// raw n-step value can sit a full grid-offset away from the limit.
struct RichardsonValue {
    double value = 0.0;
    double estimate = 0.0;
    double coarse = 0.0;  // n steps
    double fine = 0.0;    // 2n steps
};

RichardsonValue g_expectation_richardson(const TerminalClaim& f, const DriverSpec& spec,
                                         double T, int n_steps);

/// For each horizon s, (E_g[b W_s] - E[b W_s]) / s computed on an n-step
/// lattice with the linear claim b*x capped beyond the reachable states.
/// Converges to g(0, b, 0) as s -> 0.
std::vector<std::pair<double, double>> representation_slope(const DriverSpec& spec, double b,
                                                            std::span<const double> horizons,
                                                            int n_steps = 512);

}  // namespace nlx
