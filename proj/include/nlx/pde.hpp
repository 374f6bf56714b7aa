#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlx/claim.hpp"
#include "nlx/driver.hpp"

namespace nlx {

/// Explicit finite-difference solution of u_t = 1/2 u_xx + g(u, u_x) with
/// initial data u(0, x) = f(x) and Dirichlet tails held at the claim's
/// constant tail values. The full time history is thinned to a bounded set
/// of snapshots (level 0 and the final level are always kept exactly).
struct PdeSurface {
    std::vector<double> x_grid;
    double dx = 0.0;
    double dt = 0.0;
    int n_time_steps = 0;
    double t_end = 0.0;

    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> snapshots;  // parallel to snapshot_times

    const std::vector<double>& initial() const { return snapshots.front(); }
    const std::vector<double>& final_level() const { return snapshots.back(); }

    /// Linear interpolation of the final level at x.
    double value_at(double x) const;
};

/// Forward-Euler scheme with central second and first differences,
/// dt = safety * dx^2/2 shrunk further by the driver's Lipschitz term. The
/// driver must be time-homogeneous (constant coefficients); the spatial
/// domain must pad the claim's breakpoint span by at least 6 sqrt(t_end) on
/// both sides so the flat-tail Dirichlet values stay valid. Throws
/// ConfigError when the padding rule fails.
PdeSurface solve_nonlinear_heat(const DriverSpec& spec, const TerminalClaim& f, double t_end,
                                double x_lo, double x_hi, int nx, double safety = 0.9);

/// Writes the stored snapshots as CSV rows (t, x, u).
void write_surface_csv(const PdeSurface& surface, const std::string& path);

struct FeynmanKacRow {
    double x;
    double u_pde;
    double e_g_lattice;
    double abs_diff;
};

struct FeynmanKacResult {
    std::vector<FeynmanKacRow> rows;
    PdeSurface surface;
};

/// For each x, the PDE value u(t_end, x) against the lattice g-expectation of
/// the shifted claim f(. + x). One PDE solve serves all x points.
std::vector<FeynmanKacRow> feynman_kac_compare(const DriverSpec& spec, const TerminalClaim& f,
                                               double t_end, std::span<const double> x_points,
                                               int nx, int n_steps);

/// Same comparison, also returning the solved surface.
FeynmanKacResult feynman_kac_compare_full(const DriverSpec& spec, const TerminalClaim& f,
                                          double t_end, std::span<const double> x_points, int nx,
                                          int n_steps);

}  // namespace nlx
