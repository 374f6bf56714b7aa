#include "nlx/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "nlx/bsde.hpp"
#include "nlx/errors.hpp"
#include "nlx/lattice.hpp"

namespace nlx {

namespace {

constexpr int kMaxSnapshots = 129;

void require_time_homogeneous(const DriverSpec& spec) {
    switch (spec.kind()) {
        case DriverKind::Zero:
            return;
        case DriverKind::Linear:
            if (!spec.nu().is_constant()) {
                throw std::invalid_argument("solve_nonlinear_heat: nu must be constant in time");
            }
            return;
        case DriverKind::KappaIgnorance:
            if (!spec.mu().is_constant() || !spec.nu().is_constant()) {
                throw std::invalid_argument(
                    "solve_nonlinear_heat: mu and nu must be constant in time");
            }
            return;
        case DriverKind::Custom:
            return;  // evaluated at t = 0; time-homogeneity is the caller's contract
    }
}

}  // namespace

double PdeSurface::value_at(double x) const {
    const auto& u = final_level();
    if (x < x_grid.front() || x > x_grid.back()) {
        throw std::domain_error("PdeSurface::value_at: x outside grid");
    }
    const auto it = std::upper_bound(x_grid.begin(), x_grid.end(), x);
    if (it == x_grid.begin()) return u.front();
    if (it == x_grid.end()) return u.back();
    const std::size_t i = static_cast<std::size_t>(it - x_grid.begin());
    const double w = (x - x_grid[i - 1]) / (x_grid[i] - x_grid[i - 1]);
    return u[i - 1] + w * (u[i] - u[i - 1]);
}

PdeSurface solve_nonlinear_heat(const DriverSpec& spec, const TerminalClaim& f, double t_end,
                                double x_lo, double x_hi, int nx, double safety) {
    if (!(t_end > 0.0)) throw std::invalid_argument("solve_nonlinear_heat: t_end must be positive");
    if (!(x_lo < x_hi)) throw std::invalid_argument("solve_nonlinear_heat: need x_lo < x_hi");
    if (nx < 3) throw std::invalid_argument("solve_nonlinear_heat: need nx >= 3");
    if (!(safety > 0.0 && safety < 1.0)) {
        throw std::invalid_argument("solve_nonlinear_heat: safety must lie in (0, 1)");
    }
    require_time_homogeneous(spec);

    const double pad = 6.0 * std::sqrt(t_end);
    const double active_lo = f.pieces().front().breakpoint;
    const double active_hi = f.pieces().back().breakpoint;
    if (x_lo > active_lo - pad || x_hi < active_hi + pad) {
        throw ConfigError(
            "solve_nonlinear_heat: domain does not pad the claim's active region by 6 sqrt(t_end); "
            "widen [x_lo, x_hi]");
    }

    PdeSurface surf;
    surf.t_end = t_end;
    surf.x_grid.resize(nx);
    const double dx = (x_hi - x_lo) / (nx - 1);
    surf.dx = dx;
    for (int m = 0; m < nx; ++m) surf.x_grid[m] = x_lo + m * dx;

    // Stability: dt = safety * dx^2 / 2, shrunk once more by the first-order
    // driver term so the update stays monotone.
    const double L = spec.lipschitz_bound();
    double dt = safety * dx * dx / 2.0;
    dt *= 1.0 / (1.0 + L * dx);
    const int nt = static_cast<int>(std::ceil(t_end / dt));
    dt = t_end / nt;
    surf.dt = dt;
    surf.n_time_steps = nt;

    std::vector<double> u(nx), next(nx);
    for (int m = 0; m < nx; ++m) u[m] = f(surf.x_grid[m]);
    const double left = u.front();
    const double right = u.back();

    const int stride = std::max(1, nt / (kMaxSnapshots - 1));
    surf.snapshot_times.push_back(0.0);
    surf.snapshots.push_back(u);

    // Coefficients are constant in time here; hoist them out of the sweep.
    double mu0 = 0.0, nu0 = 0.0;
    if (spec.kind() == DriverKind::Linear) nu0 = spec.nu()(0.0);
    if (spec.kind() == DriverKind::KappaIgnorance) {
        mu0 = spec.mu()(0.0);
        nu0 = spec.nu()(0.0);
    }
    const bool structured = spec.kind() != DriverKind::Custom;

    const double inv_dx2 = 1.0 / (dx * dx);
    const double inv_2dx = 1.0 / (2.0 * dx);
    for (int k = 0; k < nt; ++k) {
        next.front() = left;
        next.back() = right;
        for (int m = 1; m + 1 < nx; ++m) {
            const double uxx = (u[m + 1] - 2.0 * u[m] + u[m - 1]) * inv_dx2;
            const double ux = (u[m + 1] - u[m - 1]) * inv_2dx;
            const double g = structured ? mu0 * std::abs(ux) + nu0 * ux
                                        : spec.eval(u[m], ux, 0.0);
            next[m] = u[m] + dt * (0.5 * uxx + g);
        }
        u.swap(next);
        const int level = k + 1;
        if (level == nt || level % stride == 0) {
            surf.snapshot_times.push_back(level * dt);
            surf.snapshots.push_back(u);
        }
    }
    return surf;
}

void write_surface_csv(const PdeSurface& surface, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write surface to '" + path + "'");
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    out << "t,x,u\n";
    for (std::size_t k = 0; k < surface.snapshots.size(); ++k) {
        for (std::size_t m = 0; m < surface.x_grid.size(); ++m) {
            put(surface.snapshot_times[k]);
            out << ',';
            put(surface.x_grid[m]);
            out << ',';
            put(surface.snapshots[k][m]);
            out << '\n';
        }
    }
    if (!out.good()) throw ConfigError("write failed for '" + path + "'");
}

FeynmanKacResult feynman_kac_compare_full(const DriverSpec& spec, const TerminalClaim& f,
                                          double t_end, std::span<const double> x_points, int nx,
                                          int n_steps) {
    double span = 0.0;
    for (double x : x_points) span = std::max(span, std::abs(x));
    const double pad = 6.0 * std::sqrt(t_end) + 1.0;
    const double x_lo = f.pieces().front().breakpoint - pad - span;
    const double x_hi = f.pieces().back().breakpoint + pad + span;

    FeynmanKacResult res{{}, solve_nonlinear_heat(spec, f, t_end, x_lo, x_hi, nx)};
    res.rows.reserve(x_points.size());
    for (double x : x_points) {
        const double u = res.surface.value_at(x);
        const double e_g = g_expectation(f.shifted_arg(x), spec, t_end, n_steps);
        res.rows.push_back({x, u, e_g, std::abs(u - e_g)});
    }
    return res;
}

std::vector<FeynmanKacRow> feynman_kac_compare(const DriverSpec& spec, const TerminalClaim& f,
                                               double t_end, std::span<const double> x_points,
                                               int nx, int n_steps) {
    return feynman_kac_compare_full(spec, f, t_end, x_points, nx, n_steps).rows;
}

}  // namespace nlx
