#include "nlx/bsde.hpp"

#include <cmath>
#include <stdexcept>

#include "nlx/errors.hpp"

namespace nlx {

namespace {

constexpr double kFixedPointTol = 1e-12;
constexpr int kMaxFixedPointIters = 100;
constexpr double kZSignBand = 1e-12;

void check_solvable(const LatticeGrid& grid, const DriverSpec& spec) {
    if (!spec.defined_on(0.0, grid.T())) {
        throw std::domain_error("solve_bsde: driver coefficients do not cover [0, T]");
    }
    const double L = spec.lipschitz_bound();
    if (!(L * grid.dt() < 0.5)) {
        throw ConfigError("solve_bsde: contraction condition violated (Lipschitz bound * dt = " +
                          std::to_string(L * grid.dt()) + " >= 1/2); increase n_steps");
    }
    // Light probe of g(y, 0, t) = 0; the full sampled check lives in
    // validate_hypotheses.
    for (double frac : {0.0, 0.5, 1.0}) {
        const double t = grid.T() * frac;
        for (double y : {-1.0, 0.0, 1.0}) {
            if (std::abs(spec.eval(y, 0.0, t)) > 1e-12) {
                throw std::invalid_argument("solve_bsde: driver violates g(y,0,t)=0");
            }
        }
    }
}

// One implicit node update: solve y = ybar + g(y, z, t) dt.
inline double node_update(const DriverSpec& spec, double ybar, double z, double t, double dt) {
    double y = ybar + spec.eval(ybar, z, t) * dt;
    if (spec.z_only()) return y;  // g has no y argument: y above is the fixed point
    for (int iter = 0; iter < kMaxFixedPointIters; ++iter) {
        const double next = ybar + spec.eval(y, z, t) * dt;
        if (std::abs(next - y) <= kFixedPointTol) return next;
        y = next;
    }
    throw std::runtime_error("solve_bsde: fixed-point iteration did not converge in 100 steps");
}

}  // namespace

SolutionSurface solve_bsde_terminal(const LatticeGrid& grid, std::vector<double> terminal,
                                    const DriverSpec& spec) {
    const int n = grid.n_steps();
    if (terminal.size() != static_cast<std::size_t>(n) + 1) {
        throw std::invalid_argument("solve_bsde_terminal: terminal slice has wrong length");
    }
    check_solvable(grid, spec);

    std::vector<std::vector<double>> y(n + 1);
    std::vector<std::vector<double>> z(n);
    y[n] = std::move(terminal);

    const double dt = grid.dt();
    const double two_sqrt_dt = 2.0 * grid.sqrt_dt();

    for (int i = n - 1; i >= 0; --i) {
        const double t = grid.time_at(i);
        const std::vector<double>& next = y[i + 1];
        std::vector<double> yi(i + 1);
        std::vector<double> zi(i + 1);

        if (spec.kind() == DriverKind::Zero) {
            for (int j = 0; j <= i; ++j) {
                zi[j] = (next[j + 1] - next[j]) / two_sqrt_dt;
                yi[j] = 0.5 * (next[j + 1] + next[j]);
            }
        } else if (spec.kind() == DriverKind::Linear) {
            const double nu_dt = spec.nu()(t) * dt;
            for (int j = 0; j <= i; ++j) {
                const double zj = (next[j + 1] - next[j]) / two_sqrt_dt;
                zi[j] = zj;
                yi[j] = 0.5 * (next[j + 1] + next[j]) + nu_dt * zj;
            }
        } else if (spec.kind() == DriverKind::KappaIgnorance) {
            const double mu_dt = spec.mu()(t) * dt;
            const double nu_dt = spec.nu()(t) * dt;
            for (int j = 0; j <= i; ++j) {
                const double zj = (next[j + 1] - next[j]) / two_sqrt_dt;
                zi[j] = zj;
                yi[j] = 0.5 * (next[j + 1] + next[j]) + mu_dt * std::abs(zj) + nu_dt * zj;
            }
        } else {
            for (int j = 0; j <= i; ++j) {
                const double zj = (next[j + 1] - next[j]) / two_sqrt_dt;
                zi[j] = zj;
                yi[j] = node_update(spec, 0.5 * (next[j + 1] + next[j]), zj, t, dt);
            }
        }
        y[i] = std::move(yi);
        z[i] = std::move(zi);
    }
    return SolutionSurface(grid, std::move(y), std::move(z));
}

SolutionSurface solve_bsde(const LatticeGrid& grid, const TerminalClaim& f,
                           const DriverSpec& spec) {
    return solve_bsde_terminal(grid, grid.terminal_slice(f), spec);
}

double g_expectation(const TerminalClaim& f, const DriverSpec& spec, double T, int n_steps) {
    return solve_bsde(LatticeGrid(T, n_steps), f, spec).value();
}

RichardsonValue g_expectation_richardson(const TerminalClaim& f, const DriverSpec& spec,
                                         double T, int n_steps) {
    RichardsonValue r;
    r.coarse = g_expectation(f, spec, T, n_steps);
    r.fine = g_expectation(f, spec, T, 2 * n_steps);
    r.value = 0.5 * (r.coarse + r.fine);
    r.estimate = std::abs(r.fine - r.coarse);
    return r;
}

std::vector<std::pair<double, double>> SolutionSurface::conditional_slice(int i) const {
    if (i < 0 || i > grid_.n_steps()) {
        throw std::out_of_range("conditional_slice: step index out of range");
    }
    std::vector<std::pair<double, double>> out(i + 1);
    for (int j = 0; j <= i; ++j) {
        out[j] = {grid_.node_state(i, j), y_[i][j]};
    }
    return out;
}

ZSignReport SolutionSurface::z_sign_report() const {
    ZSignReport rep;
    const int n = grid_.n_steps();
    if (n == 0 || z_.empty()) return rep;

    rep.min_z = rep.max_z = z_[0][0];
    double neg = 0.0, pos = 0.0, total = 0.0;
    std::vector<double> w{1.0};
    const double dt = grid_.dt();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double zij = z_[i][j];
            rep.min_z = std::min(rep.min_z, zij);
            rep.max_z = std::max(rep.max_z, zij);
            const double mass = w[j] * dt;
            total += mass;
            if (zij < -kZSignBand) neg += mass;
            if (zij > kZSignBand) pos += mass;
        }
        std::vector<double> next(i + 2, 0.0);
        for (int j = 0; j <= i; ++j) {
            const double half = 0.5 * w[j];
            next[j] += half;
            next[j + 1] += half;
        }
        w = std::move(next);
    }
    rep.fraction_negative = neg / total;
    rep.fraction_positive = pos / total;
    return rep;
}

std::vector<std::pair<double, double>> representation_slope(const DriverSpec& spec, double b,
                                                            std::span<const double> horizons,
                                                            int n_steps) {
    std::vector<std::pair<double, double>> out;
    out.reserve(horizons.size());
    for (double s : horizons) {
        if (!(s > 0.0)) throw std::invalid_argument("representation_slope: horizons must be positive");
        LatticeGrid grid(s, n_steps);
        // Cap just beyond the reachable states so the claim is bounded yet
        // exactly linear on the lattice.
        const double cap = grid.max_state() + 1.0;
        TerminalClaim claim = TerminalClaim::identity_capped(cap).scaled(b);
        const double e_g = solve_bsde(grid, claim, spec).value();
        out.push_back({s, e_g / s});  // E[b W_s] vanishes by symmetry
    }
    return out;
}

}  // namespace nlx
