#include "nlx/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace nlx {

LatticeGrid::LatticeGrid(double T, int n_steps) : T_(T), n_steps_(n_steps) {
    if (!(T > 0.0)) throw std::domain_error("LatticeGrid: T must be positive");
    if (n_steps < 1) throw std::domain_error("LatticeGrid: n_steps must be >= 1");
    dt_ = T_ / n_steps_;
    sqrt_dt_ = std::sqrt(dt_);
}

double LatticeGrid::node_state(int i, int j) const {
    if (i < 0 || i > n_steps_ || j < 0 || j > i) {
        throw std::out_of_range("LatticeGrid::node_state: index out of range");
    }
    return (2.0 * j - i) * sqrt_dt_;
}

std::vector<double> LatticeGrid::terminal_slice(const TerminalClaim& f) const {
    std::vector<double> slice(n_steps_ + 1);
    for (int j = 0; j <= n_steps_; ++j) {
        slice[j] = f(node_state(n_steps_, j));
    }
    return slice;
}

std::vector<double> LatticeGrid::weights_at(int i) const {
    if (i < 0 || i > n_steps_) throw std::out_of_range("LatticeGrid::weights_at: step out of range");
    std::vector<double> w{1.0};
    for (int step = 0; step < i; ++step) {
        std::vector<double> next(step + 2, 0.0);
        for (int j = 0; j <= step; ++j) {
            const double half = 0.5 * w[j];
            next[j] += half;
            next[j + 1] += half;
        }
        w = std::move(next);
    }
    return w;
}

}  // namespace nlx
