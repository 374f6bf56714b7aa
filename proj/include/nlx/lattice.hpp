#pragma once

#include <vector>

#include "nlx/claim.hpp"

namespace nlx {

/// Recombining binomial discretization of Brownian motion on [0, T]:
/// n_steps uniform steps of dt = T/n_steps, node state (2j - i) * sqrt(dt)
/// for step i and index j in [0, i], up/down probability 1/2 each. Increments
/// have mean 0 and variance dt, and up-then-down recombines exactly.
class LatticeGrid {
public:
    LatticeGrid(double T, int n_steps);

    double T() const { return T_; }
    int n_steps() const { return n_steps_; }
    double dt() const { return dt_; }
    double sqrt_dt() const { return sqrt_dt_; }

    double node_state(int i, int j) const;
    double time_at(int i) const { return i * dt_; }

    /// Largest reachable |state|.
    double max_state() const { return n_steps_ * sqrt_dt_; }

    /// Claim evaluated at the terminal nodes, index j = 0..n_steps.
    std::vector<double> terminal_slice(const TerminalClaim& f) const;

    /// Binomial node probabilities at step i, built by the halving (Pascal)
    /// recursion; sums to 1 up to accumulated rounding.
    std::vector<double> weights_at(int i) const;
    std::vector<double> terminal_weights() const { return weights_at(n_steps_); }

private:
    double T_;
    int n_steps_;
    double dt_;
    double sqrt_dt_;
};

}  // namespace nlx
