#pragma once

#include <map>
#include <vector>

#include "nlx/bsde.hpp"
#include "nlx/claim.hpp"
#include "nlx/driver.hpp"

namespace nlx {

/// The set function A -> E_g[I_{W_T in A}] induced by a driver on a fixed
/// lattice resolution. Monotone and normalized to solver tolerance; additive
/// only when the driver is linear in z. Evaluations are cached by interval
/// union; the cache never changes results, only cost.
class Capacity {
public:
    Capacity(DriverSpec driver, double T, int n_steps);

    /// Capacity of a finite union of disjoint sorted closed intervals.
    /// Throws std::domain_error on overlapping or unsorted input.
    double operator()(const std::vector<Interval>& intervals) const;

    /// Batch evaluation of several unions; honors NLX_THREADS (0 or 1 means
    /// sequential) and returns values identical to sequential evaluation.
    std::vector<double> evaluate_many(const std::vector<std::vector<Interval>>& unions) const;

    const DriverSpec& driver() const { return driver_; }
    double T() const { return T_; }
    int n_steps() const { return n_steps_; }

private:
    DriverSpec driver_;
    double T_;
    int n_steps_;

    struct UnionLess {
        bool operator()(const std::vector<Interval>& a, const std::vector<Interval>& b) const;
    };
    mutable std::map<std::vector<Interval>, double, UnionLess> cache_;

    double solve_union(const std::vector<Interval>& intervals) const;
};

struct ThresholdSample {
    double s;                 // threshold level (grid midpoint)
    double capacity;          // V(f >= s)
    double partial_integral;  // composed integral up to and including s
};

struct ChoquetResult {
    double value = 0.0;
    int n_thresholds = 0;
    double quadrature_error_estimate = 0.0;  // |value(n) - value(n/2)|
    std::vector<ThresholdSample> per_threshold;
};

/// Choquet integral of the claim against the capacity by the layer-cake
/// construction: V(f >= s) sampled at midpoints of a uniform threshold grid
/// on [f_min, f_max], composed as the two-branch integral (capacity minus
/// one below zero, capacity above). The constant branch integrates in closed
/// form, so the midpoint rule touches only the capacity term.
ChoquetResult choquet_expectation(const Capacity& capacity, const TerminalClaim& f,
                                  int n_thresholds);

/// Additivity diagnostics for a comonotonic pair: the g-expectation gap
/// E_g[f+h] - E_g[f] - E_g[h] and the matching Choquet gap, each computed on
/// the (n, 2n) lattice pair (value = pair average, estimate = pair spread;
/// the Choquet estimate additionally carries the three quadrature estimates
/// and a fixed-point dust floor).
struct AdditivityGaps {
    double e_g_f = 0.0;
    double e_g_h = 0.0;
    double e_g_joint = 0.0;
    double g_gap = 0.0;
    double g_gap_estimate = 0.0;

    double choquet_f = 0.0;
    double choquet_h = 0.0;
    double choquet_joint = 0.0;
    double choquet_gap = 0.0;
    double choquet_gap_estimate = 0.0;
};

/// Throws std::invalid_argument when the pair fails comonotonic_check.
AdditivityGaps additivity_gaps(const DriverSpec& driver, const TerminalClaim& f,
                               const TerminalClaim& h, double T, int n_steps,
                               int n_thresholds);

}  // namespace nlx
