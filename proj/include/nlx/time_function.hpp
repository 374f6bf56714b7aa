#pragma once

#include <utility>
#include <vector>

namespace nlx {

/// Piecewise-linear function of time, defined by samples at strictly
/// increasing times. Evaluation interpolates linearly between samples and
/// throws std::domain_error outside the sampled range. Integrals are exact
/// (trapezoid across the knots), which keeps drift integrals free of
/// quadrature error.
class TimeFunction {
public:
    using Sample = std::pair<double, double>;  // (t, value)

    explicit TimeFunction(std::vector<Sample> samples);

    /// Constant value on [0, horizon].
    static TimeFunction constant(double value, double horizon);

    double operator()(double t) const;

    /// Exact integral over [t0, t1]; both ends must lie in the domain.
    double integral(double t0, double t1) const;

    /// Largest |value| over the domain (attained at a knot).
    double sup_abs() const;

    double domain_lo() const { return samples_.front().first; }
    double domain_hi() const { return samples_.back().first; }
    bool covers(double t0, double t1) const {
        return domain_lo() <= t0 && t1 <= domain_hi();
    }
    bool is_constant() const;

    const std::vector<Sample>& samples() const { return samples_; }

private:
    std::vector<Sample> samples_;
};

}  // namespace nlx
