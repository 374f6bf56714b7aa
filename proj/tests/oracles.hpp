#pragma once

// Test-only oracles, kept independent of the library's evaluation paths:
// a series-based normal cdf, Simpson quadrature for Gaussian functionals,
// and a dense-scan superlevel builder. Used to freeze expected values and to
// cross-check the closed-form module.

#include <cmath>
#include <vector>

#include "nlx/claim.hpp"

namespace oracles {

inline double normal_pdf_series(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

// Phi(x) = 1/2 + phi(x) * sum_{n>=0} x^{2n+1} / (1*3*...*(2n+1)); converges
// for all x, practical up to |x| ~ 10.
inline double normal_cdf_series(double x) {
    double term = x;
    double sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= x * x / (2.0 * n + 1.0);
        const double prev = sum;
        sum += term;
        if (sum == prev) break;
    }
    return 0.5 + normal_pdf_series(x) * sum;
}

// Composite Simpson over [mean - 12 sd, mean + 12 sd].
inline double simpson_gaussian_expectation(const nlx::TerminalClaim& f, double mean,
                                           double variance, int n_panels = 200000) {
    const double sd = std::sqrt(variance);
    const double lo = mean - 12.0 * sd;
    const double hi = mean + 12.0 * sd;
    const double h = (hi - lo) / (2 * n_panels);
    auto integrand = [&](double x) {
        return f(x) * normal_pdf_series((x - mean) / sd) / sd;
    };
    double sum = integrand(lo) + integrand(hi);
    for (int k = 1; k < 2 * n_panels; ++k) {
        sum += integrand(lo + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Approximate superlevel intervals by scanning a dense grid; endpoint
// accuracy is the scan resolution.
inline std::vector<nlx::Interval> scan_superlevel(const nlx::TerminalClaim& f, double s,
                                                  double lo, double hi, int points) {
    std::vector<nlx::Interval> out;
    const double step = (hi - lo) / (points - 1);
    bool inside = false;
    double start = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + i * step;
        const bool in = f(x) >= s;
        if (in && !inside) {
            start = x;
            inside = true;
        } else if (!in && inside) {
            out.push_back({start, lo + (i - 1) * step});
            inside = false;
        }
    }
    if (inside) out.push_back({start, hi});
    return out;
}

}  // namespace oracles
