#include "nlx/closedform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlx {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)
constexpr double kInvSqrt2 = 0.7071067811865475244;    // 1/sqrt(2)
}

double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_survival(double x) {
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double gaussian_expectation(const TerminalClaim& f, double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("gaussian_expectation: variance must be positive");
    const double sd = std::sqrt(variance);
    const auto& pieces = f.pieces();

    // Piece [a, b) with f = v + s (x - a); standardized u = (x - mean)/sd:
    //   integral = (v + s (mean - a)) (Phi(beta) - Phi(alpha))
    //            + s sd (phi(alpha) - phi(beta)).
    double total = 0.0;
    {
        const double alpha0 = (pieces.front().breakpoint - mean) / sd;
        total += pieces.front().left_value * normal_cdf(alpha0);
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double a = pieces[i].breakpoint;
        const double v = pieces[i].left_value;
        const double s = pieces[i].right_slope;
        const double alpha = (a - mean) / sd;
        double prob, phi_beta;
        if (i + 1 < pieces.size()) {
            const double beta = (pieces[i + 1].breakpoint - mean) / sd;
            prob = normal_cdf(beta) - normal_cdf(alpha);
            phi_beta = normal_pdf(beta);
        } else {
            prob = normal_survival(alpha);
            phi_beta = 0.0;
        }
        total += (v + s * (mean - a)) * prob + s * sd * (normal_pdf(alpha) - phi_beta);
    }
    return total;
}

double girsanov_linear_expectation(const TerminalClaim& f, const TimeFunction& nu, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("girsanov_linear_expectation: T must be positive");
    if (!nu.covers(0.0, T)) {
        throw std::domain_error("girsanov_linear_expectation: nu not defined on [0, T]");
    }
    return gaussian_expectation(f, nu.integral(0.0, T), T);
}

ThresholdSolution threshold_claim_solution(const TimeFunction& mu, double T, double t,
                                           double w_bar) {
    if (!(T > 0.0)) throw std::invalid_argument("threshold_claim_solution: T must be positive");
    if (t < 0.0 || t >= T) {
        throw std::domain_error("threshold_claim_solution: need 0 <= t < T");
    }
    const double m = mu.integral(0.0, T);
    const double remaining_sd = std::sqrt(T - t);
    const double arg = (1.0 - m - w_bar) / remaining_sd;
    return {normal_survival(arg), normal_pdf(arg) / remaining_sd};
}

double window_claim_z(const TimeFunction& mu, double T, double t, double w_bar) {
    if (!(T > 0.0)) throw std::invalid_argument("window_claim_z: T must be positive");
    if (t < 0.0 || t >= T) {
        throw std::domain_error("window_claim_z: need 0 <= t < T");
    }
    const double m = mu.integral(0.0, T);
    const double remaining_sd = std::sqrt(T - t);
    const double a1 = (1.0 - m - w_bar) / remaining_sd;
    const double a2 = (2.0 - m - w_bar) / remaining_sd;
    return (normal_pdf(a1) - normal_pdf(a2)) / remaining_sd;
}

double monotone_kappa_expectation(const TerminalClaim& f, const TimeFunction& kappa, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("monotone_kappa_expectation: T must be positive");
    if (!kappa.covers(0.0, T)) {
        throw std::domain_error("monotone_kappa_expectation: kappa not defined on [0, T]");
    }
    for (const auto& [t, v] : kappa.samples()) {
        if (v < 0.0) throw std::invalid_argument("monotone_kappa_expectation: kappa must be >= 0");
    }
    const double drift = kappa.integral(0.0, T);
    switch (f.monotonicity()) {
        case Monotonicity::Increasing:
            return gaussian_expectation(f, drift, T);
        case Monotonicity::Decreasing:
            return gaussian_expectation(f, -drift, T);
        case Monotonicity::None:
            throw std::invalid_argument(
                "monotone_kappa_expectation: claim has no monotone direction; "
                "use the lattice solver for general claims");
    }
    return 0.0;
}

}  // namespace nlx
