#pragma once

#include "nlx/claim.hpp"
#include "nlx/time_function.hpp"

namespace nlx {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal distribution function, via the complementary error
/// function; absolute error well below 1e-12 across the real line.
double normal_cdf(double x);

/// 1 - Phi(x), computed without cancellation.
double normal_survival(double x);

/// E[f(X)] for X ~ N(mean, variance), exact per piece: each linear segment
/// integrates against the Gaussian in closed form through cdf/pdf
/// antiderivatives, so no quadrature error enters oracle values.
double gaussian_expectation(const TerminalClaim& f, double mean, double variance);

/// Solution value of the linear-driver BSDE: the drift change moves the
/// terminal law to N(integral of nu over [0,T], T), and the expectation of
/// the claim under that law is returned.
double girsanov_linear_expectation(const TerminalClaim& f, const TimeFunction& nu, double T);

struct ThresholdSolution {
    double y;
    double z;
};

/// Closed form for the unit-threshold claim I[x >= 1] under the driver
/// mu(t)|z|: with m = integral of mu over the whole horizon and the drifted
/// state w_bar, y is the N(0, T-t) survival at (1 - m - w_bar) and z the
/// N(0, T-t) density there (always positive). Requires 0 <= t < T.
ThresholdSolution threshold_claim_solution(const TimeFunction& mu, double T, double t,
                                           double w_bar);

/// Closed-form z for the unit-window claim I[1 <= x <= 2] under mu(t)|z|
/// along the branch where the comparison argument applies: the difference of
/// the two N(0, T-t) densities, changing sign at w_bar = 3/2 - integral(mu).
double window_claim_z(const TimeFunction& mu, double T, double t, double w_bar);

/// Extremal-drift value of the kappa-ignorance expectation for monotone
/// claims: increasing claims attain the supremum at constant drift +kappa,
/// decreasing claims at -kappa. Requires kappa >= 0 on [0, T] and a claim
/// with a definite monotone direction; general claims are served only by the
/// lattice solver.
double monotone_kappa_expectation(const TerminalClaim& f, const TimeFunction& kappa, double T);

}  // namespace nlx
