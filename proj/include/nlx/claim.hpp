#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlx {

/// Closed interval on the extended real line; lo/hi may be +-infinity.
struct Interval {
    double lo;
    double hi;
    bool operator==(const Interval&) const = default;
};

enum class Monotonicity { Increasing, Decreasing, None };

/// One piece of a terminal claim: the function equals
/// left_value + right_slope * (x - breakpoint) on [breakpoint, next breakpoint).
struct ClaimPiece {
    double breakpoint;
    double left_value;
    double right_slope;
};

/// Bounded piecewise-linear function with jump discontinuities, representing
/// a terminal payoff f(W_T). Pieces are half-open [b_i, b_{i+1}) with the
/// value at a breakpoint taken from the right; left of the first breakpoint
/// the function is constant at the first left_value, and the last piece must
/// have zero slope so both tails are flat. Down-jumps therefore happen at
/// their breakpoint (e.g. the two-sided indicator realizes as I[a <= x < b]);
/// the distinction is invisible to the continuous laws integrated against.
class TerminalClaim {
public:
    explicit TerminalClaim(std::vector<ClaimPiece> pieces);

    double operator()(double x) const;

    double f_min() const { return f_min_; }
    double f_max() const { return f_max_; }
    Monotonicity monotonicity() const { return monotone_; }
    const std::vector<ClaimPiece>& pieces() const { return pieces_; }

    /// Closure of {x : f(x) >= s} as disjoint sorted closed intervals.
    /// Empty when s > f_max; a single (-inf, inf) when s <= f_min.
    std::vector<Interval> superlevel_set(double s) const;

    TerminalClaim scaled(double factor) const;        // factor * f
    TerminalClaim shifted_value(double c) const;      // f + c
    TerminalClaim shifted_arg(double x0) const;       // x -> f(x + x0)
    friend TerminalClaim operator+(const TerminalClaim& f, const TerminalClaim& g);

    // Builtins
    static TerminalClaim constant(double c);
    static TerminalClaim threshold(double a);                    // I[x >= a]
    static TerminalClaim indicator(double a, double b);          // I[a <= x <= b] (right-open realization)
    static TerminalClaim identity_capped(double cap);            // x clamped to [-cap, cap]
    static TerminalClaim logistic(double k, int knots = 257);    // 1/(1+exp(-kx)) as a piecewise-linear interpolant
    static TerminalClaim indicator_of(const std::vector<Interval>& disjoint_sorted);

private:
    std::vector<ClaimPiece> pieces_;
    double f_min_ = 0.0;
    double f_max_ = 0.0;
    Monotonicity monotone_ = Monotonicity::None;
};

struct ComonotonicityResult {
    bool comonotonic = true;
    /// A pair (x, x') with (f(x)-f(x'))(h(x)-h(x')) < 0 when not comonotonic.
    std::optional<std::pair<double, double>> witness;
};

/// All-pairs check over both claims' breakpoints plus a uniform probe grid.
/// Quadratic in the probe count; exact for piecewise-linear claims once the
/// probe set contains every breakpoint (adjacent-pair screening is not
/// sufficient, so all pairs are compared).
ComonotonicityResult comonotonic_check(const TerminalClaim& f, const TerminalClaim& h,
                                       int probe_points);

/// Parses `threshold:a`, `indicator:a,b`, `identity:cap`, `logistic:k[,knots]`,
/// `constant:c`, or `@file.json` with {"breakpoints": [...],
/// "left_values": [...], "right_slopes": [...]}.
TerminalClaim parse_claim(const std::string& literal);

}  // namespace nlx
