#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlx/time_function.hpp"

namespace nlx {

enum class DriverKind { Zero, Linear, KappaIgnorance, Custom };

/// A BSDE driver g(y, z, t). The structured variants evaluate as
///   Zero            g = 0
///   Linear          g = nu(t) * z
///   KappaIgnorance  g = mu(t) * |z| + nu(t) * z
/// and satisfy g(y, 0, t) = 0 by construction. Custom drivers carry a
/// user-declared Lipschitz bound; whether they honor g(y,0,t)=0 is checked
/// empirically by validate_hypotheses, never assumed.
class DriverSpec {
public:
    using CustomFn = std::function<double(double y, double z, double t)>;

    static DriverSpec zero();
    static DriverSpec linear(TimeFunction nu);
    static DriverSpec kappa_ignorance(TimeFunction mu, TimeFunction nu);
    static DriverSpec custom(CustomFn g, double lipschitz_bound);

    double eval(double y, double z, double t) const;

    DriverKind kind() const { return kind_; }

    /// Lipschitz constant in (y, z): declared for Custom, derived from the
    /// coefficient sup-norms otherwise.
    double lipschitz_bound() const;

    /// True when g does not depend on y (all structured variants). The
    /// one-step implicit solve is then a single explicit evaluation.
    bool z_only() const { return kind_ != DriverKind::Custom; }

    const TimeFunction& mu() const;
    const TimeFunction& nu() const;

    /// Largest [0, H] on which every coefficient is defined; Zero/Custom are
    /// unrestricted in t.
    bool defined_on(double t0, double t1) const;

private:
    DriverSpec() = default;
    DriverKind kind_ = DriverKind::Zero;
    std::optional<TimeFunction> mu_;
    std::optional<TimeFunction> nu_;
    CustomFn custom_;
    double custom_bound_ = 0.0;
};

struct DriverSamplePoint {
    double y, z, t;
};

/// One entry per detected defect; empty vectors mean the hypothesis held on
/// the sampled grid. The Lipschitz check is empirical (sampling), advisory
/// rather than proof-grade.
struct HypothesisReport {
    struct ZeroZViolation {
        double y, t, value;  // g(y, 0, t) = value with |value| > tol
    };
    struct LipschitzViolation {
        double y0, z0, y1, z1, t, ratio;
    };
    struct ContinuityDefect {
        double y, z, t0, t1, jump;
    };

    double zero_z_tolerance = 1e-12;
    double declared_lipschitz_bound = 0.0;
    double t_jump_modulus = 0.0;

    std::vector<ZeroZViolation> zero_z_violations;
    double max_abs_at_zero_z = 0.0;

    std::vector<LipschitzViolation> lipschitz_violations;
    double max_lipschitz_ratio = 0.0;

    std::vector<ContinuityDefect> continuity_defects;
    double max_t_jump = 0.0;

    bool zero_at_zero_z_ok() const { return zero_z_violations.empty(); }
    bool lipschitz_ok() const { return lipschitz_violations.empty(); }
    bool t_continuity_ok() const { return continuity_defects.empty(); }
    bool all_ok() const { return zero_at_zero_z_ok() && lipschitz_ok() && t_continuity_ok(); }
};

struct ValidationOptions {
    double zero_z_tolerance = 1e-12;
    /// Largest admissible |g(y,z,t2) - g(y,z,t1)| between adjacent sampled
    /// times. Coefficients here are piecewise linear, so the default absolute
    /// bound only trips genuinely discontinuous custom drivers.
    double t_jump_modulus = 1e-6;
    std::size_t max_reported = 32;
};

/// Default probe grid: y in [-2,2], z in [-10,10], t in [0,T].
std::vector<DriverSamplePoint> default_validation_grid(double horizon);

HypothesisReport validate_hypotheses(const DriverSpec& spec,
                                     std::span<const DriverSamplePoint> grid,
                                     const ValidationOptions& opts = {});

/// Outcome of probing whether g has the form mu(t)|z| + nu(t) z and, within
/// that family, whether the |z| part vanishes.
struct LinearityVerdict {
    bool is_linear_in_z = false;
    TimeFunction mu_hat;
    TimeFunction nu_hat;
    double max_residual = 0.0;  // sup |g - mu|z| - nu z| over the probe grid
    double tolerance = 0.0;
};

/// Recovers mu_hat(t) = (g(0,1,t) + g(0,-1,t))/2 and
/// nu_hat(t) = (g(0,1,t) - g(0,-1,t))/2 on the given time grid. Exact
/// algebra for the structured variants, so the default tolerance only
/// absorbs rounding noise. Throws std::invalid_argument when the driver
/// fails the g(y,0,t)=0 hypothesis on the probe grid.
LinearityVerdict classify_linearity(const DriverSpec& spec,
                                    std::span<const double> time_grid,
                                    double tol = 1e-9);

/// Parses `zero`, `linear:<nu>`, `kappa:<mu>,<nu>`. Each coefficient is a
/// constant or `@file.json` holding an array of [t, value] pairs whose span
/// must cover [0, horizon].
DriverSpec parse_driver(const std::string& literal, double horizon);

}  // namespace nlx
