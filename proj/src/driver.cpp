#include "nlx/driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlx {

DriverSpec DriverSpec::zero() {
    DriverSpec d;
    d.kind_ = DriverKind::Zero;
    return d;
}

DriverSpec DriverSpec::linear(TimeFunction nu) {
    DriverSpec d;
    d.kind_ = DriverKind::Linear;
    d.nu_ = std::move(nu);
    return d;
}

DriverSpec DriverSpec::kappa_ignorance(TimeFunction mu, TimeFunction nu) {
    DriverSpec d;
    d.kind_ = DriverKind::KappaIgnorance;
    d.mu_ = std::move(mu);
    d.nu_ = std::move(nu);
    return d;
}

DriverSpec DriverSpec::custom(CustomFn g, double lipschitz_bound) {
    if (!g) throw std::invalid_argument("DriverSpec::custom: null function");
    if (!(lipschitz_bound > 0.0)) {
        throw std::invalid_argument("DriverSpec::custom: lipschitz_bound must be positive");
    }
    DriverSpec d;
    d.kind_ = DriverKind::Custom;
    d.custom_ = std::move(g);
    d.custom_bound_ = lipschitz_bound;
    return d;
}

double DriverSpec::eval(double y, double z, double t) const {
    switch (kind_) {
        case DriverKind::Zero:
            return 0.0;
        case DriverKind::Linear:
            return (*nu_)(t)*z;
        case DriverKind::KappaIgnorance:
            return (*mu_)(t)*std::abs(z) + (*nu_)(t)*z;
        case DriverKind::Custom:
            return custom_(y, z, t);
    }
    return 0.0;
}

double DriverSpec::lipschitz_bound() const {
    switch (kind_) {
        case DriverKind::Zero:
            return 0.0;
        case DriverKind::Linear:
            return nu_->sup_abs();
        case DriverKind::KappaIgnorance:
            return mu_->sup_abs() + nu_->sup_abs();
        case DriverKind::Custom:
            return custom_bound_;
    }
    return 0.0;
}

const TimeFunction& DriverSpec::mu() const {
    if (!mu_) throw std::logic_error("DriverSpec: variant has no mu coefficient");
    return *mu_;
}

const TimeFunction& DriverSpec::nu() const {
    if (!nu_) throw std::logic_error("DriverSpec: variant has no nu coefficient");
    return *nu_;
}

bool DriverSpec::defined_on(double t0, double t1) const {
    if (mu_ && !mu_->covers(t0, t1)) return false;
    if (nu_ && !nu_->covers(t0, t1)) return false;
    return true;
}

std::vector<DriverSamplePoint> default_validation_grid(double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("default_validation_grid: horizon must be positive");
    std::vector<DriverSamplePoint> grid;
    const int nt = 11;
    for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double z : {-10.0, -5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            for (int k = 0; k < nt; ++k) {
                grid.push_back({y, z, horizon * k / (nt - 1)});
            }
        }
    }
    return grid;
}

HypothesisReport validate_hypotheses(const DriverSpec& spec,
                                     std::span<const DriverSamplePoint> grid,
                                     const ValidationOptions& opts) {
    if (grid.empty()) throw std::invalid_argument("validate_hypotheses: empty sample grid");

    HypothesisReport rep;
    rep.zero_z_tolerance = opts.zero_z_tolerance;
    rep.declared_lipschitz_bound = spec.lipschitz_bound();
    rep.t_jump_modulus = opts.t_jump_modulus;

    auto push_limited = [&](auto& vec, auto item) {
        if (vec.size() < opts.max_reported) vec.push_back(item);
    };

    // g(y, 0, t) = 0 at every sampled (y, t)
    for (const auto& p : grid) {
        const double v = spec.eval(p.y, 0.0, p.t);
        rep.max_abs_at_zero_z = std::max(rep.max_abs_at_zero_z, std::abs(v));
        if (std::abs(v) > opts.zero_z_tolerance) {
            push_limited(rep.zero_z_violations, HypothesisReport::ZeroZViolation{p.y, p.t, v});
        }
    }

    // Empirical Lipschitz ratios: all pairs of grid points sharing a time.
    // Quadratic in the per-time group size, acceptable at desk scale.
    std::map<double, std::vector<std::size_t>> by_time;
    for (std::size_t i = 0; i < grid.size(); ++i) by_time[grid[i].t].push_back(i);
    for (const auto& [t, idx] : by_time) {
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                const auto& p = grid[idx[a]];
                const auto& q = grid[idx[b]];
                const double denom = std::abs(p.y - q.y) + std::abs(p.z - q.z);
                if (denom == 0.0) continue;
                const double ratio =
                    std::abs(spec.eval(p.y, p.z, t) - spec.eval(q.y, q.z, t)) / denom;
                rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, ratio);
                if (ratio > rep.declared_lipschitz_bound * (1.0 + 1e-12) + 1e-15) {
                    push_limited(rep.lipschitz_violations,
                                 HypothesisReport::LipschitzViolation{p.y, p.z, q.y, q.z, t, ratio});
                }
            }
        }
    }

    // Continuity in t: jumps between consecutive sampled times at fixed (y, z).
    std::map<std::pair<double, double>, std::vector<double>> by_point;
    for (const auto& p : grid) by_point[{p.y, p.z}].push_back(p.t);
    for (auto& [yz, times] : by_point) {
        std::sort(times.begin(), times.end());
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            if (times[k] == times[k + 1]) continue;
            const double jump = std::abs(spec.eval(yz.first, yz.second, times[k]) -
                                         spec.eval(yz.first, yz.second, times[k + 1]));
            rep.max_t_jump = std::max(rep.max_t_jump, jump);
            if (jump > opts.t_jump_modulus) {
                push_limited(rep.continuity_defects, HypothesisReport::ContinuityDefect{
                                                         yz.first, yz.second, times[k],
                                                         times[k + 1], jump});
            }
        }
    }

    return rep;
}

LinearityVerdict classify_linearity(const DriverSpec& spec,
                                    std::span<const double> time_grid,
                                    double tol) {
    if (time_grid.size() < 2) {
        throw std::invalid_argument("classify_linearity: need at least two time samples");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("classify_linearity: tol must be positive");

    // Precondition: g(y, 0, t) = 0 on the probe times.
    for (double t : time_grid) {
        for (double y : {-1.0, 0.0, 1.0}) {
            if (std::abs(spec.eval(y, 0.0, t)) > 1e-12) {
                throw std::invalid_argument("classify_linearity: driver fails g(y,0,t)=0");
            }
        }
    }

    std::vector<TimeFunction::Sample> mu_s, nu_s;
    mu_s.reserve(time_grid.size());
    nu_s.reserve(time_grid.size());
    double sup_mu = 0.0;
    for (double t : time_grid) {
        const double gp = spec.eval(0.0, 1.0, t);
        const double gm = spec.eval(0.0, -1.0, t);
        const double mu = 0.5 * (gp + gm);
        const double nu = 0.5 * (gp - gm);
        sup_mu = std::max(sup_mu, std::abs(mu));
        mu_s.push_back({t, mu});
        nu_s.push_back({t, nu});
    }

    LinearityVerdict v{
        .is_linear_in_z = sup_mu <= tol,
        .mu_hat = TimeFunction(std::move(mu_s)),
        .nu_hat = TimeFunction(std::move(nu_s)),
        .max_residual = 0.0,
        .tolerance = tol,
    };

    // Residual against the recovered mu|z| + nu z form; nonzero flags drivers
    // outside the family (y-dependence or non-homogeneity in z).
    for (double t : time_grid) {
        const double mu = v.mu_hat(t);
        const double nu = v.nu_hat(t);
        for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            for (double z : {-10.0, -3.0, -1.0, -0.5, 0.5, 1.0, 3.0, 10.0}) {
                const double r = std::abs(spec.eval(y, z, t) - mu * std::abs(z) - nu * z);
                v.max_residual = std::max(v.max_residual, r);
            }
        }
    }
    return v;
}

namespace {

TimeFunction parse_coefficient(const std::string& token, double horizon) {
    if (!token.empty() && token[0] == '@') {
        const std::string path = token.substr(1);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("driver coefficient file not found: " + path);
        nlohmann::json j;
        in >> j;
        if (!j.is_array()) {
            throw std::invalid_argument("driver coefficient file must hold an array of [t, value] pairs: " + path);
        }
        std::vector<TimeFunction::Sample> samples;
        for (const auto& item : j) {
            if (!item.is_array() || item.size() != 2) {
                throw std::invalid_argument("driver coefficient entries must be [t, value] pairs: " + path);
            }
            samples.push_back({item[0].get<double>(), item[1].get<double>()});
        }
        TimeFunction f(std::move(samples));
        if (!f.covers(0.0, horizon)) {
            throw std::invalid_argument("driver coefficient samples in " + path +
                                        " do not cover [0, T]");
        }
        return f;
    }
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad driver coefficient: '" + token + "'");
    }
    if (pos != token.size()) {
        throw std::invalid_argument("bad driver coefficient: '" + token + "'");
    }
    return TimeFunction::constant(value, horizon);
}

// Splits on ',' except inside a path token; coefficients never contain commas.
std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

DriverSpec parse_driver(const std::string& literal, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("parse_driver: horizon must be positive");
    if (literal == "zero") return DriverSpec::zero();

    const auto colon = literal.find(':');
    const std::string head = literal.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : literal.substr(colon + 1);

    if (head == "linear") {
        if (rest.empty()) throw std::invalid_argument("linear driver needs a nu coefficient, e.g. linear:0.3");
        return DriverSpec::linear(parse_coefficient(rest, horizon));
    }
    if (head == "kappa") {
        const auto args = split_args(rest);
        if (args.empty() || args.size() > 2) {
            throw std::invalid_argument("kappa driver takes mu[,nu], e.g. kappa:0.5,0");
        }
        TimeFunction mu = parse_coefficient(args[0], horizon);
        TimeFunction nu = args.size() == 2 ? parse_coefficient(args[1], horizon)
                                           : TimeFunction::constant(0.0, horizon);
        return DriverSpec::kappa_ignorance(std::move(mu), std::move(nu));
    }
    throw std::invalid_argument("unknown driver literal: '" + literal +
                                "' (expected zero | linear:<nu> | kappa:<mu>,<nu>)");
}

}  // namespace nlx
