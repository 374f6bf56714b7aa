#include "nlx/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlx {

TimeFunction::TimeFunction(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw std::invalid_argument("TimeFunction: no samples");
    }
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i - 1].first < samples_[i].first)) {
            throw std::invalid_argument("TimeFunction: sample times must be strictly increasing");
        }
    }
    for (const auto& [t, v] : samples_) {
        if (!std::isfinite(t) || !std::isfinite(v)) {
            throw std::invalid_argument("TimeFunction: non-finite sample");
        }
    }
}

TimeFunction TimeFunction::constant(double value, double horizon) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("TimeFunction::constant: horizon must be positive");
    }
    return TimeFunction({{0.0, value}, {horizon, value}});
}

double TimeFunction::operator()(double t) const {
    if (samples_.size() == 1) {
        if (t != samples_.front().first) {
            throw std::domain_error("TimeFunction: t outside sampled domain");
        }
        return samples_.front().second;
    }
    if (t < domain_lo() || t > domain_hi()) {
        throw std::domain_error("TimeFunction: t outside sampled domain");
    }
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double x, const Sample& s) { return x < s.first; });
    if (it == samples_.end()) return samples_.back().second;
    if (it == samples_.begin()) return samples_.front().second;
    const auto& [t1, v1] = *it;
    const auto& [t0, v0] = *(it - 1);
    const double w = (t - t0) / (t1 - t0);
    return v0 + w * (v1 - v0);
}

double TimeFunction::integral(double t0, double t1) const {
    if (t1 < t0) return -integral(t1, t0);
    if (!covers(t0, t1)) {
        throw std::domain_error("TimeFunction::integral: range outside sampled domain");
    }
    double total = 0.0;
    double prev_t = t0;
    double prev_v = (*this)(t0);
    for (const auto& [t, v] : samples_) {
        if (t <= t0) continue;
        if (t >= t1) break;
        total += 0.5 * (prev_v + v) * (t - prev_t);
        prev_t = t;
        prev_v = v;
    }
    total += 0.5 * (prev_v + (*this)(t1)) * (t1 - prev_t);
    return total;
}

double TimeFunction::sup_abs() const {
    double m = 0.0;
    for (const auto& [t, v] : samples_) m = std::max(m, std::abs(v));
    return m;
}

bool TimeFunction::is_constant() const {
    for (const auto& [t, v] : samples_) {
        if (v != samples_.front().second) return false;
    }
    return true;
}

}  // namespace nlx
