#include "nlx/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nlx {

namespace {

// Residual floor on Choquet gap estimates: fixed-point and summation dust
// from the threshold solves, far below any quadrature scale of interest.
constexpr double kChoquetDustFloor = 1e-12;

int env_thread_cap() {
    const char* raw = std::getenv("NLX_THREADS");
    if (raw == nullptr) return 1;
    const int v = std::atoi(raw);
    if (v <= 1) return 1;  // 0 = sequential reference mode
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? v : std::min(v, static_cast<int>(hw));
}

}  // namespace

bool Capacity::UnionLess::operator()(const std::vector<Interval>& a,
                                     const std::vector<Interval>& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](const Interval& x, const Interval& y) {
            if (x.lo != y.lo) return x.lo < y.lo;
            return x.hi < y.hi;
        });
}

Capacity::Capacity(DriverSpec driver, double T, int n_steps)
    : driver_(std::move(driver)), T_(T), n_steps_(n_steps) {
    if (!(T > 0.0)) throw std::invalid_argument("Capacity: T must be positive");
    if (n_steps < 1) throw std::invalid_argument("Capacity: n_steps must be >= 1");
}

double Capacity::solve_union(const std::vector<Interval>& intervals) const {
    const TerminalClaim ind = TerminalClaim::indicator_of(intervals);
    return g_expectation(ind, driver_, T_, n_steps_);
}

double Capacity::operator()(const std::vector<Interval>& intervals) const {
    auto it = cache_.find(intervals);
    if (it != cache_.end()) return it->second;
    const double v = solve_union(intervals);
    cache_.emplace(intervals, v);
    return v;
}

std::vector<double> Capacity::evaluate_many(
    const std::vector<std::vector<Interval>>& unions) const {
    std::vector<double> values(unions.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < unions.size(); ++i) {
        auto it = cache_.find(unions[i]);
        if (it != cache_.end()) {
            values[i] = it->second;
        } else {
            // Dedupe against earlier pending entries so each distinct union
            // is solved once.
            bool dup = false;
            for (std::size_t p : pending) {
                if (!UnionLess{}(unions[p], unions[i]) && !UnionLess{}(unions[i], unions[p])) {
                    dup = true;
                    break;
                }
            }
            if (!dup) pending.push_back(i);
        }
    }

    const int threads = env_thread_cap();
    if (threads <= 1 || pending.size() < 2) {
        for (std::size_t p : pending) {
            const double v = solve_union(unions[p]);
            cache_.emplace(unions[p], v);
        }
    } else {
        std::vector<double> solved(pending.size());
        std::vector<std::thread> pool;
        const std::size_t workers = std::min<std::size_t>(threads, pending.size());
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t k = w; k < pending.size(); k += workers) {
                    solved[k] = solve_union(unions[pending[k]]);
                }
            });
        }
        for (auto& th : pool) th.join();
        for (std::size_t k = 0; k < pending.size(); ++k) {
            cache_.emplace(unions[pending[k]], solved[k]);
        }
    }

    for (std::size_t i = 0; i < unions.size(); ++i) {
        values[i] = cache_.at(unions[i]);
    }
    return values;
}

namespace {

// Composed layer-cake value for midpoint capacities: the two-branch integral
//   int_{f_min}^{0} (V - 1) ds + int_{max(0, f_min)}^{f_max} V ds
// equals f_min + h * sum(V) because the -1 branch is constant and integrates
// exactly; only V is sampled. Summation runs in ascending threshold order.
double compose_layers(double f_min, double h, const std::vector<double>& capacities) {
    double sum = 0.0;
    for (double v : capacities) sum += v;
    return f_min + h * sum;
}

std::vector<double> midpoints(double f_min, double f_max, int n) {
    const double h = (f_max - f_min) / n;
    std::vector<double> s(n);
    for (int k = 0; k < n; ++k) s[k] = f_min + (k + 0.5) * h;
    return s;
}

}  // namespace

ChoquetResult choquet_expectation(const Capacity& capacity, const TerminalClaim& f,
                                  int n_thresholds) {
    if (n_thresholds < 2) throw std::invalid_argument("choquet_expectation: n_thresholds >= 2");

    ChoquetResult res;
    res.n_thresholds = n_thresholds;

    const double f_min = f.f_min();
    const double f_max = f.f_max();
    if (f_max - f_min == 0.0) {
        res.value = f_min;  // single layer of zero height
        return res;
    }

    const int n_half = std::max(1, n_thresholds / 2);
    const auto s_full = midpoints(f_min, f_max, n_thresholds);
    const auto s_half = midpoints(f_min, f_max, n_half);

    std::vector<std::vector<Interval>> unions;
    unions.reserve(s_full.size() + s_half.size());
    for (double s : s_full) unions.push_back(f.superlevel_set(s));
    for (double s : s_half) unions.push_back(f.superlevel_set(s));
    const auto values = capacity.evaluate_many(unions);

    std::vector<double> v_full(values.begin(), values.begin() + n_thresholds);
    std::vector<double> v_half(values.begin() + n_thresholds, values.end());

    const double h = (f_max - f_min) / n_thresholds;
    res.value = compose_layers(f_min, h, v_full);
    const double value_half = compose_layers(f_min, (f_max - f_min) / n_half, v_half);
    res.quadrature_error_estimate = std::abs(res.value - value_half);

    res.per_threshold.reserve(n_thresholds);
    double partial = f_min;
    for (int k = 0; k < n_thresholds; ++k) {
        partial += h * v_full[k];
        res.per_threshold.push_back({s_full[k], v_full[k], partial});
    }
    return res;
}

AdditivityGaps additivity_gaps(const DriverSpec& driver, const TerminalClaim& f,
                               const TerminalClaim& h, double T, int n_steps,
                               int n_thresholds) {
    const auto comono = comonotonic_check(f, h, 201);
    if (!comono.comonotonic) {
        std::ostringstream msg;
        msg << "additivity_gaps: claims are not comonotonic (witness x=" << comono.witness->first
            << ", x'=" << comono.witness->second << ")";
        throw std::invalid_argument(msg.str());
    }

    const TerminalClaim joint = f + h;
    AdditivityGaps out;

    double g_gap_at[2];
    double cq_gap_at[2];
    double quad_sum[2];
    for (int k = 0; k < 2; ++k) {
        const int n = k == 0 ? n_steps : 2 * n_steps;
        const double ef = g_expectation(f, driver, T, n);
        const double eh = g_expectation(h, driver, T, n);
        const double ej = g_expectation(joint, driver, T, n);
        g_gap_at[k] = ej - ef - eh;

        Capacity cap(driver, T, n);
        const auto cf = choquet_expectation(cap, f, n_thresholds);
        const auto ch = choquet_expectation(cap, h, n_thresholds);
        const auto cj = choquet_expectation(cap, joint, n_thresholds);
        cq_gap_at[k] = cj.value - cf.value - ch.value;
        quad_sum[k] = cf.quadrature_error_estimate + ch.quadrature_error_estimate +
                      cj.quadrature_error_estimate;

        const double half = 0.5;
        out.e_g_f += half * ef;
        out.e_g_h += half * eh;
        out.e_g_joint += half * ej;
        out.choquet_f += half * cf.value;
        out.choquet_h += half * ch.value;
        out.choquet_joint += half * cj.value;
    }

    out.g_gap = 0.5 * (g_gap_at[0] + g_gap_at[1]);
    out.g_gap_estimate = std::abs(g_gap_at[1] - g_gap_at[0]);
    out.choquet_gap = 0.5 * (cq_gap_at[0] + cq_gap_at[1]);
    out.choquet_gap_estimate = std::abs(cq_gap_at[1] - cq_gap_at[0]) +
                               std::max(quad_sum[0], quad_sum[1]) + kChoquetDustFloor;
    return out;
}

}  // namespace nlx
