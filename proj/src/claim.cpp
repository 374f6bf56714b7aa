#include "nlx/claim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlx {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TerminalClaim::TerminalClaim(std::vector<ClaimPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("TerminalClaim: no pieces");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!std::isfinite(pieces_[i].breakpoint) || !std::isfinite(pieces_[i].left_value) ||
            !std::isfinite(pieces_[i].right_slope)) {
            throw std::invalid_argument("TerminalClaim: non-finite piece");
        }
        if (i > 0 && !(pieces_[i - 1].breakpoint < pieces_[i].breakpoint)) {
            throw std::invalid_argument("TerminalClaim: breakpoints must be strictly increasing");
        }
    }
    if (pieces_.back().right_slope != 0.0) {
        throw std::invalid_argument("TerminalClaim: last piece must have zero slope (bounded tails)");
    }

    // Extremes of a piecewise-linear function sit at piece endpoints; the
    // left tail is constant at the first left_value. Jumps within the dust
    // band count as continuity: combinators reconstruct continuity knots up
    // to rounding, and real jumps sit far above machine epsilon.
    constexpr double kJumpDust = 1e-12;
    f_min_ = f_max_ = pieces_.front().left_value;
    bool nondecreasing = true, nonincreasing = true;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double v = pieces_[i].left_value;
        f_min_ = std::min(f_min_, v);
        f_max_ = std::max(f_max_, v);
        if (pieces_[i].right_slope > 0.0) nonincreasing = false;
        if (pieces_[i].right_slope < 0.0) nondecreasing = false;
        if (i + 1 < pieces_.size()) {
            const double right_limit =
                v + pieces_[i].right_slope * (pieces_[i + 1].breakpoint - pieces_[i].breakpoint);
            f_min_ = std::min(f_min_, right_limit);
            f_max_ = std::max(f_max_, right_limit);
            const double jump = pieces_[i + 1].left_value - right_limit;
            if (jump > kJumpDust) nonincreasing = false;
            if (jump < -kJumpDust) nondecreasing = false;
        }
    }
    if (nondecreasing) {
        monotone_ = Monotonicity::Increasing;  // constants count as (weakly) increasing
    } else if (nonincreasing) {
        monotone_ = Monotonicity::Decreasing;
    } else {
        monotone_ = Monotonicity::None;
    }
}

double TerminalClaim::operator()(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const ClaimPiece& p) { return v < p.breakpoint; });
    if (it == pieces_.begin()) return pieces_.front().left_value;  // left tail
    const ClaimPiece& p = *(it - 1);
    return p.left_value + p.right_slope * (x - p.breakpoint);
}

std::vector<Interval> TerminalClaim::superlevel_set(double s) const {
    if (s <= f_min_) return {Interval{-kInf, kInf}};
    if (s > f_max_) return {};

    std::vector<Interval> out;
    auto add = [&out](double lo, double hi) {
        if (lo > hi) return;
        if (!out.empty() && lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, hi);
        } else {
            out.push_back({lo, hi});
        }
    };

    if (pieces_.front().left_value >= s) add(-kInf, pieces_.front().breakpoint);

    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const ClaimPiece& p = pieces_[i];
        const double end = i + 1 < pieces_.size() ? pieces_[i + 1].breakpoint : kInf;
        if (p.right_slope == 0.0) {
            if (p.left_value >= s) add(p.breakpoint, end);
            continue;
        }
        // f = left_value + slope * (x - breakpoint) on [breakpoint, end);
        // crossing at x*; the returned interval is the closure of the exact
        // solution within the piece.
        const double x_star = p.breakpoint + (s - p.left_value) / p.right_slope;
        if (p.right_slope > 0.0) {
            const double lo = std::max(p.breakpoint, x_star);
            if (lo < end) add(lo, end);
        } else {
            const double hi = std::min(end, x_star);
            if (p.left_value >= s && hi >= p.breakpoint) add(p.breakpoint, hi);
        }
    }
    return out;
}

TerminalClaim TerminalClaim::scaled(double factor) const {
    std::vector<ClaimPiece> p = pieces_;
    for (auto& q : p) {
        q.left_value *= factor;
        q.right_slope *= factor;
    }
    return TerminalClaim(std::move(p));
}

TerminalClaim TerminalClaim::shifted_value(double c) const {
    std::vector<ClaimPiece> p = pieces_;
    for (auto& q : p) q.left_value += c;
    return TerminalClaim(std::move(p));
}

TerminalClaim TerminalClaim::shifted_arg(double x0) const {
    std::vector<ClaimPiece> p = pieces_;
    for (auto& q : p) q.breakpoint -= x0;
    return TerminalClaim(std::move(p));
}

TerminalClaim operator+(const TerminalClaim& f, const TerminalClaim& g) {
    std::set<double> bps;
    for (const auto& p : f.pieces_) bps.insert(p.breakpoint);
    for (const auto& p : g.pieces_) bps.insert(p.breakpoint);

    auto slope_at = [](const TerminalClaim& c, double x) {
        auto it = std::upper_bound(c.pieces_.begin(), c.pieces_.end(), x,
                                   [](double v, const ClaimPiece& p) { return v < p.breakpoint; });
        if (it == c.pieces_.begin()) return 0.0;  // flat left tail
        return (it - 1)->right_slope;
    };

    std::vector<ClaimPiece> out;
    out.reserve(bps.size());
    for (double b : bps) {
        out.push_back({b, f(b) + g(b), slope_at(f, b) + slope_at(g, b)});
    }
    return TerminalClaim(std::move(out));
}

TerminalClaim TerminalClaim::constant(double c) {
    return TerminalClaim({{0.0, c, 0.0}});
}

TerminalClaim TerminalClaim::threshold(double a) {
    return TerminalClaim({{a - 1.0, 0.0, 0.0}, {a, 1.0, 0.0}});
}

TerminalClaim TerminalClaim::indicator(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("indicator: need a < b");
    return TerminalClaim({{a - 1.0, 0.0, 0.0}, {a, 1.0, 0.0}, {b, 0.0, 0.0}});
}

TerminalClaim TerminalClaim::identity_capped(double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("identity_capped: cap must be positive");
    return TerminalClaim({{-cap, -cap, 1.0}, {cap, cap, 0.0}});
}

TerminalClaim TerminalClaim::logistic(double k, int knots) {
    if (!(k > 0.0)) throw std::invalid_argument("logistic: k must be positive");
    if (knots < 2) throw std::invalid_argument("logistic: need at least two knots");
    // Knots span where the sigmoid is within ~8e-10 of its limits, so the
    // flat tails introduce no visible truncation.
    const double span = 21.0 / k;
    std::vector<double> xs(knots), vs(knots);
    for (int i = 0; i < knots; ++i) {
        xs[i] = -span + 2.0 * span * i / (knots - 1);
        vs[i] = 1.0 / (1.0 + std::exp(-k * xs[i]));
    }
    std::vector<ClaimPiece> p(knots);
    for (int i = 0; i < knots; ++i) {
        const double slope = i + 1 < knots ? (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]) : 0.0;
        p[i] = {xs[i], vs[i], slope};
    }
    return TerminalClaim(std::move(p));
}

TerminalClaim TerminalClaim::indicator_of(const std::vector<Interval>& intervals) {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (std::isnan(intervals[i].lo) || std::isnan(intervals[i].hi) ||
            intervals[i].lo > intervals[i].hi) {
            throw std::domain_error("indicator_of: malformed interval");
        }
        if (i > 0 && !(intervals[i].lo > intervals[i - 1].hi)) {
            throw std::domain_error("indicator_of: intervals must be disjoint and sorted");
        }
    }

    // Single-point intervals carry no mass under any law used here.
    std::vector<Interval> live;
    for (const auto& iv : intervals) {
        if (iv.lo < iv.hi) live.push_back(iv);
    }
    if (live.empty()) return constant(0.0);
    if (live.size() == 1 && live[0].lo == -kInf && live[0].hi == kInf) return constant(1.0);

    // Edge walk; a closed right end realizes as a drop at the endpoint.
    std::vector<std::pair<double, double>> events;  // (breakpoint, new value)
    for (const auto& iv : live) {
        if (std::isfinite(iv.lo)) events.push_back({iv.lo, 1.0});
        if (std::isfinite(iv.hi)) events.push_back({iv.hi, 0.0});
    }
    const double tail = live.front().lo == -kInf ? 1.0 : 0.0;

    std::vector<ClaimPiece> p;
    p.push_back({events.front().first - 1.0, tail, 0.0});
    for (const auto& [b, v] : events) p.push_back({b, v, 0.0});
    return TerminalClaim(std::move(p));
}

ComonotonicityResult comonotonic_check(const TerminalClaim& f, const TerminalClaim& h,
                                       int probe_points) {
    if (probe_points < 2) throw std::invalid_argument("comonotonic_check: probe_points >= 2");

    std::set<double> xs;
    for (const auto& p : f.pieces()) xs.insert(p.breakpoint);
    for (const auto& p : h.pieces()) xs.insert(p.breakpoint);
    const double lo = *xs.begin() - 1.0;
    const double hi = *xs.rbegin() + 1.0;
    for (int i = 0; i < probe_points; ++i) {
        xs.insert(lo + (hi - lo) * i / (probe_points - 1));
    }

    std::vector<double> x(xs.begin(), xs.end());
    std::vector<double> fv(x.size()), hv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        fv[i] = f(x[i]);
        hv[i] = h(x[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if ((fv[i] - fv[j]) * (hv[i] - hv[j]) < 0.0) {
                return {false, std::make_pair(x[i], x[j])};
            }
        }
    }
    return {true, std::nullopt};
}

TerminalClaim parse_claim(const std::string& literal) {
    if (!literal.empty() && literal[0] == '@') {
        const std::string path = literal.substr(1);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("claim file not found: " + path);
        nlohmann::json j;
        in >> j;
        const auto& bp = j.at("breakpoints");
        const auto& lv = j.at("left_values");
        const auto& rs = j.at("right_slopes");
        if (bp.size() != lv.size() || bp.size() != rs.size()) {
            throw std::invalid_argument("claim file arrays must have equal length: " + path);
        }
        std::vector<ClaimPiece> pieces;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            pieces.push_back({bp[i].get<double>(), lv[i].get<double>(), rs[i].get<double>()});
        }
        return TerminalClaim(std::move(pieces));
    }

    const auto colon = literal.find(':');
    const std::string head = literal.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : literal.substr(colon + 1);

    auto args = [&rest, &literal]() {
        std::vector<double> vals;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(item, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad claim parameter in '" + literal + "'");
            }
            if (pos != item.size()) throw std::invalid_argument("bad claim parameter in '" + literal + "'");
            vals.push_back(v);
        }
        return vals;
    }();

    auto expect = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi) {
            throw std::invalid_argument("claim '" + literal + "' has the wrong number of parameters");
        }
    };

    if (head == "threshold") {
        expect(1, 1);
        return TerminalClaim::threshold(args[0]);
    }
    if (head == "indicator") {
        expect(2, 2);
        return TerminalClaim::indicator(args[0], args[1]);
    }
    if (head == "identity") {
        expect(1, 1);
        return TerminalClaim::identity_capped(args[0]);
    }
    if (head == "logistic") {
        expect(1, 2);
        return args.size() == 2 ? TerminalClaim::logistic(args[0], static_cast<int>(args[1]))
                                : TerminalClaim::logistic(args[0]);
    }
    if (head == "constant") {
        expect(1, 1);
        return TerminalClaim::constant(args[0]);
    }
    throw std::invalid_argument(
        "unknown claim literal: '" + literal +
        "' (expected threshold:a | indicator:a,b | identity:cap | logistic:k[,knots] | constant:c | @file.json)");
}

}  // namespace nlx
