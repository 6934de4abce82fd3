#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace stratwelfare {

enum class Measure { borda, rawls, nash };

inline constexpr Measure kAllMeasures[] = {Measure::borda, Measure::rawls, Measure::nash};

inline std::string_view measure_name(Measure w) {
    switch (w) {
        case Measure::borda: return "borda";
        case Measure::rawls: return "rawls";
        case Measure::nash: return "nash";
    }
    return "?";
}

inline Measure parse_measure(std::string_view name) {
    for (Measure w : kAllMeasures) {
        if (measure_name(w) == name) return w;
    }
    throw std::invalid_argument("unknown welfare measure '" + std::string(name) + "'");
}

/// Borda, Rawls and Nash welfare of one candidate, each normalized to [0, 100].
struct WelfareTriple {
    double borda = 0.0;
    double rawls = 0.0;
    double nash = 0.0;

    [[nodiscard]] double get(Measure w) const {
        switch (w) {
            case Measure::borda: return borda;
            case Measure::rawls: return rawls;
            case Measure::nash: return nash;
        }
        return 0.0;
    }

    friend bool operator==(const WelfareTriple&, const WelfareTriple&) = default;
};

namespace detail {

inline void require_welfare_domain(const Profile& p, Candidate c) {
    if (p.m() < 2) {
        throw std::domain_error("welfare measures need m >= 2");
    }
    if (c >= p.m()) {
        throw std::domain_error("candidate " + std::to_string(c) + " out of range for m=" + std::to_string(p.m()));
    }
}

}  // namespace detail

/// Borda points m - pos(i, c) that each voter gives c: top is m-1, bottom 0.
inline std::vector<std::size_t> borda_points(const Profile& p, Candidate c) {
    if (c >= p.m()) {
        throw std::domain_error("candidate " + std::to_string(c) + " out of range for m=" + std::to_string(p.m()));
    }
    std::vector<std::size_t> pts;
    pts.reserve(p.n());
    for (const auto& ballot : p.ballots()) {
        pts.push_back(p.m() - rank_of(ballot, c));
    }
    return pts;
}

namespace detail {

inline WelfareTriple welfare_from_points(const std::vector<std::size_t>& pts, std::size_t m) {
    const double span = static_cast<double>(m - 1);
    std::size_t sum = 0;
    std::size_t lo = pts.front();
    std::size_t hi = pts.front();
    for (std::size_t x : pts) {
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double n = static_cast<double>(pts.size());
    const double am = static_cast<double>(sum) / n;

    WelfareTriple w;
    w.borda = 100.0 * static_cast<double>(sum) / (span * n);
    w.rawls = 100.0 * static_cast<double>(lo) / span;
    if (lo == 0) {
        w.nash = 0.0;
    } else if (lo == hi) {
        w.nash = w.rawls;
    } else {
        double log_sum = 0.0;
        for (std::size_t x : pts) log_sum += std::log(static_cast<double>(x));
        // min <= GM <= AM holds exactly; exp/log rounding may stray by an ulp.
        const double gm = std::clamp(std::exp(log_sum / n), static_cast<double>(lo), am);
        w.nash = 100.0 * gm / span;
    }
    return w;
}

}  // namespace detail

/// All three measures of candidate c evaluated against profile p.
inline WelfareTriple evaluate_welfare(const Profile& p, Candidate c) {
    detail::require_welfare_domain(p, c);
    return detail::welfare_from_points(borda_points(p, c), p.m());
}

inline double borda_welfare(const Profile& p, Candidate c) { return evaluate_welfare(p, c).borda; }

inline double rawls_welfare(const Profile& p, Candidate c) { return evaluate_welfare(p, c).rawls; }

/// Normalized geometric mean of Borda points; a single last place gives exactly 0.
inline double nash_welfare(const Profile& p, Candidate c) { return evaluate_welfare(p, c).nash; }

}  // namespace stratwelfare
