#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "exact_sum.hpp"

namespace stratwelfare {

enum class RuleFamily { approval, borda, geometric, nash };

/// How a truncation parameter k is derived from m.
enum class KMode {
    absolute,     ///< k = param, clamped to [1, m-1]
    fraction,     ///< k = floor(param * m), clamped to [1, m-1]
    all_but_last  ///< k = m - 1 (full Borda)
};

/// A rule family plus its parameter: k (approval, borda) or p (geometric).
struct RuleSpec {
    RuleFamily family = RuleFamily::borda;
    double param = 0.0;
    KMode k_mode = KMode::all_but_last;

    static RuleSpec approval(double k, KMode mode = KMode::absolute) { return {RuleFamily::approval, k, mode}; }
    static RuleSpec borda(double k, KMode mode = KMode::absolute) { return {RuleFamily::borda, k, mode}; }
    static RuleSpec full_borda() { return {RuleFamily::borda, 0.0, KMode::all_but_last}; }
    static RuleSpec plurality() { return approval(1); }
    static RuleSpec geometric(double p) { return {RuleFamily::geometric, p, KMode::absolute}; }
    static RuleSpec nash() { return {RuleFamily::nash, 0.0, KMode::absolute}; }

    /// Canonical name used on the command line and in CSV output.
    [[nodiscard]] std::string name() const;

    friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

namespace detail {

// Shortest round-trippable decimal ("1.5", "0.65", "2").
inline std::string short_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double& out) {
    if (text.empty()) {
        return false;
    }
    std::string s(text);
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    is >> out;
    return !is.fail() && is.eof();
}

}  // namespace detail

inline std::string RuleSpec::name() const {
    const auto k_suffix = [this]() -> std::string {
        switch (k_mode) {
            case KMode::all_but_last: return "";
            case KMode::fraction:
                if (param == 0.5) return "_m2";
                if (param == 0.25) return "_m4";
                return "_frac" + detail::short_number(param);
            case KMode::absolute: return "_" + detail::short_number(param);
        }
        return "";
    };
    switch (family) {
        case RuleFamily::approval:
            if (k_mode == KMode::absolute && param == 1.0) return "plurality";
            return "approval" + k_suffix();
        case RuleFamily::borda: return "borda" + k_suffix();
        case RuleFamily::geometric: return "geometric_" + detail::short_number(param);
        case RuleFamily::nash: return "nash";
    }
    return "?";
}

/// Parses a canonical rule name (see default_rule_roster) or one of the
/// general forms `approval_<k>`, `borda_<k>`, `geometric_<p>`.
inline RuleSpec parse_rule(std::string_view name) {
    const auto fail = [&]() -> RuleSpec {
        throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
    };
    if (name == "borda") return RuleSpec::full_borda();
    if (name == "nash") return RuleSpec::nash();
    if (name == "plurality") return RuleSpec::plurality();
    const auto underscore = name.find('_');
    if (underscore == std::string_view::npos) return fail();
    const auto family = name.substr(0, underscore);
    const auto arg = name.substr(underscore + 1);
    if (family == "approval" || family == "borda") {
        const RuleFamily f = family == "approval" ? RuleFamily::approval : RuleFamily::borda;
        if (arg == "m2") return {f, 0.5, KMode::fraction};
        if (arg == "m4") return {f, 0.25, KMode::fraction};
        double k = 0.0;
        if (!detail::parse_double(arg, k) || k < 1.0 || k != std::floor(k)) return fail();
        return {f, k, KMode::absolute};
    }
    if (family == "geometric") {
        double p = 0.0;
        if (!detail::parse_double(arg, p)) return fail();
        if (!(p > 0.0) || p == 1.0) {
            throw std::domain_error("geometric rule needs p > 0 and p != 1, got " + std::string(arg));
        }
        return RuleSpec::geometric(p);
    }
    return fail();
}

/// The fifteen rules of the experimental roster, in canonical order.
inline std::vector<RuleSpec> default_rule_roster() {
    return {
        RuleSpec::full_borda(),
        RuleSpec::borda(0.5, KMode::fraction),
        RuleSpec::borda(0.25, KMode::fraction),
        RuleSpec::borda(5),
        RuleSpec::approval(0.5, KMode::fraction),
        RuleSpec::approval(0.25, KMode::fraction),
        RuleSpec::approval(5),
        RuleSpec::plurality(),
        RuleSpec::geometric(2.0),
        RuleSpec::geometric(1.5),
        RuleSpec::geometric(1.2),
        RuleSpec::geometric(0.8),
        RuleSpec::geometric(0.65),
        RuleSpec::geometric(0.5),
        RuleSpec::nash(),
    };
}

/// Resolves the truncation parameter of an approval or Borda rule for m candidates.
inline std::size_t resolve_k(const RuleSpec& spec, std::size_t m) {
    if (m < 2) {
        throw std::domain_error("scoring rules need m >= 2");
    }
    double k = 0.0;
    switch (spec.k_mode) {
        case KMode::all_but_last: return m - 1;
        case KMode::fraction: k = std::floor(spec.param * static_cast<double>(m)); break;
        case KMode::absolute: k = spec.param; break;
    }
    k = std::clamp(k, 1.0, static_cast<double>(m - 1));
    return static_cast<std::size_t>(k);
}

/// Non-increasing score sequence s_1..s_m with s_1 > s_m.
class ScoringVector {
public:
    ScoringVector(std::vector<double> scores, std::string label)
        : scores_(std::move(scores)), label_(std::move(label)) {
        if (scores_.size() < 2) {
            throw std::domain_error("scoring vector needs m >= 2");
        }
        for (std::size_t i = 0; i + 1 < scores_.size(); ++i) {
            if (!(scores_[i] >= scores_[i + 1])) {
                throw std::domain_error("scoring vector " + label_ + " is not non-increasing at position " +
                                        std::to_string(i + 1));
            }
        }
        if (!(scores_.front() > scores_.back())) {
            throw std::domain_error("scoring vector " + label_ + " is constant");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return scores_.size(); }
    /// Score for 1-based position pos.
    [[nodiscard]] double at_position(Position pos) const { return scores_[pos - 1]; }
    [[nodiscard]] std::span<const double> scores() const noexcept { return scores_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

private:
    std::vector<double> scores_;
    std::string label_;
};

inline ScoringVector make_scoring_vector(const RuleSpec& spec, std::size_t m, std::size_t n) {
    if (m < 2) {
        throw std::domain_error("make_scoring_vector: m must be at least 2");
    }
    if (n < 1) {
        throw std::domain_error("make_scoring_vector: n must be at least 1");
    }
    std::vector<double> s(m);
    switch (spec.family) {
        case RuleFamily::approval: {
            const std::size_t k = resolve_k(spec, m);
            for (std::size_t i = 1; i <= m; ++i) s[i - 1] = i <= k ? 1.0 : 0.0;
            break;
        }
        case RuleFamily::borda: {
            const std::size_t k = resolve_k(spec, m);
            for (std::size_t i = 1; i <= m; ++i) s[i - 1] = i <= k ? static_cast<double>(k - i + 1) : 0.0;
            break;
        }
        case RuleFamily::geometric: {
            const double p = spec.param;
            if (!(p > 0.0) || p == 1.0) {
                throw std::domain_error("geometric rule needs p > 0 and p != 1");
            }
            // Exponents count from the bottom of the ballot: the top position
            // scores p^m (convex, p > 1) or 1 - p^m (concave, 0 < p < 1), the
            // bottom p or 1 - p. For m=5, p=2 this is 32,16,8,4,2.
            for (std::size_t i = 1; i <= m; ++i) {
                const double pe = std::pow(p, static_cast<double>(m - i + 1));
                s[i - 1] = p > 1.0 ? pe : 1.0 - pe;
            }
            break;
        }
        case RuleFamily::nash: {
            for (std::size_t i = 1; i < m; ++i) s[i - 1] = std::log(static_cast<double>(m - i));
            s[m - 1] = -static_cast<double>(n) * std::log(static_cast<double>(m - 1));
            break;
        }
    }
    return ScoringVector(std::move(s), spec.name());
}

/// Score totals per candidate. Each total is the correctly rounded sum of
/// the candidate's scores, so equal position multisets give equal totals.
inline std::vector<double> tally(std::span<const Ranking> ballots, const ScoringVector& v) {
    const std::size_t m = v.size();
    std::vector<ExactSum> acc(m);
    for (const auto& b : ballots) {
        if (b.size() != m) {
            throw std::domain_error("tally: ballot length " + std::to_string(b.size()) +
                                    " does not match scoring vector length " + std::to_string(m));
        }
        for (std::size_t j = 0; j < m; ++j) {
            acc[b[j]].add(v.scores()[j]);
        }
    }
    std::vector<double> totals(m);
    for (std::size_t c = 0; c < m; ++c) {
        totals[c] = acc[c].value();
    }
    return totals;
}

inline std::vector<double> tally(const Profile& p, const ScoringVector& v) { return tally(p.ballots(), v); }

/// Smallest index among the maximal totals.
inline Candidate elect(std::span<const double> totals) {
    if (totals.empty()) {
        throw std::domain_error("elect: no candidates");
    }
    Candidate best = 0;
    for (Candidate c = 1; c < totals.size(); ++c) {
        if (totals[c] > totals[best]) {
            best = c;
        }
    }
    return best;
}

inline Candidate elect(const Profile& p, const ScoringVector& v) { return elect(tally(p, v)); }

}  // namespace stratwelfare
