#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratwelfare {

/// 0-based candidate index. Lexicographic tie-breaking means "smallest index wins".
using Candidate = std::size_t;

/// 1-based ballot position: 1 is the top of the ballot, m the bottom.
using Position = std::size_t;

/// A strict preference order over m candidates, best first.
///
/// Construction validates the permutation invariant and throws
/// std::invalid_argument otherwise, so every live Ranking is well formed.
class Ranking {
public:
    Ranking() = default;

    explicit Ranking(std::vector<Candidate> order) : order_(std::move(order)) {
        if (order_.empty()) {
            throw std::invalid_argument("ranking must contain at least one candidate");
        }
        std::vector<bool> seen(order_.size(), false);
        for (Candidate c : order_) {
            if (c >= order_.size()) {
                throw std::invalid_argument("candidate " + std::to_string(c) +
                                            " out of range for m=" + std::to_string(order_.size()));
            }
            if (seen[c]) {
                throw std::invalid_argument("duplicate candidate " + std::to_string(c));
            }
            seen[c] = true;
        }
    }

    Ranking(std::initializer_list<Candidate> order) : Ranking(std::vector<Candidate>(order)) {}

    static Ranking identity(std::size_t m) {
        std::vector<Candidate> order(m);
        for (std::size_t j = 0; j < m; ++j) {
            order[j] = j;
        }
        return Ranking(std::move(order));
    }

    [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
    [[nodiscard]] Candidate operator[](std::size_t j) const { return order_[j]; }
    [[nodiscard]] Candidate top() const { return order_.front(); }
    [[nodiscard]] Candidate bottom() const { return order_.back(); }
    [[nodiscard]] std::span<const Candidate> order() const noexcept { return order_; }
    [[nodiscard]] auto begin() const noexcept { return order_.begin(); }
    [[nodiscard]] auto end() const noexcept { return order_.end(); }

    [[nodiscard]] Ranking reversed() const {
        return Ranking(std::vector<Candidate>(order_.rbegin(), order_.rend()));
    }

    friend bool operator==(const Ranking&, const Ranking&) = default;
    friend auto operator<=>(const Ranking&, const Ranking&) = default;

private:
    std::vector<Candidate> order_;
};

/// Position of candidate c in r, in [1, m].
inline Position rank_of(const Ranking& r, Candidate c) {
    if (c >= r.size()) {
        throw std::domain_error("candidate " + std::to_string(c) + " out of range for m=" +
                                std::to_string(r.size()));
    }
    const auto it = std::find(r.begin(), r.end(), c);
    return static_cast<Position>(it - r.begin()) + 1;
}

/// Inverse permutation: positions()[c] = rank_of(r, c).
inline std::vector<Position> positions(const Ranking& r) {
    std::vector<Position> pos(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        pos[r[j]] = j + 1;
    }
    return pos;
}

namespace detail {

inline std::uint64_t count_inversions(std::vector<std::size_t>& a, std::vector<std::size_t>& buf,
                                      std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) {
        return 0;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(a, buf, lo, mid) + count_inversions(a, buf, mid, hi);
    std::size_t i = lo;
    std::size_t j = mid;
    std::size_t k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += mid - i;
            buf[k++] = a[j++];
        } else {
            buf[k++] = a[i++];
        }
    }
    while (i < mid) buf[k++] = a[i++];
    while (j < hi) buf[k++] = a[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              a.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

}  // namespace detail

/// Number of candidate pairs ordered differently by a and b (merge-sort count, O(m log m)).
inline std::uint64_t kendall_tau(const Ranking& a, const Ranking& b) {
    if (a.size() != b.size()) {
        throw std::domain_error("kendall_tau: rankings over different candidate counts (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
    const auto pos_b = positions(b);
    std::vector<std::size_t> seq(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        seq[j] = pos_b[a[j]];
    }
    std::vector<std::size_t> buf(seq.size());
    return detail::count_inversions(seq, buf, 0, seq.size());
}

/// Checks raw ballots against the Ranking and Profile invariants and reports
/// every violation found; an empty result means the ballots are well formed.
inline std::vector<std::string> validate_profile(std::span<const std::vector<Candidate>> ballots) {
    std::vector<std::string> violations;
    if (ballots.empty()) {
        violations.emplace_back("profile has no ballots");
        return violations;
    }
    const std::size_t m = ballots.front().size();
    for (std::size_t i = 0; i < ballots.size(); ++i) {
        const auto& b = ballots[i];
        const std::string where = " in ballot " + std::to_string(i);
        if (b.size() != m) {
            violations.push_back("m mismatch" + where + ": length " + std::to_string(b.size()) +
                                 ", expected " + std::to_string(m));
        }
        if (b.empty()) {
            violations.push_back("empty ballot" + where.substr(1));
            continue;
        }
        std::vector<bool> seen(b.size(), false);
        for (Candidate c : b) {
            if (c >= b.size()) {
                violations.push_back("candidate " + std::to_string(c) + " out of range" + where);
            } else if (seen[c]) {
                violations.push_back("duplicate candidate " + std::to_string(c) + where);
            } else {
                seen[c] = true;
            }
        }
    }
    return violations;
}

/// n ballots over a common set of m candidates.
class Profile {
public:
    Profile() = default;

    explicit Profile(std::vector<Ranking> ballots) : ballots_(std::move(ballots)) {
        if (ballots_.empty()) {
            throw std::invalid_argument("profile must contain at least one ballot");
        }
        const std::size_t m = ballots_.front().size();
        for (std::size_t i = 0; i < ballots_.size(); ++i) {
            if (ballots_[i].size() != m) {
                throw std::invalid_argument("m mismatch in ballot " + std::to_string(i));
            }
        }
    }

    /// Builds a profile from raw ballots, reporting all violations at once.
    static Profile from_ballots(const std::vector<std::vector<Candidate>>& raw) {
        const auto violations = validate_profile(raw);
        if (!violations.empty()) {
            std::string msg = "invalid profile:";
            for (const auto& v : violations) {
                msg += "\n  " + v;
            }
            throw std::invalid_argument(msg);
        }
        std::vector<Ranking> ballots;
        ballots.reserve(raw.size());
        for (const auto& b : raw) {
            ballots.emplace_back(b);
        }
        return Profile(std::move(ballots));
    }

    [[nodiscard]] std::size_t n() const noexcept { return ballots_.size(); }
    [[nodiscard]] std::size_t m() const noexcept { return ballots_.empty() ? 0 : ballots_.front().size(); }
    [[nodiscard]] const Ranking& operator[](std::size_t i) const { return ballots_[i]; }
    [[nodiscard]] std::span<const Ranking> ballots() const noexcept { return ballots_; }

    /// Copy of this profile with ballot i replaced.
    [[nodiscard]] Profile with_ballot(std::size_t i, Ranking ballot) const {
        if (i >= n()) {
            throw std::out_of_range("voter index " + std::to_string(i) + " out of range");
        }
        if (ballot.size() != m()) {
            throw std::domain_error("replacement ballot has wrong candidate count");
        }
        Profile copy = *this;
        copy.ballots_[i] = std::move(ballot);
        return copy;
    }

    /// Every ballot except voter i's (may be empty when n = 1).
    [[nodiscard]] std::vector<Ranking> without(std::size_t i) const {
        if (i >= n()) {
            throw std::out_of_range("voter index " + std::to_string(i) + " out of range");
        }
        std::vector<Ranking> rest;
        rest.reserve(n() - 1);
        for (std::size_t k = 0; k < n(); ++k) {
            if (k != i) {
                rest.push_back(ballots_[k]);
            }
        }
        return rest;
    }

    friend bool operator==(const Profile&, const Profile&) = default;

private:
    std::vector<Ranking> ballots_;
};

}  // namespace stratwelfare
