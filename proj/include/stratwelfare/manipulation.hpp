#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "exact_sum.hpp"
#include "rules.hpp"

namespace stratwelfare {

/// Outcome of the single-voter optimal strategy.
struct ManipulationResult {
    Ranking ballot;         ///< the vote actually cast
    Candidate winner = 0;   ///< elected under that vote
    bool improved = false;  ///< winner strictly preferred to the sincere winner
};

/// Scores the other voters give each candidate, kept exact so that adding the
/// manipulator's score reproduces tally() bit for bit.
class BaseScores {
public:
    BaseScores(std::span<const Ranking> others, const ScoringVector& v) : v_(&v), acc_(v.size()) {
        const std::size_t m = v.size();
        for (const auto& b : others) {
            if (b.size() != m) {
                throw std::domain_error("ballot length does not match scoring vector length");
            }
            for (std::size_t j = 0; j < m; ++j) {
                acc_[b[j]].add(v.scores()[j]);
            }
        }
    }

    [[nodiscard]] std::size_t m() const noexcept { return acc_.size(); }
    [[nodiscard]] const ScoringVector& vector() const noexcept { return *v_; }

    /// Total of d when the manipulator puts it at 1-based position pos.
    [[nodiscard]] double total_with(Candidate d, Position pos) const {
        return acc_[d].value_plus(v_->at_position(pos));
    }

    /// Winner when the manipulator casts ballot.
    [[nodiscard]] Candidate winner_with(const Ranking& ballot) const {
        std::vector<double> totals(m());
        for (std::size_t j = 0; j < m(); ++j) {
            totals[ballot[j]] = total_with(ballot[j], j + 1);
        }
        return elect(totals);
    }

    /// A ballot under which c is elected, or nullopt if none exists.
    ///
    /// c goes first (moving c up never hurts it, moving a rival down never
    /// helps the rival). Each rival d then accepts position j iff it stays
    /// below c's total, or ties it and loses the index tie-break. Acceptance
    /// is monotone in j because rounded sums are monotone, so each rival's
    /// acceptable positions form a suffix [first_ok(d), m]. Nested suffixes
    /// admit a perfect matching iff, sorted by first_ok, the k-th rival
    /// (0-based) has first_ok <= k + 2.
    [[nodiscard]] std::optional<Ranking> can_make_winner(Candidate c) const {
        const std::size_t m = this->m();
        if (c >= m) {
            throw std::domain_error("candidate " + std::to_string(c) + " out of range");
        }
        const double target = total_with(c, 1);

        struct Rival {
            Position first_ok;
            Candidate d;
        };
        std::vector<Rival> rivals;
        rivals.reserve(m - 1);
        for (Candidate d = 0; d < m; ++d) {
            if (d == c) continue;
            const auto accepts = [&](Position pos) {
                const double t = total_with(d, pos);
                return t < target || (t == target && c < d);
            };
            if (!accepts(m)) {
                return std::nullopt;
            }
            // Binary search for the smallest position in [2, m] that d accepts.
            Position lo = 2;
            Position hi = m;
            while (lo < hi) {
                const Position mid = lo + (hi - lo) / 2;
                if (accepts(mid)) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            rivals.push_back({lo, d});
        }
        std::sort(rivals.begin(), rivals.end(), [](const Rival& a, const Rival& b) {
            return a.first_ok != b.first_ok ? a.first_ok < b.first_ok : a.d < b.d;
        });
        std::vector<Candidate> order;
        order.reserve(m);
        order.push_back(c);
        for (std::size_t k = 0; k < rivals.size(); ++k) {
            if (rivals[k].first_ok > k + 2) {
                return std::nullopt;
            }
            order.push_back(rivals[k].d);
        }
        return Ranking(std::move(order));
    }

private:
    const ScoringVector* v_;
    std::vector<ExactSum> acc_;
};

/// Candidate c can be made the winner by some ballot of the extra voter; returns a witnessing ballot.
inline std::optional<Ranking> can_make_winner(std::span<const Ranking> others, const ScoringVector& v, Candidate c) {
    return BaseScores(others, v).can_make_winner(c);
}

/// Every candidate some single additional ballot can make the winner, ascending.
inline std::vector<Candidate> achievable_winners(std::span<const Ranking> others, const ScoringVector& v) {
    const BaseScores base(others, v);
    std::vector<Candidate> out;
    for (Candidate c = 0; c < v.size(); ++c) {
        if (base.can_make_winner(c)) {
            out.push_back(c);
        }
    }
    return out;
}

/// Voter i's optimal strategy given full knowledge of the other ballots.
///
/// Candidates are tried in i's true order; the first one that can be made
/// the winner is the optimum. Reaching the sincere winner first means no
/// improving vote exists, and the sincere ballot is kept.
inline ManipulationResult optimal_manipulation(const Profile& p, std::size_t i, const ScoringVector& v) {
    if (i >= p.n()) {
        throw std::out_of_range("voter index " + std::to_string(i) + " out of range for n=" + std::to_string(p.n()));
    }
    if (v.size() != p.m()) {
        throw std::domain_error("scoring vector length does not match profile");
    }
    const auto others = p.without(i);
    const BaseScores base(others, v);
    const Ranking& sincere = p[i];
    const Candidate sincere_winner = base.winner_with(sincere);
    for (Candidate c : sincere) {
        if (c == sincere_winner) {
            return {sincere, sincere_winner, false};
        }
        if (auto ballot = base.can_make_winner(c)) {
            return {std::move(*ballot), c, true};
        }
    }
    // Unreachable: the sincere winner appears in the sincere ranking.
    throw std::logic_error("optimal_manipulation: sincere winner not found in ballot");
}

inline constexpr std::size_t kBruteForceMaxCandidates = 8;

/// Oracle: tries all m! ballots for voter i and returns the elected winner
/// voter i likes best. Refuses m > 8.
inline Candidate brute_force_manipulation(const Profile& p, std::size_t i, const ScoringVector& v) {
    if (p.m() > kBruteForceMaxCandidates) {
        throw std::length_error("brute_force_manipulation: m=" + std::to_string(p.m()) + " exceeds the limit of " +
                                std::to_string(kBruteForceMaxCandidates));
    }
    if (i >= p.n()) {
        throw std::out_of_range("voter index out of range");
    }
    const auto truth = positions(p[i]);
    std::vector<Candidate> order(p.m());
    std::iota(order.begin(), order.end(), Candidate{0});
    Candidate best = p[i].bottom();
    do {
        const Candidate w = elect(tally(p.with_ballot(i, Ranking(order)), v));
        if (truth[w] < truth[best]) {
            best = w;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace stratwelfare
