#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "stratwelfare/cultures.hpp"
#include "stratwelfare/rules.hpp"
#include "stratwelfare/welfare.hpp"

namespace sw = stratwelfare;

TEST(BordaPoints, Examples) {
    const auto top = sw::Profile::from_ballots({{0, 1, 2, 3, 4}, {0, 2, 1, 4, 3}, {0, 4, 3, 2, 1}, {0, 1, 3, 2, 4}});
    EXPECT_EQ(sw::borda_points(top, 0), (std::vector<std::size_t>{4, 4, 4, 4}));
    const auto bottom = sw::Profile::from_ballots({{1, 2, 0}, {2, 1, 0}});
    EXPECT_EQ(sw::borda_points(bottom, 0), (std::vector<std::size_t>{0, 0}));
    const auto mixed = sw::Profile::from_ballots({{0, 1, 2}, {1, 2, 0}});
    EXPECT_EQ(sw::borda_points(mixed, 0), (std::vector<std::size_t>{2, 0}));
    EXPECT_THROW(static_cast<void>(sw::borda_points(mixed, 3)), std::domain_error);
}

TEST(Welfare, UnanimousTopAndBottom) {
    const auto p = sw::Profile::from_ballots({{2, 0, 1}, {2, 1, 0}, {2, 0, 1}});
    EXPECT_EQ(sw::evaluate_welfare(p, 2), (sw::WelfareTriple{100, 100, 100}));
    const auto q = sw::Profile::from_ballots({{0, 1, 2}, {1, 0, 2}});
    EXPECT_EQ(sw::evaluate_welfare(q, 2), (sw::WelfareTriple{0, 0, 0}));
}

TEST(Welfare, HandExamples) {
    // n=2, m=3, positions (1,3): Borda 100*(2+0)/(2*2) = 50.
    const auto p = sw::Profile::from_ballots({{0, 1, 2}, {1, 2, 0}});
    EXPECT_DOUBLE_EQ(sw::borda_welfare(p, 0), 50.0);
    EXPECT_EQ(sw::rawls_welfare(p, 0), 0.0);
    EXPECT_EQ(sw::nash_welfare(p, 0), 0.0);

    // n=3, m=5, worst position 3: Rawls 100*(5-3)/4 = 50.
    const auto q = sw::Profile::from_ballots({{0, 1, 2, 3, 4}, {1, 0, 2, 3, 4}, {1, 2, 0, 3, 4}});
    EXPECT_DOUBLE_EQ(sw::rawls_welfare(q, 0), 50.0);

    // n=2, m=3, positions (1,2): Nash 100*sqrt(2*1)/2.
    const auto r = sw::Profile::from_ballots({{0, 1, 2}, {1, 0, 2}});
    EXPECT_NEAR(sw::nash_welfare(r, 0), 70.71, 0.005);
    EXPECT_DOUBLE_EQ(sw::nash_welfare(r, 0), 100.0 * std::sqrt(2.0) / 2.0);
}

TEST(Welfare, RequiresTwoCandidates) {
    const auto p = sw::Profile::from_ballots({{0}, {0}});
    EXPECT_THROW(static_cast<void>(sw::borda_welfare(p, 0)), std::domain_error);
    EXPECT_THROW(static_cast<void>(sw::rawls_welfare(p, 0)), std::domain_error);
    EXPECT_THROW(static_cast<void>(sw::nash_welfare(p, 0)), std::domain_error);
}

TEST(Welfare, MatchesDirectFormulasAndChain) {
    sw::RngStream rng(41, 0);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t m = 2 + rng.uniform_index(15);
        const std::size_t n = 1 + rng.uniform_index(20);
        const auto p = sw::sample_impartial(m, n, rng);
        const auto c = static_cast<sw::Candidate>(rng.uniform_index(m));
        const auto pts = oracle::borda_points({p.ballots().begin(), p.ballots().end()}, c);
        double sum = 0, mn = 1e300, prod = 1;
        for (double x : pts) {
            sum += x;
            mn = std::min(mn, x);
            prod *= x;
        }
        const double dm = static_cast<double>(m - 1);
        const auto w = sw::evaluate_welfare(p, c);
        ASSERT_NEAR(w.borda, 100 * sum / (dm * static_cast<double>(n)), 1e-9);
        ASSERT_NEAR(w.rawls, 100 * mn / dm, 1e-9);
        ASSERT_NEAR(w.nash, 100 * std::pow(prod, 1.0 / static_cast<double>(n)) / dm, 1e-9);
        ASSERT_LE(w.rawls, w.nash + 1e-9);
        ASSERT_LE(w.nash, w.borda + 1e-9);
        ASSERT_EQ(w.nash > 0, mn > 0);
    }
}

TEST(Welfare, BordaWelfareArgmaxEqualsBordaRuleArgmax) {
    sw::RngStream rng(43, 0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t m = 3 + rng.uniform_index(10);
        const std::size_t n = 1 + rng.uniform_index(12);
        const auto p = sw::sample_impartial(m, n, rng);
        const auto totals = sw::tally(p, sw::make_scoring_vector(sw::RuleSpec::full_borda(), m, n));
        std::vector<double> welfare(m);
        for (sw::Candidate c = 0; c < m; ++c) welfare[c] = sw::borda_welfare(p, c);
        const double best_total = *std::max_element(totals.begin(), totals.end());
        const double best_welfare = *std::max_element(welfare.begin(), welfare.end());
        std::set<sw::Candidate> a, b;
        for (sw::Candidate c = 0; c < m; ++c) {
            if (totals[c] == best_total) a.insert(c);
            if (welfare[c] == best_welfare) b.insert(c);
        }
        ASSERT_EQ(a, b);
    }
}

TEST(Welfare, InvariantUnderRelabeling) {
    sw::RngStream rng(47, 0);
    for (int t = 0; t < 300; ++t) {
        const std::size_t m = 2 + rng.uniform_index(8);
        const std::size_t n = 1 + rng.uniform_index(8);
        const auto p = sw::sample_impartial(m, n, rng);
        const auto relabel = sw::uniform_ranking(m, rng);  // c -> relabel[c]
        std::vector<sw::Ranking> ballots;
        for (const auto& b : p.ballots()) {
            std::vector<sw::Candidate> order;
            for (auto c : b) order.push_back(relabel[c]);
            ballots.emplace_back(order);
        }
        const sw::Profile q(ballots);
        for (sw::Candidate c = 0; c < m; ++c) {
            ASSERT_EQ(sw::evaluate_welfare(p, c), sw::evaluate_welfare(q, relabel[c]));
        }
    }
}
