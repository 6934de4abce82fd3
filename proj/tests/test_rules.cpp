#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "stratwelfare/cultures.hpp"
#include "stratwelfare/rules.hpp"

namespace sw = stratwelfare;

namespace {

std::vector<double> scores(const sw::ScoringVector& v) { return {v.scores().begin(), v.scores().end()}; }

bool has_no_last_place(const sw::Profile& p, sw::Candidate c) {
    for (const auto& b : p.ballots()) {
        if (b.bottom() == c) return false;
    }
    return true;
}

}  // namespace

TEST(ScoringVector, GeometricTwoMatchesPublishedExample) {
    EXPECT_EQ(scores(sw::make_scoring_vector(sw::RuleSpec::geometric(2.0), 5, 10)),
              (std::vector<double>{32, 16, 8, 4, 2}));
}

TEST(ScoringVector, ApprovalAndBorda) {
    EXPECT_EQ(scores(sw::make_scoring_vector(sw::RuleSpec::approval(2), 4, 1)), (std::vector<double>{1, 1, 0, 0}));
    EXPECT_EQ(scores(sw::make_scoring_vector(sw::RuleSpec::full_borda(), 4, 1)), (std::vector<double>{3, 2, 1, 0}));
    EXPECT_EQ(scores(sw::make_scoring_vector(sw::RuleSpec::borda(2), 5, 1)), (std::vector<double>{2, 1, 0, 0, 0}));
}

TEST(ScoringVector, NashExample) {
    const auto v = scores(sw::make_scoring_vector(sw::RuleSpec::nash(), 3, 2));
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[0], 0.6931, 1e-4);
    EXPECT_EQ(v[1], 0.0);
    EXPECT_NEAR(v[2], -1.3863, 1e-4);
    EXPECT_DOUBLE_EQ(v[2], -2.0 * std::log(2.0));
}

TEST(ScoringVector, ConcaveGeometric) {
    // m = 3, p = 0.5: top 1 - 0.5^3, then 1 - 0.5^2, bottom 1 - 0.5.
    EXPECT_EQ(scores(sw::make_scoring_vector(sw::RuleSpec::geometric(0.5), 3, 1)),
              (std::vector<double>{0.875, 0.75, 0.5}));
}

TEST(ScoringVector, FractionalAndFixedKClamp) {
    // floor(m/2), floor(m/4) clamped below by 1; fixed k clamped to m - 1.
    EXPECT_EQ(sw::resolve_k(sw::parse_rule("borda_m2"), 7), 3u);
    EXPECT_EQ(sw::resolve_k(sw::parse_rule("approval_m4"), 3), 1u);
    EXPECT_EQ(sw::resolve_k(sw::parse_rule("approval_m4"), 20), 5u);
    EXPECT_EQ(sw::resolve_k(sw::parse_rule("approval_5"), 4), 3u);
    EXPECT_EQ(sw::resolve_k(sw::parse_rule("borda_5"), 30), 5u);
    EXPECT_EQ(sw::resolve_k(sw::parse_rule("borda"), 30), 29u);
}

TEST(ScoringVector, Errors) {
    EXPECT_THROW(sw::make_scoring_vector(sw::RuleSpec::geometric(1.0), 5, 1), std::domain_error);
    EXPECT_THROW(sw::make_scoring_vector(sw::RuleSpec::geometric(-0.5), 5, 1), std::domain_error);
    EXPECT_THROW(sw::make_scoring_vector(sw::RuleSpec::full_borda(), 1, 1), std::domain_error);
    // log(1) = 0 = -n log(1): the Nash vector is constant at m = 2.
    EXPECT_THROW(sw::make_scoring_vector(sw::RuleSpec::nash(), 2, 3), std::domain_error);
    EXPECT_THROW(sw::parse_rule("geometric_1"), std::domain_error);
    EXPECT_THROW(sw::parse_rule("veto"), std::invalid_argument);
    EXPECT_THROW(sw::ScoringVector({1, 2, 0}, "bad"), std::domain_error);
}

TEST(ScoringVector, RosterIsValidForEveryM) {
    for (std::size_t m = 3; m <= 100; ++m) {
        for (const auto& r : sw::default_rule_roster()) {
            const auto v = sw::make_scoring_vector(r, m, 10);
            ASSERT_EQ(v.size(), m);
            for (std::size_t i = 0; i + 1 < m; ++i) ASSERT_GE(v.scores()[i], v.scores()[i + 1]) << r.name();
            ASSERT_GT(v.scores().front(), v.scores().back()) << r.name() << " m=" << m;
        }
    }
}

TEST(RuleNames, CanonicalRoundTrip) {
    const std::vector<std::string> expected = {"borda",        "borda_m2",      "borda_m4",      "borda_5",
                                               "approval_m2",  "approval_m4",   "approval_5",    "plurality",
                                               "geometric_2",  "geometric_1.5", "geometric_1.2", "geometric_0.8",
                                               "geometric_0.65", "geometric_0.5", "nash"};
    const auto roster = sw::default_rule_roster();
    ASSERT_EQ(roster.size(), 15u);
    for (std::size_t k = 0; k < roster.size(); ++k) {
        EXPECT_EQ(roster[k].name(), expected[k]);
        EXPECT_EQ(sw::parse_rule(expected[k]), roster[k]);
    }
    EXPECT_EQ(sw::parse_rule("approval_1"), sw::RuleSpec::plurality());
}

TEST(Tally, BordaHandExample) {
    const auto p = sw::Profile::from_ballots({{0, 1, 2}, {0, 2, 1}});
    const auto totals = sw::tally(p, sw::make_scoring_vector(sw::RuleSpec::full_borda(), 3, 2));
    EXPECT_EQ(totals, (std::vector<double>{4, 1, 1}));
}

TEST(Tally, SingleVoterTwoApproval) {
    const auto p = sw::Profile::from_ballots({{1, 0, 2}});
    EXPECT_EQ(sw::tally(p, sw::ScoringVector({1, 1, 0}, "2-approval")), (std::vector<double>{1, 1, 0}));
}

TEST(Tally, PluralityTotalsSumToN) {
    sw::RngStream rng(3, 3);
    for (int t = 0; t < 50; ++t) {
        const auto p = sw::sample_impartial(6, 9, rng);
        const auto totals = sw::tally(p, sw::make_scoring_vector(sw::RuleSpec::plurality(), 6, 9));
        double sum = 0;
        for (double x : totals) sum += x;
        EXPECT_EQ(sum, 9.0);
    }
}

TEST(Tally, LengthMismatchIsDomainError) {
    const auto p = sw::Profile::from_ballots({{0, 1, 2}});
    EXPECT_THROW(static_cast<void>(sw::tally(p, sw::ScoringVector({1, 0}, "x"))), std::domain_error);
}

TEST(Tally, EqualPositionMultisetsTieExactly) {
    // Candidates 0 and 1 receive the same positions from different voters;
    // their totals must be bit-identical for every rule.
    const auto p = sw::Profile::from_ballots({{0, 2, 1, 3}, {1, 3, 0, 2}, {2, 1, 3, 0}, {3, 0, 2, 1}});
    for (const auto& r : sw::default_rule_roster()) {
        const auto totals = sw::tally(p, sw::make_scoring_vector(r, 4, 4));
        EXPECT_EQ(totals[0], totals[1]) << r.name();
    }
}

TEST(Elect, Examples) {
    EXPECT_EQ(sw::elect(std::vector<double>{4, 1, 1}), 0u);
    EXPECT_EQ(sw::elect(std::vector<double>{3, 3, 1}), 0u);
    EXPECT_EQ(sw::elect(std::vector<double>{1, 2, 2}), 1u);
    EXPECT_THROW(static_cast<void>(sw::elect(std::vector<double>{})), std::domain_error);
}

TEST(Elect, AffineInvariance) {
    sw::RngStream rng(17, 2);
    const std::vector<double> scales = {1, 2, 3, 5};
    const std::vector<double> shifts = {-3, 0, 2};
    for (int t = 0; t < 300; ++t) {
        const std::size_t m = 3 + rng.uniform_index(6);
        const std::size_t n = 1 + rng.uniform_index(7);
        const auto p = sw::sample_impartial(m, n, rng);
        for (const auto& r : sw::default_rule_roster()) {
            const auto v = sw::make_scoring_vector(r, m, n);
            const auto w = sw::elect(sw::tally(p, v));
            const bool integral = std::all_of(v.scores().begin(), v.scores().end(),
                                              [](double s) { return s == std::floor(s) && std::fabs(s) < 1e6; });
            for (double a : scales) {
                for (double b : shifts) {
                    // Non-integral vectors only under exact transforms (power-of-two scale, no shift).
                    if (!integral && (b != 0 || (a != 1 && a != 2))) continue;
                    std::vector<double> s2;
                    for (double s : v.scores()) s2.push_back(a * s + b);
                    ASSERT_EQ(sw::elect(sw::tally(p, sw::ScoringVector(s2, "affine"))), w)
                        << r.name() << " a=" << a << " b=" << b;
                }
            }
            ASSERT_EQ(sw::elect(sw::tally(p, v)), w);
        }
    }
}

TEST(Elect, NashRuleNeverElectsACandidateWithALastPlace) {
    sw::RngStream rng(23, 4);
    int checked = 0;
    for (int t = 0; t < 2000; ++t) {
        const std::size_t m = 3 + rng.uniform_index(5);
        const std::size_t n = 2 + rng.uniform_index(6);
        const auto p = sw::sample_impartial(m, n, rng);
        bool exists = false;
        for (sw::Candidate c = 0; c < m; ++c) exists = exists || has_no_last_place(p, c);
        if (!exists) continue;
        ++checked;
        const auto w = sw::elect(sw::tally(p, sw::make_scoring_vector(sw::RuleSpec::nash(), m, n)));
        ASSERT_TRUE(has_no_last_place(p, w));
    }
    EXPECT_GT(checked, 1000);
}
