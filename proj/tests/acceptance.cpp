// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stratwelfare/stratwelfare.hpp"

namespace sw = stratwelfare;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome manipulation_oracle() {
    sw::RngStream rng(kSeed, 1);
    std::size_t cases = 0, agree = 0;
    const std::size_t ms[] = {3, 4, 5};
    const std::size_t ns[] = {2, 3, 4};
    for (const auto& rule : sw::default_rule_roster()) {
        for (int t = 0; t < 1000; ++t) {
            const std::size_t m = ms[rng.uniform_index(3)];
            const std::size_t n = ns[rng.uniform_index(3)];
            const auto p = sw::sample_impartial(m, n, rng);
            const std::size_t i = rng.uniform_index(n);
            const auto v = sw::make_scoring_vector(rule, m, n);
            ++cases;
            agree += sw::optimal_manipulation(p, i, v).winner == sw::brute_force_manipulation(p, i, v);
        }
    }
    return {agree == cases, std::to_string(agree) + "/" + std::to_string(cases) + " instances agree"};
}

Outcome welfare_chain() {
    sw::RngStream rng(kSeed, 2);
    std::size_t bad_chain = 0, bad_zero = 0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t m = 2 + rng.uniform_index(19);
        const std::size_t n = 1 + rng.uniform_index(20);
        const auto p = sw::sample_impartial(m, n, rng);
        const auto c = static_cast<sw::Candidate>(rng.uniform_index(m));
        const auto w = sw::evaluate_welfare(p, c);
        if (!(w.rawls <= w.nash + 1e-9 && w.nash <= w.borda + 1e-9)) ++bad_chain;
        bool some_last = false;
        for (const auto& b : p.ballots()) some_last = some_last || b.bottom() == c;
        if ((w.nash == 0.0) != some_last) ++bad_zero;
    }
    return {bad_chain == 0 && bad_zero == 0,
            "chain violations " + std::to_string(bad_chain) + ", zero-iff-last violations " + std::to_string(bad_zero) +
                " over 10000 pairs"};
}

Outcome borda_optimality() {
    sw::RngStream rng(kSeed, 3);
    const auto v = sw::make_scoring_vector(sw::RuleSpec::full_borda(), 10, 10);
    std::size_t bad = 0;
    for (int t = 0; t < 10000; ++t) {
        const auto p = sw::sample_impartial(10, 10, rng);
        const auto winner = sw::elect(sw::tally(p, v));
        double best = 0.0;
        for (sw::Candidate c = 0; c < 10; ++c) best = std::max(best, sw::borda_welfare(p, c));
        if (sw::borda_welfare(p, winner) != best) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " of 10000 profiles where the Borda winner is not welfare-optimal"};
}

Outcome mallows_sampler() {
    const auto start = std::chrono::steady_clock::now();
    sw::RngStream rng(kSeed, 4);
    const std::size_t samples = 200000;
    double worst_tv = 0.0;
    for (double phi : {0.5, 0.8}) {
        const auto sigma = sw::uniform_ranking(3, rng);
        std::map<sw::Ranking, std::size_t> counts;
        for (std::size_t k = 0; k < samples; ++k) ++counts[sw::mallows_ranking(sigma, phi, rng)];
        std::map<sw::Ranking, double> closed;
        for (const auto& r : oracle::all_rankings(3)) closed[r] = sw::mallows_probability(sigma, phi, r);
        worst_tv = std::max(worst_tv, oracle::total_variation(counts, samples, closed));
    }
    double worst_sum = 0.0;
    for (std::size_t m = 1; m <= 5; ++m) {
        for (double phi : {0.05, 0.5, 0.8, 1.0}) {
            const auto sigma = sw::Ranking::identity(m);
            double total = 0.0;
            for (const auto& r : oracle::all_rankings(m)) total += sw::mallows_probability(sigma, phi, r);
            worst_sum = std::max(worst_sum, std::fabs(total - 1.0));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst_tv < 0.01 && worst_sum <= 1e-9 && secs < 60.0,
            "max TV " + fmt("%.5f", worst_tv) + ", max |sum-1| " + fmt("%.2e", worst_sum) + ", " + fmt("%.1f", secs) +
                " s"};
}

using Records = std::vector<sw::ExperimentRecord>;

const sw::ExperimentRecord& rec(const Records& rs, const std::string& rule, sw::Behaviour b, sw::Measure m) {
    for (const auto& r : rs) {
        if (r.rule == rule && r.behaviour == b && r.measure == m) return r;
    }
    throw std::logic_error("missing record for " + rule);
}

Records desk_cell(const sw::CultureSpec& culture) {
    const std::vector<sw::Behaviour> both(std::begin(sw::kAllBehaviours), std::end(sw::kAllBehaviours));
    return sw::run_cell(culture, sw::default_rule_roster(), both, 10, 20, 2000, kSeed, sw::resolve_threads(0));
}

Outcome ordinal_ic() {
    using sw::Behaviour;
    using sw::Measure;
    const auto rs = desk_cell(sw::CultureSpec::impartial());
    const auto roster = sw::default_rule_roster();
    bool a = true, b = true, c = true;
    const double borda_b = rec(rs, "borda", Behaviour::sincere, Measure::borda).mean;
    const double geo_r = rec(rs, "geometric_0.5", Behaviour::sincere, Measure::rawls).mean;
    const double plur_b = rec(rs, "plurality", Behaviour::sincere, Measure::borda).mean;
    for (const auto& r : roster) {
        const auto name = r.name();
        if (name != "borda" && rec(rs, name, Behaviour::sincere, Measure::borda).mean > borda_b) a = false;
        if (name != "geometric_0.5" && rec(rs, name, Behaviour::sincere, Measure::rawls).mean > geo_r) b = false;
        if (name != "plurality" && rec(rs, name, Behaviour::sincere, Measure::borda).mean < plur_b) c = false;
    }
    const auto& plur_m = rec(rs, "plurality", Behaviour::manipulator, Measure::borda);
    const auto& plur_s = rec(rs, "plurality", Behaviour::sincere, Measure::borda);
    const bool d = plur_m.mean >= plur_s.mean - 2 * plur_s.stderr_mean;
    const double drop_g05 = rec(rs, "geometric_0.5", Behaviour::sincere, Measure::rawls).mean -
                            rec(rs, "geometric_0.5", Behaviour::manipulator, Measure::rawls).mean;
    const double drop_g2 = rec(rs, "geometric_2", Behaviour::sincere, Measure::rawls).mean -
                           rec(rs, "geometric_2", Behaviour::manipulator, Measure::rawls).mean;
    const bool e = drop_g05 > drop_g2;
    const auto flag = [](bool x) { return x ? "ok" : "FAIL"; };
    return {a && b && c && d && e,
            std::string("(a) ") + flag(a) + " borda=" + fmt("%.3f", borda_b) + "; (b) " + flag(b) +
                " geo0.5 rawls=" + fmt("%.3f", geo_r) + "; (c) " + flag(c) + " plurality=" + fmt("%.3f", plur_b) +
                "; (d) " + flag(d) + " manip=" + fmt("%.3f", plur_m.mean) + " vs " + fmt("%.3f", plur_s.mean) +
                "-2*" + fmt("%.3f", plur_s.stderr_mean) + "; (e) " + flag(e) + " drops " + fmt("%.3f", drop_g05) +
                " vs " + fmt("%.3f", drop_g2)};
}

Outcome mallows_resistance() {
    using sw::Behaviour;
    using sw::Measure;
    const auto rs = desk_cell(sw::parse_culture("mallows_0.5"));
    const double g2 = rec(rs, "geometric_2", Behaviour::manipulator, Measure::borda).mean;
    const double nash = rec(rs, "nash", Behaviour::manipulator, Measure::borda).mean;
    const double g05 = rec(rs, "geometric_0.5", Behaviour::manipulator, Measure::borda).mean;
    return {g2 >= nash && g2 >= g05,
            "manipulated borda welfare geo2=" + fmt("%.3f", g2) + " nash=" + fmt("%.3f", nash) +
                " geo0.5=" + fmt("%.3f", g05)};
}

Outcome nash_veto() {
    sw::RngStream rng(kSeed, 7);
    const auto v = sw::make_scoring_vector(sw::RuleSpec::nash(), 5, 4);
    std::size_t qualifying = 0, bad = 0;
    while (qualifying < 10000) {
        const auto p = sw::sample_impartial(5, 4, rng);
        std::vector<bool> last(5, false);
        for (const auto& b : p.ballots()) last[b.bottom()] = true;
        bool exists = false;
        for (bool x : last) exists = exists || !x;
        if (!exists) continue;
        ++qualifying;
        if (last[sw::elect(sw::tally(p, v))]) ++bad;
    }
    return {bad == 0, std::to_string(bad) + " of 10000 qualifying profiles elect a candidate with a last place"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path();
    sw::SweepConfig cfg;
    cfg.culture = sw::CultureSpec::mixed_mallows();
    cfg.n_values = {5, 10};
    cfg.m_values = {3, 8, 12};
    cfg.trials = 200;
    cfg.seed = kSeed;
    cfg.threads = 1;
    const auto a = dir / "stratwelfare_accept_a.csv";
    const auto b = dir / "stratwelfare_accept_b.csv";
    const auto c = dir / "stratwelfare_accept_c.csv";
    cfg.output = a.string();
    sw::run_sweep(cfg);
    cfg.output = b.string();
    sw::run_sweep(cfg);
    cfg.output = c.string();
    cfg.threads = 4;
    sw::run_sweep(cfg);
    const auto sa = slurp(a), sb = slurp(b), sc = slurp(c);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    std::filesystem::remove(c);
    const bool repeat = sa == sb, parallel = sa == sc;
    return {repeat && parallel && !sa.empty(), std::string("repeat ") + (repeat ? "identical" : "DIFFERS") +
                                                   ", serial vs 4 threads " + (parallel ? "identical" : "DIFFERS") +
                                                   " (" + std::to_string(sa.size()) + " bytes)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"manipulation oracle equivalence", manipulation_oracle},
        {"welfare chain", welfare_chain},
        {"Borda rule maximizes Borda welfare", borda_optimality},
        {"Mallows sampler correctness", mallows_sampler},
        {"ordinal reproduction on ic", ordinal_ic},
        {"Mallows 0.5 resistance", mallows_resistance},
        {"Nash rule veto", nash_veto},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("criterion %zu [%s] %s: %s (%.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
