#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "cultures.hpp"
#include "exact_sum.hpp"
#include "manipulation.hpp"
#include "rng.hpp"
#include "rules.hpp"
#include "welfare.hpp"

namespace stratwelfare {

enum class Behaviour { sincere, manipulator };

inline constexpr Behaviour kAllBehaviours[] = {Behaviour::sincere, Behaviour::manipulator};

/// The strategic voter in experiments (the first voter).
inline constexpr std::size_t kManipulatorIndex = 0;

inline std::string_view behaviour_name(Behaviour b) {
    return b == Behaviour::sincere ? "sincere" : "manipulator";
}

inline Behaviour parse_behaviour(std::string_view name) {
    if (name == "sincere") return Behaviour::sincere;
    if (name == "manipulator") return Behaviour::manipulator;
    throw std::invalid_argument("unknown behaviour '" + std::string(name) + "'");
}

/// One measured cell: mean welfare over `trials` profiles.
struct ExperimentRecord {
    std::string culture;
    std::string rule;
    Behaviour behaviour = Behaviour::sincere;
    Measure measure = Measure::borda;
    std::size_t n = 0;
    std::size_t m = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] auto key() const {
        return std::make_tuple(std::string_view(culture), std::string_view(rule), behaviour_name(behaviour),
                               measure_name(measure), n, m);
    }

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

struct SweepConfig {
    CultureSpec culture;
    std::vector<RuleSpec> rules = default_rule_roster();
    std::vector<Behaviour> behaviours = {Behaviour::sincere, Behaviour::manipulator};
    std::vector<std::size_t> n_values;
    std::vector<std::size_t> m_values;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    std::string output;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    void validate() const {
        culture.validate();
        if (trials < 1) throw std::domain_error("trials must be at least 1");
        if (rules.empty()) throw std::domain_error("no rules configured");
        if (behaviours.empty()) throw std::domain_error("no behaviours configured");
        if (n_values.empty()) throw std::domain_error("no n values configured");
        if (m_values.empty()) throw std::domain_error("no m values configured");
        for (auto n : n_values) {
            if (n < 1) throw std::domain_error("n must be at least 1");
        }
        for (auto m : m_values) {
            if (m < 3) throw std::domain_error("m must be at least 3, got " + std::to_string(m));
        }
    }
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Stream namespace of a (culture, n, m) cell. Rules and behaviours are not
/// part of the key, so every rule sees the same profiles.
inline std::uint64_t cell_id(std::string_view culture, std::size_t n, std::size_t m) {
    return hash_text(std::string(culture) + "|" + std::to_string(n) + "|" + std::to_string(m));
}

/// The profile consumed by trial `trial` of a cell.
inline Profile cell_profile(const CultureSpec& culture, std::size_t n, std::size_t m, std::uint64_t seed,
                            std::uint64_t trial) {
    RngStream rng(seed, derive_stream(cell_id(culture.name, n, m), trial));
    return sample_profile(culture, m, n, rng);
}

/// Elected candidate for one rule and behaviour on the true profile.
inline Candidate elected_candidate(const Profile& p, const ScoringVector& v, Behaviour b) {
    if (b == Behaviour::sincere) {
        return elect(tally(p, v));
    }
    return optimal_manipulation(p, kManipulatorIndex, v).winner;
}

namespace detail {

// Welfare of each elected candidate, memoized per profile; always evaluated
// against the true profile.
class WelfareCache {
public:
    explicit WelfareCache(const Profile& p) : p_(p), cache_(p.m()), done_(p.m(), false) {}

    const WelfareTriple& operator()(Candidate c) {
        if (!done_[c]) {
            cache_[c] = evaluate_welfare(p_, c);
            done_[c] = true;
        }
        return cache_[c];
    }

private:
    const Profile& p_;
    std::vector<WelfareTriple> cache_;
    std::vector<bool> done_;
};

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < count && !failed; i = next++) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
    ExactSum sum;
    for (double x : xs) sum.add(x);
    const double count = static_cast<double>(xs.size());
    const double mean = sum.value() / count;
    if (xs.size() < 2) return {mean, 0.0};
    ExactSum sq;
    for (double x : xs) sq.add((x - mean) * (x - mean));
    const double var = sq.value() / (count - 1.0);
    return {mean, std::sqrt(var / count)};
}

}  // namespace detail

/// Runs `trials` paired profiles of one (culture, n, m) cell through every
/// rule and behaviour. Returns rules x behaviours x 3 records in that nesting
/// order. Results do not depend on `threads`.
inline std::vector<ExperimentRecord> run_cell(const CultureSpec& culture, const std::vector<RuleSpec>& rules,
                                              const std::vector<Behaviour>& behaviours, std::size_t n,
                                              std::size_t m, std::size_t trials, std::uint64_t seed,
                                              unsigned threads = 1) {
    culture.validate();
    if (trials < 1) throw std::domain_error("trials must be at least 1");
    std::vector<ScoringVector> vectors;
    vectors.reserve(rules.size());
    for (const auto& r : rules) vectors.push_back(make_scoring_vector(r, m, n));

    const std::size_t slots = rules.size() * behaviours.size();
    // samples[slot][measure][trial]
    std::vector<std::vector<std::vector<double>>> samples(
        slots, std::vector<std::vector<double>>(3, std::vector<double>(trials)));

    detail::parallel_for(trials, threads, [&](std::size_t t) {
        const Profile p = cell_profile(culture, n, m, seed, t);
        detail::WelfareCache welfare(p);
        for (std::size_t r = 0; r < rules.size(); ++r) {
            for (std::size_t b = 0; b < behaviours.size(); ++b) {
                const WelfareTriple& w = welfare(elected_candidate(p, vectors[r], behaviours[b]));
                auto& slot = samples[r * behaviours.size() + b];
                slot[0][t] = w.borda;
                slot[1][t] = w.rawls;
                slot[2][t] = w.nash;
            }
        }
    });

    std::vector<ExperimentRecord> out;
    out.reserve(slots * 3);
    for (std::size_t r = 0; r < rules.size(); ++r) {
        for (std::size_t b = 0; b < behaviours.size(); ++b) {
            for (std::size_t k = 0; k < 3; ++k) {
                const auto [mean, se] = detail::mean_and_stderr(samples[r * behaviours.size() + b][k]);
                out.push_back({culture.name, rules[r].name(), behaviours[b], kAllMeasures[k], n, m, mean, se, trials,
                               seed});
            }
        }
    }
    return out;
}

/// Single rule and behaviour: the three records borda, rawls, nash.
inline std::vector<ExperimentRecord> run_cell(const CultureSpec& culture, const RuleSpec& rule, Behaviour behaviour,
                                              std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed) {
    return run_cell(culture, std::vector<RuleSpec>{rule}, std::vector<Behaviour>{behaviour}, n, m, trials, seed);
}

inline void sort_records(std::vector<ExperimentRecord>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.key() < b.key(); });
}

inline constexpr std::string_view kCsvHeader = "culture,rule,behaviour,measure,n,m,mean,stderr,trials,seed";

/// CSV text: header plus one row per record in key order, values to 6 decimals.
inline std::string format_csv(std::vector<ExperimentRecord> records) {
    sort_records(records);
    std::string out(kCsvHeader);
    out += '\n';
    char num[64];
    for (const auto& r : records) {
        out += r.culture;
        out += ',';
        out += r.rule;
        out += ',';
        out += behaviour_name(r.behaviour);
        out += ',';
        out += measure_name(r.measure);
        out += ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',';
        std::snprintf(num, sizeof num, "%.6f", r.mean);
        out += num;
        out += ',';
        std::snprintf(num, sizeof num, "%.6f", r.stderr_mean);
        out += num;
        out += ',' + std::to_string(r.trials) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

inline void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    os << format_csv(records);
    os.flush();
    if (!os) throw std::ios_base::failure("failed writing '" + path + "'");
}

/// Every (n, m) cell of the config, all rules and behaviours, sorted by key.
/// Writes the CSV when config.output is set.
inline std::vector<ExperimentRecord> run_sweep(const SweepConfig& config) {
    config.validate();
    if (!config.output.empty()) {
        // Checked up front; a sweep can run for hours.
        std::ofstream probe(config.output, std::ios::binary | std::ios::app);
        if (!probe) throw std::ios_base::failure("cannot open '" + config.output + "' for writing");
    }
    std::vector<ExperimentRecord> records;
    for (std::size_t n : config.n_values) {
        for (std::size_t m : config.m_values) {
            auto cell = run_cell(config.culture, config.rules, config.behaviours, n, m, config.trials, config.seed,
                                 config.threads);
            records.insert(records.end(), std::make_move_iterator(cell.begin()), std::make_move_iterator(cell.end()));
        }
    }
    sort_records(records);
    if (!config.output.empty()) {
        write_csv(records, config.output);
    }
    return records;
}

}  // namespace stratwelfare
