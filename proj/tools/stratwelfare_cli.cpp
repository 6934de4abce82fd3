// Command-line front end: sweeps, profile sampling, single-profile
// manipulation inspection, and name listings.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or validation failure.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stratwelfare/stratwelfare.hpp"

namespace sw = stratwelfare;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string names_footer() {
    std::string out = "Rules:";
    for (const auto& r : sw::default_rule_roster()) out += " " + r.name();
    out += "\nCultures:";
    for (const auto& c : sw::culture_names()) out += " " + c;
    out += "\nWelfare measures: borda rawls nash\nBehaviours: sincere manipulator\n";
    return out;
}

std::string format_candidates(const std::vector<sw::Candidate>& cs) {
    std::string out;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(cs[k]);
    }
    return out;
}

std::string format_welfare(const sw::WelfareTriple& w) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << "borda=" << w.borda << " rawls=" << w.rawls << " nash=" << w.nash;
    return os.str();
}

// Options shared by sweep and sample that describe the culture.
struct CultureFlags {
    std::string culture;
    std::string ballots;
    std::string mixture;
    std::string sigma;
    bool break_ties = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--culture", culture, "Culture name (see list below)");
        cmd.add_option("--ballots", ballots, "Preflib strict-order file for bag cultures");
        cmd.add_option("--mixture", mixture, "Mallows mixture parameter file for the sushi culture");
        cmd.add_option("--sigma", sigma, "Fixed Mallows reference order, e.g. 0,1,2");
        cmd.add_flag("--break-ties-by-index", break_ties,
                     "Flatten tied groups in ballot files by candidate index (alters the data)");
    }

    void merge_into(sw::ConfigMap& kv) const {
        if (!culture.empty()) kv["culture"] = culture;
        if (!ballots.empty()) kv["ballots"] = ballots;
        if (!mixture.empty()) kv["mixture"] = mixture;
        if (!sigma.empty()) kv["sigma"] = sigma;
        if (break_ties) kv["break_ties_by_index"] = "true";
    }
};

void print_data_warnings(const sw::CultureSpec& culture) {
    if (culture.bag) {
        for (const auto& w : culture.bag->warnings) std::cerr << w << "\n";
    }
}

int run_sweep_command(const std::string& config_path, const CultureFlags& culture, const sw::ConfigMap& overrides) {
    sw::ConfigMap kv;
    if (!config_path.empty()) kv = sw::parse_config_text(sw::read_text_file(config_path), config_path);
    culture.merge_into(kv);
    for (const auto& [k, v] : overrides) kv[k] = v;
    if (kv.find("threads") == kv.end()) {
        if (const char* env = std::getenv("SWEEP_THREADS"); env != nullptr && *env != '\0') kv["threads"] = env;
    }
    const auto cfg = sw::build_sweep_config(kv);
    print_data_warnings(cfg.culture);
    if (cfg.output.empty()) throw sw::ConfigError("missing --out");
    const auto records = sw::run_sweep(cfg);
    std::cerr << "wrote " << records.size() << " records to " << cfg.output << "\n";
    return kExitOk;
}

int run_sample_command(const CultureFlags& flags, std::size_t m, std::size_t n, std::size_t count,
                       std::uint64_t seed) {
    sw::ConfigMap kv;
    flags.merge_into(kv);
    const auto culture = sw::build_culture(kv);
    print_data_warnings(culture);
    if (m == 0) {
        const auto fm = culture.fixed_m();
        if (!fm) throw sw::ConfigError("missing --m");
        m = *fm;
    }
    if (n == 0) throw sw::ConfigError("--n must be at least 1");
    try {
        for (std::size_t k = 0; k < count; ++k) {
            if (k) std::cout << "\n";
            std::cout << sw::format_profile(sw::cell_profile(culture, n, m, seed, k));
        }
    } catch (const std::domain_error& e) {
        throw sw::ConfigError(e.what());
    }
    return kExitOk;
}

int run_manipulate_command(const std::string& profile_path, const std::string& rule_name, std::size_t voter) {
    const auto profiles = sw::parse_profiles(sw::read_text_file(profile_path), profile_path);
    if (profiles.empty()) throw sw::ConfigError(profile_path + ": no profile found");
    const sw::Profile& p = profiles.front();
    if (voter >= p.n()) {
        throw sw::ConfigError("voter index " + std::to_string(voter) + " out of range for n=" + std::to_string(p.n()));
    }
    sw::RuleSpec rule;
    std::optional<sw::ScoringVector> v;
    try {
        rule = sw::parse_rule(rule_name);
        v.emplace(sw::make_scoring_vector(rule, p.m(), p.n()));
    } catch (const std::logic_error& e) {
        throw sw::ConfigError(e.what());
    }
    const auto others = p.without(voter);
    const auto sincere_winner = sw::elect(sw::tally(p, *v));
    const auto achievable = sw::achievable_winners(others, *v);
    const auto result = sw::optimal_manipulation(p, voter, *v);

    std::cout << "rule: " << rule.name() << "\n";
    std::cout << "voter: " << voter << "\n";
    std::cout << "sincere ballot: " << sw::format_ranking(p[voter]) << "\n";
    std::cout << "sincere winner: " << sincere_winner << "\n";
    std::cout << "achievable winners: " << format_candidates(achievable) << "\n";
    if (result.improved) {
        std::cout << "optimal ballot: " << sw::format_ranking(result.ballot) << "\n";
        std::cout << "manipulated winner: " << result.winner << "\n";
        std::cout << "winner change: " << sincere_winner << " -> " << result.winner << "\n";
    } else {
        std::cout << "no improving manipulation\n";
    }
    std::cout << "welfare before: " << format_welfare(sw::evaluate_welfare(p, sincere_winner)) << "\n";
    std::cout << "welfare after: " << format_welfare(sw::evaluate_welfare(p, result.winner)) << "\n";
    return kExitOk;
}

int run_rules_command(std::size_t m, std::size_t n) {
    for (const auto& r : sw::default_rule_roster()) {
        std::cout << r.name();
        if (m > 0) {
            try {
                const auto v = sw::make_scoring_vector(r, m, n);
                std::cout << "\t";
                for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << v.scores()[i];
            } catch (const std::domain_error& e) {
                std::cout << "\t(" << e.what() << ")";
            }
        }
        std::cout << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo welfare effects of single-voter manipulation under scoring rules", "stratwelfare"};
    app.footer(names_footer());
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write the CSV");
    std::string config_path;
    CultureFlags sweep_culture;
    std::string rules, behaviours, n_axis, m_axis, trials, seed_text, out, threads;
    sweep->add_option("--config", config_path, "key = value config file; flags override it");
    sweep_culture.add_to(*sweep);
    sweep->add_option("--rules", rules, "Comma-separated rule names, or 'all' (default)");
    sweep->add_option("--behaviours", behaviours, "Comma-separated: sincere,manipulator (default both)");
    sweep->add_option("--n", n_axis, "Voter counts: list and/or inclusive ranges, e.g. 3..100");
    sweep->add_option("--m", m_axis, "Candidate counts: list and/or inclusive ranges, e.g. 3..100");
    sweep->add_option("--trials", trials, "Profiles per cell (default 10000)");
    sweep->add_option("--seed", seed_text, "Master seed (default 0)");
    sweep->add_option("--out", out, "Output CSV path");
    sweep->add_option("--threads", threads, "Worker threads, 0 = auto (default: SWEEP_THREADS or auto)");
    sweep->footer(names_footer());

    // sample
    auto* sample = app.add_subcommand("sample", "Print sampled profiles in the profile text format");
    CultureFlags sample_culture;
    std::size_t sample_m = 0, sample_n = 0, sample_count = 1;
    std::uint64_t sample_seed = 0;
    sample_culture.add_to(*sample);
    sample->add_option("--m", sample_m, "Candidates (defaults to the culture's data size)");
    sample->add_option("--n", sample_n, "Voters")->required();
    sample->add_option("--count", sample_count, "Number of profiles")->default_val(1);
    sample->add_option("--seed", sample_seed, "Seed")->default_val(0);
    sample->footer(names_footer());

    // manipulate
    auto* manipulate = app.add_subcommand("manipulate", "Inspect the optimal manipulation of one profile");
    std::string profile_path, rule_name;
    std::size_t voter = 0;
    manipulate->add_option("--profile", profile_path, "Profile file: one ballot per line")->required();
    manipulate->add_option("--rule", rule_name, "Rule name")->required();
    manipulate->add_option("--voter", voter, "Manipulating voter index (default 0)")->default_val(0);

    // listings
    auto* rules_cmd = app.add_subcommand("rules", "List rule names (with vectors when --m is given)");
    std::size_t list_m = 0, list_n = 10;
    rules_cmd->add_option("--m", list_m, "Show scoring vectors for this m");
    rules_cmd->add_option("--n", list_n, "Voter count for the Nash vector")->default_val(10);
    auto* cultures_cmd = app.add_subcommand("cultures", "List culture names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sweep) {
            sw::ConfigMap overrides;
            const auto put = [&](const char* key, const std::string& value) {
                if (!value.empty()) overrides[key] = value;
            };
            put("rules", rules);
            put("behaviours", behaviours);
            put("n", n_axis);
            put("m", m_axis);
            put("trials", trials);
            put("seed", seed_text);
            put("out", out);
            put("threads", threads);
            return run_sweep_command(config_path, sweep_culture, overrides);
        }
        if (*sample) return run_sample_command(sample_culture, sample_m, sample_n, sample_count, sample_seed);
        if (*manipulate) return run_manipulate_command(profile_path, rule_name, voter);
        if (*rules_cmd) return run_rules_command(list_m, list_n);
        if (*cultures_cmd) {
            for (const auto& c : sw::culture_names()) std::cout << c << "\n";
            return kExitOk;
        }
    } catch (const sw::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sw::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
