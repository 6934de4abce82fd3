#pragma once

// Sweep configuration: `key = value` text files, comma-separated lists,
// inclusive integer ranges `a..b`, and '#' comments. Keys mirror the CLI
// flags; later assignments (e.g. command-line overrides) win.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cultures.hpp"
#include "experiments.hpp"
#include "preflib.hpp"
#include "profile_io.hpp"
#include "rules.hpp"

namespace stratwelfare {

/// Invalid configuration or flag value (exit code 2 territory).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::string>;

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"culture", "rules",   "behaviours", "n",     "m",
                                                  "trials",  "seed",    "out",        "threads", "ballots",
                                                  "mixture", "sigma",   "break_ties_by_index"};
    return keys;
}

inline ConfigMap parse_config_text(std::string_view text, const std::string& source = "<config>") {
    ConfigMap kv;
    const auto lines = detail::lines_of(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        auto line = lines[k];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(source + ":" + std::to_string(k + 1) + ": expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        bool known = false;
        for (const auto& allowed : config_keys()) known = known || allowed == key;
        if (!known) throw ConfigError(source + ":" + std::to_string(k + 1) + ": unknown key '" + key + "'");
        kv[key] = std::string(detail::trim(line.substr(eq + 1)));
    }
    return kv;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::ios_base::failure("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

/// Parses "3..10", "10", or "3,5,8..9" into an ordered list of integers.
inline std::vector<std::size_t> parse_int_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (auto part : detail::split(text, ',')) {
        part = detail::trim(part);
        const auto dots = part.find("..");
        if (dots == std::string_view::npos) {
            const auto v = detail::parse_uint(part);
            if (!v) throw ConfigError("malformed integer '" + std::string(part) + "'");
            out.push_back(static_cast<std::size_t>(*v));
            continue;
        }
        const auto a = detail::parse_uint(part.substr(0, dots));
        const auto b = detail::parse_uint(part.substr(dots + 2));
        if (!a || !b || *a > *b) throw ConfigError("malformed range '" + std::string(part) + "'");
        for (auto v = *a; v <= *b; ++v) out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

inline std::vector<std::string> parse_name_list(std::string_view text) {
    std::vector<std::string> out;
    for (auto part : detail::split(text, ',')) {
        part = detail::trim(part);
        if (part.empty()) throw ConfigError("empty entry in list '" + std::string(text) + "'");
        out.emplace_back(part);
    }
    return out;
}

inline std::vector<RuleSpec> parse_rule_list(std::string_view text) {
    if (detail::trim(text) == "all") return default_rule_roster();
    std::vector<RuleSpec> rules;
    for (const auto& name : parse_name_list(text)) {
        try {
            rules.push_back(parse_rule(name));
        } catch (const std::logic_error& e) {
            throw ConfigError(e.what());
        }
    }
    return rules;
}

inline bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("malformed boolean '" + std::string(text) + "'");
}

/// Builds the culture named in kv, loading its data file when it needs one.
inline CultureSpec build_culture(const ConfigMap& kv) {
    const auto get = [&](const std::string& key) -> std::string {
        const auto it = kv.find(key);
        return it == kv.end() ? std::string() : it->second;
    };
    const std::string name = get("culture");
    if (name.empty()) throw ConfigError("missing culture");
    try {
        if (name == "skating_bag" || !get("ballots").empty()) {
            const std::string path = get("ballots");
            if (path.empty()) throw ConfigError("culture " + name + " needs --ballots <preflib .soc file>");
            SocParseOptions opts;
            opts.source = path;
            opts.break_ties_by_index = !get("break_ties_by_index").empty() && parse_bool(get("break_ties_by_index"));
            return CultureSpec::from_bag(parse_strict_order_file(read_text_file(path), opts), name);
        }
        if (name == "sushi" || !get("mixture").empty()) {
            const std::string path = get("mixture");
            if (path.empty()) throw ConfigError("culture " + name + " needs --mixture <parameter file>");
            return CultureSpec::from_mixture_file(load_mixture_file(read_text_file(path), path), name);
        }
        CultureSpec spec = parse_culture(name);
        if (const auto sigma = get("sigma"); !sigma.empty()) {
            if (spec.kind != CultureKind::mallows) throw ConfigError("--sigma applies to mallows cultures only");
            spec.reference = parse_ranking(sigma);
        }
        return spec;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::ios_base::failure&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

/// Resolves a full sweep configuration. m defaults to the culture's data size
/// when the culture fixes it.
inline SweepConfig build_sweep_config(const ConfigMap& kv) {
    const auto get = [&](const std::string& key) -> std::string {
        const auto it = kv.find(key);
        return it == kv.end() ? std::string() : it->second;
    };
    SweepConfig cfg;
    cfg.culture = build_culture(kv);
    if (const auto v = get("rules"); !v.empty()) cfg.rules = parse_rule_list(v);
    if (const auto v = get("behaviours"); !v.empty()) {
        cfg.behaviours.clear();
        for (const auto& b : parse_name_list(v)) {
            try {
                cfg.behaviours.push_back(parse_behaviour(b));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (const auto v = get("n"); !v.empty()) cfg.n_values = parse_int_list(v);
    if (const auto v = get("m"); !v.empty()) {
        cfg.m_values = parse_int_list(v);
    } else if (const auto fm = cfg.culture.fixed_m()) {
        cfg.m_values = {*fm};
    }
    if (const auto v = get("trials"); !v.empty()) {
        const auto t = detail::parse_uint(v);
        if (!t) throw ConfigError("malformed trials '" + v + "'");
        cfg.trials = static_cast<std::size_t>(*t);
    }
    if (const auto v = get("seed"); !v.empty()) {
        const auto s = detail::parse_uint(v);
        if (!s) throw ConfigError("malformed seed '" + v + "'");
        cfg.seed = *s;
    }
    if (const auto v = get("threads"); !v.empty()) {
        const auto t = detail::parse_uint(v);
        if (!t) throw ConfigError("malformed threads '" + v + "'");
        cfg.threads = static_cast<unsigned>(*t);
    }
    cfg.output = get("out");
    if (const auto fm = cfg.culture.fixed_m()) {
        for (auto m : cfg.m_values) {
            if (m != *fm) {
                throw ConfigError("culture " + cfg.culture.name + " has m=" + std::to_string(*fm) + ", cannot sweep m=" +
                                  std::to_string(m));
            }
        }
    }
    try {
        cfg.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

}  // namespace stratwelfare
