#pragma once

// Readers for external preference data: Preflib complete strict-order files
// (.soc, both the current "# KEY: value" layout and the legacy numeric
// header) and plain-text Mallows mixture parameters.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace stratwelfare {

/// A parse or load failure; what() reads "source:line: message".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Distinct rankings with their multiplicities.
struct BallotBag {
    struct Entry {
        Ranking ranking;
        std::uint64_t count = 0;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::vector<Entry> entries;
    std::size_t m = 0;
    std::string source;
    std::vector<std::string> candidate_names;
    std::vector<std::string> warnings;

    [[nodiscard]] std::uint64_t total_weight() const {
        std::uint64_t w = 0;
        for (const auto& e : entries) w += e.count;
        return w;
    }
};

struct SocParseOptions {
    std::string source = "<input>";
    /// Flatten tied groups in index order instead of rejecting them. This
    /// changes the data; off by default.
    bool break_ties_by_index = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
        const std::uint64_t digit = static_cast<std::uint64_t>(ch - '0');
        if (v > (UINT64_MAX - digit) / 10) return std::nullopt;
        v = v * 10 + digit;
    }
    return v;
}

// Parses "c1,{c2,c3},c4" (1-based ids) into groups of 0-based candidates.
inline std::vector<std::vector<Candidate>> parse_order_groups(std::string_view body, std::size_t m,
                                                              const std::string& source, std::size_t line) {
    std::vector<std::vector<Candidate>> groups;
    bool in_group = false;
    std::string token;
    const auto flush = [&](bool closing_group) {
        const auto t = trim(token);
        if (t.empty()) {
            if (!closing_group) throw ParseError(source, line, "empty candidate entry");
            token.clear();
            return;
        }
        const auto id = parse_uint(t);
        if (!id || *id < 1 || *id > m) {
            throw ParseError(source, line, "invalid candidate '" + std::string(t) + "'");
        }
        if (in_group) {
            groups.back().push_back(static_cast<Candidate>(*id - 1));
        } else {
            groups.push_back({static_cast<Candidate>(*id - 1)});
        }
        token.clear();
    };
    for (std::size_t k = 0; k < body.size(); ++k) {
        const char ch = body[k];
        if (ch == '{') {
            if (in_group || !trim(token).empty()) throw ParseError(source, line, "misplaced '{'");
            in_group = true;
            groups.emplace_back();
        } else if (ch == '}') {
            if (!in_group) throw ParseError(source, line, "unmatched '}'");
            flush(true);
            in_group = false;
            // Skip the separator after a closing brace.
            while (k + 1 < body.size() && (body[k + 1] == ' ' || body[k + 1] == '\t')) ++k;
            if (k + 1 < body.size() && body[k + 1] == ',') ++k;
        } else if (ch == ',') {
            flush(false);
        } else {
            token.push_back(ch);
        }
    }
    if (in_group) throw ParseError(source, line, "unterminated '{'");
    if (!trim(token).empty() || groups.empty()) flush(false);
    return groups;
}

}  // namespace detail

/// Parses a Preflib complete strict-order file into a ballot bag. Candidate
/// ids (1-based in the file) become 0-based indices in declaration order.
inline BallotBag parse_strict_order_file(std::string_view text, const SocParseOptions& opts = {}) {
    const auto& src = opts.source;
    const auto lines = detail::lines_of(text);
    BallotBag bag;
    bag.source = src;

    std::optional<std::size_t> declared_m;
    std::optional<std::uint64_t> declared_votes;
    std::size_t declared_votes_line = 0;
    std::map<std::size_t, std::string> names;
    std::size_t first_body = 0;
    bool legacy = false;

    // Header: "# KEY: value" metadata, or the legacy numeric layout
    // (m, m name lines "id,name", then "voters,total,unique").
    std::size_t idx = 0;
    while (idx < lines.size() && detail::trim(lines[idx]).empty()) ++idx;
    if (idx < lines.size() && detail::trim(lines[idx]).starts_with('#')) {
        for (; idx < lines.size(); ++idx) {
            const auto line = detail::trim(lines[idx]);
            if (line.empty()) continue;
            if (!line.starts_with('#')) break;
            const auto meta = detail::trim(line.substr(1));
            const auto colon = meta.find(':');
            if (colon == std::string_view::npos) continue;
            const auto key = detail::trim(meta.substr(0, colon));
            const auto value = detail::trim(meta.substr(colon + 1));
            if (key == "NUMBER ALTERNATIVES") {
                const auto v = detail::parse_uint(value);
                if (!v || *v == 0) throw ParseError(src, idx + 1, "invalid NUMBER ALTERNATIVES");
                declared_m = static_cast<std::size_t>(*v);
            } else if (key == "NUMBER VOTERS") {
                const auto v = detail::parse_uint(value);
                if (!v) throw ParseError(src, idx + 1, "invalid NUMBER VOTERS");
                declared_votes = *v;
                declared_votes_line = idx + 1;
            } else if (key == "DATA TYPE") {
                // toc (complete orders with ties) is read so ties get a proper diagnostic.
                if (value != "soc" && value != "toc") {
                    throw ParseError(src, idx + 1, "unsupported data type '" + std::string(value) +
                                                       "' (only complete orders, soc/toc)");
                }
            } else if (key.starts_with("ALTERNATIVE NAME")) {
                const auto id = detail::parse_uint(key.substr(16));
                if (!id || *id == 0) throw ParseError(src, idx + 1, "invalid alternative id");
                names[static_cast<std::size_t>(*id)] = std::string(value);
            }
        }
        first_body = idx;
    } else if (idx < lines.size()) {
        legacy = true;
        const auto m = detail::parse_uint(lines[idx]);
        if (!m || *m == 0) throw ParseError(src, idx + 1, "expected candidate count");
        declared_m = static_cast<std::size_t>(*m);
        ++idx;
        for (std::size_t k = 0; k < *declared_m; ++k, ++idx) {
            if (idx >= lines.size()) throw ParseError(src, idx + 1, "missing candidate name line");
            const auto line = detail::trim(lines[idx]);
            const auto comma = line.find(',');
            const auto id = detail::parse_uint(line.substr(0, comma));
            if (comma == std::string_view::npos || !id || *id == 0) {
                throw ParseError(src, idx + 1, "expected 'id,name'");
            }
            names[static_cast<std::size_t>(*id)] = std::string(detail::trim(line.substr(comma + 1)));
        }
        if (idx >= lines.size()) throw ParseError(src, idx + 1, "missing vote summary line");
        const auto summary = detail::split(lines[idx], ',');
        const auto total = summary.size() == 3 ? detail::parse_uint(summary[1]) : std::nullopt;
        if (!total) throw ParseError(src, idx + 1, "expected 'voters,total,unique'");
        declared_votes = *total;
        declared_votes_line = idx + 1;
        first_body = ++idx;
    }

    if (!declared_m) {
        throw ParseError(src, lines.size() + 1, "missing candidate count declaration");
    }
    const std::size_t m = *declared_m;
    bag.m = m;
    bag.candidate_names.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        const auto it = names.find(c + 1);
        bag.candidate_names[c] = it != names.end() ? it->second : std::to_string(c + 1);
    }

    std::map<Ranking, std::size_t> seen;
    for (std::size_t k = first_body; k < lines.size(); ++k) {
        const std::size_t line_no = k + 1;
        const auto line = detail::trim(lines[k]);
        if (line.empty() || line.starts_with('#')) continue;
        const auto sep = line.find(legacy ? ',' : ':');
        if (sep == std::string_view::npos) throw ParseError(src, line_no, "expected 'count: ranking'");
        const auto count = detail::parse_uint(line.substr(0, sep));
        if (!count || *count == 0) throw ParseError(src, line_no, "malformed count");
        const auto groups = detail::parse_order_groups(line.substr(sep + 1), m, src, line_no);

        std::vector<Candidate> order;
        std::vector<bool> present(m, false);
        for (const auto& g : groups) {
            if (g.size() > 1 && !opts.break_ties_by_index) {
                throw ParseError(src, line_no,
                                 "ranking contains tied candidates; strict orders required "
                                 "(use --break-ties-by-index to flatten ties)");
            }
            auto sorted = g;
            std::sort(sorted.begin(), sorted.end());
            for (Candidate c : sorted) {
                if (present[c]) throw ParseError(src, line_no, "duplicate candidate " + std::to_string(c + 1));
                present[c] = true;
                order.push_back(c);
            }
        }
        if (order.size() != m) {
            throw ParseError(src, line_no, "incomplete ranking: " + std::to_string(order.size()) + " of " +
                                               std::to_string(m) + " candidates");
        }
        Ranking r(std::move(order));
        if (auto it = seen.find(r); it != seen.end()) {
            bag.entries[it->second].count += *count;
        } else {
            seen.emplace(r, bag.entries.size());
            bag.entries.push_back({std::move(r), *count});
        }
    }
    if (bag.entries.empty()) {
        throw ParseError(src, lines.size() + 1, "no ballots found");
    }
    if (declared_votes && *declared_votes != bag.total_weight()) {
        bag.warnings.push_back(src + ":" + std::to_string(declared_votes_line) + ": warning: declared " + std::to_string(*declared_votes) + " votes but ballots sum to " +
                               std::to_string(bag.total_weight()));
    }
    return bag;
}

/// Writes a bag in the "# KEY: value" strict-order layout.
inline std::string write_strict_order_file(const BallotBag& bag) {
    std::ostringstream os;
    os << "# DATA TYPE: soc\n";
    os << "# NUMBER ALTERNATIVES: " << bag.m << "\n";
    os << "# NUMBER VOTERS: " << bag.total_weight() << "\n";
    os << "# NUMBER UNIQUE ORDERS: " << bag.entries.size() << "\n";
    for (std::size_t c = 0; c < bag.m; ++c) {
        const std::string name = c < bag.candidate_names.size() ? bag.candidate_names[c] : std::to_string(c + 1);
        os << "# ALTERNATIVE NAME " << c + 1 << ": " << name << "\n";
    }
    for (const auto& e : bag.entries) {
        os << e.count << ":";
        for (std::size_t j = 0; j < e.ranking.size(); ++j) {
            os << (j == 0 ? " " : ",") << e.ranking[j] + 1;
        }
        os << "\n";
    }
    return os.str();
}

/// One Mallows component of a fitted mixture.
struct MixtureComponent {
    double probability = 0.0;
    double phi = 0.0;
    Ranking reference;
};

struct MixtureFile {
    std::vector<MixtureComponent> components;
    [[nodiscard]] std::size_t m() const { return components.empty() ? 0 : components.front().reference.size(); }
};

inline constexpr double kProbabilityTolerance = 1e-9;

/// Reads lines "probability phi c1,c2,...,cm" (0-based reference order); '#' starts a comment.
inline MixtureFile load_mixture_file(std::string_view text, const std::string& source = "<input>") {
    MixtureFile mix;
    const auto lines = detail::lines_of(text);
    double total = 0.0;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        auto line = lines[k];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        std::istringstream is{std::string(line)};
        is.imbue(std::locale::classic());
        double prob = 0.0;
        double phi = 0.0;
        std::string ref;
        std::string extra;
        if (!(is >> prob >> phi >> ref) || (is >> extra)) {
            throw ParseError(source, k + 1, "expected 'probability phi c1,c2,...,cm'");
        }
        if (!(prob >= 0.0 && prob <= 1.0)) throw ParseError(source, k + 1, "probability out of [0,1]");
        if (!(phi > 0.0 && phi <= 1.0)) throw ParseError(source, k + 1, "phi must lie in (0,1]");
        std::vector<Candidate> order;
        for (auto tok : detail::split(ref, ',')) {
            const auto c = detail::parse_uint(tok);
            if (!c) throw ParseError(source, k + 1, "malformed reference order");
            order.push_back(static_cast<Candidate>(*c));
        }
        try {
            mix.components.push_back({prob, phi, Ranking(std::move(order))});
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, k + 1, std::string("malformed reference order: ") + e.what());
        }
        if (mix.components.back().reference.size() != mix.components.front().reference.size()) {
            throw ParseError(source, k + 1, "reference order length differs from first component");
        }
        total += prob;
    }
    if (mix.components.empty()) {
        throw ParseError(source, lines.size() + 1, "no mixture components");
    }
    if (std::fabs(total - 1.0) > kProbabilityTolerance) {
        throw ParseError(source, lines.size(), "component probabilities sum to " + std::to_string(total) + ", not 1");
    }
    return mix;
}

}  // namespace stratwelfare
