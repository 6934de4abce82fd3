#pragma once

// Profile text format: one ballot per line, 0-based candidate indices
// separated by commas, best first. Blank lines separate profiles.

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "preflib.hpp"

namespace stratwelfare {

inline std::string format_ranking(const Ranking& r) {
    std::string out;
    for (std::size_t j = 0; j < r.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(r[j]);
    }
    return out;
}

inline std::string format_profile(const Profile& p) {
    std::string out;
    for (const auto& b : p.ballots()) {
        out += format_ranking(b);
        out += '\n';
    }
    return out;
}

/// Parses a comma-separated ranking such as "2,0,1".
inline Ranking parse_ranking(std::string_view text) {
    std::vector<Candidate> order;
    for (auto tok : detail::split(detail::trim(text), ',')) {
        const auto c = detail::parse_uint(tok);
        if (!c) throw std::invalid_argument("malformed candidate '" + std::string(detail::trim(tok)) + "'");
        order.push_back(static_cast<Candidate>(*c));
    }
    return Ranking(std::move(order));
}

/// Parses every profile in the text. Diagnostics carry "source:line:".
inline std::vector<Profile> parse_profiles(std::string_view text, const std::string& source = "<input>") {
    std::vector<Profile> profiles;
    std::vector<std::vector<Candidate>> current;
    std::size_t first_line = 0;
    const auto finish = [&] {
        if (current.empty()) return;
        const auto violations = validate_profile(current);
        if (!violations.empty()) throw ParseError(source, first_line, violations.front());
        profiles.push_back(Profile::from_ballots(current));
        current.clear();
    };
    const auto lines = detail::lines_of(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto line = detail::trim(lines[k]);
        if (line.empty()) {
            finish();
            continue;
        }
        if (line.starts_with('#')) continue;
        if (current.empty()) first_line = k + 1;
        std::vector<Candidate> ballot;
        for (auto tok : detail::split(line, ',')) {
            const auto c = detail::parse_uint(tok);
            if (!c) throw ParseError(source, k + 1, "malformed candidate '" + std::string(detail::trim(tok)) + "'");
            ballot.push_back(static_cast<Candidate>(*c));
        }
        current.push_back(std::move(ballot));
    }
    finish();
    return profiles;
}

}  // namespace stratwelfare
