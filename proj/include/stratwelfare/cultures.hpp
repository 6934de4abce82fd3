#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "preflib.hpp"
#include "rng.hpp"
#include "rules.hpp"

namespace stratwelfare {

enum class CultureKind { impartial, euclidean, mallows, mixed_mallows, bag };

/// A mixture component; an unset reference is redrawn uniformly per profile.
struct MallowsComponent {
    double probability = 1.0;
    double phi = 1.0;
    std::optional<Ranking> reference;
};

/// A preference-generating distribution and its parameters.
struct CultureSpec {
    CultureKind kind = CultureKind::impartial;
    std::string name = "ic";
    std::size_t dims = 0;
    double phi = 1.0;
    /// Mallows reference order; unset means a fresh uniform reference per profile.
    std::optional<Ranking> reference;
    std::vector<MallowsComponent> components;
    std::shared_ptr<const BallotBag> bag;

    static CultureSpec impartial() { return {}; }

    static CultureSpec euclidean(std::size_t dims) {
        CultureSpec s;
        s.kind = CultureKind::euclidean;
        s.dims = dims;
        s.name = "euclid_" + std::to_string(dims);
        return s;
    }

    static CultureSpec mallows(double phi, std::optional<Ranking> reference = std::nullopt) {
        CultureSpec s;
        s.kind = CultureKind::mallows;
        s.phi = phi;
        s.reference = std::move(reference);
        s.name = "mallows_" + detail::short_number(phi);
        return s;
    }

    static CultureSpec mixture(std::vector<MallowsComponent> components, std::string name = "mixture") {
        CultureSpec s;
        s.kind = CultureKind::mixed_mallows;
        s.components = std::move(components);
        s.name = std::move(name);
        return s;
    }

    /// Two equiprobable components, phi = 0.5, references redrawn per profile.
    static CultureSpec mixed_mallows() {
        return mixture({{0.5, 0.5, std::nullopt}, {0.5, 0.5, std::nullopt}}, "mixed_mallows");
    }

    static CultureSpec from_mixture_file(const MixtureFile& file, std::string name = "sushi") {
        std::vector<MallowsComponent> comps;
        for (const auto& c : file.components) {
            comps.push_back({c.probability, c.phi, c.reference});
        }
        return mixture(std::move(comps), std::move(name));
    }

    static CultureSpec from_bag(BallotBag bag, std::string name = "skating_bag") {
        CultureSpec s;
        s.kind = CultureKind::bag;
        s.bag = std::make_shared<const BallotBag>(std::move(bag));
        s.name = std::move(name);
        return s;
    }

    /// Candidate count imposed by the culture's data, if any.
    [[nodiscard]] std::optional<std::size_t> fixed_m() const {
        if (kind == CultureKind::bag && bag) return bag->m;
        if (kind == CultureKind::mallows && reference) return reference->size();
        if (kind == CultureKind::mixed_mallows) {
            for (const auto& c : components) {
                if (c.reference) return c.reference->size();
            }
        }
        return std::nullopt;
    }

    /// Throws std::domain_error on invalid parameters.
    void validate() const {
        const auto check_phi = [](double phi) {
            if (!(phi > 0.0 && phi <= 1.0)) {
                throw std::domain_error("Mallows phi must lie in (0,1], got " + std::to_string(phi));
            }
        };
        switch (kind) {
            case CultureKind::impartial: break;
            case CultureKind::euclidean:
                if (dims < 1) throw std::domain_error("euclidean culture needs dims >= 1");
                break;
            case CultureKind::mallows: check_phi(phi); break;
            case CultureKind::mixed_mallows: {
                if (components.empty()) throw std::domain_error("mixture has no components");
                double total = 0.0;
                std::optional<std::size_t> m;
                for (const auto& c : components) {
                    check_phi(c.phi);
                    if (!(c.probability >= 0.0)) throw std::domain_error("negative mixture probability");
                    total += c.probability;
                    if (c.reference) {
                        if (m && *m != c.reference->size()) {
                            throw std::domain_error("mixture references have different lengths");
                        }
                        m = c.reference->size();
                    }
                }
                if (std::fabs(total - 1.0) > kProbabilityTolerance) {
                    throw std::domain_error("mixture probabilities sum to " + std::to_string(total) + ", not 1");
                }
                break;
            }
            case CultureKind::bag:
                if (!bag || bag->entries.empty()) throw std::domain_error("ballot bag is empty");
                break;
        }
    }
};

/// The canonical culture names accepted on the command line.
inline const std::vector<std::string>& culture_names() {
    static const std::vector<std::string> names = {"ic",          "euclid_1",    "euclid_2",
                                                   "euclid_5",    "mallows_0.8", "mallows_0.5",
                                                   "mixed_mallows", "sushi",     "skating_bag"};
    return names;
}

/// Resolves a parameter-only culture name (`ic`, `euclid_<d>`, `mallows_<phi>`,
/// `mixed_mallows`). Data-backed cultures (`sushi`, `skating_bag`) are built
/// with from_mixture_file / from_bag.
inline CultureSpec parse_culture(std::string_view name) {
    if (name == "ic") return CultureSpec::impartial();
    if (name == "mixed_mallows") return CultureSpec::mixed_mallows();
    if (name.starts_with("euclid_")) {
        const auto d = detail::parse_uint(name.substr(7));
        if (!d || *d == 0) throw std::domain_error("invalid euclidean dimension in '" + std::string(name) + "'");
        return CultureSpec::euclidean(static_cast<std::size_t>(*d));
    }
    if (name.starts_with("mallows_")) {
        double phi = 0.0;
        if (!detail::parse_double(name.substr(8), phi)) {
            throw std::invalid_argument("invalid Mallows dispersion in '" + std::string(name) + "'");
        }
        auto spec = CultureSpec::mallows(phi);
        spec.validate();
        spec.name = std::string(name);
        return spec;
    }
    if (name == "sushi" || name == "skating_bag") {
        throw std::invalid_argument("culture '" + std::string(name) + "' needs a data file");
    }
    throw std::invalid_argument("unknown culture '" + std::string(name) + "'");
}

/// Uniformly random permutation of m candidates (Fisher-Yates).
inline Ranking uniform_ranking(std::size_t m, RngStream& rng) {
    std::vector<Candidate> order(m);
    std::iota(order.begin(), order.end(), Candidate{0});
    for (std::size_t j = m; j > 1; --j) {
        const auto k = static_cast<std::size_t>(rng.uniform_index(j));
        std::swap(order[j - 1], order[k]);
    }
    return Ranking(std::move(order));
}

inline Profile sample_impartial(std::size_t m, std::size_t n, RngStream& rng) {
    if (m < 1 || n < 1) throw std::domain_error("sample_impartial needs m >= 1 and n >= 1");
    std::vector<Ranking> ballots;
    ballots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ballots.push_back(uniform_ranking(m, rng));
    return Profile(std::move(ballots));
}

/// Ballot of a voter at `voter`: candidates by ascending distance, ties to the lower index.
inline Ranking euclidean_ballot(std::span<const double> voter, const std::vector<std::vector<double>>& candidates) {
    std::vector<std::pair<double, Candidate>> dist;
    dist.reserve(candidates.size());
    for (Candidate c = 0; c < candidates.size(); ++c) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < voter.size(); ++k) {
            const double diff = voter[k] - candidates[c][k];
            d2 += diff * diff;
        }
        dist.emplace_back(std::sqrt(d2), c);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<Candidate> order;
    order.reserve(dist.size());
    for (const auto& [d, c] : dist) order.push_back(c);
    return Ranking(std::move(order));
}

/// Points drawn by sample_euclidean, exposed for structural checks.
struct EuclideanDraw {
    std::vector<std::vector<double>> candidates;
    std::vector<std::vector<double>> voters;
    Profile profile;
};

inline EuclideanDraw sample_euclidean_points(std::size_t dims, std::size_t m, std::size_t n, RngStream& rng) {
    if (dims < 1) throw std::domain_error("sample_euclidean needs dims >= 1");
    if (m < 1 || n < 1) throw std::domain_error("sample_euclidean needs m >= 1 and n >= 1");
    EuclideanDraw draw;
    const auto point = [&] {
        std::vector<double> x(dims);
        for (auto& v : x) v = rng.uniform01();
        return x;
    };
    for (std::size_t c = 0; c < m; ++c) draw.candidates.push_back(point());
    std::vector<Ranking> ballots;
    ballots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        draw.voters.push_back(point());
        ballots.push_back(euclidean_ballot(draw.voters.back(), draw.candidates));
    }
    draw.profile = Profile(std::move(ballots));
    return draw;
}

inline Profile sample_euclidean(std::size_t dims, std::size_t m, std::size_t n, RngStream& rng) {
    return sample_euclidean_points(dims, m, n, rng).profile;
}

/// One Mallows draw by repeated insertion. The j-th candidate of sigma is
/// inserted into slot i in {1..j} (counted from the top) with probability
/// phi^(j-i) / (1 + phi + ... + phi^(j-1)); slot j creates no inversions.
inline Ranking mallows_ranking(const Ranking& sigma, double phi, RngStream& rng) {
    if (!(phi > 0.0 && phi <= 1.0)) {
        throw std::domain_error("Mallows phi must lie in (0,1], got " + std::to_string(phi));
    }
    const std::size_t m = sigma.size();
    std::vector<Candidate> order;
    order.reserve(m);
    for (std::size_t j = 1; j <= m; ++j) {
        double z = 0.0;
        double w = 1.0;
        for (std::size_t t = 0; t < j; ++t, w *= phi) z += w;
        double u = rng.uniform01() * z;
        std::size_t slot = 1;
        w = 1.0;
        for (std::size_t i = j; i >= 1; --i, w *= phi) {
            if (u < w) {
                slot = i;
                break;
            }
            u -= w;
        }
        order.insert(order.begin() + static_cast<std::ptrdiff_t>(slot - 1), sigma[j - 1]);
    }
    return Ranking(std::move(order));
}

inline Profile sample_mallows(const Ranking& sigma, double phi, std::size_t n, RngStream& rng) {
    if (n < 1) throw std::domain_error("sample_mallows needs n >= 1");
    std::vector<Ranking> ballots;
    ballots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ballots.push_back(mallows_ranking(sigma, phi, rng));
    return Profile(std::move(ballots));
}

/// Normalizing constant prod_{j=1..m} (1 + phi + ... + phi^(j-1)).
inline double mallows_normalizer(std::size_t m, double phi) {
    double z = 1.0;
    for (std::size_t j = 1; j <= m; ++j) {
        double row = 0.0;
        double w = 1.0;
        for (std::size_t t = 0; t < j; ++t, w *= phi) row += w;
        z *= row;
    }
    return z;
}

/// Probability phi^d(sigma, r) / Z of drawing r.
inline double mallows_probability(const Ranking& sigma, double phi, const Ranking& r) {
    if (!(phi > 0.0 && phi <= 1.0)) {
        throw std::domain_error("Mallows phi must lie in (0,1]");
    }
    const auto d = kendall_tau(sigma, r);
    return std::pow(phi, static_cast<double>(d)) / mallows_normalizer(sigma.size(), phi);
}

inline Profile sample_mixture(const CultureSpec& spec, std::size_t m, std::size_t n, RngStream& rng) {
    if (spec.kind != CultureKind::mixed_mallows) throw std::domain_error("sample_mixture needs a mixture culture");
    spec.validate();
    if (n < 1) throw std::domain_error("sample_mixture needs n >= 1");
    std::vector<Ranking> refs;
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& c : spec.components) {
        if (c.reference && c.reference->size() != m) {
            throw std::domain_error("mixture reference has " + std::to_string(c.reference->size()) +
                                    " candidates, expected " + std::to_string(m));
        }
        refs.push_back(c.reference ? *c.reference : uniform_ranking(m, rng));
        acc += c.probability;
        cumulative.push_back(acc);
    }
    std::vector<Ranking> ballots;
    ballots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01() * acc;
        auto k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                          cumulative.begin());
        k = std::min(k, spec.components.size() - 1);
        ballots.push_back(mallows_ranking(refs[k], spec.components[k].phi, rng));
    }
    return Profile(std::move(ballots));
}

/// n draws with replacement, weighted by multiplicity.
inline Profile sample_bag(const BallotBag& bag, std::size_t n, RngStream& rng) {
    if (bag.entries.empty()) throw std::domain_error("sample_bag: empty bag");
    if (n < 1) throw std::domain_error("sample_bag needs n >= 1");
    std::vector<std::uint64_t> cumulative;
    std::uint64_t acc = 0;
    for (const auto& e : bag.entries) {
        acc += e.count;
        cumulative.push_back(acc);
    }
    if (acc == 0) throw std::domain_error("sample_bag: bag has zero total weight");
    std::vector<Ranking> ballots;
    ballots.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = rng.uniform_index(acc);
        const auto k = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
        ballots.push_back(bag.entries[static_cast<std::size_t>(k)].ranking);
    }
    return Profile(std::move(ballots));
}

/// Draws one profile of n voters over m candidates from the culture.
inline Profile sample_profile(const CultureSpec& spec, std::size_t m, std::size_t n, RngStream& rng) {
    spec.validate();
    if (const auto fm = spec.fixed_m(); fm && *fm != m) {
        throw std::domain_error("culture " + spec.name + " fixes m=" + std::to_string(*fm) + ", requested " +
                                std::to_string(m));
    }
    switch (spec.kind) {
        case CultureKind::impartial: return sample_impartial(m, n, rng);
        case CultureKind::euclidean: return sample_euclidean(spec.dims, m, n, rng);
        case CultureKind::mallows: {
            const Ranking sigma = spec.reference ? *spec.reference : uniform_ranking(m, rng);
            return sample_mallows(sigma, spec.phi, n, rng);
        }
        case CultureKind::mixed_mallows: return sample_mixture(spec, m, n, rng);
        case CultureKind::bag: return sample_bag(*spec.bag, n, rng);
    }
    throw std::logic_error("unhandled culture kind");
}

}  // namespace stratwelfare
