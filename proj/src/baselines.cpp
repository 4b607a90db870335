#include "dendro/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_map>

#include "dendro/errors.hpp"

namespace dendro {

std::vector<std::string> size_threshold_baseline(const Clustering& clustering,
                                                 std::size_t size_threshold) {
    std::vector<std::string> flagged;
    for (const auto& members : clustering.clusters)
        if (members.size() < size_threshold)
            flagged.insert(flagged.end(), members.begin(), members.end());
    std::sort(flagged.begin(), flagged.end());
    return flagged;
}

namespace {

constexpr std::size_t kOracleLimit = 15;

bool id_lists_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Minimum similarity across two groups, read straight off the matrix.
double naive_group_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                              const SimilarityMatrix& sim) {
    double lowest = 2.0;
    for (const std::string& x : a)
        for (const std::string& y : b) {
            const double v = sim.at(sim.index_of(x), sim.index_of(y));
            if (v < lowest) lowest = v;
        }
    return lowest;
}

}  // namespace

Clustering brute_force_clustering(const SimilarityMatrix& sim, double t_cut) {
    const std::size_t n = sim.size();
    if (n > kOracleLimit)
        throw OracleScopeError("brute-force clustering is capped at " +
                               std::to_string(kOracleLimit) + " objects, got " +
                               std::to_string(n));
    sim.validate();

    // Everything below recomputes from first principles on purpose.
    std::vector<std::vector<std::string>> groups;
    for (const std::string& id : sim.ids()) groups.push_back({id});
    for (auto& g : groups) std::sort(g.begin(), g.end());

    while (groups.size() > 1) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        bool have = false;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            for (std::size_t j = i + 1; j < groups.size(); ++j) {
                const double s = naive_group_similarity(groups[i], groups[j], sim);
                bool take = false;
                if (!have || s > best) {
                    take = true;
                } else if (s == best) {
                    // Same tie rule as the production path: the pair whose
                    // sorted member lists compare smallest wins.
                    const auto* c1 = &groups[i];
                    const auto* c2 = &groups[j];
                    if (id_lists_less(*c2, *c1)) std::swap(c1, c2);
                    const auto* b1 = &groups[bi];
                    const auto* b2 = &groups[bj];
                    if (id_lists_less(*b2, *b1)) std::swap(b1, b2);
                    if (id_lists_less(*c1, *b1) ||
                        (!id_lists_less(*b1, *c1) && id_lists_less(*c2, *b2)))
                        take = true;
                }
                if (take) {
                    best = s;
                    bi = i;
                    bj = j;
                    have = true;
                }
            }
        }
        if (best < t_cut) break;

        std::vector<std::string> merged;
        merged.reserve(groups[bi].size() + groups[bj].size());
        std::merge(groups[bi].begin(), groups[bi].end(), groups[bj].begin(), groups[bj].end(),
                   std::back_inserter(merged));
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
        groups[bi] = std::move(merged);
    }

    // Fresh upper-triangle statistics, summed naively.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) total += sim.at(i, j);
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double mu = n >= 2 ? total / pairs : 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = sim.at(i, j) - mu;
            sq += d * d;
        }
    const double sigma = n >= 2 ? std::sqrt(sq / pairs) : 0.0;

    Clustering result;
    result.threshold = CutThreshold{t_cut, mu, sigma};
    result.source_ids = sim.ids();
    result.clusters = std::move(groups);
    return result;
}

std::vector<std::string> brute_force_detection(const std::vector<std::string>& objects,
                                               const Clustering& clustering,
                                               const SimilarityMatrix& sim, double dispersion) {
    if (!(dispersion >= 0.0 && dispersion <= 1.0))
        throw InvalidInputError("dispersion must be in [0, 1]");
    if (objects.empty()) throw DegenerateInputError("no objects to score");

    const std::size_t n = objects.size();
    const std::size_t k = clustering.clusters.size();

    std::unordered_map<std::string, std::size_t> owner;
    for (std::size_t c = 0; c < k; ++c)
        for (const std::string& id : clustering.clusters[c]) owner[id] = c;

    // Majority cluster, if one exists.
    std::ptrdiff_t rep = -1;
    for (std::size_t c = 0; c < k; ++c)
        if (2 * clustering.clusters[c].size() > n) rep = static_cast<std::ptrdiff_t>(c);

    auto top_similarity = [&](const std::string& id, std::size_t c) {
        double best = 0.0;
        bool any = false;
        for (const std::string& other : clustering.clusters[c]) {
            const double v = sim.at(sim.index_of(id), sim.index_of(other));
            if (!any || v > best) {
                best = v;
                any = true;
            }
        }
        return best;
    };

    std::vector<double> factors;
    factors.reserve(n);
    for (const std::string& id : objects) {
        const std::size_t own = owner.at(id);
        const double share = 1.0 - static_cast<double>(clustering.clusters[own].size()) /
                                       static_cast<double>(n);
        double place;
        if (rep >= 0) {
            place = own == static_cast<std::size_t>(rep)
                        ? 0.0
                        : 1.0 - top_similarity(id, static_cast<std::size_t>(rep));
        } else {
            double sum = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                if (c == own) continue;
                sum += top_similarity(id, c);
            }
            place = 1.0 - sum / static_cast<double>(k - 1);
        }
        factors.push_back((share + place) / 2.0);
    }

    double total = 0.0;
    for (double f : factors) total += f;
    const double mu = total / static_cast<double>(n);
    double sq = 0.0;
    for (double f : factors) sq += (f - mu) * (f - mu);
    const double sigma = std::sqrt(sq / static_cast<double>(n));
    const double ot = mu + (1.0 + 2.0 * dispersion * dispersion) * sigma;

    std::vector<std::string> flagged;
    for (std::size_t i = 0; i < n; ++i)
        if (factors[i] > ot) flagged.push_back(objects[i]);
    std::sort(flagged.begin(), flagged.end());
    return flagged;
}

SimilarityMatrix generate_synthetic_matrix(const SyntheticSpec& spec) {
    if (spec.block_sizes.empty()) throw InvalidInputError("block_sizes is empty");
    for (std::size_t s : spec.block_sizes)
        if (s == 0) throw InvalidInputError("block sizes must be positive");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(spec.intra_similarity) || !in_unit(spec.cross_similarity))
        throw InvalidInputError("similarity levels must be in [0, 1]");
    if (!(spec.jitter >= 0.0)) throw InvalidInputError("jitter must be non-negative");
    if (!(spec.intra_similarity > spec.cross_similarity))
        throw InvalidInputError("intra similarity must exceed cross similarity");
    if (!(spec.intra_similarity - spec.jitter > spec.cross_similarity + spec.jitter))
        throw InvalidInputError("jitter is too large: the similarity bands overlap");

    std::size_t n = 0;
    for (std::size_t s : spec.block_sizes) n += s;

    std::vector<std::size_t> block_of(n);
    {
        std::size_t idx = 0, block = 0;
        for (std::size_t s : spec.block_sizes) {
            for (std::size_t i = 0; i < s; ++i) block_of[idx++] = block;
            ++block;
        }
    }

    int width = 1;
    for (std::size_t v = n > 0 ? n - 1 : 0; v >= 10 && width < 20; v /= 10) ++width;
    std::vector<std::string> ids;
    ids.reserve(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "o%0*zu", width, i);
        ids.emplace_back(buf);
    }

    std::mt19937_64 rng(spec.seed);
    auto unit_draw = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    };

    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double base =
                block_of[i] == block_of[j] ? spec.intra_similarity : spec.cross_similarity;
            double v = base + spec.jitter * (2.0 * unit_draw() - 1.0);
            v = std::clamp(v, 0.0, 1.0);
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }

    return SimilarityMatrix(std::move(ids), std::move(values));
}

}  // namespace dendro
