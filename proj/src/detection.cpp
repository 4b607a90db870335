#include "dendro/detection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dendro/errors.hpp"

namespace dendro {

namespace {

void check_dispersion(double d) {
    if (!(d >= 0.0 && d <= 1.0))
        throw InvalidInputError("dispersion must be in [0, 1], got " + std::to_string(d));
}

// object index -> cluster index, validating that the clusters partition the
// matrix ids they mention.
std::unordered_map<std::string, std::size_t> membership(const Clustering& clustering) {
    std::unordered_map<std::string, std::size_t> owner;
    for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
        if (clustering.clusters[c].empty())
            throw InvalidInputError("cluster " + std::to_string(c + 1) + " is empty");
        for (const std::string& id : clustering.clusters[c])
            if (!owner.emplace(id, c).second)
                throw InvalidInputError("object '" + id + "' appears in more than one cluster");
    }
    return owner;
}

double best_similarity(std::size_t obj, const std::vector<std::string>& cluster,
                       const SimilarityMatrix& sim) {
    const double* row = sim.row(obj);
    double best = 0.0;
    bool any = false;
    for (const std::string& id : cluster) {
        const double v = row[sim.index_of(id)];
        if (!any || v > best) {
            best = v;
            any = true;
        }
    }
    return best;
}

}  // namespace

std::optional<std::size_t> find_representative_cluster(const Clustering& clustering) {
    std::size_t n = 0;
    for (const auto& c : clustering.clusters) n += c.size();
    for (std::size_t i = 0; i < clustering.clusters.size(); ++i)
        if (2 * clustering.clusters[i].size() > n) return i;
    return std::nullopt;
}

double of_neighbors(std::size_t cluster_size, std::size_t n) {
    if (cluster_size < 1 || cluster_size > n)
        throw InvalidInputError("cluster size " + std::to_string(cluster_size) +
                                " is outside [1, " + std::to_string(n) + "]");
    return 1.0 - static_cast<double>(cluster_size) / static_cast<double>(n);
}

double object_cluster_similarity(const std::string& object_id,
                                 const std::vector<std::string>& cluster,
                                 const SimilarityMatrix& sim) {
    if (cluster.empty()) throw InvalidInputError("cluster is empty");
    return best_similarity(sim.index_of(object_id), cluster, sim);
}

double of_location(const std::string& object_id, const Clustering& clustering,
                   const SimilarityMatrix& sim) {
    const auto owner = membership(clustering);
    const auto it = owner.find(object_id);
    if (it == owner.end())
        throw InvalidInputError("object '" + object_id + "' is not in any cluster");
    const std::size_t own = it->second;
    const std::size_t obj = sim.index_of(object_id);

    if (const auto rep = find_representative_cluster(clustering)) {
        if (*rep == own) return 0.0;
        return 1.0 - best_similarity(obj, clustering.clusters[*rep], sim);
    }

    const std::size_t k = clustering.clusters.size();
    if (k < 2)
        throw InvalidInputError("placement needs a representative cluster or at least two clusters");
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (c == own) continue;
        sum += best_similarity(obj, clustering.clusters[c], sim);
    }
    return 1.0 - sum / static_cast<double>(k - 1);
}

OutlierScore outlier_factor(const std::string& object_id, const Clustering& clustering,
                            const SimilarityMatrix& sim) {
    const auto owner = membership(clustering);
    const auto it = owner.find(object_id);
    if (it == owner.end())
        throw InvalidInputError("object '" + object_id + "' is not in any cluster");

    std::size_t n = 0;
    for (const auto& c : clustering.clusters) n += c.size();

    OutlierScore score;
    score.object_id = object_id;
    score.of_neighbors = of_neighbors(clustering.clusters[it->second].size(), n);
    score.of_location = of_location(object_id, clustering, sim);
    score.of = (score.of_neighbors + score.of_location) / 2.0;
    return score;
}

double outlier_threshold(double mu_of, double sigma_of, double dispersion) {
    check_dispersion(dispersion);
    if (!(sigma_of >= 0.0))
        throw InvalidInputError("sigma must be non-negative, got " + std::to_string(sigma_of));
    return mu_of + (1.0 + 2.0 * dispersion * dispersion) * sigma_of;
}

DetectionReport detect_outliers(const std::vector<std::string>& objects,
                                const Clustering& clustering, const SimilarityMatrix& sim,
                                const DetectionConfig& config) {
    check_dispersion(config.dispersion);
    if (objects.empty()) throw DegenerateInputError("no objects to score");

    const auto owner = membership(clustering);
    if (owner.size() != objects.size())
        throw InvalidInputError("clustering covers " + std::to_string(owner.size()) +
                                " objects but the dataset has " + std::to_string(objects.size()));
    std::unordered_map<std::string, std::size_t> seen;
    for (const std::string& id : objects) {
        if (!owner.count(id))
            throw InvalidInputError("object '" + id + "' is not in any cluster");
        if (!seen.emplace(id, sim.index_of(id)).second)
            throw InvalidInputError("duplicate object id '" + id + "'");
    }

    const std::size_t n = objects.size();
    const std::size_t k = clustering.clusters.size();
    const auto rep = find_representative_cluster(clustering);

    // Matrix indices per cluster, resolved once; the scoring loop below then
    // only gathers doubles.
    std::vector<std::vector<std::size_t>> cluster_idx(k);
    for (std::size_t c = 0; c < k; ++c) {
        cluster_idx[c].reserve(clustering.clusters[c].size());
        for (const std::string& id : clustering.clusters[c])
            cluster_idx[c].push_back(sim.index_of(id));
    }
    auto best_to = [&](std::size_t obj, std::size_t c) {
        const double* row = sim.row(obj);
        double best = 0.0;
        bool any = false;
        for (std::size_t m : cluster_idx[c]) {
            if (!any || row[m] > best) {
                best = row[m];
                any = true;
            }
        }
        return best;
    };

    DetectionReport report;
    report.config = config;
    report.scores.reserve(n);

    for (const std::string& id : objects) {
        const std::size_t obj = seen.at(id);
        const std::size_t own = owner.at(id);

        OutlierScore score;
        score.object_id = id;
        score.of_neighbors = of_neighbors(clustering.clusters[own].size(), n);
        if (rep) {
            score.of_location = *rep == own ? 0.0 : 1.0 - best_to(obj, *rep);
        } else {
            double sum = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                if (c == own) continue;
                sum += best_to(obj, c);
            }
            score.of_location = 1.0 - sum / static_cast<double>(k - 1);
        }
        score.of = (score.of_neighbors + score.of_location) / 2.0;
        report.scores.push_back(std::move(score));
    }

    // Aggregates use plain left-to-right sums in dataset order so repeated
    // runs (and straight-line reimplementations) reproduce them bit for bit.
    double total = 0.0;
    for (const OutlierScore& s : report.scores) total += s.of;
    report.mu_of = total / static_cast<double>(n);
    double sq = 0.0;
    for (const OutlierScore& s : report.scores) {
        const double d = s.of - report.mu_of;
        sq += d * d;
    }
    report.sigma_of = std::sqrt(sq / static_cast<double>(n));
    report.ot = outlier_threshold(report.mu_of, report.sigma_of, config.dispersion);

    for (const OutlierScore& s : report.scores)
        if (s.of > report.ot) report.outliers.push_back(s.object_id);
    std::sort(report.outliers.begin(), report.outliers.end());

    std::unordered_map<std::string, const OutlierScore*> by_id;
    for (const OutlierScore& s : report.scores) by_id.emplace(s.object_id, &s);
    for (std::size_t c = 0; c < k; ++c) {
        ClusterSummary summary;
        summary.cluster_id = "C" + std::to_string(c + 1);
        summary.size = clustering.clusters[c].size();
        double cluster_total = 0.0;
        for (const std::string& id : clustering.clusters[c]) {
            const OutlierScore& s = *by_id.at(id);
            cluster_total += s.of;
            if (s.of > report.ot) ++summary.outlier_count;
        }
        const double mean = cluster_total / static_cast<double>(summary.size);
        double cluster_sq = 0.0;
        for (const std::string& id : clustering.clusters[c]) {
            const double d = by_id.at(id)->of - mean;
            cluster_sq += d * d;
        }
        summary.mean_of = mean;
        summary.std_of = std::sqrt(cluster_sq / static_cast<double>(summary.size));
        report.cluster_summary.push_back(std::move(summary));
    }

    return report;
}

}  // namespace dendro
