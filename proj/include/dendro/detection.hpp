#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dendro/clustering.hpp"
#include "dendro/matrix.hpp"

namespace dendro {

/// Knobs for scoring a clustering. `dispersion` expresses how spread out the
/// analyst expects the data to be, in [0, 1]: higher values push the outlier
/// threshold up and flag less.
struct DetectionConfig {
    double dispersion = 0.0;
};

/// Per-object outlier evidence. `of` is always the arithmetic mean of the
/// two components; all three live in [0, 1].
struct OutlierScore {
    std::string object_id;
    double of_neighbors = 0.0;
    double of_location = 0.0;
    double of = 0.0;
};

/// Per-cluster roll-up for reporting.
struct ClusterSummary {
    std::string cluster_id;
    std::size_t size = 0;
    std::size_t outlier_count = 0;
    double mean_of = 0.0;
    double std_of = 0.0;
};

struct DetectionReport {
    DetectionConfig config;
    std::vector<OutlierScore> scores;  // in dataset order
    double mu_of = 0.0;                // mean of all `of` values
    double sigma_of = 0.0;             // population standard deviation
    double ot = 0.0;                   // outlier threshold actually applied
    std::vector<std::string> outliers; // ids with of > ot, sorted
    std::vector<ClusterSummary> cluster_summary;
};

/// The cluster holding a strict majority of all objects, if any.
/// At most one can exist; returns its index into `clustering.clusters`.
std::optional<std::size_t> find_representative_cluster(const Clustering& clustering);

/// Population-share component: 1 - cluster_size / n. Requires
/// 1 <= cluster_size <= n.
double of_neighbors(std::size_t cluster_size, std::size_t n);

/// Highest similarity between `object_id` and any member of `cluster`
/// (1 if the object itself is a member).
double object_cluster_similarity(const std::string& object_id,
                                 const std::vector<std::string>& cluster,
                                 const SimilarityMatrix& sim);

/// Placement component. With a representative cluster: 0 for its members,
/// 1 - (similarity to it) for everyone else. Without one: one minus the mean
/// of the object's best similarity to each cluster it does not belong to.
double of_location(const std::string& object_id, const Clustering& clustering,
                   const SimilarityMatrix& sim);

/// Both components plus their mean for one object.
OutlierScore outlier_factor(const std::string& object_id, const Clustering& clustering,
                            const SimilarityMatrix& sim);

/// Score threshold mu + (1 + 2 d^2) sigma. Requires sigma >= 0 and
/// dispersion in [0, 1].
double outlier_threshold(double mu_of, double sigma_of, double dispersion);

/// Scores every object of `objects` (which the clustering must partition and
/// the matrix must cover) and flags those strictly above the threshold.
DetectionReport detect_outliers(const std::vector<std::string>& objects,
                                const Clustering& clustering, const SimilarityMatrix& sim,
                                const DetectionConfig& config);

}  // namespace dendro
