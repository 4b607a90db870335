#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dendro/clustering.hpp"
#include "dendro/matrix.hpp"

namespace dendro {

/// Recipe for a reproducible block-structured similarity matrix: every
/// within-block similarity is `intra_similarity` and every cross-block one is
/// `cross_similarity`, each perturbed by noise uniform in [-jitter, +jitter].
/// The bands must stay separated: intra - jitter > cross + jitter.
struct SyntheticSpec {
    std::vector<std::size_t> block_sizes;
    double intra_similarity = 0.9;
    double cross_similarity = 0.1;
    double jitter = 0.0;
    std::uint64_t seed = 0;
};

/// Size-based baseline flagger: every member of every cluster with fewer
/// than `size_threshold` objects, sorted by id.
std::vector<std::string> size_threshold_baseline(const Clustering& clustering,
                                                 std::size_t size_threshold);

/// Reference clustering: repeatedly re-scans all cluster pairs, evaluating
/// the minimum cross-pair similarity directly on the input matrix, merges the
/// most similar pair (same tie rule as the main path: lexicographically
/// smallest sorted member-id lists), and stops once the best pair falls below
/// `t_cut`. Deliberately naive and independent of the production code; capped
/// at 15 objects (OracleScopeError beyond).
Clustering brute_force_clustering(const SimilarityMatrix& sim, double t_cut);

/// Reference outlier detection: a straight-line transcription of the scoring
/// and threshold formulas, sharing no code with detect_outliers. Returns the
/// flagged ids, sorted.
std::vector<std::string> brute_force_detection(const std::vector<std::string>& objects,
                                               const Clustering& clustering,
                                               const SimilarityMatrix& sim, double dispersion);

/// Materialises the spec above. Identical spec (including seed) means a
/// bit-identical matrix on every platform: noise comes from std::mt19937_64
/// seeded with `seed`, one draw per strict-upper-triangle cell in row-major
/// order, each draw mapped to [0, 1) via (x >> 11) * 2^-53. Object ids are
/// "o000", "o001", ... with blocks occupying consecutive index ranges in the
/// order given by block_sizes. Values are clamped to [0, 1].
SimilarityMatrix generate_synthetic_matrix(const SyntheticSpec& spec);

}  // namespace dendro
