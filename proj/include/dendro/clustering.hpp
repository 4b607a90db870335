#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dendro/matrix.hpp"

namespace dendro {

/// Binary merge tree over the matrix objects. Nodes 0..n-1 are the leaves in
/// matrix order (value 1); each merge appends one internal node, so the last
/// node is the root and children always precede their parent.
///
/// An internal node's value is the similarity at which its two children were
/// merged, which for the min-linkage rule used here equals the minimum
/// pairwise similarity among all leaves beneath the node. Values never
/// increase from leaves to root.
struct Dendrogram {
    struct Node {
        std::int32_t left = -1;  // < 0 marks a leaf
        std::int32_t right = -1;
        double value = 1.0;
    };

    std::vector<Node> nodes;
    std::vector<std::string> leaf_ids;  // size leaf_count(); may be empty for
                                        // intermediate trees without ids

    std::size_t leaf_count() const { return (nodes.size() + 1) / 2; }
    std::int32_t root() const { return static_cast<std::int32_t>(nodes.size()) - 1; }
    bool is_leaf(std::int32_t node) const { return nodes[node].left < 0; }
};

/// Similarity level of the automatic dendrogram cut: the midpoint of
/// [mu - sigma, mu], where mu and sigma are the mean and population standard
/// deviation of the strict upper triangle of the similarity matrix.
struct CutThreshold {
    double t = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
};

/// A flat partition of the matrix objects. Cluster order follows a
/// depth-first walk of the dendrogram; members are sorted by id.
struct Clustering {
    std::vector<std::vector<std::string>> clusters;
    CutThreshold threshold;
    std::vector<std::string> source_ids;
};

/// Similarity between two disjoint, non-empty groups of objects: the minimum
/// pairwise similarity across the groups. Unknown or overlapping ids raise
/// InvalidInputError.
double cluster_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                          const SimilarityMatrix& sim);

/// Automatic cut level for `sim`. Needs at least two objects
/// (DegenerateInputError otherwise).
CutThreshold compute_threshold(const SimilarityMatrix& sim);

/// Cut level computed from a raw dense matrix (row-major, n x n).
CutThreshold compute_threshold_dense(const double* sim, std::size_t n);

/// Agglomerates the matrix objects pairwise, always merging the currently
/// most similar pair of clusters; equal similarities are resolved toward the
/// pair whose sorted member-id lists compare lexicographically smallest.
/// Validates the matrix invariants first (InvalidInputError).
Dendrogram build_dendrogram(const SimilarityMatrix& sim);

/// As build_dendrogram, but over a raw dense matrix without ids.
/// `tie_rank[i]` orders leaf i for tie resolution (a permutation of 0..n-1);
/// the matrix is trusted, not validated.
Dendrogram build_dendrogram_dense(const double* sim, std::size_t n,
                                  const std::vector<std::int32_t>& tie_rank);

/// Maximal subtrees whose value is at least `t`, as leaf-index groups in
/// depth-first order. Leaves always qualify, so the result is a partition of
/// all leaves for any finite t.
std::vector<std::vector<std::int32_t>> cut_tree(const Dendrogram& dendro, double t);

/// cut_tree plus id bookkeeping: members sorted by id, thresholds recorded.
Clustering cut_dendrogram(const Dendrogram& dendro, const CutThreshold& threshold);

/// Full clustering pass: build the dendrogram and cut it at the automatic
/// threshold. Needs at least two objects.
Clustering cluster(const SimilarityMatrix& sim);

}  // namespace dendro
