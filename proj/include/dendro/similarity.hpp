#pragma once

#include <set>
#include <string>
#include <vector>

#include "dendro/events.hpp"
#include "dendro/matrix.hpp"

namespace dendro {

/// City-block (L1) distance between two feature vectors of equal dimension.
/// Mismatched dimensions or non-finite components raise InvalidInputError.
double cityblock_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Duration covered by an event. Zero-length events are legal.
inline double event_length(const Event& e) { return e.end >= e.start ? e.end - e.start : e.start - e.end; }

/// Combined duration of a matched pair.
inline double pair_length(const EventPair& p) { return event_length(p.left) + event_length(p.right); }

/// Matches events of two distinct series that describe the same kind of
/// episode. The pooled events of both series are grouped by feature-space
/// closeness (distances rescaled to similarities and clustered with the same
/// agglomerative machinery used on series, with its automatic cut); inside
/// each group, cross-series events are then matched greedily by ascending
/// city-block distance. The two series are processed in id order, so the
/// result does not depend on argument order; `left` of every pair belongs to
/// the series with the smaller id.
std::vector<EventPair> extract_common_events(const EventSeries& a, const EventSeries& b);

/// Similarity of two series: the summed duration of their matched events
/// divided by the summed duration of all their events. 1 when that
/// denominator is zero (nothing to compare), otherwise in [0, 1], and exactly
/// symmetric in its arguments.
double series_similarity(const EventSeries& a, const EventSeries& b);

/// Reference set-overlap similarity: |A intersect B| / |A union B|, and 1
/// when both sets are empty.
template <typename T>
double jaccard_similarity(const std::set<T>& a, const std::set<T>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    for (const T& v : a) common += b.count(v);
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

/// Full pairwise similarity matrix over a dataset of event series. Ids must
/// be distinct and feature dimensions uniform across the dataset. Pairs are
/// independent, so they may be evaluated on `jobs` threads (0 = one per
/// hardware core) with bit-identical results regardless of the thread count.
SimilarityMatrix build_similarity_matrix(const std::vector<EventSeries>& dataset,
                                         unsigned jobs = 1);

}  // namespace dendro
