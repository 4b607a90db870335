#include "dendro/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "dendro/clustering.hpp"
#include "dendro/errors.hpp"
#include "dendro/kernels.hpp"

namespace dendro {

double cityblock_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw InvalidInputError("feature dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
    for (double v : a)
        if (!std::isfinite(v)) throw InvalidInputError("non-finite feature value");
    for (double v : b)
        if (!std::isfinite(v)) throw InvalidInputError("non-finite feature value");
    return kernels::sum_abs_diff(a.data(), b.data(), a.size());
}

namespace {

// Pooled view used while matching the events of one series pair. Events keep
// their position inside their own (id-ordered) series for tie resolution.
struct PooledEvent {
    const Event* event;
    bool from_first;        // series with the smaller id?
    std::int32_t in_series; // index within that series' event list
};

void check_event(const Event& e) {
    if (e.features.empty())
        throw InvalidInputError("event '" + e.event_id + "' has no features");
    for (double v : e.features)
        if (!std::isfinite(v))
            throw InvalidInputError("event '" + e.event_id + "' has a non-finite feature");
    if (!(e.end >= e.start))
        throw InvalidInputError("event '" + e.event_id + "' ends before it starts");
}

// Groups pooled events by feature closeness: pairwise city-block distances
// are rescaled to similarities (1 - d / d_max) and run through the same
// agglomerative build + automatic cut used for series. Degenerate pools
// (a single event, or all distances zero) form one group.
std::vector<std::vector<std::int32_t>> group_pooled_events(
    const std::vector<PooledEvent>& pool, std::vector<double>& dists) {
    const std::size_t m = pool.size();
    const auto& k = kernels::active_kernels();

    dists.assign(m * m, 0.0);
    double d_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = k.sum_abs_diff(pool[i].event->features.data(),
                                            pool[j].event->features.data(),
                                            pool[i].event->features.size());
            dists[i * m + j] = d;
            dists[j * m + i] = d;
            if (d > d_max) d_max = d;
        }
    }

    if (m == 1 || d_max == 0.0) {
        std::vector<std::int32_t> all(m);
        std::iota(all.begin(), all.end(), 0);
        return {all};
    }

    std::vector<double> sims(m * m);
    for (std::size_t i = 0; i < m * m; ++i) sims[i] = 1.0 - dists[i] / d_max;
    for (std::size_t i = 0; i < m; ++i) sims[i * m + i] = 1.0;

    std::vector<std::int32_t> rank(m);
    std::iota(rank.begin(), rank.end(), 0);  // pool order is already canonical

    const Dendrogram dendro = build_dendrogram_dense(sims.data(), m, rank);
    const CutThreshold threshold = compute_threshold_dense(sims.data(), m);
    return cut_tree(dendro, threshold.t);
}

// Pairs plus the duration bookkeeping series_similarity needs. Keeping the
// matched and unmatched sums next to the pairing (instead of re-summing all
// events separately) makes the similarity invariants exact in floating
// point: identical series score exactly 1 and no score can exceed 1.
struct MatchResult {
    std::vector<EventPair> pairs;
    double matched = 0.0;    // summed duration of all paired events
    double unmatched = 0.0;  // summed duration of everything left over
};

MatchResult match_common_events(const EventSeries& a, const EventSeries& b) {
    if (a.series_id == b.series_id)
        throw InvalidInputError("cannot match series '" + a.series_id + "' against itself");

    // Normalising the argument order here is what makes the whole similarity
    // computation exactly symmetric.
    const EventSeries& first = a.series_id < b.series_id ? a : b;
    const EventSeries& second = a.series_id < b.series_id ? b : a;

    std::size_t dim = 0;
    std::vector<PooledEvent> pool;
    pool.reserve(first.events.size() + second.events.size());
    for (const EventSeries* series : {&first, &second}) {
        std::int32_t idx = 0;
        for (const Event& e : series->events) {
            check_event(e);
            if (dim == 0)
                dim = e.features.size();
            else if (e.features.size() != dim)
                throw InvalidInputError("event '" + e.event_id + "' has " +
                                        std::to_string(e.features.size()) + " features, expected " +
                                        std::to_string(dim));
            pool.push_back({&e, series == &first, idx++});
        }
    }
    MatchResult result;
    if (pool.empty()) return result;

    std::vector<double> dists;
    const auto groups = group_pooled_events(pool, dists);
    const std::size_t m = pool.size();

    std::vector<char> used(m, 0);
    for (const auto& group : groups) {
        // Greedily match the closest cross-series events inside this group;
        // ties go to the earliest (left index, right index) combination, so
        // scan in pool order (first series' events, then the second's, each
        // in series order).
        std::vector<std::int32_t> ordered(group);
        std::sort(ordered.begin(), ordered.end());
        while (true) {
            std::int32_t best_l = -1, best_r = -1;
            double best_d = 0.0;
            for (std::int32_t u : ordered) {
                if (used[u] || !pool[u].from_first) continue;
                for (std::int32_t v : ordered) {
                    if (used[v] || pool[v].from_first) continue;
                    const double d = dists[static_cast<std::size_t>(u) * m + v];
                    if (best_l < 0 || d < best_d) {
                        best_d = d;
                        best_l = u;
                        best_r = v;
                    }
                }
            }
            if (best_l < 0) break;
            used[best_l] = used[best_r] = 1;
            result.pairs.push_back({*pool[best_l].event, *pool[best_r].event, best_d});
            result.matched += pair_length(result.pairs.back());
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!used[i]) result.unmatched += event_length(*pool[i].event);
    return result;
}

}  // namespace

std::vector<EventPair> extract_common_events(const EventSeries& a, const EventSeries& b) {
    return match_common_events(a, b).pairs;
}

double series_similarity(const EventSeries& a, const EventSeries& b) {
    const MatchResult match = match_common_events(a, b);

    // Denominator covers every event of both series, matched or not. Both
    // sums follow the normalised (smaller series id first) pool order, so
    // argument order cannot change a bit, and matched <= total holds exactly.
    const double total = match.matched + match.unmatched;
    if (total == 0.0) return 1.0;
    return match.matched / total;
}

SimilarityMatrix build_similarity_matrix(const std::vector<EventSeries>& dataset, unsigned jobs) {
    const std::size_t n = dataset.size();
    if (n == 0) throw InvalidInputError("dataset is empty");

    std::unordered_set<std::string> ids;
    for (const EventSeries& s : dataset)
        if (!ids.insert(s.series_id).second)
            throw InvalidInputError("duplicate series id '" + s.series_id + "'");

    std::size_t dim = 0;
    for (const EventSeries& s : dataset) {
        for (const Event& e : s.events) {
            check_event(e);
            if (dim == 0)
                dim = e.features.size();
            else if (e.features.size() != dim)
                throw InvalidInputError("event '" + e.event_id + "' has " +
                                        std::to_string(e.features.size()) +
                                        " features, expected " + std::to_string(dim));
        }
    }

    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;

    // Unordered pairs, flattened; each worker owns a contiguous chunk and is
    // the only writer of its cells, so results do not depend on thread count.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> work;
    work.reserve(n * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) work.emplace_back(i, j);

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(work.size(), 1));

    auto run_chunk = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t f = lo; f < hi; ++f) {
            const auto [i, j] = work[f];
            const double s = series_similarity(dataset[i], dataset[j]);
            values[static_cast<std::size_t>(i) * n + j] = s;
            values[static_cast<std::size_t>(j) * n + i] = s;
        }
    };

    if (jobs <= 1 || work.size() <= 1) {
        run_chunk(0, work.size());
    } else {
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        const std::size_t per = (work.size() + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            const std::size_t lo = std::min<std::size_t>(t * per, work.size());
            const std::size_t hi = std::min<std::size_t>(lo + per, work.size());
            if (lo < hi) workers.emplace_back(run_chunk, lo, hi);
        }
        for (auto& w : workers) w.join();
    }

    std::vector<std::string> names;
    names.reserve(n);
    for (const EventSeries& s : dataset) names.push_back(s.series_id);
    return SimilarityMatrix(std::move(names), std::move(values));
}

}  // namespace dendro
