#include "dendro/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <utility>

#include "dendro/errors.hpp"
#include "dendro/kernels.hpp"

namespace dendro {

namespace {

// Sentinel stored in dead rows/columns and on the diagonal of the working
// matrix so whole-row maximum scans stay contiguous. Any real similarity
// (>= 0) beats it.
constexpr double kDeadCell = -1.0;

bool lex_less(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double cluster_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                          const SimilarityMatrix& sim) {
    if (a.empty() || b.empty())
        throw InvalidInputError("cluster similarity needs two non-empty clusters");
    std::vector<std::size_t> ia, ib;
    ia.reserve(a.size());
    ib.reserve(b.size());
    for (const auto& id : a) ia.push_back(sim.index_of(id));
    for (const auto& id : b) ib.push_back(sim.index_of(id));
    std::unordered_set<std::size_t> seen(ia.begin(), ia.end());
    for (std::size_t j : ib)
        if (seen.count(j))
            throw InvalidInputError("clusters overlap on object '" + sim.ids()[j] + "'");

    double lowest = 2.0;
    for (std::size_t i : ia) {
        const double* row = sim.row(i);
        for (std::size_t j : ib)
            if (row[j] < lowest) lowest = row[j];
    }
    return lowest;
}

CutThreshold compute_threshold_dense(const double* sim, std::size_t n) {
    if (n < 2)
        throw DegenerateInputError("automatic cut threshold needs at least two objects, got " +
                                   std::to_string(n));
    const auto& k = kernels::active_kernels();
    const std::size_t pairs = n * (n - 1) / 2;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        total += k.reduce_sum(sim + i * n + i + 1, n - i - 1);
    const double mu = total / static_cast<double>(pairs);

    double sq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        sq += k.reduce_sq_dev(sim + i * n + i + 1, n - i - 1, mu);
    const double sigma = std::sqrt(sq / static_cast<double>(pairs));

    return CutThreshold{(2.0 * mu - sigma) / 2.0, mu, sigma};
}

CutThreshold compute_threshold(const SimilarityMatrix& sim) {
    sim.validate();
    return compute_threshold_dense(sim.values().data(), sim.size());
}

Dendrogram build_dendrogram_dense(const double* sim, std::size_t n,
                                  const std::vector<std::int32_t>& tie_rank) {
    if (n == 0) throw InvalidInputError("cannot build a dendrogram over zero objects");
    if (tie_rank.size() != n)
        throw InvalidInputError("tie-rank size does not match the matrix");

    Dendrogram dendro;
    dendro.nodes.resize(n);  // leaves; internal nodes appended per merge
    if (n == 1) return dendro;

    const auto& k = kernels::active_kernels();

    // Working copy with dead diagonal so row scans need no exclusions.
    std::vector<double> w(sim, sim + n * n);
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = kDeadCell;

    std::vector<std::int32_t> node_of(n);                 // slot -> tree node
    std::vector<std::vector<std::int32_t>> members(n);    // slot -> sorted tie ranks
    std::vector<double> best_val(n);                      // slot -> max of its row
    std::vector<std::int32_t> best_peer(n);               // slot -> where that max sits
    std::vector<char> alive(n, 1);
    for (std::size_t s = 0; s < n; ++s) {
        node_of[s] = static_cast<std::int32_t>(s);
        members[s] = {tie_rank[s]};
    }

    auto rescan = [&](std::size_t s) {
        const std::size_t j = k.argmax(&w[s * n], n);
        best_val[s] = w[s * n + j];
        best_peer[s] = static_cast<std::int32_t>(j);
    };
    for (std::size_t s = 0; s < n; ++s) rescan(s);

    // Pairs tied on similarity resolve toward the lexicographically smallest
    // sorted member lists; member lists are disjoint, so compares never tie.
    auto pair_less = [&](std::pair<std::int32_t, std::int32_t> lhs,
                         std::pair<std::int32_t, std::int32_t> rhs) {
        const std::vector<std::int32_t>* l1 = &members[lhs.first];
        const std::vector<std::int32_t>* l2 = &members[lhs.second];
        if (lex_less(*l2, *l1)) std::swap(l1, l2);
        const std::vector<std::int32_t>* r1 = &members[rhs.first];
        const std::vector<std::int32_t>* r2 = &members[rhs.second];
        if (lex_less(*r2, *r1)) std::swap(r1, r2);
        if (lex_less(*l1, *r1)) return true;
        if (lex_less(*r1, *l1)) return false;
        return lex_less(*l2, *r2);
    };

    std::vector<std::int32_t> at_max;
    std::size_t alive_count = n;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        const std::size_t g = k.argmax(best_val.data(), n);
        const double value = best_val[g];

        // Every pair achieving the global maximum has both slots at that
        // value, so candidates live inside this (usually two-element) set.
        at_max.clear();
        for (std::size_t s = 0; s < n; ++s)
            if (alive[s] && best_val[s] == value) at_max.push_back(static_cast<std::int32_t>(s));

        std::pair<std::int32_t, std::int32_t> chosen{-1, -1};
        if (at_max.size() == 2 &&
            w[static_cast<std::size_t>(at_max[0]) * n + static_cast<std::size_t>(at_max[1])] ==
                value) {
            chosen = {at_max[0], at_max[1]};
        } else {
            for (std::size_t x = 0; x < at_max.size(); ++x) {
                for (std::size_t y = x + 1; y < at_max.size(); ++y) {
                    const std::int32_t u = at_max[x], v = at_max[y];
                    if (w[static_cast<std::size_t>(u) * n + v] != value) continue;
                    std::pair<std::int32_t, std::int32_t> cand{u, v};
                    if (chosen.first < 0 || pair_less(cand, chosen)) chosen = cand;
                }
            }
        }
        if (chosen.first < 0)
            throw Error("internal: no merge candidate found at the scanned maximum");
        const std::size_t p = static_cast<std::size_t>(std::min(chosen.first, chosen.second));
        const std::size_t q = static_cast<std::size_t>(std::max(chosen.first, chosen.second));

        // Append the merge node; the canonically smaller child goes left.
        Dendrogram::Node node;
        node.value = value;
        if (lex_less(members[p], members[q])) {
            node.left = node_of[p];
            node.right = node_of[q];
        } else {
            node.left = node_of[q];
            node.right = node_of[p];
        }
        dendro.nodes.push_back(node);
        node_of[p] = static_cast<std::int32_t>(dendro.nodes.size()) - 1;

        // Merged cluster keeps slot p: its row becomes the elementwise
        // minimum of both rows (dead cells stay dead), and the columns of
        // the surviving rows are patched to match.
        k.elementwise_min(&w[p * n], &w[q * n], &w[p * n], n);
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s] || s == p || s == q) continue;
            w[s * n + p] = w[p * n + s];
            w[s * n + q] = kDeadCell;
        }
        alive[q] = 0;
        best_val[q] = kDeadCell;
        --alive_count;

        std::vector<std::int32_t> merged;
        merged.reserve(members[p].size() + members[q].size());
        std::merge(members[p].begin(), members[p].end(), members[q].begin(), members[q].end(),
                   std::back_inserter(merged));
        members[p] = std::move(merged);
        members[q].clear();
        members[q].shrink_to_fit();

        if (alive_count < 2) break;

        // Merging can only lower similarities, so a surviving row's best
        // entry stays valid unless it pointed at one of the merged slots.
        rescan(p);
        const std::int32_t ip = static_cast<std::int32_t>(p);
        const std::int32_t iq = static_cast<std::int32_t>(q);
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s] || s == p) continue;
            if (best_peer[s] == ip || best_peer[s] == iq) rescan(s);
        }
    }

    return dendro;
}

Dendrogram build_dendrogram(const SimilarityMatrix& sim) {
    sim.validate();
    const std::size_t n = sim.size();

    // Tie ranks follow the lexicographic order of the object ids, so the
    // outcome is invariant under row/column permutations of the input.
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return sim.ids()[a] < sim.ids()[b];
    });
    std::vector<std::int32_t> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<std::int32_t>(pos);

    Dendrogram dendro = build_dendrogram_dense(sim.values().data(), n, rank);
    dendro.leaf_ids = sim.ids();
    return dendro;
}

std::vector<std::vector<std::int32_t>> cut_tree(const Dendrogram& dendro, double t) {
    std::vector<std::vector<std::int32_t>> groups;
    if (dendro.nodes.empty()) return groups;

    std::vector<std::int32_t> pending{dendro.root()};
    std::vector<std::int32_t> walk;
    while (!pending.empty()) {
        const std::int32_t top = pending.back();
        pending.pop_back();
        if (!dendro.is_leaf(top) && dendro.nodes[top].value < t) {
            pending.push_back(dendro.nodes[top].right);
            pending.push_back(dendro.nodes[top].left);
            continue;
        }
        // This subtree stays whole: gather its leaves.
        std::vector<std::int32_t> leaves;
        walk.assign(1, top);
        while (!walk.empty()) {
            const std::int32_t cur = walk.back();
            walk.pop_back();
            if (dendro.is_leaf(cur)) {
                leaves.push_back(cur);
            } else {
                walk.push_back(dendro.nodes[cur].right);
                walk.push_back(dendro.nodes[cur].left);
            }
        }
        groups.push_back(std::move(leaves));
    }
    return groups;
}

Clustering cut_dendrogram(const Dendrogram& dendro, const CutThreshold& threshold) {
    if (dendro.leaf_ids.size() != dendro.leaf_count())
        throw InvalidInputError("dendrogram carries no leaf ids to cut against");

    Clustering result;
    result.threshold = threshold;
    result.source_ids = dendro.leaf_ids;
    for (const auto& group : cut_tree(dendro, threshold.t)) {
        std::vector<std::string> ids;
        ids.reserve(group.size());
        for (std::int32_t leaf : group) ids.push_back(dendro.leaf_ids[leaf]);
        std::sort(ids.begin(), ids.end());
        result.clusters.push_back(std::move(ids));
    }
    return result;
}

Clustering cluster(const SimilarityMatrix& sim) {
    if (sim.size() < 2)
        throw DegenerateInputError("clustering needs at least two objects, got " +
                                   std::to_string(sim.size()));
    sim.validate();

    const CutThreshold threshold = compute_threshold_dense(sim.values().data(), sim.size());

    const std::size_t n = sim.size();
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return sim.ids()[a] < sim.ids()[b];
    });
    std::vector<std::int32_t> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<std::int32_t>(pos);

    Dendrogram dendro = build_dendrogram_dense(sim.values().data(), n, rank);
    dendro.leaf_ids = sim.ids();
    return cut_dendrogram(dendro, threshold);
}

}  // namespace dendro
