#pragma once

// Shared helpers for the test binaries: reproducible random inputs and a few
// canonicalisers for order-free comparisons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "dendro/clustering.hpp"
#include "dendro/events.hpp"
#include "dendro/matrix.hpp"

namespace testutil {

/// Valid random similarity matrix with ids "s00", "s01", ... A positive
/// `quantum` snaps off-diagonal values to multiples of it, which makes tied
/// similarities common instead of vanishingly rare.
inline dendro::SimilarityMatrix random_matrix(std::size_t n, std::uint64_t seed,
                                              double quantum = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> values(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = unit(rng);
            if (quantum > 0.0) v = std::min(1.0, std::round(v / quantum) * quantum);
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }

    std::vector<std::string> ids;
    ids.reserve(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "s%03zu", i);
        ids.emplace_back(buf);
    }
    return dendro::SimilarityMatrix(std::move(ids), std::move(values));
}

/// Clustering as a set of sorted member lists, for comparisons that must not
/// depend on cluster order.
inline std::set<std::vector<std::string>> partition_of(const dendro::Clustering& c) {
    std::set<std::vector<std::string>> out;
    for (auto members : c.clusters) {
        std::sort(members.begin(), members.end());
        out.insert(std::move(members));
    }
    return out;
}

/// True when every cluster of `fine` is contained in one cluster of `coarse`.
inline bool refines(const dendro::Clustering& fine, const dendro::Clustering& coarse) {
    for (const auto& small : fine.clusters) {
        bool contained = false;
        for (const auto& big : coarse.clusters) {
            const std::set<std::string> bag(big.begin(), big.end());
            bool all = true;
            for (const auto& id : small)
                if (!bag.count(id)) {
                    all = false;
                    break;
                }
            if (all) {
                contained = true;
                break;
            }
        }
        if (!contained) return false;
    }
    return true;
}

/// Random event series: `count` events with `dims` features each. Occasional
/// zero-length events are produced on purpose.
inline dendro::EventSeries random_series(const std::string& id, std::size_t count,
                                         std::size_t dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    dendro::EventSeries series;
    series.series_id = id;
    double clock = 0.0;
    for (std::size_t e = 0; e < count; ++e) {
        dendro::Event event;
        event.series_id = id;
        event.event_id = id + "_e" + std::to_string(e + 1);
        clock += 1.0 + 10.0 * unit(rng);
        event.start = clock;
        const double duration = unit(rng) < 0.15 ? 0.0 : 20.0 * unit(rng);
        event.end = clock + duration;
        clock = event.end;
        for (std::size_t d = 0; d < dims; ++d) event.features.push_back(10.0 * unit(rng));
        series.events.push_back(std::move(event));
    }
    return series;
}

/// Fresh scratch directory under the system temp root.
inline std::string scratch_dir(const std::string& tag) {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("dendro_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace testutil
