#include "dendro/pipeline.hpp"

#include <cstdio>
#include <numeric>
#include <utility>

#include "dendro/clustering.hpp"
#include "dendro/errors.hpp"
#include "dendro/io.hpp"
#include "dendro/log.hpp"
#include "dendro/similarity.hpp"

namespace dendro {

namespace {

SimilarityMatrix acquire_matrix(const PipelineConfig& config) {
    switch (config.input_kind) {
        case InputKind::kMatrix:
            return load_similarity_matrix(config.input_path);
        case InputKind::kEvents: {
            const auto dataset = load_events(config.input_path);
            if (dataset.empty())
                throw DegenerateInputError(config.input_path + ": no events to analyse");
            return build_similarity_matrix(dataset, config.jobs);
        }
        case InputKind::kRawSeries: {
            const auto raw = load_raw_series(config.input_path);
            if (raw.empty())
                throw DegenerateInputError(config.input_path + ": no samples to analyse");
            std::vector<EventSeries> dataset;
            dataset.reserve(raw.size());
            for (const RawSeries& series : raw)
                dataset.push_back(detect_events(series, config.detect_threshold));
            std::size_t events = 0;
            for (const EventSeries& s : dataset) events += s.events.size();
            if (events == 0)
                throw DegenerateInputError(
                    config.input_path +
                    ": the event detector found nothing above the threshold");
            return build_similarity_matrix(dataset, config.jobs);
        }
    }
    throw InvalidInputError("unknown input kind");
}

}  // namespace

DetectionReport run_pipeline(const PipelineConfig& config) {
    if (config.threshold_override &&
        !(*config.threshold_override >= 0.0 && *config.threshold_override <= 1.0))
        throw InvalidInputError("threshold override must be in [0, 1]");

    const SimilarityMatrix sim = acquire_matrix(config);
    if (!config.matrix_out.empty()) write_similarity_matrix(sim, config.matrix_out);

    if (sim.size() < 2)
        throw DegenerateInputError("pipeline needs at least two objects, got " +
                                   std::to_string(sim.size()));
    sim.validate();

    CutThreshold threshold = compute_threshold_dense(sim.values().data(), sim.size());
    if (config.threshold_override) {
        threshold.t = *config.threshold_override;
    } else if (threshold.sigma == 0.0) {
        // All off-diagonal similarities identical: the automatic cut level
        // degenerates to that one value and cannot separate anything.
        throw DegenerateInputError(
            "degenerate input: all " + std::to_string(sim.size()) +
            " objects are pairwise equally similar (" + std::to_string(threshold.mu) +
            "), so the automatic cut has no signal; pass an explicit threshold override to "
            "proceed anyway");
    }

    const Dendrogram dendro = build_dendrogram(sim);
    if (!config.dendrogram_out.empty()) write_dendrogram(dendro, config.dendrogram_out);

    const Clustering clustering = cut_dendrogram(dendro, threshold);
    if (!config.clusters_out.empty()) write_clustering(clustering, config.clusters_out);
    log_info("cut at " + std::to_string(threshold.t) + " produced " +
             std::to_string(clustering.clusters.size()) + " clusters");

    const DetectionReport report =
        detect_outliers(sim.ids(), clustering, sim, DetectionConfig{config.dispersion});
    if (!config.report_out.empty()) write_report(report, config.report_out);

    return report;
}

void print_report_summary(const DetectionReport& report, std::ostream& out) {
    char line[160];

    std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s\n", "cluster", "objects",
                  "outliers", "mean_of", "std_of");
    out << line;

    std::size_t total_objects = 0, total_outliers = 0;
    for (const ClusterSummary& c : report.cluster_summary) {
        total_objects += c.size;
        total_outliers += c.outlier_count;
        std::snprintf(line, sizeof line, "%-10s %10zu %10zu %10.3f %10.3f\n",
                      c.cluster_id.c_str(), c.size, c.outlier_count, c.mean_of, c.std_of);
        out << line;
    }
    std::snprintf(line, sizeof line, "%-10s %10zu %10zu %10.3f %10.3f\n", "total", total_objects,
                  total_outliers, report.mu_of, report.sigma_of);
    out << line;

    std::snprintf(line, sizeof line,
                  "score threshold %.3f (dispersion %.2f), %zu outlier(s) flagged\n", report.ot,
                  report.config.dispersion, report.outliers.size());
    out << line;
    if (!report.outliers.empty()) {
        out << "outliers:";
        for (const std::string& id : report.outliers) out << ' ' << id;
        out << '\n';
    }
}

}  // namespace dendro
