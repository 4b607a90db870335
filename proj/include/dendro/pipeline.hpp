#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "dendro/detection.hpp"

namespace dendro {

enum class InputKind { kEvents, kMatrix, kRawSeries };

/// Everything one end-to-end run needs. Identical config + input bytes give
/// a byte-identical report.
struct PipelineConfig {
    InputKind input_kind = InputKind::kEvents;
    std::string input_path;
    double dispersion = 0.0;

    /// Replaces the automatic cut level; must be in [0, 1].
    std::optional<double> threshold_override;

    /// Threads for the similarity-matrix build; 0 = one per hardware core.
    unsigned jobs = 0;

    /// Only for raw-series input: level for the run-based event detector.
    double detect_threshold = 0.0;

    // Optional artefact paths; empty = don't write.
    std::string report_out;
    std::string matrix_out;
    std::string dendrogram_out;
    std::string clusters_out;
};

/// Load / build similarity matrix -> dendrogram -> cut -> score -> report.
/// Raises DegenerateInputError when the off-diagonal similarities are all
/// identical (the automatic cut has no signal to work with — every
/// two-object dataset is in this position) unless an override threshold is
/// supplied.
DetectionReport run_pipeline(const PipelineConfig& config);

/// Human-readable per-cluster table plus threshold and outlier ids.
void print_report_summary(const DetectionReport& report, std::ostream& out);

}  // namespace dendro
