#pragma once

#include <string>
#include <vector>

#include "dendro/clustering.hpp"
#include "dendro/detection.hpp"
#include "dendro/events.hpp"
#include "dendro/matrix.hpp"

namespace dendro {

/// One raw, regularly sampled signal (long-format CSV row group).
struct RawSeries {
    std::string series_id;
    std::vector<double> t;
    std::vector<double> value;
};

// --- similarity matrices --------------------------------------------------
//
// CSV layout: header "id,<id1>,...,<idn>", then one row per object repeating
// its id in the first column. Cells are written with 9 significant digits.
// On load, deviations up to 1e-9 from symmetry / a unit diagonal / the [0,1]
// range are repaired (with a warning naming the cell); anything larger is a
// DataInvariantError. Structural problems raise FormatError with the line.

SimilarityMatrix load_similarity_matrix(const std::string& path);
void write_similarity_matrix(const SimilarityMatrix& sim, const std::string& path);

// --- event series (JSON lines) ---------------------------------------------
//
// One object per line: {"series_id", "event_id", "start", "end", "features"}.
// Series come back sorted by id, events sorted by (start, end, event_id).
// Malformed lines, non-finite numbers, empty or inconsistent feature vectors
// and end < start all raise FormatError naming the line.

std::vector<EventSeries> load_events(const std::string& path);

// --- raw series (CSV: series_id,t,value) ------------------------------------

std::vector<RawSeries> load_raw_series(const std::string& path);

/// Minimal event detector for demos: every maximal run of samples with
/// value > threshold becomes one event, with features
/// [mean value, peak value, run length in samples].
EventSeries detect_events(const RawSeries& series, double threshold);

// --- clusterings, dendrograms, reports (JSON) -------------------------------

void write_clustering(const Clustering& clustering, const std::string& path);
Clustering load_clustering(const std::string& path);

void write_dendrogram(const Dendrogram& dendro, const std::string& path);
Dendrogram load_dendrogram(const std::string& path);

/// Report serialisation is canonical: fixed key order, values rounded to six
/// decimals, shortest-round-trip number formatting — identical runs produce
/// byte-identical files.
std::string report_to_json(const DetectionReport& report);
void write_report(const DetectionReport& report, const std::string& path);

}  // namespace dendro
