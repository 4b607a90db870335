#include "dendro/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "dendro/errors.hpp"
#include "dendro/log.hpp"

namespace dendro {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kRepairTolerance = 1e-9;

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    // Tolerate trailing carriage returns from foreign line endings.
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

double parse_double(const std::string& token, const std::string& where) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw FormatError(where + ": '" + token + "' is not a number");
    if (!std::isfinite(value)) throw FormatError(where + ": '" + token + "' is not finite");
    return value;
}

void check_plain_id(const std::string& id) {
    if (id.empty()) throw InvalidInputError("empty object id");
    if (id.find_first_of(",\"\n\r") != std::string::npos)
        throw InvalidInputError("object id '" + id + "' contains CSV delimiter characters");
}

std::string format_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

SimilarityMatrix load_similarity_matrix(const std::string& path) {
    std::ifstream in = open_for_read(path);

    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ":1: missing header row");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2)
        throw FormatError(path + ":1: header must list at least one object id");
    const std::vector<std::string> ids(header.begin() + 1, header.end());
    const std::size_t n = ids.size();

    std::vector<double> values(n * n, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        const std::size_t line_no = row + 2;
        if (!std::getline(in, line))
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(n) + " data rows, found " + std::to_string(row));
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != n + 1)
            throw FormatError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(n + 1) + " fields, found " +
                              std::to_string(fields.size()));
        if (fields[0] != ids[row])
            throw FormatError(path + ":" + std::to_string(line_no) + ": row id '" + fields[0] +
                              "' does not match column order ('" + ids[row] + "' expected)");
        for (std::size_t col = 0; col < n; ++col)
            values[row * n + col] = parse_double(
                fields[col + 1], path + ":" + std::to_string(line_no));
    }
    if (std::getline(in, line) && !line.empty())
        throw FormatError(path + ":" + std::to_string(n + 2) + ": unexpected extra data row");

    // Repair pass. Tiny numeric wobble (<= 1e-9) from round-tripping through
    // text is fixed up with a warning; real violations name the cell.
    auto cell_name = [&](std::size_t i, std::size_t j) {
        return "(" + ids[i] + ", " + ids[j] + ")";
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double& v = values[i * n + j];
            if (v < 0.0 || v > 1.0) {
                if (v < -kRepairTolerance || v > 1.0 + kRepairTolerance)
                    throw DataInvariantError(path + ": similarity " + cell_name(i, j) + " = " +
                                             format_cell(v) + " is outside [0, 1]");
                const double clamped = std::clamp(v, 0.0, 1.0);
                log_warn(path + ": clamped similarity " + cell_name(i, j) + " from " +
                         format_cell(v) + " to " + format_cell(clamped));
                v = clamped;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double& v = values[i * n + i];
        if (v != 1.0) {
            if (std::fabs(v - 1.0) > kRepairTolerance)
                throw DataInvariantError(path + ": diagonal " + cell_name(i, i) + " = " +
                                         format_cell(v) + " is not 1");
            log_warn(path + ": snapped diagonal " + cell_name(i, i) + " from " + format_cell(v) +
                     " to 1");
            v = 1.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double& a = values[i * n + j];
            double& b = values[j * n + i];
            if (a != b) {
                if (std::fabs(a - b) > kRepairTolerance)
                    throw DataInvariantError(path + ": similarity " + cell_name(i, j) + " = " +
                                             format_cell(a) + " does not match " +
                                             cell_name(j, i) + " = " + format_cell(b));
                const double mean = (a + b) / 2.0;
                log_warn(path + ": symmetrised " + cell_name(i, j) + "/" + cell_name(j, i) +
                         " to " + format_cell(mean));
                a = b = mean;
            }
        }
    }

    return SimilarityMatrix(ids, std::move(values));
}

void write_similarity_matrix(const SimilarityMatrix& sim, const std::string& path) {
    for (const std::string& id : sim.ids()) check_plain_id(id);
    std::ofstream out = open_for_write(path);
    const std::size_t n = sim.size();

    out << "id";
    for (const std::string& id : sim.ids()) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << sim.ids()[i];
        for (std::size_t j = 0; j < n; ++j) out << ',' << format_cell(sim.at(i, j));
        out << '\n';
    }
    if (!out) throw FormatError("failed writing '" + path + "'");
}

std::vector<EventSeries> load_events(const std::string& path) {
    std::ifstream in = open_for_read(path);

    std::map<std::string, std::vector<Event>> by_series;
    std::size_t dim = 0;
    std::string dim_origin;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);

        json row;
        try {
            row = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(where + ": " + e.what());
        }
        if (!row.is_object()) throw FormatError(where + ": expected a JSON object");

        Event event;
        try {
            event.series_id = row.at("series_id").get<std::string>();
            event.event_id = row.at("event_id").get<std::string>();
            event.start = row.at("start").get<double>();
            event.end = row.at("end").get<double>();
            event.features = row.at("features").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw FormatError(where + ": " + e.what());
        }

        if (event.series_id.empty()) throw FormatError(where + ": empty series_id");
        if (event.event_id.empty()) throw FormatError(where + ": empty event_id");
        if (!std::isfinite(event.start) || !std::isfinite(event.end))
            throw FormatError(where + ": non-finite timestamp");
        if (event.end < event.start)
            throw FormatError(where + ": event ends before it starts");
        if (event.features.empty()) throw FormatError(where + ": empty feature vector");
        for (double v : event.features)
            if (!std::isfinite(v)) throw FormatError(where + ": non-finite feature value");
        if (dim == 0) {
            dim = event.features.size();
            dim_origin = where;
        } else if (event.features.size() != dim) {
            throw FormatError(where + ": feature dimension " +
                              std::to_string(event.features.size()) + " differs from " +
                              std::to_string(dim) + " established at " + dim_origin);
        }

        by_series[event.series_id].push_back(std::move(event));
    }

    std::vector<EventSeries> dataset;
    dataset.reserve(by_series.size());
    for (auto& [id, events] : by_series) {
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
            if (a.start != b.start) return a.start < b.start;
            if (a.end != b.end) return a.end < b.end;
            return a.event_id < b.event_id;
        });
        dataset.push_back({id, std::move(events)});
    }
    return dataset;
}

std::vector<RawSeries> load_raw_series(const std::string& path) {
    std::ifstream in = open_for_read(path);

    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ":1: missing header row");
    {
        const auto header = split_csv_line(line);
        if (header.size() != 3 || header[0] != "series_id" || header[1] != "t" ||
            header[2] != "value")
            throw FormatError(path + ":1: expected header 'series_id,t,value'");
    }

    std::map<std::string, RawSeries> by_id;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw FormatError(where + ": expected 3 fields");
        if (fields[0].empty()) throw FormatError(where + ": empty series_id");

        RawSeries& series = by_id[fields[0]];
        series.series_id = fields[0];
        series.t.push_back(parse_double(fields[1], where));
        series.value.push_back(parse_double(fields[2], where));
    }

    std::vector<RawSeries> out;
    out.reserve(by_id.size());
    for (auto& [id, series] : by_id) {
        // Keep samples in time order regardless of file order.
        std::vector<std::size_t> order(series.t.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return series.t[a] < series.t[b];
        });
        RawSeries sorted;
        sorted.series_id = series.series_id;
        sorted.t.reserve(order.size());
        sorted.value.reserve(order.size());
        for (std::size_t i : order) {
            sorted.t.push_back(series.t[i]);
            sorted.value.push_back(series.value[i]);
        }
        out.push_back(std::move(sorted));
    }
    return out;
}

EventSeries detect_events(const RawSeries& series, double threshold) {
    if (!std::isfinite(threshold)) throw InvalidInputError("detection threshold must be finite");

    EventSeries result;
    result.series_id = series.series_id;

    const std::size_t n = series.value.size();
    std::size_t i = 0;
    std::size_t counter = 0;
    while (i < n) {
        if (!(series.value[i] > threshold)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double sum = 0.0, peak = series.value[i];
        while (j < n && series.value[j] > threshold) {
            sum += series.value[j];
            if (series.value[j] > peak) peak = series.value[j];
            ++j;
        }
        const double count = static_cast<double>(j - i);
        Event event;
        event.series_id = series.series_id;
        event.event_id = series.series_id + "_ev" + std::to_string(++counter);
        event.start = series.t[i];
        event.end = series.t[j - 1];
        event.features = {sum / count, peak, count};
        result.events.push_back(std::move(event));
        i = j;
    }
    return result;
}

void write_clustering(const Clustering& clustering, const std::string& path) {
    ordered_json doc;
    doc["threshold"] = {{"t", clustering.threshold.t},
                        {"mu", clustering.threshold.mu},
                        {"sigma", clustering.threshold.sigma}};
    doc["source_ids"] = clustering.source_ids;
    ordered_json clusters = ordered_json::array();
    for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
        ordered_json entry;
        entry["id"] = "C" + std::to_string(c + 1);
        entry["members"] = clustering.clusters[c];
        clusters.push_back(std::move(entry));
    }
    doc["clusters"] = std::move(clusters);

    std::ofstream out = open_for_write(path);
    out << doc.dump(2) << '\n';
    if (!out) throw FormatError("failed writing '" + path + "'");
}

Clustering load_clustering(const std::string& path) {
    std::ifstream in = open_for_read(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }

    Clustering clustering;
    try {
        clustering.threshold.t = doc.at("threshold").at("t").get<double>();
        clustering.threshold.mu = doc.at("threshold").at("mu").get<double>();
        clustering.threshold.sigma = doc.at("threshold").at("sigma").get<double>();
        clustering.source_ids = doc.at("source_ids").get<std::vector<std::string>>();
        for (const auto& entry : doc.at("clusters"))
            clustering.clusters.push_back(entry.at("members").get<std::vector<std::string>>());
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }

    // The clusters must partition source_ids exactly.
    std::unordered_set<std::string> seen;
    std::size_t total = 0;
    for (const auto& members : clustering.clusters) {
        if (members.empty())
            throw DataInvariantError(path + ": clustering contains an empty cluster");
        for (const std::string& id : members) {
            if (!seen.insert(id).second)
                throw DataInvariantError(path + ": object '" + id +
                                         "' appears in more than one cluster");
            ++total;
        }
    }
    if (total != clustering.source_ids.size())
        throw DataInvariantError(path + ": clusters cover " + std::to_string(total) +
                                 " objects but source_ids lists " +
                                 std::to_string(clustering.source_ids.size()));
    for (const std::string& id : clustering.source_ids)
        if (!seen.count(id))
            throw DataInvariantError(path + ": source id '" + id + "' is in no cluster");

    return clustering;
}

void write_dendrogram(const Dendrogram& dendro, const std::string& path) {
    if (dendro.leaf_ids.size() != dendro.leaf_count())
        throw InvalidInputError("dendrogram carries no leaf ids, cannot serialise");

    // Children always precede parents, so building node documents in index
    // order needs no recursion.
    std::vector<ordered_json> docs(dendro.nodes.size());
    for (std::size_t i = 0; i < dendro.nodes.size(); ++i) {
        const auto& node = dendro.nodes[i];
        ordered_json j;
        j["node_id"] = i;
        j["value"] = node.value;
        if (node.left < 0) {
            j["object_id"] = dendro.leaf_ids[i];
        } else {
            j["children"] = ordered_json::array({std::move(docs[node.left]),
                                                 std::move(docs[node.right])});
        }
        docs[i] = std::move(j);
    }

    std::ofstream out = open_for_write(path);
    out << docs.back().dump(2) << '\n';
    if (!out) throw FormatError("failed writing '" + path + "'");
}

Dendrogram load_dendrogram(const std::string& path) {
    std::ifstream in = open_for_read(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }

    // First pass over the tree: count nodes and find the leaf count.
    std::size_t node_count = 0;
    {
        std::vector<const json*> stack{&doc};
        while (!stack.empty()) {
            const json* cur = stack.back();
            stack.pop_back();
            ++node_count;
            if (cur->contains("children")) {
                const auto& ch = cur->at("children");
                if (!ch.is_array() || ch.size() != 2)
                    throw FormatError(path + ": internal nodes need exactly two children");
                stack.push_back(&ch[0]);
                stack.push_back(&ch[1]);
            }
        }
    }
    if (node_count % 2 == 0)
        throw FormatError(path + ": a binary merge tree must have an odd node count");
    const std::size_t n = (node_count + 1) / 2;

    Dendrogram dendro;
    dendro.nodes.resize(node_count);
    dendro.leaf_ids.assign(n, "");
    std::vector<char> filled(node_count, 0);

    try {
        std::vector<const json*> stack{&doc};
        while (!stack.empty()) {
            const json* cur = stack.back();
            stack.pop_back();
            const std::size_t id = cur->at("node_id").get<std::size_t>();
            if (id >= node_count || filled[id])
                throw FormatError(path + ": node ids must be 0.." +
                                  std::to_string(node_count - 1) + " without repeats");
            filled[id] = 1;
            Dendrogram::Node& node = dendro.nodes[id];
            node.value = cur->at("value").get<double>();
            if (cur->contains("children")) {
                const auto& ch = cur->at("children");
                node.left = static_cast<std::int32_t>(ch[0].at("node_id").get<std::size_t>());
                node.right = static_cast<std::int32_t>(ch[1].at("node_id").get<std::size_t>());
                if (node.left >= static_cast<std::int32_t>(id) ||
                    node.right >= static_cast<std::int32_t>(id))
                    throw FormatError(path + ": children must have smaller node ids than parents");
                if (id < n) throw FormatError(path + ": internal nodes must have ids >= " +
                                              std::to_string(n));
                stack.push_back(&ch[0]);
                stack.push_back(&ch[1]);
            } else {
                if (id >= n)
                    throw FormatError(path + ": leaves must have ids < " + std::to_string(n));
                dendro.leaf_ids[id] = cur->at("object_id").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }

    for (std::size_t i = 0; i < node_count; ++i)
        if (!filled[i]) throw FormatError(path + ": node " + std::to_string(i) + " is missing");
    {
        std::unordered_set<std::string> unique(dendro.leaf_ids.begin(), dendro.leaf_ids.end());
        if (unique.size() != dendro.leaf_ids.size())
            throw DataInvariantError(path + ": duplicate object ids among the leaves");
    }

    return dendro;
}

std::string report_to_json(const DetectionReport& report) {
    const std::set<std::string> flagged(report.outliers.begin(), report.outliers.end());

    ordered_json doc;
    doc["config"] = {{"dispersion", round6(report.config.dispersion)}};
    ordered_json clusters = ordered_json::array();
    for (const ClusterSummary& c : report.cluster_summary) {
        ordered_json entry;
        entry["id"] = c.cluster_id;
        entry["size"] = c.size;
        entry["mean_of"] = round6(c.mean_of);
        entry["std_of"] = round6(c.std_of);
        entry["outlier_count"] = c.outlier_count;
        clusters.push_back(std::move(entry));
    }
    doc["clusters"] = std::move(clusters);
    doc["mu_of"] = round6(report.mu_of);
    doc["sigma_of"] = round6(report.sigma_of);
    doc["ot"] = round6(report.ot);
    ordered_json scores = ordered_json::array();
    for (const OutlierScore& s : report.scores) {
        ordered_json entry;
        entry["object_id"] = s.object_id;
        entry["of_neighbors"] = round6(s.of_neighbors);
        entry["of_location"] = round6(s.of_location);
        entry["of"] = round6(s.of);
        entry["is_outlier"] = flagged.count(s.object_id) != 0;
        scores.push_back(std::move(entry));
    }
    doc["scores"] = std::move(scores);
    doc["outliers"] = report.outliers;

    return doc.dump(2) + "\n";
}

void write_report(const DetectionReport& report, const std::string& path) {
    std::ofstream out = open_for_write(path);
    out << report_to_json(report);
    if (!out) throw FormatError("failed writing '" + path + "'");
}

}  // namespace dendro
