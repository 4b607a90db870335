// Command-line front end: event-series similarity, agglomerative clustering
// with an automatic dendrogram cut, and cluster-based outlier detection.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dendro/baselines.hpp"
#include "dendro/clustering.hpp"
#include "dendro/detection.hpp"
#include "dendro/errors.hpp"
#include "dendro/io.hpp"
#include "dendro/log.hpp"
#include "dendro/pipeline.hpp"
#include "dendro/similarity.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;   // bad flags, malformed files
constexpr int kExitData = 3;    // invariant violations, degenerate input

struct CliOptions {
    // similarity / pipeline inputs
    std::string events_path;
    std::string matrix_path;
    std::string raw_path;
    double detect_threshold = 0.0;
    unsigned jobs = 0;

    // clustering
    double threshold_override = -1.0;  // < 0 = not set
    std::string dendrogram_out;
    std::string clusters_out;

    // detection
    double dispersion = 0.0;
    std::string clusters_in;
    std::string report_out;

    // shared outputs
    std::string out_path;
    std::string matrix_out;

    // baseline
    std::size_t size_threshold = 0;

    // synth
    std::vector<std::size_t> blocks;
    double intra = 0.9;
    double cross = 0.1;
    double jitter = 0.0;
    std::uint64_t seed = 0;
};

std::vector<dendro::EventSeries> dataset_from_events(const std::string& path) {
    auto dataset = dendro::load_events(path);
    if (dataset.empty())
        throw dendro::DegenerateInputError(path + ": no events to analyse");
    return dataset;
}

std::vector<dendro::EventSeries> dataset_from_raw(const std::string& path, double threshold) {
    const auto raw = dendro::load_raw_series(path);
    if (raw.empty()) throw dendro::DegenerateInputError(path + ": no samples to analyse");
    std::vector<dendro::EventSeries> dataset;
    dataset.reserve(raw.size());
    for (const auto& series : raw) dataset.push_back(dendro::detect_events(series, threshold));
    return dataset;
}

int run_similarity(const CliOptions& opt) {
    std::vector<dendro::EventSeries> dataset;
    if (!opt.events_path.empty())
        dataset = dataset_from_events(opt.events_path);
    else
        dataset = dataset_from_raw(opt.raw_path, opt.detect_threshold);

    const auto sim = dendro::build_similarity_matrix(dataset, opt.jobs);
    dendro::write_similarity_matrix(sim, opt.out_path);
    std::printf("wrote %zu x %zu similarity matrix to %s\n", sim.size(), sim.size(),
                opt.out_path.c_str());
    return kExitOk;
}

int run_cluster(const CliOptions& opt) {
    const auto sim = dendro::load_similarity_matrix(opt.matrix_path);

    dendro::CutThreshold threshold = dendro::compute_threshold(sim);
    if (opt.threshold_override >= 0.0) threshold.t = opt.threshold_override;

    const auto dendrogram = dendro::build_dendrogram(sim);
    if (!opt.dendrogram_out.empty()) dendro::write_dendrogram(dendrogram, opt.dendrogram_out);

    const auto clustering = dendro::cut_dendrogram(dendrogram, threshold);
    if (!opt.clusters_out.empty()) dendro::write_clustering(clustering, opt.clusters_out);

    std::printf("%zu objects, cut at %.6f (mu %.6f, sigma %.6f): %zu clusters\n", sim.size(),
                threshold.t, threshold.mu, threshold.sigma, clustering.clusters.size());
    std::printf("sizes:");
    for (const auto& members : clustering.clusters) std::printf(" %zu", members.size());
    std::printf("\n");
    return kExitOk;
}

int run_detect(const CliOptions& opt) {
    const auto sim = dendro::load_similarity_matrix(opt.matrix_path);
    const auto clustering = opt.clusters_in.empty() ? dendro::cluster(sim)
                                                    : dendro::load_clustering(opt.clusters_in);

    const auto report = dendro::detect_outliers(sim.ids(), clustering, sim,
                                                dendro::DetectionConfig{opt.dispersion});
    if (!opt.report_out.empty()) dendro::write_report(report, opt.report_out);
    dendro::print_report_summary(report, std::cout);
    return kExitOk;
}

int run_pipeline_cmd(const CliOptions& opt) {
    dendro::PipelineConfig config;
    if (!opt.events_path.empty()) {
        config.input_kind = dendro::InputKind::kEvents;
        config.input_path = opt.events_path;
    } else if (!opt.matrix_path.empty()) {
        config.input_kind = dendro::InputKind::kMatrix;
        config.input_path = opt.matrix_path;
    } else {
        config.input_kind = dendro::InputKind::kRawSeries;
        config.input_path = opt.raw_path;
        config.detect_threshold = opt.detect_threshold;
    }
    config.dispersion = opt.dispersion;
    if (opt.threshold_override >= 0.0) config.threshold_override = opt.threshold_override;
    config.jobs = opt.jobs;
    config.report_out = opt.report_out;
    config.matrix_out = opt.matrix_out;
    config.dendrogram_out = opt.dendrogram_out;
    config.clusters_out = opt.clusters_out;

    const auto report = dendro::run_pipeline(config);
    dendro::print_report_summary(report, std::cout);
    return kExitOk;
}

int run_baseline(const CliOptions& opt) {
    const auto clustering = dendro::load_clustering(opt.clusters_in);
    for (const auto& id : dendro::size_threshold_baseline(clustering, opt.size_threshold))
        std::printf("%s\n", id.c_str());
    return kExitOk;
}

int run_synth(const CliOptions& opt) {
    dendro::SyntheticSpec spec;
    spec.block_sizes = opt.blocks;
    spec.intra_similarity = opt.intra;
    spec.cross_similarity = opt.cross;
    spec.jitter = opt.jitter;
    spec.seed = opt.seed;

    const auto sim = dendro::generate_synthetic_matrix(spec);
    dendro::write_similarity_matrix(sim, opt.out_path);
    std::printf("wrote %zu x %zu synthetic matrix to %s\n", sim.size(), sim.size(),
                opt.out_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-based series similarity, clustering and outlier detection"};
    app.require_subcommand(1);

    CliOptions opt;

    std::string log_level_name;
    app.add_option("--log-level", log_level_name, "error|warn|info|debug (DENDRO_LOG wins)")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

    auto* sim_cmd = app.add_subcommand("similarity", "build a similarity matrix from events");
    auto* sim_events = sim_cmd->add_option("--events", opt.events_path, "events file (JSON lines)")
                           ->check(CLI::ExistingFile);
    auto* sim_raw =
        sim_cmd->add_option("--raw", opt.raw_path,
                            "raw series CSV; events come from a threshold detector (experimental)")
            ->check(CLI::ExistingFile)
            ->excludes(sim_events);
    sim_events->excludes(sim_raw);
    sim_cmd->add_option("--detect-threshold", opt.detect_threshold,
                        "event detector level for --raw (experimental)")
        ->needs(sim_raw);
    sim_cmd->add_option("--out", opt.out_path, "matrix CSV to write")->required();
    sim_cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)")
        ->default_val(0u);

    auto* cluster_cmd = app.add_subcommand("cluster", "cluster a similarity matrix");
    cluster_cmd->add_option("--matrix", opt.matrix_path, "similarity matrix CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cluster_cmd
        ->add_option("--threshold-override", opt.threshold_override,
                     "cut level replacing the automatic one")
        ->check(CLI::Range(0.0, 1.0));
    cluster_cmd->add_option("--dendrogram-out", opt.dendrogram_out, "dendrogram JSON to write");
    cluster_cmd->add_option("--clusters-out", opt.clusters_out, "clustering JSON to write");

    auto* detect_cmd = app.add_subcommand("detect", "score a clustering for outliers");
    detect_cmd->add_option("--matrix", opt.matrix_path, "similarity matrix CSV")
        ->required()
        ->check(CLI::ExistingFile);
    detect_cmd->add_option("--clusters", opt.clusters_in,
                           "clustering JSON (default: recluster the matrix)")
        ->check(CLI::ExistingFile);
    detect_cmd->add_option("--dispersion", opt.dispersion, "expected data spread, in [0, 1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    detect_cmd->add_option("--report-out", opt.report_out, "report JSON to write");

    auto* pipe_cmd = app.add_subcommand("pipeline", "full run: input -> report");
    auto* pipe_events = pipe_cmd->add_option("--events", opt.events_path, "events file (JSON lines)")
                            ->check(CLI::ExistingFile);
    auto* pipe_matrix = pipe_cmd->add_option("--matrix", opt.matrix_path, "similarity matrix CSV")
                            ->check(CLI::ExistingFile);
    auto* pipe_raw =
        pipe_cmd->add_option("--raw", opt.raw_path,
                             "raw series CSV; events come from a threshold detector (experimental)")
            ->check(CLI::ExistingFile);
    pipe_events->excludes(pipe_matrix)->excludes(pipe_raw);
    pipe_matrix->excludes(pipe_events)->excludes(pipe_raw);
    pipe_raw->excludes(pipe_events)->excludes(pipe_matrix);
    pipe_cmd->add_option("--detect-threshold", opt.detect_threshold,
                         "event detector level for --raw (experimental)")
        ->needs(pipe_raw);
    pipe_cmd->add_option("--dispersion", opt.dispersion, "expected data spread, in [0, 1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    pipe_cmd
        ->add_option("--threshold-override", opt.threshold_override,
                     "cut level replacing the automatic one")
        ->check(CLI::Range(0.0, 1.0));
    pipe_cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)")->default_val(0u);
    pipe_cmd->add_option("--report-out", opt.report_out, "report JSON to write");
    pipe_cmd->add_option("--matrix-out", opt.matrix_out, "similarity matrix CSV to write");
    pipe_cmd->add_option("--dendrogram-out", opt.dendrogram_out, "dendrogram JSON to write");
    pipe_cmd->add_option("--clusters-out", opt.clusters_out, "clustering JSON to write");

    auto* base_cmd = app.add_subcommand("baseline", "size-threshold baseline flagger");
    base_cmd->add_option("--clusters", opt.clusters_in, "clustering JSON")
        ->required()
        ->check(CLI::ExistingFile);
    base_cmd->add_option("--size-threshold", opt.size_threshold,
                         "flag members of clusters smaller than this")
        ->required();

    auto* synth_cmd = app.add_subcommand("synth", "generate a block-structured matrix");
    synth_cmd->add_option("--blocks", opt.blocks, "comma-separated block sizes, e.g. 62,34,5")
        ->required()
        ->delimiter(',');
    synth_cmd->add_option("--intra", opt.intra, "within-block similarity")->default_val(0.9);
    synth_cmd->add_option("--cross", opt.cross, "cross-block similarity")->default_val(0.1);
    synth_cmd->add_option("--jitter", opt.jitter, "uniform noise half-width")->default_val(0.0);
    synth_cmd->add_option("--seed", opt.seed, "noise generator seed")->default_val(0ull);
    synth_cmd->add_option("--out", opt.out_path, "matrix CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (!log_level_name.empty()) dendro::set_log_level(dendro::parse_log_level(log_level_name));

    // similarity/pipeline need exactly one input source.
    if (sim_cmd->parsed() && opt.events_path.empty() && opt.raw_path.empty()) {
        std::fprintf(stderr, "similarity: pass --events or --raw\n");
        return kExitUsage;
    }
    if (pipe_cmd->parsed() && opt.events_path.empty() && opt.matrix_path.empty() &&
        opt.raw_path.empty()) {
        std::fprintf(stderr, "pipeline: pass --events, --matrix or --raw\n");
        return kExitUsage;
    }

    try {
        if (sim_cmd->parsed()) return run_similarity(opt);
        if (cluster_cmd->parsed()) return run_cluster(opt);
        if (detect_cmd->parsed()) return run_detect(opt);
        if (pipe_cmd->parsed()) return run_pipeline_cmd(opt);
        if (base_cmd->parsed()) return run_baseline(opt);
        if (synth_cmd->parsed()) return run_synth(opt);
    } catch (const dendro::FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const dendro::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
