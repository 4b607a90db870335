#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "dendro/io.hpp"
#include "test_util.hpp"

using testutil::read_text;
using testutil::scratch_dir;
using testutil::write_text;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs the installed binary with `args`, capturing exit code and both streams.
CommandResult run_cli(const std::string& args, const std::string& dir,
                      const std::string& env_prefix = "") {
    static int counter = 0;
    ++counter;
    const std::string out_path = dir + "/cli_stdout_" + std::to_string(counter);
    const std::string err_path = dir + "/cli_stderr_" + std::to_string(counter);
    std::string command = std::string(DENDRO_CLI_PATH) + " " + args + " >" + out_path + " 2>" +
                          err_path;
    if (!env_prefix.empty()) command = env_prefix + " " + command;

    const int status = std::system(command.c_str());
    CommandResult result;
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.out = read_text(out_path);
    result.err = read_text(err_path);
    return result;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    const std::string dir = scratch_dir("cli_usage");
    write_text(dir + "/m.csv",
               "id,a,b\n"
               "a,1,0.5\n"
               "b,0.5,1\n");

    CHECK(run_cli("--help", dir).exit_code == 0);
    CHECK(run_cli("", dir).exit_code == 2);                  // a subcommand is required
    CHECK(run_cli("frobnicate", dir).exit_code == 2);        // unknown subcommand
    CHECK(run_cli("cluster --matrix " + dir + "/m.csv --nope", dir).exit_code == 2);
    CHECK(run_cli("detect --matrix " + dir + "/m.csv", dir).exit_code == 2);  // no --dispersion
    CHECK(run_cli("detect --matrix " + dir + "/m.csv --dispersion 1.5", dir).exit_code == 2);
    CHECK(run_cli("cluster --matrix " + dir + "/does_not_exist.csv", dir).exit_code == 2);
    CHECK(run_cli("similarity --out " + dir + "/x.csv", dir).exit_code == 2);  // no input
    CHECK(run_cli("pipeline --dispersion 0.4", dir).exit_code == 2);           // no input

    write_text(dir + "/e.jsonl",
               R"({"series_id":"s1","event_id":"e1","start":0,"end":1,"features":[1]})"
               "\n");
    write_text(dir + "/r.csv", "series_id,t,value\ns,0,1\n");
    CHECK(run_cli("similarity --events " + dir + "/e.jsonl --raw " + dir + "/r.csv --out " +
                      dir + "/x.csv",
                  dir)
              .exit_code == 2);  // mutually exclusive inputs
}

TEST_CASE("malformed files exit with 2, broken invariants with 3") {
    const std::string dir = scratch_dir("cli_files");

    write_text(dir + "/garbage.csv", "hello\n");
    CHECK(run_cli("cluster --matrix " + dir + "/garbage.csv", dir).exit_code == 2);

    write_text(dir + "/asym.csv",
               "id,a,b\n"
               "a,1,0.5\n"
               "b,0.7,1\n");
    const auto asym = run_cli("cluster --matrix " + dir + "/asym.csv", dir);
    CHECK(asym.exit_code == 3);
    CHECK(asym.err.find("error:") != std::string::npos);

    write_text(dir + "/one.csv", "id,a\na,1\n");
    CHECK(run_cli("cluster --matrix " + dir + "/one.csv", dir).exit_code == 3);

    CHECK(run_cli("synth --blocks 3,2 --intra 0.2 --cross 0.5 --out " + dir + "/f.csv", dir)
              .exit_code == 3);

    // A well-formed clustering whose ids do not belong to the matrix.
    write_text(dir + "/m.csv",
               "id,a,b\n"
               "a,1,0.5\n"
               "b,0.5,1\n");
    write_text(dir + "/foreign.json", R"({"threshold":{"t":0.5,"mu":0.5,"sigma":0.1},
        "source_ids":["p","q"],
        "clusters":[{"id":"C1","members":["p","q"]}]})");
    CHECK(run_cli("detect --matrix " + dir + "/m.csv --clusters " + dir +
                      "/foreign.json --dispersion 0.4",
                  dir)
              .exit_code == 3);
}

TEST_CASE("synth, cluster, detect and baseline chain together") {
    const std::string dir = scratch_dir("cli_chain");
    const std::string matrix = dir + "/m.csv";

    const auto synth = run_cli(
        "synth --blocks 8,4 --intra 0.9 --cross 0.1 --jitter 0.02 --seed 3 --out " + matrix, dir);
    REQUIRE(synth.exit_code == 0);
    const auto sim = dendro::load_similarity_matrix(matrix);
    REQUIRE(sim.size() == 12);
    sim.validate();
    CHECK(sim.ids().front() == "o00");
    CHECK(sim.ids().back() == "o11");

    const auto clustered = run_cli("cluster --matrix " + matrix + " --dendrogram-out " + dir +
                                       "/d.json --clusters-out " + dir + "/c.json",
                                   dir);
    REQUIRE(clustered.exit_code == 0);
    CHECK(clustered.out.find("2 clusters") != std::string::npos);
    const auto clustering = dendro::load_clustering(dir + "/c.json");
    REQUIRE(clustering.clusters.size() == 2);
    CHECK(dendro::load_dendrogram(dir + "/d.json").leaf_ids.size() == 12);

    SUBCASE("detect writes byte-identical reports, with and without SIMD") {
        const std::string base = "detect --matrix " + matrix + " --clusters " + dir +
                                 "/c.json --dispersion 0.4 --report-out ";
        const auto first = run_cli(base + dir + "/r1.json", dir);
        REQUIRE(first.exit_code == 0);
        CHECK(first.out.find("score threshold") != std::string::npos);
        CHECK(run_cli(base + dir + "/r2.json", dir).exit_code == 0);
        CHECK(run_cli(base + dir + "/r3.json", dir, "DENDRO_SIMD=scalar").exit_code == 0);

        const std::string r1 = read_text(dir + "/r1.json");
        CHECK(r1 == read_text(dir + "/r2.json"));
        CHECK(r1 == read_text(dir + "/r3.json"));

        const auto doc = nlohmann::json::parse(r1);
        CHECK(doc.at("scores").size() == 12);
        CHECK(doc.at("clusters").size() == 2);
    }

    SUBCASE("detect can recluster the matrix itself") {
        CHECK(run_cli("detect --matrix " + matrix + " --dispersion 0.4", dir).exit_code == 0);
    }

    SUBCASE("the baseline flags by cluster size alone") {
        const auto all = run_cli(
            "baseline --clusters " + dir + "/c.json --size-threshold 100", dir);
        REQUIRE(all.exit_code == 0);
        std::string expected;
        for (int i = 0; i < 12; ++i) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "o%02d\n", i);
            expected += buf;
        }
        CHECK(all.out == expected);

        const auto none = run_cli(
            "baseline --clusters " + dir + "/c.json --size-threshold 0", dir);
        CHECK(none.exit_code == 0);
        CHECK(none.out.empty());
    }

    SUBCASE("pipeline over the same matrix emits every artifact") {
        const auto piped = run_cli("pipeline --matrix " + matrix +
                                       " --dispersion 0.4 --report-out " + dir +
                                       "/pr.json --matrix-out " + dir +
                                       "/pm.csv --dendrogram-out " + dir +
                                       "/pd.json --clusters-out " + dir + "/pc.json",
                                   dir);
        REQUIRE(piped.exit_code == 0);
        CHECK(piped.out.find("score threshold") != std::string::npos);

        const auto copy = dendro::load_similarity_matrix(dir + "/pm.csv");
        REQUIRE(copy.size() == 12);
        for (std::size_t i = 0; i < 12; ++i)
            for (std::size_t j = 0; j < 12; ++j) CHECK(copy.at(i, j) == sim.at(i, j));
        CHECK(dendro::load_clustering(dir + "/pc.json").clusters.size() == 2);
        CHECK(dendro::load_dendrogram(dir + "/pd.json").nodes.size() == 23);
        CHECK(nlohmann::json::parse(read_text(dir + "/pr.json")).at("scores").size() == 12);
    }
}

TEST_CASE("pipeline refuses a signal-free cut unless overridden") {
    const std::string dir = scratch_dir("cli_flat");

    write_text(dir + "/flat.csv",
               "id,a,b,c\n"
               "a,1,0.5,0.5\n"
               "b,0.5,1,0.5\n"
               "c,0.5,0.5,1\n");
    const auto refused = run_cli(
        "pipeline --matrix " + dir + "/flat.csv --dispersion 0.4", dir);
    CHECK(refused.exit_code == 3);
    CHECK(refused.err.find("threshold override") != std::string::npos);
    CHECK(run_cli("pipeline --matrix " + dir +
                      "/flat.csv --dispersion 0.4 --threshold-override 0.5",
                  dir)
              .exit_code == 0);

    // Two objects have a single pairwise value, so the spread is always zero.
    write_text(dir + "/two.csv",
               "id,a,b\n"
               "a,1,0.37\n"
               "b,0.37,1\n");
    CHECK(run_cli("pipeline --matrix " + dir + "/two.csv --dispersion 0.4", dir).exit_code == 3);
    CHECK(run_cli("pipeline --matrix " + dir +
                      "/two.csv --dispersion 0.4 --threshold-override 0.5",
                  dir)
              .exit_code == 0);

    // Two identical event series score 1 everywhere: same refusal.
    write_text(dir + "/twins.jsonl",
               R"({"series_id":"x","event_id":"x1","start":0,"end":10,"features":[1]})"
               "\n"
               R"({"series_id":"y","event_id":"y1","start":0,"end":10,"features":[1]})"
               "\n");
    const auto twins = run_cli(
        "pipeline --events " + dir + "/twins.jsonl --dispersion 0.4", dir);
    CHECK(twins.exit_code == 3);
    CHECK(twins.err.find("error:") != std::string::npos);

    // The cluster subcommand reports the raw cut without the guard.
    const auto raw_cut = run_cli("cluster --matrix " + dir + "/flat.csv", dir);
    CHECK(raw_cut.exit_code == 0);
    CHECK(raw_cut.out.find("sigma 0.000000") != std::string::npos);
}

TEST_CASE("similarity runs from raw samples through the event detector") {
    const std::string dir = scratch_dir("cli_raw");
    std::string csv = "series_id,t,value\n";
    for (const char* id : {"q", "r"})
        for (int t = 0; t < 5; ++t) {
            const int values[] = {0, 5, 6, 0, 7};
            csv += std::string(id) + "," + std::to_string(t) + "," +
                   std::to_string(values[t]) + "\n";
        }
    write_text(dir + "/raw.csv", csv);

    const auto built = run_cli("similarity --raw " + dir +
                                   "/raw.csv --detect-threshold 4 --out " + dir + "/sm.csv",
                               dir);
    REQUIRE(built.exit_code == 0);
    const auto sim = dendro::load_similarity_matrix(dir + "/sm.csv");
    REQUIRE(sim.size() == 2);
    CHECK(sim.ids() == std::vector<std::string>{"q", "r"});
    // Identical series produce identical events, so the pair scores 1.
    CHECK(sim.at(0, 1) == 1.0);
}

TEST_CASE("pipeline from an event file flags the stray series") {
    const std::string dir = scratch_dir("cli_events");
    write_text(dir + "/events.jsonl",
               R"({"series_id":"x","event_id":"x1","start":0,"end":10,"features":[0]})"
               "\n"
               R"({"series_id":"x","event_id":"x2","start":20,"end":25,"features":[10]})"
               "\n"
               R"({"series_id":"y","event_id":"y1","start":0,"end":8,"features":[0.5]})"
               "\n"
               R"({"series_id":"z","event_id":"z1","start":0,"end":6,"features":[30]})"
               "\n"
               R"({"series_id":"z","event_id":"z2","start":10,"end":16,"features":[31]})"
               "\n");

    const auto piped = run_cli("pipeline --events " + dir +
                                   "/events.jsonl --dispersion 0.4 --report-out " + dir +
                                   "/r.json",
                               dir);
    REQUIRE(piped.exit_code == 0);
    CHECK(piped.out.find("1 outlier(s) flagged") != std::string::npos);
    CHECK(piped.out.find("outliers: z") != std::string::npos);

    const auto doc = nlohmann::json::parse(read_text(dir + "/r.json"));
    REQUIRE(doc.at("outliers").size() == 1);
    CHECK(doc.at("outliers")[0].get<std::string>() == "z");
}
