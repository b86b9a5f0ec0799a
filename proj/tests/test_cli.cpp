#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "dataset_io.hpp"
#include "features_csv.hpp"
#include "gwshm/errors.hpp"
#include "scenario_config.hpp"

using namespace gwshm;
using namespace gwshm::cli;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "gwshm");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gwshm-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path write_small_config(const fs::path& dir, int copies = 3) {
    const fs::path file = dir / "config.json";
    std::ofstream out(file);
    out << R"({
  "scenario": {
    "temperatures_c": [10, 30, 50, 70],
    "paths": [{"path_id": "P1"}, {"path_id": "P2"}],
    "conditions": [
      {"condition": "baseline"},
      {"condition": "lfa", "sizes_mm": [20]}
    ]
  },
  "noise": {"snr_db": 20, "copies": )"
        << copies << R"(},
  "seed": 5
})";
    return file;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("record files round-trip through the GWRC format") {
    TempDir tmp;
    GwRecord rec;
    rec.samples = {0.0f, 0.5f, -1.0f, 0.25f};
    rec.sample_rate_hz = 10e6;
    const fs::path file = tmp.path / "r.gwrc";
    write_record_file(file, rec);
    const GwRecord back = read_record_file(file);
    CHECK(back.samples == rec.samples);
    CHECK(back.sample_rate_hz == rec.sample_rate_hz);
}

TEST_CASE("scenario config JSON round-trips with defaults materialized") {
    TempDir tmp;
    const ScenarioRunConfig config = load_config_file(write_small_config(tmp.path));
    CHECK(config.scenario.temperatures_c.size() == 4);
    CHECK(config.scenario.paths[0].tx_rx_distance_mm == 180.0);
    CHECK(config.noise.copies == 3);
    CHECK(config.seed == 5);
    CHECK(config.scenario.propagation.group_velocity_km_s == doctest::Approx(1.061));

    const ScenarioRunConfig back = config_from_json(config_to_json(config));
    CHECK(config_to_json(back) == config_to_json(config));
}

TEST_CASE("config validation failures carry context") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::object()), ConfigError);
    nlohmann::json bad = {{"scenario",
                           {{"temperatures_c", nlohmann::json::array()},
                            {"paths", {{{"path_id", "A"}}}},
                            {"conditions", {{{"condition", "baseline"}}}}}}};
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    nlohmann::json bad_path = {{"scenario",
                                {{"temperatures_c", {30.0}},
                                 {"paths", {{{"path_id", "A B"}}}},
                                 {"conditions", {{{"condition", "baseline"}}}}}}};
    CHECK_THROWS_AS(config_from_json(bad_path), ConfigError);
}

TEST_CASE("full pipeline runs end to end with the documented exit codes") {
    TempDir tmp;
    const fs::path config = write_small_config(tmp.path);
    const fs::path data = tmp.path / "data";
    const fs::path feat = tmp.path / "feat";
    const fs::path ckpt = tmp.path / "ckpt";
    const fs::path report = tmp.path / "report";
    const fs::path image = tmp.path / "model.gwae";

    CHECK(run({"synth", "--config", config.string(), "--out", data.string(), "--augment"}) == 0);
    const DatasetManifest manifest = load_manifest(data);
    // 4 temps x 2 paths x 2 conditions x (1 clean + 3 copies)
    CHECK(manifest.records.size() == 64);

    CHECK(run({"features", "--dataset", data.string(), "--out", feat.string()}) == 0);
    const auto rows = read_features_csv(feat / "features.csv");
    CHECK(rows.size() == 64);

    // identity values for the baseline reference row
    bool found_reference = false;
    for (const FeatureRow& row : rows) {
        if (row.condition == ConditionLabel::Baseline && row.noise_copy == 0 &&
            row.temperature_c == 30.0) {
            CHECK(row.features.rmsd == 0.0);
            CHECK(row.features.energy_ratio == doctest::Approx(1.0));
            found_reference = true;
        }
    }
    CHECK(found_reference);

    std::ofstream(tmp.path / "tc.json")
        << R"({"learning_rate": 0.01, "batch_size": 8, "epochs": 12})";
    CHECK(run({"train", "--features", (feat / "features.csv").string(), "--out", ckpt.string(),
               "--seed", "3", "--config", (tmp.path / "tc.json").string()}) == 0);
    CHECK(fs::exists(ckpt / "checkpoint.json"));
    CHECK(fs::exists(ckpt / "split.json"));
    CHECK(fs::exists(ckpt / "detector.gwae"));

    CHECK(run({"eval", "--model", ckpt.string(), "--features", (feat / "features.csv").string(),
               "--out", report.string(), "--errors-csv", "--svg"}) == 0);
    CHECK(fs::exists(report / "report.json"));
    CHECK(fs::exists(report / "errors.csv"));
    CHECK(fs::exists(report / "histogram.svg"));

    nlohmann::json rep;
    std::ifstream(report / "report.json") >> rep;
    CHECK(rep.at("cases").size() == 2);

    CHECK(run({"export", "--model", ckpt.string(), "--out", image.string()}) == 0);
    CHECK(fs::file_size(image) < 64 * 1024);
    CHECK(slurp(image) == slurp(ckpt / "detector.gwae"));

    // some training-split row classifies healthy: the row with the smallest
    // training error always sits at or below the mean, hence under mu+sigma
    nlohmann::json split;
    std::ifstream(ckpt / "split.json") >> split;
    bool any_healthy = false;
    for (const auto& id : split.at("train")) {
        if (run({"infer", "--model", image.string(), "--features",
                 (feat / "features.csv").string(), "--record-id",
                 id.get<std::string>()}) == 0) {
            any_healthy = true;
            break;
        }
    }
    CHECK(any_healthy);

    // clearly damaged record -> exit 3
    const fs::path baseline_record = data / "records" / "P1_T30_base0_n00.gwrc";
    const fs::path damaged_record = data / "records" / "P1_T30_lfa20_n01.gwrc";
    REQUIRE(fs::exists(baseline_record));
    REQUIRE(fs::exists(damaged_record));
    const int damaged = run({"infer", "--model", image.string(), "--record",
                             damaged_record.string(), "--baseline", baseline_record.string()});
    CHECK(damaged == 3);

    // features-row route agrees
    const int by_row = run({"infer", "--model", image.string(), "--features",
                            (feat / "features.csv").string(), "--record-id",
                            "P1_T30_lfa20_n01"});
    CHECK(by_row == 3);

    // corrupted image -> exit 4
    std::string bytes = slurp(image);
    bytes[500] ^= 0x10;
    const fs::path corrupt = tmp.path / "corrupt.gwae";
    std::ofstream(corrupt, std::ios::binary) << bytes;
    CHECK(run({"infer", "--model", corrupt.string(), "--record", baseline_record.string(),
               "--baseline", baseline_record.string()}) == 4);

    // config/IO errors -> exit 2
    CHECK(run({"synth", "--config", (tmp.path / "missing.json").string(), "--out",
               (tmp.path / "x").string()}) == 2);
    CHECK(run({"train", "--features", (feat / "features.csv").string()}) == 2);  // missing --out
}

TEST_CASE("tuned training logs its trials and picks one of them") {
    TempDir tmp;
    const fs::path config = write_small_config(tmp.path);
    const fs::path data = tmp.path / "data";
    const fs::path feat = tmp.path / "feat";
    const fs::path ckpt = tmp.path / "ckpt";
    REQUIRE(run({"synth", "--config", config.string(), "--out", data.string(), "--augment"}) == 0);
    REQUIRE(run({"features", "--dataset", data.string(), "--out", feat.string()}) == 0);

    std::ofstream(tmp.path / "tc.json") << R"({
  "epochs": 4,
  "search": {"learning_rates": [0.001, 0.01], "batch_sizes": [8],
             "epoch_counts": [2, 3], "iterations": 3}
})";
    REQUIRE(run({"train", "--features", (feat / "features.csv").string(), "--out",
                 ckpt.string(), "--seed", "5", "--tune", "--config",
                 (tmp.path / "tc.json").string()}) == 0);

    nlohmann::json doc;
    std::ifstream(ckpt / "checkpoint.json") >> doc;
    REQUIRE(doc.contains("tune_trials"));
    REQUIRE(doc.at("tune_trials").size() == 3);

    const auto& chosen = doc.at("train_config");
    double best_score = std::numeric_limits<double>::infinity();
    bool chosen_among_trials = false;
    for (const auto& trial : doc.at("tune_trials"))
        best_score = std::min(best_score, trial.at("score").get<double>());
    for (const auto& trial : doc.at("tune_trials")) {
        if (trial.at("score").get<double>() == best_score &&
            trial.at("learning_rate") == chosen.at("learning_rate") &&
            trial.at("batch_size") == chosen.at("batch_size") &&
            trial.at("epochs") == chosen.at("epochs"))
            chosen_among_trials = true;
    }
    CHECK(chosen_among_trials);
}

TEST_CASE("synth is byte-deterministic for a fixed config and seed") {
    TempDir tmp;
    const fs::path config = write_small_config(tmp.path, 2);
    const fs::path a = tmp.path / "a";
    const fs::path b = tmp.path / "b";
    REQUIRE(run({"synth", "--config", config.string(), "--out", a.string(), "--augment"}) == 0);
    REQUIRE(run({"synth", "--config", config.string(), "--out", b.string(), "--augment"}) == 0);

    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    for (const auto& entry : fs::directory_iterator(a / "records"))
        CHECK(slurp(entry.path()) == slurp(b / "records" / entry.path().filename()));

    // --seed overrides the config seed and changes the noise
    const fs::path c = tmp.path / "c";
    REQUIRE(run({"synth", "--config", config.string(), "--out", c.string(), "--augment",
                 "--seed", "99"}) == 0);
    bool any_difference = false;
    for (const auto& entry : fs::directory_iterator(a / "records"))
        if (slurp(entry.path()) != slurp(c / "records" / entry.path().filename()))
            any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("unwritable output directory fails cleanly without a partial manifest") {
    TempDir tmp;
    const fs::path config = write_small_config(tmp.path);
    std::ofstream(tmp.path / "blocker") << "";  // a file where a directory is needed
    const fs::path out = tmp.path / "blocker" / "data";
    CHECK(run({"synth", "--config", config.string(), "--out", out.string()}) == 2);
    CHECK(!fs::exists(out / "manifest.json"));
}

TEST_CASE("features command requires a baseline reference per path") {
    TempDir tmp;
    std::ofstream(tmp.path / "config.json") << R"({
  "scenario": {
    "temperatures_c": [10, 50],
    "paths": [{"path_id": "P1"}],
    "conditions": [{"condition": "baseline"}]
  },
  "noise": {"copies": 1},
  "seed": 1
})";
    const fs::path data = tmp.path / "data";
    REQUIRE(run({"synth", "--config", (tmp.path / "config.json").string(), "--out",
                 data.string()}) == 0);
    // reference temperature 30 is not on the grid
    CHECK(run({"features", "--dataset", data.string(), "--out",
               (tmp.path / "feat").string()}) == 2);
    // picking a grid temperature fixes it
    CHECK(run({"features", "--dataset", data.string(), "--out", (tmp.path / "feat").string(),
               "--baseline-temp", "50"}) == 0);
}

TEST_CASE("training refuses a table without baseline rows") {
    TempDir tmp;
    std::vector<FeatureRow> rows;
    FeatureRow row;
    row.record_id = "x";
    row.path_id = "P1";
    row.condition = ConditionLabel::Lfa;
    row.size_mm = 20.0;
    rows.push_back(row);
    write_features_csv(tmp.path / "f.csv", rows);
    CHECK(run({"train", "--features", (tmp.path / "f.csv").string(), "--out",
               (tmp.path / "ckpt").string()}) == 2);
}

TEST_CASE("reordered feature columns are rejected as a schema mismatch") {
    TempDir tmp;
    std::ofstream(tmp.path / "bad.csv")
        << "record_id,path_id,temperature_c,condition,size_mm,noise_copy,median,mean\n";
    CHECK_THROWS_AS(read_features_csv(tmp.path / "bad.csv"), SchemaMismatch);
}

TEST_CASE("manifest integrity check spots missing record files") {
    TempDir tmp;
    const fs::path config = write_small_config(tmp.path, 1);
    const fs::path data = tmp.path / "data";
    REQUIRE(run({"synth", "--config", config.string(), "--out", data.string()}) == 0);
    fs::remove(data / "records" / "P1_T30_base0_n00.gwrc");
    CHECK_THROWS_AS(load_manifest(data), IoError);
}

#ifdef GWSHM_CLI_BINARY
TEST_CASE("installed binary smoke test") {
    TempDir tmp;
    const fs::path config = write_small_config(tmp.path, 1);
    const std::string cmd = std::string(GWSHM_CLI_BINARY) + " synth --config " +
                            config.string() + " --out " + (tmp.path / "d").string() +
                            " > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    const std::string bad = std::string(GWSHM_CLI_BINARY) + " synth --config /nonexistent.json"
                            " --out " + (tmp.path / "e").string() + " > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}
#endif

}  // TEST_SUITE
