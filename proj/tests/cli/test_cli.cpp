#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "biomaudit/csv.hpp"
#include "biomaudit/imageio.hpp"
#include "biomaudit/pipeline.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int call = 0;
  const fs::path dir = fs::current_path() / "test_tmp" / "cli_io";
  fs::create_directories(dir);
  const fs::path out_file = dir / ("out" + std::to_string(call) + ".txt");
  const fs::path err_file = dir / ("err" + std::to_string(call) + ".txt");
  ++call;

  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(BIOMAUDIT_CLI_PATH) + " " + args + " >" + out_file.string() + " 2>" +
         err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

// one shared dataset for the whole suite
const fixtures::SyntheticDataset& dataset() {
  static const auto ds = fixtures::synthetic_dataset("cli_ds", 24, 2024);
  return ds;
}

std::string base_args(const fs::path& out) {
  const auto& ds = dataset();
  return "--manifest " + ds.manifest.string() + " --keypoints " + ds.keypoints.string() +
         " --predictions " + ds.predictions.string() + " --out " + out.string();
}

}  // namespace

TEST_CASE("features: fixture produces one row per sample, byte-stable on rerun") {
  const auto out = fixtures::temp_dir("cli_features");
  const auto r1 = run_cli("features " + base_args(out));
  CHECK(r1.exit_code == 0);
  REQUIRE(fs::exists(out / "features.csv"));
  const auto table = biomaudit::read_csv(out / "features.csv");
  CHECK(table.rows.size() == 24);
  CHECK(table.header.front() == "sample_id");
  CHECK(table.header.back() == "pose");

  const std::string first = slurp(out / "features.csv");
  const auto r2 = run_cli("features " + base_args(out));
  CHECK(r2.exit_code == 0);
  CHECK(slurp(out / "features.csv") == first);

  const auto meta = nlohmann::json::parse(slurp(out / "features_meta.json"));
  CHECK(meta.at("rows") == 24);
  CHECK(meta.at("errors").empty());
}

TEST_CASE("features: missing keypoints file exits 2 with a MissingFile error line") {
  const auto out = fixtures::temp_dir("cli_missing");
  const auto& ds = dataset();
  const auto r = run_cli("features --manifest " + ds.manifest.string() +
                         " --keypoints /nope/kp.json --out " + out.string());
  CHECK(r.exit_code == 2);
  const auto err = nlohmann::json::parse(r.err);
  CHECK(err.at("error") == "MissingFile");
}

TEST_CASE("explain: writes the four artifact families and keeps efficiency tight") {
  const auto out = fixtures::temp_dir("cli_explain");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  const auto r = run_cli("explain " + base_args(out) + " --trees 40");
  CHECK(r.exit_code == 0);

  REQUIRE(fs::exists(out / "shapley.jsonl"));
  REQUIRE(fs::exists(out / "rankings.csv"));
  REQUIRE(fs::exists(out / "per_tier_shap.csv"));
  for (const char* f : {"resolution", "luminosity", "blurriness", "face_conf", "upper_conf",
                        "lower_conf", "pose"}) {
    REQUIRE(fs::exists(out / ("dependence_" + std::string(f) + ".csv")));
  }

  // every jsonl line parses and carries 7 attributions
  std::ifstream in(out / "shapley.jsonl");
  std::string line;
  std::size_t lines = 0;
  std::string prev_id;
  while (std::getline(in, line)) {
    const auto doc = nlohmann::json::parse(line);
    CHECK(doc.at("phi").size() == 7);
    const std::string id = doc.at("sample_id");
    CHECK(prev_id < id);  // sorted
    prev_id = id;
    ++lines;
  }
  CHECK(lines == 24);

  const auto ranking = biomaudit::read_csv(out / "rankings.csv");
  CHECK(ranking.rows.size() == 7);

  const auto meta = nlohmann::json::parse(slurp(out / "explain_meta.json"));
  CHECK(meta.at("max_efficiency_gap").get<double>() <= 1e-9);
  CHECK(meta.at("params").at("trees") == 40);

  // rerun is byte-identical
  const std::string jsonl = slurp(out / "shapley.jsonl");
  REQUIRE(run_cli("explain " + base_args(out) + " --trees 40").exit_code == 0);
  CHECK(slurp(out / "shapley.jsonl") == jsonl);

  // a different seed still satisfies the efficiency invariant
  REQUIRE(run_cli("explain " + base_args(out) + " --trees 40 --seed 9 --background-cap 8")
              .exit_code == 0);
  const auto meta9 = nlohmann::json::parse(slurp(out / "explain_meta.json"));
  CHECK(meta9.at("max_efficiency_gap").get<double>() <= 1e-9);
  CHECK(meta9.at("params").at("seed") == 9);
}

TEST_CASE("explain: --interaction pins the dependence partner; bad names are rejected") {
  const auto out = fixtures::temp_dir("cli_interaction");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  REQUIRE(run_cli("explain " + base_args(out) + " --trees 10 --interaction luminosity")
              .exit_code == 0);
  const auto dep = biomaudit::read_csv(out / "dependence_face_conf.csv");
  REQUIRE(dep.header.size() == 4);
  CHECK(dep.header[3] == "luminosity");

  const auto bad = run_cli("explain " + base_args(out) + " --interaction bogus");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("UnknownFeature") != std::string::npos);
}

TEST_CASE("features: luminosity weights and kernel flags change the measurements") {
  const auto out_a = fixtures::temp_dir("cli_weights_a");
  const auto out_b = fixtures::temp_dir("cli_weights_b");
  REQUIRE(run_cli("features " + base_args(out_a)).exit_code == 0);
  REQUIRE(run_cli("features " + base_args(out_b) + " --lum-weights 0.8,0.1,0.1 --kernel 8n")
              .exit_code == 0);
  const auto a = biomaudit::read_csv(out_a / "features.csv");
  const auto b = biomaudit::read_csv(out_b / "features.csv");
  REQUIRE(a.rows.size() == b.rows.size());
  bool lum_differs = false, blur_differs = false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i][5] != b.rows[i][5]) lum_differs = true;
    if (a.rows[i][6] != b.rows[i][6]) blur_differs = true;
  }
  CHECK(lum_differs);
  CHECK(blur_differs);
  const auto meta = nlohmann::json::parse(slurp(out_b / "features_meta.json"));
  CHECK(meta.at("config").at("kernel") == "8n");
  CHECK(meta.at("config").at("lum_weights")[0].get<double>() == doctest::Approx(0.8));

  const auto bad = run_cli("features " + base_args(out_b) + " --lum-weights 0.8,0.8,0.8");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("InvalidConfig") != std::string::npos);
}

TEST_CASE("faces: crops exist for every manifest row, skips accounted") {
  const auto out = fixtures::temp_dir("cli_faces");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  const auto r = run_cli("faces " + base_args(out));
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "face_manifest.csv"));
  const auto manifest = biomaudit::read_csv(out / "face_manifest.csv");
  CHECK(manifest.rows.size() > 0);
  for (const auto& row : manifest.rows) {
    CHECK(fs::exists(out / row[1]));
  }
  CHECK(r.out.find("skips") != std::string::npos);

  const auto features = biomaudit::read_csv(out / "features.csv");
  std::size_t frontal = 0;
  for (const auto& row : features.rows) {
    if (row.back() == "frontal") ++frontal;
  }
  CHECK(manifest.rows.size() == frontal);
}

TEST_CASE("metrics: reference FI fixture reproduces the FI column") {
  const auto out = fixtures::temp_dir("cli_metrics");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);

  const auto pairs = out / "fi_pairs.csv";
  fixtures::write_file(pairs,
                       "label,mA_face,mA_body\n"
                       "PETA-any,57.60,93.24\n"
                       "PA-100K-any,52.52,91.06\n"
                       "RAP-any,73.63,96.09\n"
                       "PETA-frontal,61.09,92.52\n"
                       "PA-100K-frontal,57.03,91.86\n"
                       "RAP-frontal,75.31,95.98\n");
  const auto r = run_cli("metrics " + base_args(out) + " --fi-pairs " + pairs.string());
  CHECK(r.exit_code == 0);

  REQUIRE(fs::exists(out / "metrics.csv"));
  REQUIRE(fs::exists(out / "compare.csv"));
  REQUIRE(fs::exists(out / "fi.csv"));
  const auto fi = biomaudit::read_csv(out / "fi.csv");
  REQUIRE(fi.rows.size() == 6);
  const double expected[6] = {17.58, 6.14, 51.27, 26.08, 16.79, 55.05};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(std::abs(std::stod(fi.rows[i][3]) - expected[i]) <= 0.01);
  }

  const auto metrics = biomaudit::read_csv(out / "metrics.csv");
  bool has_model_ma = false, has_meta_rate = false;
  for (const auto& row : metrics.rows) {
    if (row[0].rfind("mA:", 0) == 0) has_model_ma = true;
    if (row[0] == "meta_all_correct_rate") has_meta_rate = true;
  }
  CHECK(has_model_ma);
  CHECK(has_meta_rate);
}

TEST_CASE("metrics: perfect predictions score mA 100 and meta rate 1") {
  const auto out = fixtures::temp_dir("cli_perfect");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);

  const auto manifest = biomaudit::read_csv(dataset().manifest);
  std::string perfect = "model_id,sample_id,gender_pred\n";
  for (const auto& row : manifest.rows) {
    for (const char* model : {"p1", "p2"}) {
      perfect += std::string(model) + "," + row[0] + "," + row[4] + "\n";
    }
  }
  const auto path = out / "perfect.csv";
  fixtures::write_file(path, perfect);

  const auto& ds = dataset();
  const auto r = run_cli("metrics --manifest " + ds.manifest.string() + " --keypoints " +
                         ds.keypoints.string() + " --predictions " + path.string() + " --out " +
                         out.string());
  CHECK(r.exit_code == 0);
  const auto metrics = biomaudit::read_csv(out / "metrics.csv");
  for (const auto& row : metrics.rows) {
    if (row[0].rfind("mA:", 0) == 0) CHECK(std::stod(row[1]) == doctest::Approx(100.0));
    if (row[0] == "meta_all_correct_rate") CHECK(std::stod(row[1]) == doctest::Approx(1.0));
  }
}

TEST_CASE("features: per-sample decode failures are recorded and exit nonzero") {
  const auto dir = fixtures::temp_dir("cli_decode_err");
  fixtures::Rng rng(12);
  biomaudit::write_png(dir / "good.png", fixtures::textured_image(40, 80, 1));
  std::string manifest = "sample_id,path,dataset,split,gender_gt\n";
  manifest += "good," + (dir / "good.png").string() + ",d,test,0\n";
  manifest += "bad," + (dir / "missing.png").string() + ",d,test,1\n";
  fixtures::write_file(dir / "m.csv", manifest);
  std::string kps = "[\n";
  kps += fixtures::keypoints_json_entry("good", fixtures::subject_keypoints(40, 80, 0, rng), false);
  kps += fixtures::keypoints_json_entry("bad", fixtures::subject_keypoints(40, 80, 0, rng), true);
  kps += "]";
  fixtures::write_file(dir / "k.json", kps);

  const auto r = run_cli("features --manifest " + (dir / "m.csv").string() + " --keypoints " +
                         (dir / "k.json").string() + " --out " + (dir / "out").string());
  CHECK(r.exit_code == 1);
  const auto table = biomaudit::read_csv(dir / "out" / "features.csv");
  CHECK(table.rows.size() == 1);
  const auto meta = nlohmann::json::parse(slurp(dir / "out" / "features_meta.json"));
  REQUIRE(meta.at("errors").size() == 1);
  CHECK(meta.at("errors")[0].at("sample_id") == "bad");
}

TEST_CASE("metrics: face predictions produce per-model FI rows") {
  const auto out = fixtures::temp_dir("cli_face_preds");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);

  // m1 predicts faces correctly for a slice of samples (using the manifest gt)
  const auto manifest = biomaudit::read_csv(dataset().manifest);
  std::string face_preds = "model_id,sample_id,gender_pred\n";
  for (std::size_t i = 0; i < manifest.rows.size(); i += 2) {
    face_preds += "m1," + manifest.rows[i][0] + "," + manifest.rows[i][4] + "\n";
  }
  const auto path = out / "face_preds.csv";
  fixtures::write_file(path, face_preds);

  const auto r = run_cli("metrics " + base_args(out) + " --face-predictions " + path.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "fi.csv"));
  const auto fi = biomaudit::read_csv(out / "fi.csv");
  REQUIRE(fi.rows.size() == 1);
  CHECK(fi.rows[0][0] == "model:m1");
  // perfect face predictions: mA_face = 100, FI = 100
  CHECK(std::stod(fi.rows[0][1]) == doctest::Approx(100.0));
  CHECK(std::stod(fi.rows[0][3]) == doctest::Approx(100.0));
}

TEST_CASE("faces: unknown sample in the features CSV is recorded, not fatal") {
  const auto out = fixtures::temp_dir("cli_faces_unknown");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  // append a row whose sample_id exists nowhere else
  auto rows = biomaudit::read_features_csv(out / "features.csv");
  auto ghost = rows.front();
  ghost.sample_id = "zzz_ghost";
  rows.push_back(ghost);
  biomaudit::write_features_csv(out / "features.csv", rows);

  const auto r = run_cli("faces " + base_args(out));
  CHECK(r.exit_code == 1);
  const auto errors = biomaudit::read_csv(out / "faces_errors.csv");
  REQUIRE(errors.rows.size() == 1);
  CHECK(errors.rows[0][0] == "zzz_ghost");
  CHECK(errors.rows[0][1].find("UnknownSample") != std::string::npos);
}

TEST_CASE("tier: stats carry a tier per dataset") {
  const auto out = fixtures::temp_dir("cli_tier");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  const auto r = run_cli("tier " + base_args(out));
  CHECK(r.exit_code == 0);
  const auto stats = biomaudit::read_csv(out / "stats.csv");
  REQUIRE(stats.rows.size() == 3);  // setA, setB, setC
  for (const auto& row : stats.rows) {
    CHECK((row.back() == "low" || row.back() == "medium" || row.back() == "high"));
  }
  // setC has the largest images by construction
  for (const auto& row : stats.rows) {
    if (row[0] == "setC") CHECK(row.back() == "high");
    if (row[0] == "setA") CHECK(row.back() == "low");
  }
}

TEST_CASE("report: bundles upstream outputs; fails cleanly when they are absent") {
  const auto out = fixtures::temp_dir("cli_report");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  REQUIRE(run_cli("explain " + base_args(out) + " --trees 20").exit_code == 0);
  REQUIRE(run_cli("tier " + base_args(out)).exit_code == 0);
  REQUIRE(run_cli("metrics " + base_args(out)).exit_code == 0);

  const auto r = run_cli("report --out " + out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "report.json"));
  REQUIRE(fs::exists(out / "mean_abs_shap.svg"));
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report.at("rankings").size() == 7);
  CHECK(report.at("dataset_stats").size() == 3);
  const std::string svg = slurp(out / "mean_abs_shap.svg");
  CHECK(svg.rfind("<svg", 0) == 0);

  const auto empty = fixtures::temp_dir("cli_report_empty");
  const auto bad = run_cli("report --out " + empty.string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("MissingUpstream") != std::string::npos);
}

TEST_CASE("config file values apply, flags win, env seed fills the default") {
  const auto out = fixtures::temp_dir("cli_config");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);

  const auto cfg = out / "run.cfg";
  fixtures::write_file(cfg, "trees=9\nseed=5\n");

  // config supplies trees and seed
  REQUIRE(run_cli("explain " + base_args(out) + " --config " + cfg.string()).exit_code == 0);
  auto meta = nlohmann::json::parse(slurp(out / "explain_meta.json"));
  CHECK(meta.at("params").at("trees") == 9);
  CHECK(meta.at("params").at("seed") == 5);

  // explicit flag beats the config value
  REQUIRE(run_cli("explain " + base_args(out) + " --config " + cfg.string() + " --trees 11")
              .exit_code == 0);
  meta = nlohmann::json::parse(slurp(out / "explain_meta.json"));
  CHECK(meta.at("params").at("trees") == 11);

  // env var replaces only the default seed
  REQUIRE(run_cli("explain " + base_args(out) + " --trees 5", "BIOMAUDIT_SEED=77").exit_code == 0);
  meta = nlohmann::json::parse(slurp(out / "explain_meta.json"));
  CHECK(meta.at("params").at("seed") == 77);

  REQUIRE(run_cli("explain " + base_args(out) + " --trees 5 --seed 3", "BIOMAUDIT_SEED=77")
              .exit_code == 0);
  meta = nlohmann::json::parse(slurp(out / "explain_meta.json"));
  CHECK(meta.at("params").at("seed") == 3);
}

TEST_CASE("unusable output directory fails with WriteError") {
  const auto dir = fixtures::temp_dir("cli_badout");
  fixtures::write_file(dir / "blocked", "");
  const auto r = run_cli("features " + base_args(dir / "blocked"));
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("WriteError") != std::string::npos);
}

TEST_CASE("emitted features CSV round-trips through its own parser") {
  const auto out = fixtures::temp_dir("cli_roundtrip");
  REQUIRE(run_cli("features " + base_args(out)).exit_code == 0);
  const auto rows = biomaudit::read_features_csv(out / "features.csv");
  biomaudit::write_features_csv(out / "rewritten.csv", rows);
  CHECK(slurp(out / "rewritten.csv") == slurp(out / "features.csv"));
}
