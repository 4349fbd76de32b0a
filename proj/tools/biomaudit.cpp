// biomaudit: batch audit toolkit for gender-inference quality analysis.
// Subcommands: features, explain, faces, metrics, tier, report.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "biomaudit/errors.hpp"
#include "biomaudit/pipeline.hpp"

namespace {

using biomaudit::RunConfig;

struct CliOptions {
  RunConfig config;
  std::string kernel = "4n";
  std::string norm = "minmax";
  std::vector<double> lum_weights;
};

void finalize(CliOptions& opts, bool seed_given) {
  if (opts.kernel == "4n") {
    opts.config.kernel = biomaudit::LaplacianKernel::FourNeighbor;
  } else if (opts.kernel == "8n") {
    opts.config.kernel = biomaudit::LaplacianKernel::EightNeighbor;
  } else {
    throw biomaudit::Error(biomaudit::ErrorKind::InvalidConfig,
                           "--kernel must be 4n or 8n, got '" + opts.kernel + "'");
  }
  opts.config.norm = biomaudit::norm_mode_from_string(opts.norm);
  if (!opts.lum_weights.empty()) {
    if (opts.lum_weights.size() != 3) {
      throw biomaudit::Error(biomaudit::ErrorKind::InvalidConfig,
                             "--lum-weights needs exactly r,g,b");
    }
    const double sum = opts.lum_weights[0] + opts.lum_weights[1] + opts.lum_weights[2];
    if (opts.lum_weights[0] < 0 || opts.lum_weights[1] < 0 || opts.lum_weights[2] < 0 ||
        std::abs(sum - 1.0) > 1e-6) {
      throw biomaudit::Error(biomaudit::ErrorKind::InvalidConfig,
                             "--lum-weights must be non-negative and sum to 1");
    }
    opts.config.lum_weights = {opts.lum_weights[0], opts.lum_weights[1], opts.lum_weights[2]};
  }
  if (!seed_given) {
    // BIOMAUDIT_SEED replaces only the default; an explicit --seed or a
    // config-file seed wins.
    if (const char* env = std::getenv("BIOMAUDIT_SEED")) {
      try {
        opts.config.seed = std::stoull(env);
      } catch (const std::exception&) {
        throw biomaudit::Error(biomaudit::ErrorKind::InvalidConfig,
                               std::string("BIOMAUDIT_SEED is not a number: ") + env);
      }
    }
  }
  opts.config.fit.seed = opts.config.seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biomaudit: image/subject quality features, meta-label attribution and metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; command-line flags win");

  CliOptions opts;
  app.add_option("--manifest", opts.config.manifest, "sample manifest CSV");
  app.add_option("--keypoints", opts.config.keypoints, "keypoints JSON");
  app.add_option("--predictions", opts.config.predictions, "prediction CSV (repeatable, merged)");
  app.add_option("--out", opts.config.out, "output directory")->required();
  auto* seed_opt = app.add_option("--seed", opts.config.seed, "RNG seed (default 0)");
  app.add_option("--lum-weights", opts.lum_weights,
                 "perceived-brightness weights r,g,b (sum to 1)")
      ->delimiter(',');
  app.add_option("--kernel", opts.kernel, "Laplacian kernel: 4n or 8n");
  app.add_option("--depth", opts.config.fit.max_depth, "surrogate tree depth (default 3)");
  app.add_option("--trees", opts.config.fit.n_trees, "boosting rounds (default 100)");
  app.add_option("--shrinkage", opts.config.fit.shrinkage, "boosting shrinkage (default 0.1)");
  app.add_option("--background-cap", opts.config.background_cap,
                 "max background rows for attribution (default 512)");
  app.add_option("--interaction", opts.config.interaction,
                 "fixed interaction feature for dependence CSVs");
  app.add_option("--norm", opts.norm, "pooled normalization: minmax or zscore");
  app.add_option("--fi-pairs", opts.config.fi_pairs, "CSV label,mA_face,mA_body");
  app.add_option("--face-predictions", opts.config.face_predictions,
                 "prediction CSV evaluated on face crops");

  int (*runner)(const RunConfig&, std::ostream&) = nullptr;
  auto bind = [&](const char* name, const char* desc, int (*fn)(const RunConfig&, std::ostream&)) {
    app.add_subcommand(name, desc)->callback([&runner, fn] { runner = fn; });
  };
  bind("features", "extract the 7 image/subject features into features.csv",
       biomaudit::run_features);
  bind("explain", "fit the surrogate and write Shapley artifacts", biomaudit::run_explain);
  bind("faces", "crop head regions of frontal samples", biomaudit::run_faces);
  bind("metrics", "mA, meta-label rate, correct-vs-all table and face importance",
       biomaudit::run_metrics);
  bind("tier", "dataset quality stats and low/medium/high tiers", biomaudit::run_tier);
  bind("report", "bundle upstream outputs into report.json and an SVG chart",
       biomaudit::run_report);

  try {
    app.parse(argc, argv);
    finalize(opts, seed_opt->count() > 0);
    return runner(opts.config, std::cout);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const biomaudit::Error& e) {
    nlohmann::json err = {{"error", biomaudit::to_string(e.kind())}, {"detail", e.detail()}};
    std::cerr << err.dump() << "\n";
    return e.kind() == biomaudit::ErrorKind::MissingFile ? 2 : 1;
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", "Internal"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
