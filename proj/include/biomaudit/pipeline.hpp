#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "biomaudit/explain.hpp"
#include "biomaudit/imgfeat.hpp"
#include "biomaudit/ingest.hpp"
#include "biomaudit/metrics.hpp"
#include "biomaudit/subjfeat.hpp"
#include "biomaudit/tiering.hpp"
#include "biomaudit/tree.hpp"

namespace biomaudit {

/// Resolved configuration for one command invocation. Defaults match the
/// documented CLI defaults; seed 0 keeps every run reproducible.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path keypoints;
  std::vector<std::filesystem::path> predictions;
  std::filesystem::path out;
  std::filesystem::path fi_pairs;          // optional label,mA_face,mA_body table
  std::filesystem::path face_predictions;  // optional face-crop prediction table

  LuminosityWeights lum_weights;
  LaplacianKernel kernel = LaplacianKernel::FourNeighbor;
  FitParams fit;
  std::size_t background_cap = 512;
  std::string interaction;  // empty = auto-pick per feature
  NormMode norm = NormMode::minmax;
  std::uint64_t seed = 0;
};

// features CSV schema (fixed column order)
extern const std::vector<std::string> kFeatureCsvHeader;

void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(const std::filesystem::path& path);

/// Feature rows matched with full-coverage predictions; meta labels filled.
struct LabeledFeatures {
  std::vector<FeatureRow> rows;
  std::vector<std::vector<int>> preds;  // per row, aligned with model_ids
  std::vector<std::string> model_ids;
  std::size_t dropped_features = 0;
  std::size_t dropped_predictions = 0;
};

LabeledFeatures join_features_predictions(const std::vector<FeatureRow>& features,
                                          const PredictionTable& predictions);

Matrix feature_matrix(const std::vector<FeatureRow>& rows);

// Command entry points. Outputs land in config.out; the returned value is
// the process exit code (0 = no error records).
int run_features(const RunConfig& config, std::ostream& log);
int run_explain(const RunConfig& config, std::ostream& log);
int run_faces(const RunConfig& config, std::ostream& log);
int run_metrics(const RunConfig& config, std::ostream& log);
int run_tier(const RunConfig& config, std::ostream& log);
int run_report(const RunConfig& config, std::ostream& log);

}  // namespace biomaudit
