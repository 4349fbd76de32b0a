#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "biomaudit/subjfeat.hpp"

namespace biomaudit {

enum class Tier { low, medium, high };

const char* to_string(Tier tier);

enum class NormMode { minmax, zscore };

const char* to_string(NormMode mode);
NormMode norm_mode_from_string(const std::string& s);  // throws InvalidConfig

/// Normalizes each dataset's values against the pooled union of all
/// datasets' values. minmax: (v - min)/(max - min); zscore: (v - mean)/std.
/// Throws ConstantPool when the pooled values are all equal.
std::vector<std::vector<double>> normalize_pooled(const std::vector<std::vector<double>>& grouped,
                                                  NormMode mode = NormMode::minmax);

struct MeanStdPair {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

// image-based feature order within tiering tables
inline constexpr std::array<const char*, 3> kImageFeatureNames = {"resolution", "luminosity",
                                                                  "blurriness"};

/// Raw per-dataset value lists for the three image-based features.
struct RawFeatureTable {
  std::vector<std::string> datasets;  // sorted unique
  std::vector<std::array<std::vector<double>, 3>> values;  // parallel to datasets
};

RawFeatureTable raw_feature_table(const std::vector<FeatureRow>& rows);

/// Per-dataset mean +- std of pooled-normalized feature values.
struct DatasetStats {
  std::vector<std::string> datasets;
  std::vector<std::array<MeanStdPair, 3>> stats;  // parallel to datasets
  NormMode mode = NormMode::minmax;
};

DatasetStats dataset_stats(const RawFeatureTable& table, NormMode mode = NormMode::minmax);

struct TierAssignment {
  std::map<std::string, Tier> by_dataset;
  bool tie_break_used = false;
  std::string tie_note;
};

/// Quality score = normalized-resolution mean - normalized-blurriness mean;
/// datasets ranked ascending map to low / medium / high (a single dataset is
/// reported as medium). Score ties resolve to the lower blurriness, then to
/// dataset name order; both are recorded in tie_note.
TierAssignment assign_tiers(const DatasetStats& stats);

}  // namespace biomaudit
