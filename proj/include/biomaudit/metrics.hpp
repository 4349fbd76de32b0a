#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "biomaudit/subjfeat.hpp"

namespace biomaudit {

/// 1 iff every model's prediction equals the ground truth.
/// Throws NoPredictions when no predictions are supplied.
int meta_label(std::span<const int> preds, int gt);

struct AttributeCounts {
  std::int64_t positives = 0;       // P_i
  std::int64_t true_positives = 0;  // TP_i
  std::int64_t negatives = 0;       // N_i
  std::int64_t true_negatives = 0;  // TN_i
};

struct ConfusionCounts {
  std::vector<AttributeCounts> attributes;
};

/// Label-based mean accuracy as a percentage:
/// 100 * (1 / 2M) * sum_i (TP_i/P_i + TN_i/N_i).
/// Throws EmptyClass when some attribute has no positives or no negatives.
double mean_accuracy(const ConfusionCounts& counts);

/// Gender confusion counts (single attribute) from aligned prediction and
/// ground-truth vectors.
ConfusionCounts gender_confusion(std::span<const int> preds, std::span<const int> gt);

/// Face importance: 100 * (mA_f - 50) / (mA_max - 50), clamped to [0, 100].
/// Throws DegenerateBaseline when mA_max <= 50.
double face_importance(double ma_face, double ma_max);

struct ComparisonRow {
  std::string feature;
  double correct_mean = 0.0;
  double correct_std = 0.0;  // NaN for pose-fraction rows
  double all_mean = 0.0;
  double all_std = 0.0;  // NaN for pose-fraction rows
  bool pose_fraction = false;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // pose fractions, then confidences, then image features
  std::size_t correct_count = 0;
  std::size_t total_count = 0;
};

/// Mean +- population std of each numeric feature over rows with
/// meta_label = 1 ("correct") and over all rows; pose reported as the
/// fraction of rows per pose value. Throws EmptySelection when no row has
/// meta_label = 1.
ComparisonReport compare_correct_vs_all(const std::vector<FeatureRow>& rows);

}  // namespace biomaudit
