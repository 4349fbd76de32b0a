#include "biomaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biomaudit/errors.hpp"

namespace biomaudit {

int meta_label(std::span<const int> preds, int gt) {
  if (preds.empty()) {
    throw Error(ErrorKind::NoPredictions, "meta label needs at least one model prediction");
  }
  for (int p : preds) {
    if (p != gt) return 0;
  }
  return 1;
}

double mean_accuracy(const ConfusionCounts& counts) {
  if (counts.attributes.empty()) {
    throw Error(ErrorKind::EmptyClass, "no attributes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < counts.attributes.size(); ++i) {
    const auto& a = counts.attributes[i];
    if (a.positives <= 0 || a.negatives <= 0) {
      throw Error(ErrorKind::EmptyClass,
                  "attribute " + std::to_string(i) + " has an empty class");
    }
    sum += static_cast<double>(a.true_positives) / static_cast<double>(a.positives) +
           static_cast<double>(a.true_negatives) / static_cast<double>(a.negatives);
  }
  return 100.0 * sum / (2.0 * static_cast<double>(counts.attributes.size()));
}

ConfusionCounts gender_confusion(std::span<const int> preds, std::span<const int> gt) {
  AttributeCounts a;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (gt[i] == 1) {
      ++a.positives;
      if (preds[i] == 1) ++a.true_positives;
    } else {
      ++a.negatives;
      if (preds[i] == 0) ++a.true_negatives;
    }
  }
  return ConfusionCounts{{a}};
}

double face_importance(double ma_face, double ma_max) {
  if (ma_max <= 50.0) {
    throw Error(ErrorKind::DegenerateBaseline,
                "body mA " + std::to_string(ma_max) + " is not above the 50% randomness floor");
  }
  const double fi = 100.0 * (ma_face - 50.0) / (ma_max - 50.0);
  return std::clamp(fi, 0.0, 100.0);
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd ms;
  if (xs.empty()) return ms;
  double sum = 0.0;
  for (double x : xs) sum += x;
  ms.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) {
    const double d = x - ms.mean;
    sq += d * d;
  }
  ms.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
  return ms;
}

}  // namespace

ComparisonReport compare_correct_vs_all(const std::vector<FeatureRow>& rows) {
  ComparisonReport report;
  report.total_count = rows.size();
  for (const auto& row : rows) {
    if (row.meta_label == 1) ++report.correct_count;
  }
  if (report.correct_count == 0) {
    throw Error(ErrorKind::EmptySelection, "no rows with meta label 1");
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Pose poses[3] = {Pose::frontal, Pose::sideways, Pose::backside};
  for (Pose pose : poses) {
    std::size_t correct = 0, all = 0;
    for (const auto& row : rows) {
      if (row.pose == pose) {
        ++all;
        if (row.meta_label == 1) ++correct;
      }
    }
    ComparisonRow out;
    out.feature = std::string("pose_") + to_string(pose);
    out.correct_mean = static_cast<double>(correct) / static_cast<double>(report.correct_count);
    out.all_mean = static_cast<double>(all) / static_cast<double>(report.total_count);
    out.correct_std = nan;
    out.all_std = nan;
    out.pose_fraction = true;
    report.rows.push_back(out);
  }

  // Table layout: confidence block first, then image block.
  const std::size_t order[6] = {kFeatFaceConf, kFeatUpperConf, kFeatLowerConf,
                                kFeatResolution, kFeatLuminosity, kFeatBlurriness};
  for (std::size_t f : order) {
    std::vector<double> correct_vals, all_vals;
    for (const auto& row : rows) {
      all_vals.push_back(row.values[f]);
      if (row.meta_label == 1) correct_vals.push_back(row.values[f]);
    }
    const MeanStd c = mean_std(correct_vals);
    const MeanStd a = mean_std(all_vals);
    report.rows.push_back({kFeatureNames[f], c.mean, c.stddev, a.mean, a.stddev, false});
  }
  return report;
}

}  // namespace biomaudit
