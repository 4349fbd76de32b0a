#include "biomaudit/tiering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biomaudit/errors.hpp"

namespace biomaudit {

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::low: return "low";
    case Tier::medium: return "medium";
    case Tier::high: return "high";
  }
  return "?";
}

const char* to_string(NormMode mode) {
  return mode == NormMode::minmax ? "minmax" : "zscore";
}

NormMode norm_mode_from_string(const std::string& s) {
  if (s == "minmax") return NormMode::minmax;
  if (s == "zscore") return NormMode::zscore;
  throw Error(ErrorKind::InvalidConfig, "unknown normalization mode '" + s + "'");
}

std::vector<std::vector<double>> normalize_pooled(const std::vector<std::vector<double>>& grouped,
                                                  NormMode mode) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& values : grouped) {
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
      ++n;
    }
  }
  if (n == 0 || lo == hi) {
    throw Error(ErrorKind::ConstantPool, "pooled values are constant or empty");
  }

  double shift = lo, scale = hi - lo;
  if (mode == NormMode::zscore) {
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (const auto& values : grouped) {
      for (double v : values) {
        const double d = v - mean;
        sq += d * d;
      }
    }
    shift = mean;
    scale = std::sqrt(sq / static_cast<double>(n));
  }

  std::vector<std::vector<double>> out(grouped.size());
  for (std::size_t g = 0; g < grouped.size(); ++g) {
    out[g].reserve(grouped[g].size());
    for (double v : grouped[g]) out[g].push_back((v - shift) / scale);
  }
  return out;
}

RawFeatureTable raw_feature_table(const std::vector<FeatureRow>& rows) {
  RawFeatureTable table;
  std::map<std::string, std::size_t> index;  // sorted dataset order
  for (const auto& row : rows) index.emplace(row.dataset, 0);
  for (auto& [name, idx] : index) {
    idx = table.datasets.size();
    table.datasets.push_back(name);
    table.values.emplace_back();
  }

  const std::size_t feat_idx[3] = {kFeatResolution, kFeatLuminosity, kFeatBlurriness};
  for (const auto& row : rows) {
    const std::size_t d = index[row.dataset];
    for (std::size_t f = 0; f < 3; ++f) {
      table.values[d][f].push_back(row.values[feat_idx[f]]);
    }
  }
  return table;
}

namespace {

MeanStdPair mean_std(const std::vector<double>& xs) {
  MeanStdPair ms;
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

DatasetStats dataset_stats(const RawFeatureTable& table, NormMode mode) {
  DatasetStats stats;
  stats.datasets = table.datasets;
  stats.stats.resize(table.datasets.size());
  stats.mode = mode;
  for (std::size_t f = 0; f < 3; ++f) {
    std::vector<std::vector<double>> grouped;
    grouped.reserve(table.datasets.size());
    for (const auto& per_dataset : table.values) grouped.push_back(per_dataset[f]);
    const auto normalized = normalize_pooled(grouped, mode);
    for (std::size_t d = 0; d < normalized.size(); ++d) {
      stats.stats[d][f] = mean_std(normalized[d]);
    }
  }
  return stats;
}

TierAssignment assign_tiers(const DatasetStats& stats) {
  struct Scored {
    std::string name;
    double score;
    double blurriness;
  };
  std::vector<Scored> scored;
  scored.reserve(stats.datasets.size());
  for (std::size_t d = 0; d < stats.datasets.size(); ++d) {
    scored.push_back({stats.datasets[d], stats.stats[d][0].mean - stats.stats[d][2].mean,
                      stats.stats[d][2].mean});
  }

  TierAssignment assignment;
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.blurriness != b.blurriness) return a.blurriness > b.blurriness;  // lower blur ranks higher
    return a.name < b.name;
  });
  for (std::size_t i = 1; i < scored.size(); ++i) {
    if (scored[i - 1].score == scored[i].score) {
      assignment.tie_break_used = true;
      assignment.tie_note = "equal quality scores resolved by blurriness, then dataset name";
      break;
    }
  }

  const std::size_t k = scored.size();
  for (std::size_t rank = 0; rank < k; ++rank) {
    Tier tier = Tier::medium;
    if (k >= 2) {
      if (rank == 0) tier = Tier::low;
      else if (rank == k - 1) tier = Tier::high;
    }
    assignment.by_dataset[scored[rank].name] = tier;
  }
  return assignment;
}

}  // namespace biomaudit
