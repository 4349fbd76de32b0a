#include "biomaudit/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "biomaudit/errors.hpp"
#include "biomaudit/parallel.hpp"

namespace biomaudit {

Matrix subsample_background(const Matrix& x, std::size_t cap, std::uint64_t seed) {
  if (cap == 0) {
    throw Error(ErrorKind::InvalidConfig, "background cap must be >= 1");
  }
  if (x.rows <= cap) return x;

  std::vector<std::size_t> idx(x.rows);
  std::iota(idx.begin(), idx.end(), 0);
  // Hand-rolled Fisher-Yates: mt19937_64 output is pinned by the standard,
  // std::shuffle / distributions are not.
  std::mt19937_64 rng(seed);
  for (std::size_t i = x.rows - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());

  Matrix out = Matrix::create(cap, x.cols);
  for (std::size_t r = 0; r < cap; ++r) {
    const auto row = x.row(idx[r]);
    std::copy(row.begin(), row.end(), out.data.begin() + r * x.cols);
  }
  return out;
}

ExplanationSet explain_rows(const TreeEnsemble& model, const Matrix& x,
                            const std::vector<std::string>& sample_ids,
                            const Matrix& background,
                            const std::vector<std::string>& feature_names) {
  if (sample_ids.size() != x.rows || feature_names.size() != x.cols) {
    throw Error(ErrorKind::InvalidConfig, "explanation inputs disagree in shape");
  }
  ExplanationSet set;
  set.feature_names = feature_names;
  set.x = x;
  set.items.resize(x.rows);

  std::vector<double> gaps(x.rows, 0.0);
  parallel_for(x.rows, [&](std::size_t i) {
    ShapleyExplanation e = shapley_exact(model, x.row(i), background);
    e.sample_id = sample_ids[i];
    double total = e.base;
    for (double p : e.phi) total += p;
    gaps[i] = std::abs(total - model.predict(x.row(i)));
    set.items[i] = std::move(e);
  });
  for (double g : gaps) set.max_efficiency_gap = std::max(set.max_efficiency_gap, g);
  return set;
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n == 0 || n != b.size()) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

namespace {

std::vector<double> feature_column(const ExplanationSet& set, std::size_t f) {
  std::vector<double> col(set.x.rows);
  for (std::size_t i = 0; i < set.x.rows; ++i) col[i] = set.x.at(i, f);
  return col;
}

std::vector<double> phi_column(const ExplanationSet& set, std::size_t f) {
  std::vector<double> col(set.items.size());
  for (std::size_t i = 0; i < set.items.size(); ++i) col[i] = set.items[i].phi[f];
  return col;
}

std::size_t find_feature(const ExplanationSet& set, const std::string& name) {
  for (std::size_t f = 0; f < set.feature_names.size(); ++f) {
    if (set.feature_names[f] == name) return f;
  }
  throw Error(ErrorKind::UnknownFeature, name);
}

constexpr double kNeutralCorrelation = 1e-12;

}  // namespace

std::vector<FeatureImportance> mean_abs_shap(const ExplanationSet& set) {
  std::vector<FeatureImportance> out;
  const std::size_t n_features = set.feature_names.size();
  out.reserve(n_features);
  for (std::size_t f = 0; f < n_features; ++f) {
    FeatureImportance fi;
    fi.feature = set.feature_names[f];
    double sum = 0.0;
    for (const auto& item : set.items) sum += std::abs(item.phi[f]);
    fi.mean_abs_phi = set.items.empty() ? 0.0 : sum / static_cast<double>(set.items.size());
    const double corr = pearson_correlation(feature_column(set, f), phi_column(set, f));
    fi.direction = corr > kNeutralCorrelation ? 1 : (corr < -kNeutralCorrelation ? -1 : 0);
    out.push_back(std::move(fi));
  }
  std::stable_sort(out.begin(), out.end(), [](const FeatureImportance& a, const FeatureImportance& b) {
    return a.mean_abs_phi > b.mean_abs_phi;
  });
  return out;
}

std::string pick_interaction(const ExplanationSet& set, const std::string& feature) {
  const std::size_t target = find_feature(set, feature);
  const std::vector<double> phi = phi_column(set, target);
  double best_abs = 0.0;
  std::size_t best = target;
  for (std::size_t f = 0; f < set.feature_names.size(); ++f) {
    if (f == target) continue;
    const double c = std::abs(pearson_correlation(feature_column(set, f), phi));
    if (c > best_abs) {
      best_abs = c;
      best = f;
    }
  }
  return set.feature_names[best];
}

std::vector<DependencePoint> dependence_data(const ExplanationSet& set,
                                             const std::string& feature,
                                             const std::optional<std::string>& interaction) {
  const std::size_t target = find_feature(set, feature);
  const std::size_t partner =
      find_feature(set, interaction ? *interaction : pick_interaction(set, feature));

  std::vector<DependencePoint> points;
  points.reserve(set.items.size());
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    points.push_back({set.items[i].sample_id, set.x.at(i, target), set.items[i].phi[target],
                      set.x.at(i, partner)});
  }
  std::sort(points.begin(), points.end(),
            [](const DependencePoint& a, const DependencePoint& b) {
              return a.sample_id < b.sample_id;
            });
  return points;
}

PerTierTable per_quality_shap(const ExplanationSet& set,
                              const std::vector<std::string>& row_datasets,
                              const TierAssignment& tiers) {
  if (row_datasets.size() != set.items.size()) {
    throw Error(ErrorKind::InvalidConfig, "per-tier inputs disagree in shape");
  }
  PerTierTable table;
  table.feature_names = set.feature_names;

  const Tier order[3] = {Tier::low, Tier::medium, Tier::high};
  std::vector<std::vector<std::size_t>> members(3);
  for (std::size_t i = 0; i < row_datasets.size(); ++i) {
    auto it = tiers.by_dataset.find(row_datasets[i]);
    if (it == tiers.by_dataset.end()) {
      throw Error(ErrorKind::MissingTier, "dataset '" + row_datasets[i] + "' has no tier");
    }
    members[static_cast<std::size_t>(it->second)].push_back(i);
  }

  for (int t = 0; t < 3; ++t) {
    if (members[t].empty()) continue;
    table.tiers.push_back(order[t]);
    table.counts.push_back(members[t].size());
  }
  table.mean_abs.assign(set.feature_names.size(),
                        std::vector<double>(table.tiers.size(), 0.0));
  for (std::size_t f = 0; f < set.feature_names.size(); ++f) {
    std::size_t col = 0;
    for (int t = 0; t < 3; ++t) {
      if (members[t].empty()) continue;
      double sum = 0.0;
      for (std::size_t i : members[t]) sum += std::abs(set.items[i].phi[f]);
      table.mean_abs[f][col] = sum / static_cast<double>(members[t].size());
      ++col;
    }
  }
  return table;
}

}  // namespace biomaudit
