#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biomaudit/shapley.hpp"
#include "biomaudit/tiering.hpp"
#include "biomaudit/tree.hpp"

namespace biomaudit {

/// Explanations for a batch of samples, aligned with the rows of X.
struct ExplanationSet {
  std::vector<std::string> feature_names;
  Matrix x;  // row i belongs to items[i]
  std::vector<ShapleyExplanation> items;
  double max_efficiency_gap = 0.0;  // max |base + sum(phi) - f(x)| seen
};

/// Deterministic background subsample: Fisher-Yates over row indices driven
/// by a seeded mt19937, first `cap` indices kept in ascending order. The full
/// matrix is returned unchanged when it already fits the cap.
Matrix subsample_background(const Matrix& x, std::size_t cap, std::uint64_t seed);

/// Explains every row of x against the background (parallel per sample).
ExplanationSet explain_rows(const TreeEnsemble& model, const Matrix& x,
                            const std::vector<std::string>& sample_ids,
                            const Matrix& background,
                            const std::vector<std::string>& feature_names);

struct FeatureImportance {
  std::string feature;
  double mean_abs_phi = 0.0;
  int direction = 0;  // sign of corr(feature value, phi): +1, -1, or 0 (neutral)
};

/// Features sorted descending by mean |phi| (stable on ties).
std::vector<FeatureImportance> mean_abs_shap(const ExplanationSet& set);

struct DependencePoint {
  std::string sample_id;
  double value = 0.0;
  double phi = 0.0;
  double interaction_value = 0.0;
};

/// Picks the interaction partner for a feature: the other feature whose
/// values correlate most (in absolute Pearson terms) with the target's phi.
/// Falls back to the feature itself when no other feature correlates at all.
std::string pick_interaction(const ExplanationSet& set, const std::string& feature);

/// One (value, phi, interaction value) triple per sample, ordered by
/// sample_id. Throws UnknownFeature.
std::vector<DependencePoint> dependence_data(const ExplanationSet& set,
                                             const std::string& feature,
                                             const std::optional<std::string>& interaction);

struct PerTierTable {
  std::vector<std::string> feature_names;
  std::vector<Tier> tiers;                     // columns, ascending quality
  std::vector<std::vector<double>> mean_abs;   // [feature][tier]
  std::vector<std::size_t> counts;             // samples per tier column
};

/// Mean |phi| per feature per quality tier. row_datasets[i] names the
/// dataset of sample i; throws MissingTier when a dataset has no assignment.
PerTierTable per_quality_shap(const ExplanationSet& set,
                              const std::vector<std::string>& row_datasets,
                              const TierAssignment& tiers);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace biomaudit
