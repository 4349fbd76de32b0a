#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "biomaudit/tree.hpp"

namespace biomaudit {

/// Exact interventional Shapley attribution for one sample.
/// Efficiency holds by construction: base + sum(phi) = f(x).
struct ShapleyExplanation {
  std::string sample_id;
  std::vector<double> phi;
  double base = 0.0;
};

using ModelFn = std::function<double(std::span<const double>)>;

/// Exact interventional Shapley values by coalition enumeration.
/// v(S) = mean over background rows b of f(row taking x on S and b off S);
/// phi_i sums weighted marginal contributions over all S not containing i.
/// Throws TooManyFeatures (n outside [1, 20]), EmptyBackground, and
/// InvalidConfig when the background column count differs from x.
ShapleyExplanation shapley_exact(const ModelFn& f, std::span<const double> x,
                                 const Matrix& background);

/// Same contract, decomposed tree by tree (Shapley values are linear in the
/// model, and each tree only reads its own feature subset). Orders of
/// magnitude faster for boosted ensembles; agrees with the generic routine
/// to floating-point rounding.
ShapleyExplanation shapley_exact(const TreeEnsemble& model, std::span<const double> x,
                                 const Matrix& background);

/// Subset weight |S|!(n-|S|-1)!/n! computed as 1/(n * C(n-1, |S|)).
double shapley_weight(std::size_t n_features, std::size_t coalition_size);

}  // namespace biomaudit
