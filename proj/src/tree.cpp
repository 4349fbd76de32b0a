#include "biomaudit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "biomaudit/errors.hpp"

namespace biomaudit {

std::vector<int> DecisionTree::used_features() const {
  std::set<int> used;
  for (const auto& node : nodes_) {
    if (node.feature >= 0) used.insert(node.feature);
  }
  return {used.begin(), used.end()};
}

namespace {

constexpr double kMinGain = 1e-12;

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double subset_mean(std::span<const double> y, const std::vector<std::size_t>& idx) {
  double sum = 0.0;
  for (std::size_t i : idx) sum += y[i];
  return sum / static_cast<double>(idx.size());
}

double subset_sse(std::span<const double> y, const std::vector<std::size_t>& idx, double mean) {
  double sq = 0.0;
  for (std::size_t i : idx) {
    const double d = y[i] - mean;
    sq += d * d;
  }
  return sq;
}

SplitChoice best_split(const Matrix& x, std::span<const double> y,
                       const std::vector<std::size_t>& idx, double parent_sse, int min_leaf) {
  SplitChoice best;
  const std::size_t n = idx.size();
  std::vector<std::pair<double, double>> vt(n);  // (value, target)

  for (std::size_t f = 0; f < x.cols; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      vt[i] = {x.at(idx[i], f), y[idx[i]]};
    }
    std::sort(vt.begin(), vt.end());

    // prefix scan of target sums; split after position i when values differ
    double left_sum = 0.0, left_sq = 0.0;
    double total_sum = 0.0, total_sq = 0.0;
    for (const auto& [v, t] : vt) {
      total_sum += t;
      total_sq += t * t;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += vt[i].second;
      left_sq += vt[i].second * vt[i].second;
      if (vt[i].first == vt[i + 1].first) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < static_cast<std::size_t>(min_leaf) || nr < static_cast<std::size_t>(min_leaf)) {
        continue;
      }
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse_l = left_sq - left_sum * left_sum / static_cast<double>(nl);
      const double sse_r = right_sq - right_sum * right_sum / static_cast<double>(nr);
      const double gain = parent_sse - sse_l - sse_r;
      if (gain > best.gain) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (vt[i].first + vt[i + 1].first);
        best.gain = gain;
      }
    }
  }
  if (best.gain <= kMinGain) best.found = false;
  return best;
}

int build_node(const Matrix& x, std::span<const double> y, std::vector<std::size_t> idx,
               int depth, int max_depth, int min_leaf, std::vector<TreeNode>& nodes) {
  const double mean = subset_mean(y, idx);
  const double sse = subset_sse(y, idx, mean);

  SplitChoice split;
  if (depth < max_depth && idx.size() >= 2 * static_cast<std::size_t>(min_leaf) && sse > kMinGain) {
    split = best_split(x, y, idx, sse, min_leaf);
  }
  const int self = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (!split.found) {
    nodes[self].value = mean;
    return self;
  }

  std::vector<std::size_t> left_idx, right_idx;
  for (std::size_t i : idx) {
    (x.at(i, split.feature) < split.threshold ? left_idx : right_idx).push_back(i);
  }
  idx.clear();
  idx.shrink_to_fit();

  nodes[self].feature = split.feature;
  nodes[self].threshold = split.threshold;
  const int left = build_node(x, y, std::move(left_idx), depth + 1, max_depth, min_leaf, nodes);
  const int right = build_node(x, y, std::move(right_idx), depth + 1, max_depth, min_leaf, nodes);
  nodes[self].left = left;
  nodes[self].right = right;
  return self;
}

DecisionTree fit_tree(const Matrix& x, std::span<const double> y, int max_depth, int min_leaf) {
  std::vector<std::size_t> idx(x.rows);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<TreeNode> nodes;
  build_node(x, y, std::move(idx), 0, max_depth, min_leaf, nodes);
  return DecisionTree(std::move(nodes));
}

double mse(std::span<const double> y, std::span<const double> pred) {
  double sq = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - pred[i];
    sq += d * d;
  }
  return sq / static_cast<double>(y.size());
}

}  // namespace

TreeEnsemble fit_gbdt(const Matrix& x, std::span<const double> y, const FitParams& params) {
  if (x.rows != y.size() || x.rows == 0 || x.cols == 0) {
    throw Error(ErrorKind::InvalidConfig, "feature matrix and labels disagree");
  }
  if (params.max_depth < 1 || params.n_trees < 1 || params.shrinkage <= 0.0 ||
      params.min_leaf < 1) {
    throw Error(ErrorKind::InvalidConfig, "bad fit parameters");
  }

  TreeEnsemble model;
  model.n_features = x.cols;
  model.shrinkage = params.shrinkage;
  double y_sum = 0.0;
  for (double v : y) y_sum += v;
  model.base_score = y_sum / static_cast<double>(y.size());

  std::vector<double> current(x.rows, model.base_score);
  std::vector<double> residual(x.rows);
  for (int t = 0; t < params.n_trees; ++t) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      residual[i] = y[i] - current[i];
      sse += residual[i] * residual[i];
    }
    if (sse <= kMinGain) break;  // already fit exactly

    DecisionTree tree = fit_tree(x, residual, params.max_depth, params.min_leaf);
    if (tree.is_leaf_only() && std::abs(tree.nodes()[0].value) <= kMinGain) {
      break;  // no further signal
    }
    for (std::size_t i = 0; i < x.rows; ++i) {
      current[i] += params.shrinkage * tree.predict(x.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  model.training_loss = mse(y, current);
  return model;
}

TreeEnsemble fit_cart(const Matrix& x, std::span<const double> y, int max_depth, int min_leaf) {
  FitParams params;
  params.max_depth = max_depth;
  params.n_trees = 1;
  params.shrinkage = 1.0;
  params.min_leaf = min_leaf;
  return fit_gbdt(x, y, params);
}

TreeEnsemble fit_surrogate(const Matrix& x, std::span<const int> labels, const FitParams& params) {
  if (x.rows != labels.size()) {
    throw Error(ErrorKind::InvalidConfig, "feature matrix and labels disagree");
  }
  if (x.rows < 10) {
    throw Error(ErrorKind::TooFewSamples,
                "surrogate fit needs >= 10 rows, got " + std::to_string(x.rows));
  }
  std::vector<double> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y[i] = static_cast<double>(labels[i]);

  const bool constant = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (constant) {
    TreeEnsemble model;
    model.n_features = x.cols;
    model.shrinkage = params.shrinkage;
    model.base_score = y[0];
    model.training_loss = 0.0;
    return model;
  }
  return fit_gbdt(x, y, params);
}

}  // namespace biomaudit
