#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace biomaudit {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  static Matrix create(std::size_t rows, std::size_t cols) {
    return Matrix{rows, cols, std::vector<double>(rows * cols, 0.0)};
  }

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data.data() + r * cols, cols);
  }
};

/// Binary decision tree node. feature == -1 marks a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

/// Flat binary regression tree; root at node 0. Routing: x[feature] < threshold
/// goes left, otherwise right.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double predict(std::span<const double> x) const {
    int i = 0;
    while (nodes_[i].feature >= 0) {
      i = x[static_cast<std::size_t>(nodes_[i].feature)] < nodes_[i].threshold ? nodes_[i].left
                                                                               : nodes_[i].right;
    }
    return nodes_[i].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  bool is_leaf_only() const { return nodes_.size() == 1 && nodes_[0].feature < 0; }

  /// Distinct feature indices referenced by internal nodes, ascending.
  std::vector<int> used_features() const;

 private:
  std::vector<TreeNode> nodes_;
};

struct FitParams {
  int max_depth = 3;
  int n_trees = 100;
  double shrinkage = 0.1;
  int min_leaf = 1;
  std::uint64_t seed = 0;  // kept for config echo; the exact greedy fit is RNG-free
};

/// Gradient-boosted regression trees under squared loss:
/// prediction = base_score + shrinkage * sum_t tree_t(x).
class TreeEnsemble {
 public:
  double base_score = 0.0;
  double shrinkage = 1.0;
  std::vector<DecisionTree> trees;
  std::size_t n_features = 0;
  double training_loss = 0.0;  // mean squared error on the fitting data

  double predict(std::span<const double> x) const {
    double y = base_score;
    for (const auto& tree : trees) y += shrinkage * tree.predict(x);
    return y;
  }
};

/// Exact greedy fit, deterministic for a fixed input order: features are
/// scanned in index order, candidate thresholds at midpoints of consecutive
/// distinct sorted values, ties kept on the first best split.
TreeEnsemble fit_gbdt(const Matrix& x, std::span<const double> y, const FitParams& params);

/// Single unshrunken tree (equivalent to one boosting round at shrinkage 1).
TreeEnsemble fit_cart(const Matrix& x, std::span<const double> y, int max_depth,
                      int min_leaf = 1);

/// Surrogate over binary meta labels. Throws TooFewSamples (< 10 rows) and
/// InvalidConfig on shape mismatch; constant labels yield the constant
/// ensemble with no trees.
TreeEnsemble fit_surrogate(const Matrix& x, std::span<const int> labels, const FitParams& params);

}  // namespace biomaudit
