#include "biomaudit/shapley.hpp"

#include <bit>
#include <cstdint>

#include "biomaudit/errors.hpp"

namespace biomaudit {

namespace {

void check_inputs(std::size_t n, const Matrix& background) {
  if (n < 1 || n > 20) {
    throw Error(ErrorKind::TooManyFeatures,
                "coalition enumeration supports 1..20 features, got " + std::to_string(n));
  }
  if (background.rows == 0) {
    throw Error(ErrorKind::EmptyBackground, "background set is empty");
  }
  if (background.cols != n) {
    throw Error(ErrorKind::InvalidConfig, "background has " + std::to_string(background.cols) +
                                              " columns, sample has " + std::to_string(n));
  }
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return c;
}

}  // namespace

double shapley_weight(std::size_t n_features, std::size_t coalition_size) {
  return 1.0 / (static_cast<double>(n_features) * binomial(n_features - 1, coalition_size));
}

ShapleyExplanation shapley_exact(const ModelFn& f, std::span<const double> x,
                                 const Matrix& background) {
  const std::size_t n = x.size();
  check_inputs(n, background);

  // v(S) for every coalition bitmask
  const std::uint32_t n_masks = 1u << n;
  std::vector<double> v(n_masks, 0.0);
  std::vector<double> composite(n);
  for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
    double sum = 0.0;
    for (std::size_t b = 0; b < background.rows; ++b) {
      const auto row = background.row(b);
      for (std::size_t i = 0; i < n; ++i) {
        composite[i] = (mask >> i) & 1u ? x[i] : row[i];
      }
      sum += f(composite);
    }
    v[mask] = sum / static_cast<double>(background.rows);
  }

  ShapleyExplanation out;
  out.base = v[0];
  out.phi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    double phi = 0.0;
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
      phi += shapley_weight(n, size) * (v[mask | bit] - v[mask]);
    }
    out.phi[i] = phi;
  }
  return out;
}

ShapleyExplanation shapley_exact(const TreeEnsemble& model, std::span<const double> x,
                                 const Matrix& background) {
  const std::size_t n = x.size();
  check_inputs(n, background);
  if (model.n_features != 0 && model.n_features != n) {
    throw Error(ErrorKind::InvalidConfig, "model expects " + std::to_string(model.n_features) +
                                              " features, sample has " + std::to_string(n));
  }

  ShapleyExplanation out;
  out.base = model.base_score;
  out.phi.assign(n, 0.0);

  std::vector<double> composite(n);
  std::vector<double> v;  // per-tree coalition values over the used-feature set
  for (const DecisionTree& tree : model.trees) {
    const std::vector<int> used = tree.used_features();
    const std::size_t u = used.size();
    if (u == 0) {
      out.base += model.shrinkage * tree.nodes()[0].value;
      continue;
    }

    const std::uint32_t n_masks = 1u << u;
    v.assign(n_masks, 0.0);
    for (std::size_t b = 0; b < background.rows; ++b) {
      const auto row = background.row(b);
      for (std::size_t i = 0; i < n; ++i) composite[i] = row[i];
      // Walk masks in Gray-code order so each step flips one coordinate.
      std::uint32_t prev = 0;
      for (std::uint32_t seq = 0; seq < n_masks; ++seq) {
        const std::uint32_t mask = seq ^ (seq >> 1);
        const std::uint32_t diff = mask ^ prev;
        if (diff) {
          const int j = std::countr_zero(diff);
          const std::size_t feat = static_cast<std::size_t>(used[j]);
          composite[feat] = (mask >> j) & 1u ? x[feat] : row[feat];
        }
        v[mask] += tree.predict(composite);
        prev = mask;
      }
    }
    const double inv_m = 1.0 / static_cast<double>(background.rows);
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) v[mask] *= inv_m;

    out.base += model.shrinkage * v[0];
    for (std::size_t j = 0; j < u; ++j) {
      const std::uint32_t bit = 1u << j;
      double phi = 0.0;
      for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
        if (mask & bit) continue;
        const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
        phi += shapley_weight(u, size) * (v[mask | bit] - v[mask]);
      }
      out.phi[static_cast<std::size_t>(used[j])] += model.shrinkage * phi;
    }
  }
  return out;
}

}  // namespace biomaudit
