#include "coreval/assignment.hpp"

#include <cmath>
#include <limits>

namespace coreval {

namespace {

// Shortest-augmenting-path Kuhn-Munkres, minimizing cost on an n x n matrix.
// Returns match[column] = row. Deterministic: rows are introduced in order.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_of_col(n, -1);
  for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

}  // namespace

AlignmentResult max_weight_matching(const std::vector<std::vector<double>>& weights) {
  const int rows = static_cast<int>(weights.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(weights[0].size());
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("max_weight_matching: ragged weight matrix");
    for (double w : row) {
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("max_weight_matching: weights must be finite and non-negative");
    }
  }

  AlignmentResult result;
  if (rows == 0 || cols == 0) {
    for (int g = 0; g < rows; ++g) result.unmatched_gold.push_back(g);
    for (int s = 0; s < cols; ++s) result.unmatched_system.push_back(s);
    return result;
  }

  const int n = std::max(rows, cols);
  auto padded = [&](int g, int s) -> double {
    return (g < rows && s < cols) ? weights[g][s] : 0.0;
  };
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int g = 0; g < n; ++g)
    for (int s = 0; s < n; ++s) cost[g][s] = -padded(g, s);

  const std::vector<int> row_of_col = hungarian_min(cost, n);
  std::vector<int> col_of_row(n, -1);
  for (int s = 0; s < n; ++s)
    if (row_of_col[s] >= 0) col_of_row[row_of_col[s]] = s;

  // Canonicalize exact ties: when swapping two rows' partners keeps the
  // total identical, give the lower row the lower column.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int g1 = 0; g1 < n; ++g1) {
      for (int g2 = g1 + 1; g2 < n; ++g2) {
        const int s1 = col_of_row[g1], s2 = col_of_row[g2];
        if (s1 <= s2) continue;
        if (padded(g1, s1) + padded(g2, s2) == padded(g1, s2) + padded(g2, s1)) {
          col_of_row[g1] = s2;
          col_of_row[g2] = s1;
          changed = true;
        }
      }
    }
  }

  for (int g = 0; g < rows; ++g) {
    const int s = col_of_row[g];
    if (s < 0 || s >= cols || weights[g][s] <= 0.0) {
      result.unmatched_gold.push_back(g);
      continue;
    }
    result.pairs.emplace_back(g, s);
    result.pair_weights.push_back(weights[g][s]);
    result.total_similarity += weights[g][s];
  }
  std::set<int> matched_cols;
  for (const auto& [g, s] : result.pairs) matched_cols.insert(s);
  for (int s = 0; s < cols; ++s)
    if (!matched_cols.count(s)) result.unmatched_system.push_back(s);
  return result;
}

}  // namespace coreval
