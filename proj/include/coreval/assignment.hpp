#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace coreval {

/// CEAF phi4 similarity: 2*|intersection| / (|a| + |b|). Symmetric.
/// Keys may be any ordered type (spans for individual mentions, canonical
/// element sets for plural mentions). Empty sets are an error.
template <typename Key>
double phi4(const std::set<Key>& a, const std::set<Key>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("phi4: empty chain");
  std::size_t common = 0;
  for (const auto& k : a) common += b.count(k);
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

struct AlignmentResult {
  /// Matched (gold index, system index) pairs with weight > 0, sorted by
  /// gold index. A partial injection: no index appears twice.
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> pair_weights;  // parallel to pairs
  double total_similarity = 0.0;
  std::vector<int> unmatched_gold;
  std::vector<int> unmatched_system;

  /// gold index -> system index, or -1.
  int system_for(int gold_index) const {
    for (const auto& [g, s] : pairs)
      if (g == gold_index) return s;
    return -1;
  }
  int gold_for(int system_index) const {
    for (const auto& [g, s] : pairs)
      if (s == system_index) return g;
    return -1;
  }
};

/// Exact maximum-weight bipartite matching (Kuhn-Munkres on a square
/// zero-padded matrix). weights[g][s] >= 0 and finite, G rows x S columns.
/// Ties are resolved deterministically preferring lower gold then lower
/// system indices; zero-weight pairs are not reported.
AlignmentResult max_weight_matching(const std::vector<std::vector<double>>& weights);

}  // namespace coreval
