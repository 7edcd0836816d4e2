#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "coreval/model.hpp"

namespace coreval {

struct BaselineConfig {
  enum class Kind { recent, random };
  Kind kind = Kind::recent;
  int x = 2;                 // recent: number of closest clusters
  std::uint64_t seed = 0;    // random
  std::set<std::string> pronoun_list = {"they", "their", "them", "we", "us", "our", "both"};
};

/// Discourse-new mentions (chain-initial in document order) whose
/// lowercased token span is in the pronoun list.
std::set<int> recognize_heuristic(const DocumentAnnotation& doc, const BaselineConfig& cfg);

/// For each anaphor, the x closest preceding singular clusters (distance
/// from the anaphor start to the end of the cluster's nearest preceding
/// mention); fewer than 2 available yields no relation. At most 5
/// antecedents are emitted.
std::vector<SplitRelation> recent_x(const DocumentAnnotation& doc, const std::set<int>& anaphors,
                                    int x);

/// 2..5 antecedents (capped by availability) drawn uniformly without
/// replacement from the preceding singular clusters. The generator is
/// mt19937_64 seeded with splitmix64(seed ^ fnv1a64(doc_id)), so outputs
/// are identical across runs and across document-level parallelism.
std::vector<SplitRelation> random_antecedents(const DocumentAnnotation& doc,
                                              const std::set<int>& anaphors, std::uint64_t seed);

/// Recognizes anaphors with the pronoun heuristic and replaces the
/// document's split relations with the configured model's output.
DocumentAnnotation apply_baseline(const DocumentAnnotation& doc, const BaselineConfig& cfg);

}  // namespace coreval
