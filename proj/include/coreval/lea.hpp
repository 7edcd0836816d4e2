#pragma once

#include <compare>
#include <map>
#include <vector>

#include "coreval/metrics.hpp"
#include "coreval/model.hpp"

namespace coreval {

/// Identity of an entity representative after normalization.
/// gold_mention: the first mention of a gold chain. synthetic: stands for a
/// system chain that aligns to no gold chain, so it can never match gold.
/// span_self: the self-referent of an ordinary individual mention.
struct RepKey {
  enum Kind { gold_mention = 0, synthetic = 1, span_self = 2 };
  int kind = gold_mention;
  long long a = 0;  // mention id / system chain id / span start
  long long b = 0;  // span end for span_self
  auto operator<=>(const RepKey&) const = default;
};

/// A mention after normalization: either an Atom (an individual mention,
/// size 1) or a SetOf (a plural mention as the set of its entity
/// representatives). Atoms whose span matches a gold split-antecedent
/// anaphor carry that anaphor's antecedent-representative set; other atoms
/// carry their own singleton.
struct NormalizedMention {
  bool is_set = false;
  Span span;                          // atom only
  std::vector<RepKey> elements;       // set-of only; sorted
  std::vector<RepKey> referent_set;   // atom only; sorted

  int size() const { return is_set ? static_cast<int>(elements.size()) : 1; }
  bool operator==(const NormalizedMention&) const = default;
};

struct NormalizedChain {
  int chain_id = 0;
  bool plural = false;  // contains at least one SetOf mention
  std::vector<NormalizedMention> mentions;
};

struct NormalizedSides {
  std::vector<NormalizedChain> gold;
  std::vector<NormalizedChain> sys;
  /// Span of each gold individual mention, for resolving size-1 subsets of
  /// a plural back to the representative's own mention.
  std::map<long long, Span> rep_spans;
};

struct ImportanceConfig {
  double imp_split = 1.0;
  bool operator==(const ImportanceConfig&) const = default;
};

/// Plural mentions above this size are rejected (subset space 2^n).
inline constexpr int kMaxPluralSize = 16;

/// Normalizes both sides against the gold annotation: system chains are
/// CEAF-aligned to gold chains over their individual mentions, and every
/// plural element is replaced by the first mention of the aligned gold
/// chain (or a synthetic representative when its chain is unaligned).
/// Both documents must be materialized.
///
/// strict_formula additionally rewrites anaphor atoms into the set of their
/// gold antecedent representatives, the alternative reading of the partial
/// credit formula (kept for comparison; changes the worked example's 2/3
/// into 4/9).
NormalizedSides normalize(const DocumentAnnotation& sys, const DocumentAnnotation& gold,
                          bool strict_formula = false);

/// All non-empty subsets of the mention ordered by descending size, ties by
/// the lexicographic order of their sorted elements; an atom yields itself.
std::vector<NormalizedMention> subset_list(const NormalizedMention& m);

/// Partial credit for the link (m_i, m_j) against the reference chains:
///   1. subset-down: the largest subsets of both mentions that occur as a
///      coreferent mention pair, reward (|s_i|*|s_j|)/(|m_i|*|m_j|);
///   2. superset-up: the smallest coreferent mention pair containing both,
///      reward (|m_i|*|m_j|)/(|m_k|*|m_p|);
///   3. otherwise 0.
double link_reward(const NormalizedMention& m_i, const NormalizedMention& m_j,
                   const std::vector<NormalizedChain>& reference,
                   const std::map<long long, Span>& rep_spans);

struct LeaEntityRow {
  int chain_id = 0;
  int size = 0;
  bool plural = false;
  double importance = 0.0;  // normalized within the document side
  double resolution = 0.0;
};

struct LeaEntityReport {
  std::vector<LeaEntityRow> gold;  // recall direction
  std::vector<LeaEntityRow> sys;   // precision direction
};

/// Extended LEA: recall scores gold entities against system chains,
/// precision the reverse; entity importance is |e| boosted by imp_split for
/// entities containing a plural mention.
MetricScore lea_extended(const NormalizedSides& sides, const ImportanceConfig& cfg,
                         LeaEntityReport* report = nullptr);

}  // namespace coreval
