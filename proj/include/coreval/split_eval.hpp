#pragma once

#include <vector>

#include "coreval/metrics.hpp"
#include "coreval/model.hpp"

namespace coreval {

/// One row per gold split-antecedent anaphor.
struct AnaphorRow {
  Span anaphor;
  bool matched = false;        // a system anaphor with the same span exists
  int gold_antecedents = 0;
  int predicted_antecedents = 0;  // 0 when unmatched
  int correct = 0;             // predicted chains whose aligned gold chain is a gold antecedent
};

struct SplitMatchInputs {
  std::vector<AnaphorRow> rows;
  int sys_anaphors = 0;               // total system anaphors
  int unmatched_sys_antecedents = 0;  // predicted antecedents of unmatched system anaphors
};

struct SplitEvalReport {
  MetricScore recognition;
  MetricScore lenient;        // micro-averaged over antecedent links
  MetricScore lenient_macro;  // macro-averaged over anaphors, for comparison
  MetricScore strict;
  std::vector<AnaphorRow> per_anaphor;
};

/// Exact-span matching between gold and system anaphors.
MetricScore recognition_f1(const DocumentAnnotation& gold, const DocumentAnnotation& sys);

/// Aligns all chains with CEAF over individual mentions, then counts, for
/// each span-matched anaphor, the predicted antecedent chains whose aligned
/// gold chain is among the gold antecedents (each claimable once).
SplitMatchInputs antecedent_match(const DocumentAnnotation& gold, const DocumentAnnotation& sys);

/// (lenient, strict) from the match inputs. Lenient pools antecedent links;
/// strict credits an anaphor only for a span match with the identical
/// antecedent set under the alignment.
std::pair<MetricScore, MetricScore> lenient_strict_f1(const SplitMatchInputs& inputs);

SplitEvalReport evaluate_split(const DocumentAnnotation& gold, const DocumentAnnotation& sys);

}  // namespace coreval
