#pragma once

#include <set>
#include <vector>

#include "coreval/model.hpp"

namespace coreval {

struct MetricScore {
  double recall_num = 0.0;
  double recall_den = 0.0;
  double precision_num = 0.0;
  double precision_den = 0.0;

  double recall() const { return recall_den > 0.0 ? recall_num / recall_den : 0.0; }
  double precision() const { return precision_den > 0.0 ? precision_num / precision_den : 0.0; }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }

  /// Micro aggregation across documents.
  MetricScore& operator+=(const MetricScore& o) {
    recall_num += o.recall_num;
    recall_den += o.recall_den;
    precision_num += o.precision_num;
    precision_den += o.precision_den;
    return *this;
  }
};

using SpanChains = std::vector<std::set<Span>>;

/// Chains reduced to their individual mentions, keyed by span. Plural
/// mentions are dropped; chains left empty disappear.
SpanChains span_chains(const DocumentAnnotation& doc);

/// Spans of the non-referring mentions.
std::set<Span> non_referring_spans(const DocumentAnnotation& doc);

MetricScore muc(const SpanChains& gold, const SpanChains& sys);
MetricScore b_cubed(const SpanChains& gold, const SpanChains& sys);
MetricScore ceaf_phi4(const SpanChains& gold, const SpanChains& sys);
double conll_average(const MetricScore& muc_score, const MetricScore& b3_score,
                     const MetricScore& ceafe_score);

/// Standard LEA with singletons scored by the self-link convention.
MetricScore lea_standard(const SpanChains& gold, const SpanChains& sys);

MetricScore non_referring_f1(const std::set<Span>& gold, const std::set<Span>& sys);

}  // namespace coreval
