#include "coreval/split_eval.hpp"

#include <map>
#include <set>

#include "coreval/assignment.hpp"

namespace coreval {

namespace {

struct SideRelations {
  // Relations in document order of their anaphor span; duplicates by span
  // keep the first occurrence for pairing but still count in totals.
  std::vector<std::pair<Span, const SplitRelation*>> ordered;
  std::map<Span, const SplitRelation*> by_span;
};

SideRelations collect_relations(const DocumentAnnotation& doc) {
  SideRelations side;
  for (const auto& rel : doc.split_relations) {
    const Mention* anaphor = doc.find_mention(rel.anaphor);
    if (!anaphor || anaphor->is_plural()) continue;
    side.ordered.emplace_back(anaphor->span, &rel);
  }
  std::sort(side.ordered.begin(), side.ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [span, rel] : side.ordered) side.by_span.emplace(span, rel);
  return side;
}

}  // namespace

MetricScore recognition_f1(const DocumentAnnotation& gold, const DocumentAnnotation& sys) {
  const SideRelations g = collect_relations(gold);
  const SideRelations s = collect_relations(sys);
  std::set<Span> claimed;
  int matched = 0;
  for (const auto& [span, rel] : g.ordered) {
    if (s.by_span.count(span) && claimed.insert(span).second) ++matched;
  }
  MetricScore score;
  score.recall_num = matched;
  score.recall_den = static_cast<double>(g.ordered.size());
  score.precision_num = matched;
  score.precision_den = static_cast<double>(s.ordered.size());
  return score;
}

SplitMatchInputs antecedent_match(const DocumentAnnotation& gold, const DocumentAnnotation& sys) {
  const SideRelations g = collect_relations(gold);
  const SideRelations s = collect_relations(sys);

  // CEAF alignment between all chains over individual mention spans.
  std::map<int, int> aligned_gold_chain;  // sys chain id -> gold chain id
  if (!gold.chains.empty() && !sys.chains.empty()) {
    const SpanChains gold_spans = span_chains(gold);
    const SpanChains sys_spans = span_chains(sys);
    // span_chains drops chains with no individual mention, so re-derive the
    // chain ids it kept.
    std::vector<int> gold_ids, sys_ids;
    for (const auto& c : gold.chains) {
      bool has_individual = false;
      for (int id : c.mentions) {
        const Mention* m = gold.find_mention(id);
        if (m && !m->is_plural()) has_individual = true;
      }
      if (has_individual) gold_ids.push_back(c.id);
    }
    for (const auto& c : sys.chains) {
      bool has_individual = false;
      for (int id : c.mentions) {
        const Mention* m = sys.find_mention(id);
        if (m && !m->is_plural()) has_individual = true;
      }
      if (has_individual) sys_ids.push_back(c.id);
    }
    std::vector<std::vector<double>> weights(gold_spans.size(),
                                             std::vector<double>(sys_spans.size(), 0.0));
    for (std::size_t i = 0; i < gold_spans.size(); ++i)
      for (std::size_t j = 0; j < sys_spans.size(); ++j)
        weights[i][j] = phi4(gold_spans[i], sys_spans[j]);
    for (const auto& [gi, si] : max_weight_matching(weights).pairs)
      aligned_gold_chain[sys_ids[si]] = gold_ids[gi];
  }

  SplitMatchInputs inputs;
  inputs.sys_anaphors = static_cast<int>(s.ordered.size());
  std::set<Span> claimed_spans;
  for (const auto& [span, rel] : g.ordered) {
    AnaphorRow row;
    row.anaphor = span;
    row.gold_antecedents = static_cast<int>(rel->antecedent_chains.size());
    auto it = s.by_span.find(span);
    if (it != s.by_span.end() && claimed_spans.insert(span).second) {
      row.matched = true;
      const SplitRelation* sys_rel = it->second;
      row.predicted_antecedents = static_cast<int>(sys_rel->antecedent_chains.size());
      std::set<int> unclaimed(rel->antecedent_chains.begin(), rel->antecedent_chains.end());
      for (int sys_chain : sys_rel->antecedent_chains) {
        auto aligned = aligned_gold_chain.find(sys_chain);
        if (aligned == aligned_gold_chain.end()) continue;
        if (unclaimed.erase(aligned->second)) ++row.correct;
      }
    }
    inputs.rows.push_back(row);
  }
  for (const auto& [span, rel] : s.ordered) {
    if (!claimed_spans.count(span))
      inputs.unmatched_sys_antecedents += static_cast<int>(rel->antecedent_chains.size());
  }
  return inputs;
}

std::pair<MetricScore, MetricScore> lenient_strict_f1(const SplitMatchInputs& inputs) {
  MetricScore lenient, strict;
  int gold_anaphors = 0;
  for (const auto& row : inputs.rows) {
    ++gold_anaphors;
    lenient.recall_num += row.correct;
    lenient.recall_den += row.gold_antecedents;
    lenient.precision_num += row.correct;
    lenient.precision_den += row.predicted_antecedents;
    const bool strict_correct = row.matched && row.correct == row.gold_antecedents &&
                                row.predicted_antecedents == row.gold_antecedents;
    if (strict_correct) {
      strict.recall_num += 1;
      strict.precision_num += 1;
    }
  }
  lenient.precision_den += inputs.unmatched_sys_antecedents;
  strict.recall_den = gold_anaphors;
  strict.precision_den = inputs.sys_anaphors;
  return {lenient, strict};
}

SplitEvalReport evaluate_split(const DocumentAnnotation& gold, const DocumentAnnotation& sys) {
  SplitEvalReport report;
  report.recognition = recognition_f1(gold, sys);
  SplitMatchInputs inputs = antecedent_match(gold, sys);
  auto [lenient, strict] = lenient_strict_f1(inputs);
  report.lenient = lenient;
  report.strict = strict;
  for (const auto& row : inputs.rows) {
    report.lenient_macro.recall_num +=
        row.gold_antecedents > 0 ? static_cast<double>(row.correct) / row.gold_antecedents : 0.0;
    report.lenient_macro.recall_den += 1.0;
    if (row.matched && row.predicted_antecedents > 0) {
      report.lenient_macro.precision_num +=
          static_cast<double>(row.correct) / row.predicted_antecedents;
    }
  }
  report.lenient_macro.precision_den = inputs.sys_anaphors;
  report.per_anaphor = std::move(inputs.rows);
  return report;
}

}  // namespace coreval
