#include "coreval/metrics.hpp"

#include <map>

#include "coreval/assignment.hpp"

namespace coreval {

SpanChains span_chains(const DocumentAnnotation& doc) {
  SpanChains out;
  for (const auto& c : doc.chains) {
    std::set<Span> spans;
    for (int id : c.mentions) {
      const Mention* m = doc.find_mention(id);
      if (m && !m->is_plural()) spans.insert(m->span);
    }
    if (!spans.empty()) out.push_back(std::move(spans));
  }
  return out;
}

std::set<Span> non_referring_spans(const DocumentAnnotation& doc) {
  std::set<Span> out;
  for (int id : doc.non_referring) {
    const Mention* m = doc.find_mention(id);
    if (m && !m->is_plural()) out.insert(m->span);
  }
  return out;
}

namespace {

std::map<Span, int> chain_index(const SpanChains& chains) {
  std::map<Span, int> idx;
  for (std::size_t i = 0; i < chains.size(); ++i)
    for (const auto& s : chains[i]) idx.emplace(s, static_cast<int>(i));
  return idx;
}

// MUC one direction: sum over chains of (size - partitions induced by the
// other side) / (size - 1). Singletons contribute nothing.
void muc_side(const SpanChains& own, const std::map<Span, int>& other_idx, double& num,
              double& den) {
  for (const auto& chain : own) {
    const int n = static_cast<int>(chain.size());
    if (n < 2) continue;
    std::set<int> touched;
    int unmatched = 0;
    for (const auto& s : chain) {
      auto it = other_idx.find(s);
      if (it == other_idx.end())
        ++unmatched;
      else
        touched.insert(it->second);
    }
    const int partitions = static_cast<int>(touched.size()) + unmatched;
    num += n - partitions;
    den += n - 1;
  }
}

void b_cubed_side(const SpanChains& own, const SpanChains& other,
                  const std::map<Span, int>& other_idx, double& num, double& den) {
  for (const auto& chain : own) {
    for (const auto& s : chain) {
      den += 1.0;
      auto it = other_idx.find(s);
      if (it == other_idx.end()) continue;
      const auto& partner = other[it->second];
      std::size_t common = 0;
      for (const auto& t : chain) common += partner.count(t);
      num += static_cast<double>(common) / static_cast<double>(chain.size());
    }
  }
}

void lea_side(const SpanChains& own, const std::map<Span, int>& other_idx, double& num,
              double& den) {
  for (const auto& chain : own) {
    const int n = static_cast<int>(chain.size());
    double rs = 0.0;
    if (n == 1) {
      rs = other_idx.count(*chain.begin()) ? 1.0 : 0.0;
    } else {
      const std::vector<Span> spans(chain.begin(), chain.end());
      int correct = 0;
      for (std::size_t i = 0; i < spans.size(); ++i) {
        auto a = other_idx.find(spans[i]);
        if (a == other_idx.end()) continue;
        for (std::size_t j = i + 1; j < spans.size(); ++j) {
          auto b = other_idx.find(spans[j]);
          if (b != other_idx.end() && a->second == b->second) ++correct;
        }
      }
      rs = static_cast<double>(correct) / (n * (n - 1) / 2.0);
    }
    num += n * rs;
    den += n;
  }
}

}  // namespace

MetricScore muc(const SpanChains& gold, const SpanChains& sys) {
  MetricScore score;
  const auto gold_idx = chain_index(gold);
  const auto sys_idx = chain_index(sys);
  muc_side(gold, sys_idx, score.recall_num, score.recall_den);
  muc_side(sys, gold_idx, score.precision_num, score.precision_den);
  return score;
}

MetricScore b_cubed(const SpanChains& gold, const SpanChains& sys) {
  MetricScore score;
  const auto gold_idx = chain_index(gold);
  const auto sys_idx = chain_index(sys);
  b_cubed_side(gold, sys, sys_idx, score.recall_num, score.recall_den);
  b_cubed_side(sys, gold, gold_idx, score.precision_num, score.precision_den);
  return score;
}

MetricScore ceaf_phi4(const SpanChains& gold, const SpanChains& sys) {
  MetricScore score;
  score.recall_den = static_cast<double>(gold.size());
  score.precision_den = static_cast<double>(sys.size());
  if (gold.empty() || sys.empty()) return score;
  std::vector<std::vector<double>> weights(gold.size(), std::vector<double>(sys.size(), 0.0));
  for (std::size_t g = 0; g < gold.size(); ++g)
    for (std::size_t s = 0; s < sys.size(); ++s) weights[g][s] = phi4(gold[g], sys[s]);
  const AlignmentResult alignment = max_weight_matching(weights);
  score.recall_num = alignment.total_similarity;
  score.precision_num = alignment.total_similarity;
  return score;
}

double conll_average(const MetricScore& muc_score, const MetricScore& b3_score,
                     const MetricScore& ceafe_score) {
  return (muc_score.f1() + b3_score.f1() + ceafe_score.f1()) / 3.0;
}

MetricScore lea_standard(const SpanChains& gold, const SpanChains& sys) {
  MetricScore score;
  const auto gold_idx = chain_index(gold);
  const auto sys_idx = chain_index(sys);
  lea_side(gold, sys_idx, score.recall_num, score.recall_den);
  lea_side(sys, gold_idx, score.precision_num, score.precision_den);
  return score;
}

MetricScore non_referring_f1(const std::set<Span>& gold, const std::set<Span>& sys) {
  MetricScore score;
  std::size_t hits = 0;
  for (const auto& s : gold) hits += sys.count(s);
  score.recall_num = static_cast<double>(hits);
  score.recall_den = static_cast<double>(gold.size());
  score.precision_num = static_cast<double>(hits);
  score.precision_den = static_cast<double>(sys.size());
  return score;
}

}  // namespace coreval
