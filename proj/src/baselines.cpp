#include "coreval/baselines.hpp"

#include <algorithm>
#include <cctype>

#include "coreval/util.hpp"

namespace coreval {

namespace {

std::string span_text_lower(const DocumentAnnotation& doc, const Span& span) {
  std::string text;
  for (int t = span.start; t < span.end && t < static_cast<int>(doc.tokens.size()); ++t) {
    if (!text.empty()) text += ' ';
    for (char c : doc.tokens[t]) text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return text;
}

// Document-order-first individual mention of each chain.
std::set<int> discourse_new_mentions(const DocumentAnnotation& doc) {
  std::set<int> initial;
  for (const auto& c : doc.chains) {
    const Mention* best = nullptr;
    for (int id : c.mentions) {
      const Mention* m = doc.find_mention(id);
      if (!m || m->is_plural()) continue;
      if (!best || std::tie(m->span.start, m->span.end, m->id) <
                       std::tie(best->span.start, best->span.end, best->id))
        best = m;
    }
    if (best) initial.insert(best->id);
  }
  return initial;
}

struct Candidate {
  int chain_id = 0;
  int distance = 0;      // anaphor start minus nearest preceding mention end
  Span nearest;          // that mention's span, for document ordering
};

// Singular clusters (no plural mention, not the anaphor's own chain) with a
// mention ending at or before the anaphor start.
std::vector<Candidate> preceding_singular_clusters(const DocumentAnnotation& doc,
                                                   const Mention& anaphor) {
  std::vector<Candidate> out;
  for (const auto& c : doc.chains) {
    bool own = false, plural = false;
    const Mention* nearest = nullptr;
    for (int id : c.mentions) {
      if (id == anaphor.id) own = true;
      const Mention* m = doc.find_mention(id);
      if (!m) continue;
      if (m->is_plural()) {
        plural = true;
        continue;
      }
      if (m->span.end <= anaphor.span.start &&
          (!nearest || m->span.end > nearest->span.end ||
           (m->span.end == nearest->span.end && m->span.start > nearest->span.start)))
        nearest = m;
    }
    if (own || plural || !nearest) continue;
    out.push_back({c.id, anaphor.span.start - nearest->span.end, nearest->span});
  }
  return out;
}

std::vector<const Mention*> ordered_anaphors(const DocumentAnnotation& doc,
                                             const std::set<int>& anaphors) {
  std::vector<const Mention*> out;
  for (int id : anaphors) {
    const Mention* m = doc.find_mention(id);
    if (m && !m->is_plural()) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const Mention* a, const Mention* b) {
    return std::tie(a->span.start, a->span.end, a->id) <
           std::tie(b->span.start, b->span.end, b->id);
  });
  return out;
}

constexpr int kMaxAntecedents = 5;

}  // namespace

std::set<int> recognize_heuristic(const DocumentAnnotation& doc, const BaselineConfig& cfg) {
  std::set<int> selected;
  for (int id : discourse_new_mentions(doc)) {
    const Mention* m = doc.find_mention(id);
    if (m && cfg.pronoun_list.count(span_text_lower(doc, m->span))) selected.insert(id);
  }
  return selected;
}

std::vector<SplitRelation> recent_x(const DocumentAnnotation& doc, const std::set<int>& anaphors,
                                    int x) {
  std::vector<SplitRelation> relations;
  const int take = std::min(x, kMaxAntecedents);
  for (const Mention* anaphor : ordered_anaphors(doc, anaphors)) {
    auto candidates = preceding_singular_clusters(doc, *anaphor);
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.distance, a.chain_id) < std::tie(b.distance, b.chain_id);
    });
    if (static_cast<int>(candidates.size()) > take) candidates.resize(take);
    if (candidates.size() < 2) continue;
    // Emit antecedents in document order of their most recent mention.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.nearest, a.chain_id) < std::tie(b.nearest, b.chain_id);
    });
    SplitRelation rel;
    rel.anaphor = anaphor->id;
    for (const auto& c : candidates) rel.antecedent_chains.push_back(c.chain_id);
    relations.push_back(std::move(rel));
  }
  return relations;
}

std::vector<SplitRelation> random_antecedents(const DocumentAnnotation& doc,
                                              const std::set<int>& anaphors, std::uint64_t seed) {
  std::vector<SplitRelation> relations;
  std::mt19937_64 rng(splitmix64(seed ^ fnv1a64(doc.doc_id)));
  for (const Mention* anaphor : ordered_anaphors(doc, anaphors)) {
    auto candidates = preceding_singular_clusters(doc, *anaphor);
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.chain_id < b.chain_id; });
    if (candidates.size() < 2) continue;
    std::size_t k = 2 + uniform_below(rng, kMaxAntecedents - 1);  // uniform over {2..5}
    k = std::min(k, candidates.size());
    // Partial Fisher-Yates for a uniform k-subset.
    std::vector<int> pool;
    for (const auto& c : candidates) pool.push_back(c.chain_id);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    SplitRelation rel;
    rel.anaphor = anaphor->id;
    rel.antecedent_chains.assign(pool.begin(), pool.begin() + k);
    std::sort(rel.antecedent_chains.begin(), rel.antecedent_chains.end());
    relations.push_back(std::move(rel));
  }
  return relations;
}

DocumentAnnotation apply_baseline(const DocumentAnnotation& doc, const BaselineConfig& cfg) {
  const std::set<int> anaphors = recognize_heuristic(doc, cfg);
  DocumentAnnotation out = doc;
  out.split_relations = cfg.kind == BaselineConfig::Kind::recent
                            ? recent_x(doc, anaphors, cfg.x)
                            : random_antecedents(doc, anaphors, cfg.seed);
  return out;
}

}  // namespace coreval
