#include "coreval/lea.hpp"

#include <algorithm>

#include "coreval/assignment.hpp"

namespace coreval {

namespace {

std::vector<RepKey> sorted(std::vector<RepKey> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

bool subset_of(const std::vector<RepKey>& a, const std::vector<RepKey>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NormalizedMention make_atom(Span span, std::vector<RepKey> referents) {
  NormalizedMention m;
  m.is_set = false;
  m.span = span;
  m.referent_set = std::move(referents);
  return m;
}

NormalizedMention make_set(std::vector<RepKey> elements) {
  NormalizedMention m;
  m.is_set = true;
  m.elements = std::move(elements);
  if (static_cast<int>(m.elements.size()) > kMaxPluralSize)
    throw ValidationError("plural mention with " + std::to_string(m.elements.size()) +
                          " elements exceeds the supported maximum of " +
                          std::to_string(kMaxPluralSize));
  return m;
}

struct ChainSpans {
  std::vector<std::set<Span>> per_chain;
};

ChainSpans individual_spans(const DocumentAnnotation& doc) {
  ChainSpans out;
  out.per_chain.reserve(doc.chains.size());
  for (const auto& c : doc.chains) {
    std::set<Span> spans;
    for (int id : c.mentions) {
      const Mention* m = doc.find_mention(id);
      if (m && !m->is_plural()) spans.insert(m->span);
    }
    out.per_chain.push_back(std::move(spans));
  }
  return out;
}

}  // namespace

NormalizedSides normalize(const DocumentAnnotation& sys, const DocumentAnnotation& gold,
                          bool strict_formula) {
  NormalizedSides sides;

  // Gold chain representatives and the spans of gold individual mentions.
  std::map<int, int> gold_rep;  // chain id -> representative mention id
  for (const auto& c : gold.chains) gold_rep[c.id] = representative(gold, c);
  for (const auto& m : gold.mentions)
    if (!m.is_plural()) sides.rep_spans[m.id] = m.span;

  // Gold anaphor spans -> antecedent representative sets.
  std::map<Span, std::vector<RepKey>> anaphor_referents;
  for (const auto& rel : gold.split_relations) {
    const Mention* anaphor = gold.find_mention(rel.anaphor);
    if (!anaphor || anaphor->is_plural()) continue;
    std::vector<RepKey> reps;
    for (int cid : rel.antecedent_chains)
      reps.push_back({RepKey::gold_mention, gold_rep.at(cid), 0});
    anaphor_referents[anaphor->span] = sorted(std::move(reps));
  }

  // CEAF alignment between system and gold chains over individual mentions.
  const ChainSpans gold_spans = individual_spans(gold);
  const ChainSpans sys_spans = individual_spans(sys);
  std::map<int, int> aligned_gold_chain;  // sys chain index -> gold chain index
  if (!gold.chains.empty() && !sys.chains.empty()) {
    std::vector<std::vector<double>> weights(gold.chains.size(),
                                             std::vector<double>(sys.chains.size(), 0.0));
    for (std::size_t g = 0; g < gold.chains.size(); ++g)
      for (std::size_t s = 0; s < sys.chains.size(); ++s)
        if (!gold_spans.per_chain[g].empty() && !sys_spans.per_chain[s].empty())
          weights[g][s] = phi4(gold_spans.per_chain[g], sys_spans.per_chain[s]);
    for (const auto& [g, s] : max_weight_matching(weights).pairs) aligned_gold_chain[s] = g;
  }

  auto atom_for = [&](const Mention& m) {
    auto it = anaphor_referents.find(m.span);
    if (it == anaphor_referents.end())
      return make_atom(m.span, {{RepKey::span_self, m.span.start, m.span.end}});
    if (strict_formula) return make_set(it->second);
    return make_atom(m.span, it->second);
  };

  // Gold side: plural elements become their own chain representatives.
  std::map<int, int> gold_chain_of_mention;
  for (std::size_t i = 0; i < gold.chains.size(); ++i)
    for (int id : gold.chains[i].mentions) gold_chain_of_mention[id] = static_cast<int>(i);
  for (const auto& c : gold.chains) {
    NormalizedChain chain;
    chain.chain_id = c.id;
    for (int id : c.mentions) {
      const Mention* m = gold.find_mention(id);
      if (!m) continue;
      if (m->is_plural()) {
        std::vector<RepKey> elements;
        for (int e : m->elements) {
          auto it = gold_chain_of_mention.find(e);
          if (it == gold_chain_of_mention.end())
            throw ValidationError("document '" + gold.doc_id + "': plural element " +
                                  std::to_string(e) + " belongs to no chain");
          elements.push_back(
              {RepKey::gold_mention, gold_rep.at(gold.chains[it->second].id), 0});
        }
        chain.mentions.push_back(make_set(sorted(std::move(elements))));
      } else {
        chain.mentions.push_back(atom_for(*m));
      }
      if (chain.mentions.back().is_set) chain.plural = true;
    }
    sides.gold.push_back(std::move(chain));
  }

  // System side: plural elements are mapped through the alignment.
  std::map<int, int> sys_chain_of_mention;
  for (std::size_t i = 0; i < sys.chains.size(); ++i)
    for (int id : sys.chains[i].mentions) sys_chain_of_mention[id] = static_cast<int>(i);
  for (const auto& c : sys.chains) {
    NormalizedChain chain;
    chain.chain_id = c.id;
    for (int id : c.mentions) {
      const Mention* m = sys.find_mention(id);
      if (!m) continue;
      if (m->is_plural()) {
        std::vector<RepKey> elements;
        for (int e : m->elements) {
          auto it = sys_chain_of_mention.find(e);
          if (it == sys_chain_of_mention.end())
            throw ValidationError("document '" + sys.doc_id + "': plural element " +
                                  std::to_string(e) + " belongs to no chain");
          auto aligned = aligned_gold_chain.find(it->second);
          if (aligned == aligned_gold_chain.end()) {
            elements.push_back({RepKey::synthetic, sys.chains[it->second].id, 0});
          } else {
            elements.push_back(
                {RepKey::gold_mention, gold_rep.at(gold.chains[aligned->second].id), 0});
          }
        }
        chain.mentions.push_back(make_set(sorted(std::move(elements))));
      } else {
        chain.mentions.push_back(atom_for(*m));
      }
      if (chain.mentions.back().is_set) chain.plural = true;
    }
    sides.sys.push_back(std::move(chain));
  }
  return sides;
}

std::vector<NormalizedMention> subset_list(const NormalizedMention& m) {
  if (!m.is_set) return {m};
  const int n = static_cast<int>(m.elements.size());
  if (n > kMaxPluralSize)
    throw ValidationError("plural mention with " + std::to_string(n) +
                          " elements exceeds the supported maximum of " +
                          std::to_string(kMaxPluralSize));
  std::vector<NormalizedMention> subsets;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    NormalizedMention s;
    s.is_set = true;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.elements.push_back(m.elements[i]);
    subsets.push_back(std::move(s));
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() > b.elements.size();
    return a.elements < b.elements;
  });
  return subsets;
}

namespace {

// (mention size, index within the chain) candidates.
using Occurrence = std::pair<int, int>;

// Mentions of `chain` that realize some subset of `m`: equal-set plural
// mentions and their sub-sets, the individual mentions of single
// representatives, and span-identical atoms.
std::vector<Occurrence> subset_occurrences(const NormalizedMention& m, const NormalizedChain& chain,
                                           const std::map<long long, Span>& rep_spans) {
  std::vector<Occurrence> found;
  for (std::size_t i = 0; i < chain.mentions.size(); ++i) {
    const NormalizedMention& x = chain.mentions[i];
    if (!m.is_set) {
      if (!x.is_set && x.span == m.span) found.emplace_back(1, static_cast<int>(i));
      continue;
    }
    if (x.is_set) {
      if (subset_of(x.elements, m.elements))
        found.emplace_back(static_cast<int>(x.elements.size()), static_cast<int>(i));
    } else {
      for (const RepKey& r : m.elements) {
        if (r.kind != RepKey::gold_mention) continue;
        auto it = rep_spans.find(r.a);
        if (it != rep_spans.end() && it->second == x.span) {
          found.emplace_back(1, static_cast<int>(i));
          break;
        }
      }
    }
  }
  return found;
}

// Mentions of `chain` that contain `m`: plural supersets by element
// inclusion, atoms by span identity or referent-set inclusion.
std::vector<Occurrence> superset_occurrences(const NormalizedMention& m,
                                             const NormalizedChain& chain) {
  std::vector<Occurrence> found;
  for (std::size_t i = 0; i < chain.mentions.size(); ++i) {
    const NormalizedMention& x = chain.mentions[i];
    if (m.is_set) {
      if (x.is_set && subset_of(m.elements, x.elements))
        found.emplace_back(static_cast<int>(x.elements.size()), static_cast<int>(i));
    } else {
      if (x.is_set) continue;  // atom sizes are fixed at 1; atoms match atoms
      if (x.span == m.span || subset_of(m.referent_set, x.referent_set))
        found.emplace_back(1, static_cast<int>(i));
    }
  }
  return found;
}

// Best product of sizes over pairs of distinct mentions, maximizing or
// minimizing. Returns 0 when no distinct pair exists.
long long best_pair_product(const std::vector<Occurrence>& a, const std::vector<Occurrence>& b,
                            bool maximize) {
  long long best = 0;
  for (const auto& [sa, ia] : a) {
    for (const auto& [sb, ib] : b) {
      if (ia == ib) continue;
      const long long product = static_cast<long long>(sa) * sb;
      if (best == 0 || (maximize ? product > best : product < best)) best = product;
    }
  }
  return best;
}

}  // namespace

double link_reward(const NormalizedMention& m_i, const NormalizedMention& m_j,
                   const std::vector<NormalizedChain>& reference,
                   const std::map<long long, Span>& rep_spans) {
  const long long own = static_cast<long long>(m_i.size()) * m_j.size();

  long long best_down = 0;
  for (const auto& chain : reference) {
    const auto occ_i = subset_occurrences(m_i, chain, rep_spans);
    if (occ_i.empty()) continue;
    const auto occ_j = subset_occurrences(m_j, chain, rep_spans);
    best_down = std::max(best_down, best_pair_product(occ_i, occ_j, /*maximize=*/true));
  }
  if (best_down > 0) return static_cast<double>(best_down) / static_cast<double>(own);

  long long best_up = 0;
  for (const auto& chain : reference) {
    const auto sup_i = superset_occurrences(m_i, chain);
    if (sup_i.empty()) continue;
    const auto sup_j = superset_occurrences(m_j, chain);
    const long long product = best_pair_product(sup_i, sup_j, /*maximize=*/false);
    if (product > 0 && (best_up == 0 || product < best_up)) best_up = product;
  }
  if (best_up > 0) return static_cast<double>(own) / static_cast<double>(best_up);
  return 0.0;
}

namespace {

bool occurs_anywhere(const NormalizedMention& m, const std::vector<NormalizedChain>& chains) {
  for (const auto& chain : chains) {
    for (const auto& x : chain.mentions) {
      if (m.is_set != x.is_set) continue;
      if (m.is_set ? x.elements == m.elements : x.span == m.span) return true;
    }
  }
  return false;
}

void lea_direction(const std::vector<NormalizedChain>& own,
                   const std::vector<NormalizedChain>& reference,
                   const std::map<long long, Span>& rep_spans, const ImportanceConfig& cfg,
                   double& num, double& den, std::vector<LeaEntityRow>* rows) {
  std::vector<std::pair<double, double>> weighted;  // (weight, rs) per entity
  double weight_sum = 0.0;
  for (const auto& entity : own) {
    const int n = static_cast<int>(entity.mentions.size());
    if (n == 0) continue;
    const double factor = entity.plural ? cfg.imp_split : 1.0;
    const double weight = factor * n;
    double rs = 0.0;
    if (n == 1) {
      // Self-link convention: a singleton is resolved iff its mention is
      // found anywhere on the other side.
      rs = occurs_anywhere(entity.mentions[0], reference) ? 1.0 : 0.0;
    } else {
      double total = 0.0;
      int links = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          total += link_reward(entity.mentions[i], entity.mentions[j], reference, rep_spans);
          ++links;
        }
      }
      rs = total / links;
    }
    num += weight * rs;
    den += weight;
    weight_sum += weight;
    if (rows) rows->push_back({entity.chain_id, n, entity.plural, weight, rs});
  }
  if (rows && weight_sum > 0.0)
    for (auto& row : *rows) row.importance /= weight_sum;
}

}  // namespace

MetricScore lea_extended(const NormalizedSides& sides, const ImportanceConfig& cfg,
                         LeaEntityReport* report) {
  MetricScore score;
  lea_direction(sides.gold, sides.sys, sides.rep_spans, cfg, score.recall_num, score.recall_den,
                report ? &report->gold : nullptr);
  lea_direction(sides.sys, sides.gold, sides.rep_spans, cfg, score.precision_num,
                score.precision_den, report ? &report->sys : nullptr);
  return score;
}

}  // namespace coreval
