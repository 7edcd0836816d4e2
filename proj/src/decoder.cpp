#include "coreval/decoder.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace coreval {

using nlohmann::json;

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& doc_id, const std::string& what) {
  throw ValidationError("score table '" + doc_id + "': " + what);
}

void validate_table(const ScoreTable& table) {
  const int n = static_cast<int>(table.candidates.size());
  for (int i = 0; i < n; ++i) {
    const auto& c = table.candidates[i];
    if (c.span.start < 0 || c.span.start >= c.span.end || c.span.end > table.token_count)
      fail(table.doc_id, "candidate " + std::to_string(i) + " span out of bounds");
    for (double s : {c.s_m, c.s_no, c.s_nr, c.s_dn})
      if (!std::isfinite(s)) fail(table.doc_id, "candidate " + std::to_string(i) + " has a non-finite score");
    if (i > 0 && table.candidates[i - 1].span > c.span)
      fail(table.doc_id, "candidates not in document order at index " + std::to_string(i));
  }
  for (const auto& [key, score] : table.pairwise) {
    const auto& [i, j] = key;
    if (j < 0 || j >= i || i >= n)
      fail(table.doc_id, "pairwise entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") out of range");
    if (!std::isfinite(score.s_mc) || !std::isfinite(score.s_pmc))
      fail(table.doc_id, "pairwise entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") has a non-finite score");
  }
}

}  // namespace

ScoreTable parse_score_table(const std::string& line, std::size_t line_number) {
  json root;
  try {
    root = json::parse(line);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    if (line_number) os << "line " << line_number << ": ";
    os << e.what();
    throw ParseError(os.str());
  }
  ScoreTable table;
  try {
    table.doc_id = root.at("doc_id").get<std::string>();
    table.token_count = root.at("tokens").get<int>();
    if (root.contains("candidates")) {
      for (const auto& c : root["candidates"]) {
        ScoreCandidate cand;
        cand.span = {c.at("start").get<int>(), c.at("end").get<int>()};
        cand.s_m = c.at("s_m").get<double>();
        cand.s_no = c.at("s_no").get<double>();
        cand.s_nr = c.at("s_nr").get<double>();
        cand.s_dn = c.at("s_dn").get<double>();
        table.candidates.push_back(cand);
      }
    }
    if (root.contains("pairwise")) {
      for (const auto& p : root["pairwise"]) {
        const int i = p.at("i").get<int>();
        const int j = p.at("j").get<int>();
        table.pairwise[{i, j}] = {p.at("s_mc").get<double>(), p.at("s_pmc").get<double>()};
      }
    }
  } catch (const json::exception& e) {
    throw ParseError("score record: " + std::string(e.what()));
  }
  validate_table(table);
  return table;
}

std::vector<ScoreTable> read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<ScoreTable> tables;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    tables.push_back(parse_score_table(line, line_number));
  }
  return tables;
}

bool DecodeResult::operator==(const DecodeResult& o) const {
  auto traces_equal = [](const std::vector<MentionDecision>& a,
                         const std::vector<MentionDecision>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].candidate != b[i].candidate || a[i].chosen != b[i].chosen ||
          a[i].cluster != b[i].cluster || a[i].score != b[i].score)
        return false;
    }
    return true;
  };
  return chains == o.chains && non_referring == o.non_referring &&
         discourse_status == o.discourse_status && split_relations == o.split_relations &&
         traces_equal(trace, o.trace);
}

std::vector<int> prune(const ScoreTable& table, int token_count, const DecoderConfig& cfg) {
  const int n = static_cast<int>(table.candidates.size());
  const int keep = std::min(
      n, static_cast<int>(std::floor(cfg.mention_ratio * token_count + 1e-9)));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ca = table.candidates[a];
    const auto& cb = table.candidates[b];
    if (ca.s_m != cb.s_m) return ca.s_m > cb.s_m;
    if (ca.span.start != cb.span.start) return ca.span.start < cb.span.start;
    return ca.span.end - ca.span.start < cb.span.end - cb.span.start;
  });
  std::vector<int> kept(order.begin(), order.begin() + std::max(0, keep));
  std::sort(kept.begin(), kept.end());
  return kept;
}

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

namespace {

struct ClusterState {
  std::vector<int> members;  // candidate indices in attachment order
  double s_m_sum = 0.0;

  double s_c() const { return s_m_sum / static_cast<double>(members.size()); }
};

double cluster_pair_max(const ScoreTable& table, int candidate, const ClusterState& cluster,
                        bool use_pmc) {
  double best = kMinusInf;
  for (int member : cluster.members) {
    const PairScore* p = table.pair(candidate, member);
    if (!p) continue;
    best = std::max(best, use_pmc ? p->s_pmc : p->s_mc);
  }
  return best;
}

void apply_decision(const ScoreTable& table, const MentionDecision& decision,
                    std::vector<ClusterState>& clusters, DecodeResult* result) {
  const int i = decision.candidate;
  switch (decision.chosen) {
    case DecodeCase::discard:
      break;
    case DecodeCase::non_referring:
      if (result) result->non_referring.insert(i);
      break;
    case DecodeCase::discourse_new:
      clusters.push_back({{i}, table.candidates[i].s_m});
      if (result) result->discourse_status[i] = DiscourseStatus::discourse_new;
      break;
    case DecodeCase::attach:
      clusters[decision.cluster].members.push_back(i);
      clusters[decision.cluster].s_m_sum += table.candidates[i].s_m;
      if (result) result->discourse_status[i] = DiscourseStatus::discourse_old;
      break;
  }
}

void finalize_chains(const std::vector<ClusterState>& clusters, DecodeResult* result) {
  for (std::size_t j = 0; j < clusters.size(); ++j)
    result->chains.push_back({static_cast<int>(j), clusters[j].members});
}

}  // namespace

DecodeResult rank_clusters(const ScoreTable& table, const std::vector<int>& kept,
                           const DecoderConfig& cfg) {
  DecodeResult result;
  std::vector<ClusterState> clusters;
  for (int i : kept) {
    const auto& c = table.candidates[i];
    MentionDecision decision{i, DecodeCase::discard, -1, c.s_no};
    const double nr = c.s_nr + c.s_m;
    if (nr > decision.score) decision = {i, DecodeCase::non_referring, -1, nr};
    if (static_cast<int>(clusters.size()) < cfg.max_clusters) {
      const double dn = c.s_dn + c.s_m;
      if (dn > decision.score) decision = {i, DecodeCase::discourse_new, -1, dn};
    }
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      const double pair_max = cluster_pair_max(table, i, clusters[j], /*use_pmc=*/false);
      if (pair_max == kMinusInf) continue;
      const double score = c.s_m + clusters[j].s_c() + pair_max;
      if (score > decision.score)
        decision = {i, DecodeCase::attach, static_cast<int>(j), score};
    }
    apply_decision(table, decision, clusters, &result);
    result.trace.push_back(decision);
  }
  finalize_chains(clusters, &result);
  return result;
}

void assign_splits(DecodeResult& result, const ScoreTable& table, const DecoderConfig& cfg) {
  result.split_relations.clear();
  std::vector<ClusterState> clusters;
  for (const MentionDecision& decision : result.trace) {
    if (decision.chosen == DecodeCase::discourse_new) {
      // Candidate clusters are exactly those existing before this mention.
      const int i = decision.candidate;
      std::vector<std::pair<double, int>> above;  // (p_p, cluster id)
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        const double pair_max = cluster_pair_max(table, i, clusters[j], /*use_pmc=*/true);
        if (pair_max == kMinusInf) continue;
        const double p = sigmoid(table.candidates[i].s_m + clusters[j].s_c() + pair_max);
        if (p > cfg.split_threshold) above.emplace_back(p, static_cast<int>(j));
      }
      if (static_cast<int>(above.size()) >= cfg.min_antecedents) {
        if (static_cast<int>(above.size()) > cfg.max_antecedents) {
          std::sort(above.begin(), above.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
          });
          above.resize(cfg.max_antecedents);
        }
        SplitRelation rel;
        rel.anaphor = i;
        for (const auto& [p, j] : above) rel.antecedent_chains.push_back(j);
        std::sort(rel.antecedent_chains.begin(), rel.antecedent_chains.end());
        result.split_relations.push_back(std::move(rel));
      }
    }
    apply_decision(table, decision, clusters, nullptr);
  }
}

DecodeResult replay_trace(const ScoreTable& table, const DecoderConfig& cfg,
                          const std::vector<MentionDecision>& trace) {
  DecodeResult result;
  result.trace = trace;
  std::vector<ClusterState> clusters;
  for (const MentionDecision& decision : trace) apply_decision(table, decision, clusters, &result);
  finalize_chains(clusters, &result);
  assign_splits(result, table, cfg);
  return result;
}

DecodeResult decode(const ScoreTable& table, const DecoderConfig& cfg) {
  const std::vector<int> kept = prune(table, table.token_count, cfg);
  DecodeResult result = rank_clusters(table, kept, cfg);
  assign_splits(result, table, cfg);
  return result;
}

DocumentAnnotation decode_to_document(const ScoreTable& table, const DecodeResult& result) {
  DocumentAnnotation doc;
  doc.doc_id = table.doc_id;
  doc.tokens.assign(static_cast<std::size_t>(table.token_count), std::string());
  std::set<int> used;
  for (const auto& chain : result.chains)
    for (int i : chain.mentions) used.insert(i);
  for (int i : result.non_referring) used.insert(i);
  for (int i : used) {
    Mention m;
    m.id = i;
    m.span = table.candidates[i].span;
    doc.mentions.push_back(m);
  }
  doc.chains = result.chains;
  doc.non_referring = result.non_referring;
  doc.split_relations = result.split_relations;
  return doc;
}

}  // namespace coreval
