#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "coreval/model.hpp"

namespace coreval {

struct ScoreCandidate {
  Span span;
  double s_m = 0.0;
  double s_no = 0.0;
  double s_nr = 0.0;
  double s_dn = 0.0;
};

struct PairScore {
  double s_mc = 0.0;
  double s_pmc = 0.0;
};

/// Per-document score table consumed by the decoder. Candidates are in
/// document order; pairwise scores are sparse, keyed (later, earlier).
struct ScoreTable {
  std::string doc_id;
  int token_count = 0;
  std::vector<ScoreCandidate> candidates;
  std::map<std::pair<int, int>, PairScore> pairwise;

  const PairScore* pair(int later, int earlier) const {
    auto it = pairwise.find({later, earlier});
    return it == pairwise.end() ? nullptr : &it->second;
  }
};

ScoreTable parse_score_table(const std::string& line, std::size_t line_number = 0);
std::vector<ScoreTable> read_score_file(const std::string& path);

struct DecoderConfig {
  double mention_ratio = 0.4;
  int max_clusters = 250;
  double split_threshold = 0.5;
  int min_antecedents = 2;
  int max_antecedents = 5;
};

enum class DecodeCase { discard, non_referring, discourse_new, attach };

struct MentionDecision {
  int candidate = 0;
  DecodeCase chosen = DecodeCase::discard;
  int cluster = -1;  // attach target
  double score = 0.0;
};

enum class DiscourseStatus { discourse_new, discourse_old };

struct DecodeResult {
  std::vector<Chain> chains;  // chain id = creation order; mention ids = candidate indices
  std::set<int> non_referring;
  std::map<int, DiscourseStatus> discourse_status;
  std::vector<SplitRelation> split_relations;
  std::vector<MentionDecision> trace;

  bool operator==(const DecodeResult&) const;
};

/// Keeps the floor(mention_ratio * token_count) highest-s_m candidates,
/// ties broken by earlier then shorter span; document order preserved.
std::vector<int> prune(const ScoreTable& table, int token_count, const DecoderConfig& cfg);

double sigmoid(double s);

/// Incremental cluster ranking: each kept mention picks the argmax of
///   NO:      s_no(i)
///   NR:      s_nr(i) + s_m(i)
///   DN:      s_dn(i) + s_m(i)          (unavailable once at max_clusters)
///   attach:  s_m(i) + s_c(j) + s_mc(i,j)   for existing clusters j
/// with s_c(j) the mean member s_m and s_mc(i,j) the max over members'
/// pairwise scores (missing pairs make attachment impossible). Ties prefer
/// NO, then NR, then DN, then the lowest cluster id.
DecodeResult rank_clusters(const ScoreTable& table, const std::vector<int>& kept,
                           const DecoderConfig& cfg);

/// Split-antecedent assignment over the clusters that existed when each
/// discourse-new mention was decoded (replayed from the trace):
/// p_p(i,j) = sigmoid(s_m(i) + s_c(j) + s_pmc(i,j)). Clusters above the
/// threshold become the relation when there are at least min_antecedents;
/// above max_antecedents, keeps the highest-p_p clusters.
void assign_splits(DecodeResult& result, const ScoreTable& table, const DecoderConfig& cfg);

/// Rebuilds a DecodeResult by re-applying the recorded decisions; used to
/// verify decoding determinism.
DecodeResult replay_trace(const ScoreTable& table, const DecoderConfig& cfg,
                          const std::vector<MentionDecision>& trace);

DecodeResult decode(const ScoreTable& table, const DecoderConfig& cfg);

/// Renders the decode result in the document wire format (mention ids are
/// candidate indices; tokens become placeholders, the score format only
/// carries a count).
DocumentAnnotation decode_to_document(const ScoreTable& table, const DecodeResult& result);

}  // namespace coreval
