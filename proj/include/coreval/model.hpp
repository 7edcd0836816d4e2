#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace coreval {

/// Token span, 0-based, end exclusive.
struct Span {
  int start = 0;
  int end = 0;
  auto operator<=>(const Span&) const = default;
};

enum class MentionKind { individual, plural };

/// An individual mention is a text span. A plural mention stands for a set
/// of entities and carries the mention ids of their chain representatives;
/// plural mentions are never read from input files, they are synthesized by
/// materialize_plurals from split-antecedent relations.
struct Mention {
  int id = 0;
  MentionKind kind = MentionKind::individual;
  Span span;                    // individual only
  std::vector<int> elements;    // plural only; sorted, distinct, size >= 2
  std::optional<int> anaphor;   // plural only; the anaphor it was created for

  bool is_plural() const { return kind == MentionKind::plural; }
  int size() const { return is_plural() ? static_cast<int>(elements.size()) : 1; }
  bool operator==(const Mention&) const = default;
};

struct Chain {
  int id = 0;
  std::vector<int> mentions;  // mention ids in document order
  bool operator==(const Chain&) const = default;
};

struct SplitRelation {
  int anaphor = 0;                     // mention id of the plural anaphor
  std::vector<int> antecedent_chains;  // chain ids, size >= 2, no duplicates
  bool operator==(const SplitRelation&) const = default;
};

struct DocumentAnnotation {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<Span> sentences;
  std::vector<Mention> mentions;
  std::vector<Chain> chains;
  std::set<int> non_referring;
  std::vector<SplitRelation> split_relations;

  const Mention* find_mention(int id) const;
  const Chain* find_chain(int id) const;
  /// Chain containing the given mention id, or nullptr.
  const Chain* chain_of(int mention_id) const;

  bool operator==(const DocumentAnnotation&) const = default;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses one JSON document record. Unknown fields are ignored.
/// Throws ParseError on malformed JSON, ValidationError on invariant
/// violations; line_number (1-based) is included in messages when nonzero.
DocumentAnnotation parse_document(const std::string& line, std::size_t line_number = 0);

/// Reads a JSON-lines corpus; blank lines are skipped. Duplicate doc_ids
/// are a ValidationError.
std::vector<DocumentAnnotation> read_corpus(std::istream& in, const std::string& source_name);
std::vector<DocumentAnnotation> read_corpus_file(const std::string& path);

/// Serializes the wire-format fields as a single JSON line (no newline).
/// Synthetic plural mentions are derived data and are not written.
std::string to_json_line(const DocumentAnnotation& doc);

void validate(const DocumentAnnotation& doc);

/// First individual mention of the chain in document order
/// (earliest start, then earliest end, then lowest id). Returns mention id.
int representative(const DocumentAnnotation& doc, const Chain& chain);

/// Appends, for every split relation, a plural mention holding the
/// representatives of the antecedent chains to the anaphor's chain,
/// creating a chain for the anaphor when it has none. Idempotent.
DocumentAnnotation materialize_plurals(const DocumentAnnotation& doc);

}  // namespace coreval
