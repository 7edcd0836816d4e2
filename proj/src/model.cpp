#include "coreval/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace coreval {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const Mention* DocumentAnnotation::find_mention(int id) const {
  for (const auto& m : mentions)
    if (m.id == id) return &m;
  return nullptr;
}

const Chain* DocumentAnnotation::find_chain(int id) const {
  for (const auto& c : chains)
    if (c.id == id) return &c;
  return nullptr;
}

const Chain* DocumentAnnotation::chain_of(int mention_id) const {
  for (const auto& c : chains)
    for (int m : c.mentions)
      if (m == mention_id) return &c;
  return nullptr;
}

namespace {

std::string at_line(std::size_t line_number) {
  if (line_number == 0) return "";
  std::ostringstream os;
  os << "line " << line_number << ": ";
  return os.str();
}

[[noreturn]] void fail_validation(const std::string& doc_id, const std::string& what) {
  throw ValidationError("document '" + doc_id + "': " + what);
}

int require_int(const json& v, const char* field, const std::string& doc_id) {
  if (!v.is_number_integer())
    fail_validation(doc_id, std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

}  // namespace

void validate(const DocumentAnnotation& doc) {
  const int n_tokens = static_cast<int>(doc.tokens.size());

  for (const auto& s : doc.sentences) {
    if (s.start < 0 || s.start >= s.end || s.end > n_tokens)
      fail_validation(doc.doc_id, "sentence range [" + std::to_string(s.start) + "," +
                                      std::to_string(s.end) + ") out of bounds");
  }

  std::map<int, const Mention*> by_id;
  for (const auto& m : doc.mentions) {
    if (!by_id.emplace(m.id, &m).second)
      fail_validation(doc.doc_id, "duplicate mention id " + std::to_string(m.id));
    if (m.is_plural()) {
      if (m.elements.size() < 2)
        fail_validation(doc.doc_id,
                        "plural mention " + std::to_string(m.id) + " has fewer than 2 elements");
      for (std::size_t i = 1; i < m.elements.size(); ++i)
        if (m.elements[i - 1] >= m.elements[i])
          fail_validation(doc.doc_id, "plural mention " + std::to_string(m.id) +
                                          " elements not sorted/distinct");
    } else {
      if (m.span.start < 0 || m.span.start >= m.span.end || m.span.end > n_tokens)
        fail_validation(doc.doc_id, "mention " + std::to_string(m.id) + " span [" +
                                        std::to_string(m.span.start) + "," +
                                        std::to_string(m.span.end) + ") out of bounds");
    }
  }
  // Plural elements must reference existing mentions.
  for (const auto& m : doc.mentions) {
    if (!m.is_plural()) continue;
    for (int e : m.elements)
      if (!by_id.count(e))
        fail_validation(doc.doc_id, "plural mention " + std::to_string(m.id) +
                                        " references unknown mention " + std::to_string(e));
  }

  std::set<int> chain_ids;
  std::set<int> chained_mentions;
  for (const auto& c : doc.chains) {
    if (!chain_ids.insert(c.id).second)
      fail_validation(doc.doc_id, "duplicate chain id " + std::to_string(c.id));
    if (c.mentions.empty())
      fail_validation(doc.doc_id, "chain " + std::to_string(c.id) + " is empty");
    for (int m : c.mentions) {
      if (!by_id.count(m))
        fail_validation(doc.doc_id, "chain " + std::to_string(c.id) +
                                        " references unknown mention " + std::to_string(m));
      if (!chained_mentions.insert(m).second)
        fail_validation(doc.doc_id,
                        "mention " + std::to_string(m) + " appears in more than one chain");
    }
  }

  for (int m : doc.non_referring) {
    if (!by_id.count(m))
      fail_validation(doc.doc_id, "non_referring references unknown mention " + std::to_string(m));
    if (chained_mentions.count(m))
      fail_validation(doc.doc_id,
                      "non_referring mention " + std::to_string(m) + " belongs to a chain");
  }

  std::set<int> anaphors;
  for (const auto& r : doc.split_relations) {
    const Mention* a = doc.find_mention(r.anaphor);
    if (!a)
      fail_validation(doc.doc_id, "split relation anaphor " + std::to_string(r.anaphor) +
                                      " does not exist");
    if (a->is_plural())
      fail_validation(doc.doc_id, "split relation anaphor " + std::to_string(r.anaphor) +
                                      " must be an individual mention");
    if (!anaphors.insert(r.anaphor).second)
      fail_validation(doc.doc_id, "anaphor " + std::to_string(r.anaphor) +
                                      " appears in more than one split relation");
    if (r.antecedent_chains.size() < 2)
      fail_validation(doc.doc_id, "split relation for anaphor " + std::to_string(r.anaphor) +
                                      " has fewer than 2 antecedent chains");
    std::set<int> seen;
    for (int cid : r.antecedent_chains) {
      if (!chain_ids.count(cid))
        fail_validation(doc.doc_id, "split relation for anaphor " + std::to_string(r.anaphor) +
                                        " references unknown chain " + std::to_string(cid));
      if (!seen.insert(cid).second)
        fail_validation(doc.doc_id, "split relation for anaphor " + std::to_string(r.anaphor) +
                                        " lists chain " + std::to_string(cid) + " twice");
    }
  }
}

DocumentAnnotation parse_document(const std::string& line, std::size_t line_number) {
  json root;
  try {
    root = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(at_line(line_number) + e.what());
  }
  if (!root.is_object()) throw ParseError(at_line(line_number) + "document record is not an object");

  DocumentAnnotation doc;
  if (!root.contains("doc_id") || !root["doc_id"].is_string())
    throw ParseError(at_line(line_number) + "missing string field 'doc_id'");
  doc.doc_id = root["doc_id"].get<std::string>();

  try {
    if (root.contains("tokens")) {
      for (const auto& t : root["tokens"]) {
        if (!t.is_string()) fail_validation(doc.doc_id, "'tokens' must be an array of strings");
        doc.tokens.push_back(t.get<std::string>());
      }
    }
    if (root.contains("sentences")) {
      for (const auto& s : root["sentences"]) {
        if (!s.is_array() || s.size() != 2)
          fail_validation(doc.doc_id, "'sentences' entries must be [start, end] pairs");
        doc.sentences.push_back({require_int(s[0], "sentences", doc.doc_id),
                                 require_int(s[1], "sentences", doc.doc_id)});
      }
    }
    if (root.contains("mentions")) {
      for (const auto& m : root["mentions"]) {
        Mention mention;
        mention.id = require_int(m.at("id"), "mentions.id", doc.doc_id);
        mention.span.start = require_int(m.at("start"), "mentions.start", doc.doc_id);
        mention.span.end = require_int(m.at("end"), "mentions.end", doc.doc_id);
        doc.mentions.push_back(std::move(mention));
      }
    }
    if (root.contains("chains")) {
      for (const auto& c : root["chains"]) {
        Chain chain;
        chain.id = require_int(c.at("id"), "chains.id", doc.doc_id);
        for (const auto& m : c.at("mentions"))
          chain.mentions.push_back(require_int(m, "chains.mentions", doc.doc_id));
        doc.chains.push_back(std::move(chain));
      }
    }
    if (root.contains("non_referring"))
      for (const auto& m : root["non_referring"])
        doc.non_referring.insert(require_int(m, "non_referring", doc.doc_id));
    if (root.contains("split_relations")) {
      for (const auto& r : root["split_relations"]) {
        SplitRelation rel;
        rel.anaphor = require_int(r.at("anaphor"), "split_relations.anaphor", doc.doc_id);
        for (const auto& c : r.at("antecedent_chains"))
          rel.antecedent_chains.push_back(
              require_int(c, "split_relations.antecedent_chains", doc.doc_id));
        doc.split_relations.push_back(std::move(rel));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(at_line(line_number) + "document '" + doc.doc_id + "': " + e.what());
  }

  try {
    validate(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(at_line(line_number) + e.what());
  }
  return doc;
}

std::vector<DocumentAnnotation> read_corpus(std::istream& in, const std::string& source_name) {
  std::vector<DocumentAnnotation> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    docs.push_back(parse_document(line, line_number));
    if (!ids.insert(docs.back().doc_id).second)
      throw ValidationError(source_name + ": duplicate doc_id '" + docs.back().doc_id + "'");
  }
  return docs;
}

std::vector<DocumentAnnotation> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_corpus(in, path);
}

std::string to_json_line(const DocumentAnnotation& doc) {
  ordered_json out;
  out["doc_id"] = doc.doc_id;
  out["tokens"] = doc.tokens;
  auto sentences = ordered_json::array();
  for (const auto& s : doc.sentences) sentences.push_back({s.start, s.end});
  out["sentences"] = std::move(sentences);
  auto mentions = ordered_json::array();
  std::set<int> plural_ids;
  for (const auto& m : doc.mentions) {
    if (m.is_plural()) {
      plural_ids.insert(m.id);
      continue;
    }
    mentions.push_back({{"id", m.id}, {"start", m.span.start}, {"end", m.span.end}});
  }
  out["mentions"] = std::move(mentions);
  auto chains = ordered_json::array();
  for (const auto& c : doc.chains) {
    auto ids = ordered_json::array();
    for (int m : c.mentions)
      if (!plural_ids.count(m)) ids.push_back(m);
    if (ids.empty()) continue;
    chains.push_back({{"id", c.id}, {"mentions", std::move(ids)}});
  }
  out["chains"] = std::move(chains);
  out["non_referring"] = doc.non_referring;
  auto relations = ordered_json::array();
  for (const auto& r : doc.split_relations)
    relations.push_back({{"anaphor", r.anaphor}, {"antecedent_chains", r.antecedent_chains}});
  out["split_relations"] = std::move(relations);
  return out.dump();
}

int representative(const DocumentAnnotation& doc, const Chain& chain) {
  const Mention* best = nullptr;
  for (int id : chain.mentions) {
    const Mention* m = doc.find_mention(id);
    if (!m || m->is_plural()) continue;
    if (!best || std::tie(m->span.start, m->span.end, m->id) <
                     std::tie(best->span.start, best->span.end, best->id))
      best = m;
  }
  if (!best)
    fail_validation(doc.doc_id,
                    "chain " + std::to_string(chain.id) + " has no individual mention");
  return best->id;
}

DocumentAnnotation materialize_plurals(const DocumentAnnotation& doc) {
  DocumentAnnotation out = doc;
  int next_mention_id = 0;
  for (const auto& m : out.mentions) next_mention_id = std::max(next_mention_id, m.id + 1);
  int next_chain_id = 0;
  for (const auto& c : out.chains) next_chain_id = std::max(next_chain_id, c.id + 1);

  for (const auto& rel : doc.split_relations) {
    std::vector<int> elements;
    for (int cid : rel.antecedent_chains) {
      const Chain* antecedent = out.find_chain(cid);
      if (!antecedent)
        fail_validation(out.doc_id, "split relation references unknown chain " + std::to_string(cid));
      elements.push_back(representative(out, *antecedent));
    }
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if (elements.size() < 2)
      fail_validation(out.doc_id, "antecedent chains of anaphor " + std::to_string(rel.anaphor) +
                                      " collapse to fewer than 2 representatives");

    Chain* target = nullptr;
    for (auto& c : out.chains)
      for (int id : c.mentions)
        if (id == rel.anaphor) target = &c;

    // Idempotence: the plural for this relation may already be present.
    bool exists = false;
    if (target) {
      for (int id : target->mentions) {
        const Mention* m = out.find_mention(id);
        if (m && m->is_plural() && m->anaphor == rel.anaphor && m->elements == elements)
          exists = true;
      }
    }
    if (exists) continue;

    Mention plural;
    plural.id = next_mention_id++;
    plural.kind = MentionKind::plural;
    plural.elements = std::move(elements);
    plural.anaphor = rel.anaphor;
    out.mentions.push_back(plural);

    if (target) {
      // Keep the plural next to its anaphor so document order is preserved.
      auto pos = std::find(target->mentions.begin(), target->mentions.end(), rel.anaphor);
      target->mentions.insert(pos + 1, plural.id);
    } else {
      out.chains.push_back({next_chain_id++, {rel.anaphor, plural.id}});
    }
  }
  return out;
}

}  // namespace coreval
