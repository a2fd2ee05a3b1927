#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ttg {

struct KbEntry {
  std::string entity;
  std::string fact_sentence;
};

// Triple (entity, property, value) -> pair (entity, "property value").
KbEntry triple_to_pair(const std::string& entity, const std::string& property,
                       const std::string& value);

using EmbeddingFn = std::function<std::vector<double>(const std::string&)>;

// Default embedding: hashed bag-of-words, L2-normalized. Deterministic.
EmbeddingFn hashed_bow_embedding(std::size_t dim = 1024);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

class KnowledgeBase {
 public:
  void add(KbEntry entry);  // rejects empty entity or sentence

  // Line-oriented TSV: "E\tFACT" pairs or "E\tP\tV" triples (auto-converted).
  static KnowledgeBase load(const std::string& path);
  static KnowledgeBase parse(const std::string& text);

  const std::vector<KbEntry>& entries() const { return entries_; }
  const std::vector<std::size_t>* facts_of(const std::string& entity) const;
  std::size_t max_entity_length() const { return max_entity_length_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<KbEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_entity_;
  std::size_t max_entity_length_ = 0;
};

struct Mention {
  std::string entity;
  std::size_t position = 0;  // byte offset in the scanned text
};

// Greedy longest-match scan over the entity lexicon; shorter overlapping
// matches are suppressed.
std::vector<Mention> detect_entities(const std::string& text, const KnowledgeBase& kb);

// Up to epsilon fact sentences per mention, ranked by cosine similarity to
// the context embedding (descending, stable ties).
std::vector<std::string> retrieve(const std::vector<Mention>& mentions,
                                  const std::string& context_text,
                                  const KnowledgeBase& kb, std::size_t epsilon,
                                  const EmbeddingFn& embed = hashed_bow_embedding());

}  // namespace ttg
