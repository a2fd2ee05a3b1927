#include "ttg/knowledge.hpp"

#include "ttg/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ttg {

KbEntry triple_to_pair(const std::string& entity, const std::string& property,
                       const std::string& value) {
  if (entity.empty() || property.empty() || value.empty())
    throw std::invalid_argument("triple components must be non-empty");
  return {entity, property + " " + value};
}

EmbeddingFn hashed_bow_embedding(std::size_t dim) {
  return [dim](const std::string& text) {
    std::vector<double> v(dim, 0.0);
    for (const auto& token : tokenize(text)) v[fnv1a64(token) % dim] += 1.0;
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm > 0.0)
      for (double& x : v) x /= norm;
    return v;
  };
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void KnowledgeBase::add(KbEntry entry) {
  if (entry.entity.empty() || entry.fact_sentence.empty())
    throw std::invalid_argument("knowledge entry must have entity and sentence");
  max_entity_length_ = std::max(max_entity_length_, entry.entity.size());
  by_entity_[entry.entity].push_back(entries_.size());
  entries_.push_back(std::move(entry));
}

KnowledgeBase KnowledgeBase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open knowledge base: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

KnowledgeBase KnowledgeBase::parse(const std::string& text) {
  KnowledgeBase kb;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() == 2)
      kb.add({fields[0], fields[1]});
    else if (fields.size() == 3)
      kb.add(triple_to_pair(fields[0], fields[1], fields[2]));
    else
      throw std::runtime_error("knowledge line needs 2 or 3 tab-separated fields: " + line);
  }
  return kb;
}

const std::vector<std::size_t>* KnowledgeBase::facts_of(const std::string& entity) const {
  auto it = by_entity_.find(entity);
  return it == by_entity_.end() ? nullptr : &it->second;
}

std::vector<Mention> detect_entities(const std::string& text, const KnowledgeBase& kb) {
  std::vector<Mention> mentions;
  if (kb.empty()) return mentions;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t best_len = 0;
    std::string best;
    std::size_t limit = std::min(kb.max_entity_length(), text.size() - i);
    for (std::size_t len = limit; len > best_len; --len) {
      std::string slice = text.substr(i, len);
      if (kb.facts_of(slice)) {
        best_len = len;
        best = std::move(slice);
        break;  // longest match first
      }
    }
    if (best_len > 0) {
      mentions.push_back({std::move(best), i});
      i += best_len;
    } else {
      ++i;
    }
  }
  return mentions;
}

std::vector<std::string> retrieve(const std::vector<Mention>& mentions,
                                  const std::string& context_text,
                                  const KnowledgeBase& kb, std::size_t epsilon,
                                  const EmbeddingFn& embed) {
  if (epsilon < 1) throw std::invalid_argument("epsilon must be >= 1");
  std::vector<std::string> out;
  auto context_vec = embed(context_text);
  for (const Mention& m : mentions) {
    const auto* fact_ids = kb.facts_of(m.entity);
    if (!fact_ids) continue;
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t id : *fact_ids) {
      double sim = cosine_similarity(embed(kb.entries()[id].fact_sentence), context_vec);
      scored.emplace_back(sim, id);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; r < scored.size() && r < epsilon; ++r)
      out.push_back(kb.entries()[scored[r].second].fact_sentence);
  }
  return out;
}

}  // namespace ttg
