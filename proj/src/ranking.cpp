#include "ttg/ranking.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

namespace ttg {

namespace {

constexpr const char* kSchemaDescription =
    "v1;overlap_q;overlap_p;overlap_k;shared_nums;series_in_q;interval_in_q;"
    "tmpl_onehot_7;len_norm_160;set_size_norm_64;ctx_hashed_bow_256";

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z), overflow-safe
double log1pexp(double z) {
  if (z > 35.0) return z;
  return std::log1p(std::exp(z));
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

}  // namespace

std::array<bool, kNumTemplates> derive_template_labels(
    const std::vector<Candidate>& candidates) {
  std::array<bool, kNumTemplates> labels{};
  for (const auto& c : candidates)
    if (c.useful.value_or(false) && c.template_index >= 1 &&
        c.template_index <= kNumTemplates)
      labels[c.template_index - 1] = true;
  return labels;
}

std::array<double, kSentenceFeatureDim> sentence_features(
    const Candidate& cand, const LabeledQuestion& lq) {
  std::array<double, kSentenceFeatureDim> x{};
  auto sent_tokens = tokenize(cand.sentence);
  x[0] = token_overlap(sent_tokens, token_set(lq.question));
  x[1] = token_overlap(sent_tokens, token_set(lq.passage));
  x[2] = token_overlap(sent_tokens, token_set(lq.knowledge_text));

  auto sent_nums = mask_numbers(cand.sentence).numbers;
  auto ctx_nums = mask_numbers(lq.passage + " " + lq.question).numbers;
  std::size_t shared = 0;
  for (const auto& n : sent_nums)
    if (std::find(ctx_nums.begin(), ctx_nums.end(), n) != ctx_nums.end()) ++shared;
  x[3] = std::min<double>(1.0, static_cast<double>(shared) / 5.0);

  x[4] = contains_substring(lq.question, cand.fact.series_label) ? 1.0 : 0.0;
  bool interval_hit = false;
  for (const std::string* label : {&cand.fact.start_label, &cand.fact.end_label,
                                   &cand.fact.point_label})
    if (contains_substring(lq.question, *label)) interval_hit = true;
  x[5] = interval_hit ? 1.0 : 0.0;

  int tau = cand.template_index;
  if (tau >= 0 && tau <= 6) x[6 + tau] = 1.0;

  x[13] = std::min(1.0, static_cast<double>(cand.sentence.size()) / 160.0);
  x[14] = std::min(1.0, static_cast<double>(lq.candidates.size()) / 64.0);
  return x;
}

std::vector<double> context_features(const LabeledQuestion& lq) {
  std::vector<double> f(kContextFeatureDim, 0.0);
  for (const auto& token : tokenize(lq.passage + " " + lq.question))
    f[fnv1a64(token) % kContextFeatureDim] = 1.0;
  return f;
}

std::string feature_schema_hash() {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(kSchemaDescription)));
  return buf;
}

std::string RankerModel::serialize() const {
  nlohmann::json j;
  j["format"] = "ttgen-ranker";
  j["version"] = 1;
  j["schema_hash"] = feature_schema_hash();
  j["sentence_weights"] = sentence_weights;
  j["sentence_bias"] = sentence_bias;
  j["template_weights"] = template_weights;
  j["template_bias"] = template_bias;
  j["meta"] = {{"seed", seed}, {"epochs", epochs}, {"learning_rate", learning_rate}};
  return j.dump(2) + "\n";
}

RankerModel RankerModel::deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  if (j.value("format", "") != "ttgen-ranker")
    throw ModelError("not a ranker model file");
  if (j.value("schema_hash", "") != feature_schema_hash())
    throw ModelError("feature schema mismatch: refusing to load model");
  RankerModel m;
  m.sentence_weights = j["sentence_weights"].get<std::vector<double>>();
  m.sentence_bias = j["sentence_bias"].get<double>();
  m.template_weights = j["template_weights"].get<std::vector<double>>();
  m.template_bias = j["template_bias"].get<std::array<double, kNumTemplates>>();
  if (m.sentence_weights.size() != kSentenceFeatureDim ||
      m.template_weights.size() != kNumTemplates * kContextFeatureDim)
    throw ModelError("model dimensions do not match feature schema");
  m.seed = j["meta"].value("seed", 0ULL);
  m.epochs = j["meta"].value("epochs", 0);
  m.learning_rate = j["meta"].value("learning_rate", 0.0);
  return m;
}

void RankerModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write model file: " + path);
  out << serialize();
}

RankerModel RankerModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

std::vector<double> score_sentences(const RankerModel& m, const LabeledQuestion& lq) {
  if (lq.candidates.empty())
    throw std::invalid_argument("score_sentences: question has no candidates");
  std::vector<double> logits;
  logits.reserve(lq.candidates.size());
  for (const auto& c : lq.candidates) {
    auto x = sentence_features(c, lq);
    double z = m.sentence_bias;
    for (std::size_t i = 0; i < kSentenceFeatureDim; ++i)
      z += m.sentence_weights[i] * x[i];
    logits.push_back(z);
  }
  return softmax(logits);
}

std::array<double, kNumTemplates> score_templates(const RankerModel& m,
                                                  const LabeledQuestion& lq) {
  auto f = context_features(lq);
  std::array<double, kNumTemplates> psi{};
  for (int t = 0; t < kNumTemplates; ++t) {
    double z = m.template_bias[t];
    for (std::size_t i = 0; i < kContextFeatureDim; ++i)
      z += m.template_weights[t * kContextFeatureDim + i] * f[i];
    psi[t] = sigmoid(z);
  }
  return psi;
}

std::vector<std::size_t> combine_and_select(
    const std::vector<double>& phi,
    const std::array<double, kNumTemplates>& psi,
    const std::vector<Candidate>& candidates, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    int tau = candidates[j].template_index;
    double factor = (tau >= 1 && tau <= kNumTemplates) ? psi[tau - 1] : 1.0;
    score[j] = phi[j] * factor;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score[a] > score[b];
  });
  if (order.size() > k) order.resize(k);
  return order;
}

PreparedQuestion prepare_question(const LabeledQuestion& lq) {
  PreparedQuestion pq;
  pq.features.reserve(lq.candidates.size());
  pq.useful.reserve(lq.candidates.size());
  for (const auto& c : lq.candidates) {
    pq.features.push_back(sentence_features(c, lq));
    bool u = c.useful.value_or(false);
    pq.useful.push_back(u);
    pq.has_useful = pq.has_useful || u;
  }
  pq.context = context_features(lq);
  pq.template_labels = derive_template_labels(lq.candidates);
  return pq;
}

double sentence_loss(const std::vector<double>& params,
                     const std::vector<PreparedQuestion>& data,
                     std::vector<double>* grad) {
  if (params.size() != kSentenceFeatureDim + 1)
    throw std::invalid_argument("sentence_loss: bad parameter size");
  if (grad) grad->assign(params.size(), 0.0);
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& q : data) {
    if (!q.has_useful || q.features.empty()) continue;
    ++counted;
    std::vector<double> logits(q.features.size());
    for (std::size_t j = 0; j < q.features.size(); ++j) {
      double z = params[kSentenceFeatureDim];
      for (std::size_t i = 0; i < kSentenceFeatureDim; ++i)
        z += params[i] * q.features[j][i];
      logits[j] = z;
    }
    auto p = softmax(logits);
    double pos_mass = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (q.useful[j]) pos_mass += p[j];
    total += -std::log(std::max(pos_mass, 1e-300));
    if (grad) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        double dz = p[j] - (q.useful[j] ? p[j] / pos_mass : 0.0);
        for (std::size_t i = 0; i < kSentenceFeatureDim; ++i)
          (*grad)[i] += dz * q.features[j][i];
        (*grad)[kSentenceFeatureDim] += dz;
      }
    }
  }
  if (counted == 0) throw std::invalid_argument("no question has a useful candidate");
  if (grad)
    for (double& g : *grad) g /= static_cast<double>(counted);
  return total / static_cast<double>(counted);
}

double template_loss(const std::vector<double>& params,
                     const std::vector<PreparedQuestion>& data,
                     std::vector<double>* grad) {
  const std::size_t wsize = kNumTemplates * kContextFeatureDim;
  if (params.size() != wsize + kNumTemplates)
    throw std::invalid_argument("template_loss: bad parameter size");
  if (data.empty()) throw std::invalid_argument("template_loss: empty data");
  if (grad) grad->assign(params.size(), 0.0);
  double total = 0.0;
  for (const auto& q : data) {
    for (int t = 0; t < kNumTemplates; ++t) {
      double z = params[wsize + t];
      for (std::size_t i = 0; i < kContextFeatureDim; ++i)
        z += params[t * kContextFeatureDim + i] * q.context[i];
      double y = q.template_labels[t] ? 1.0 : 0.0;
      // BCE with logits: log(1+e^z) - y*z
      total += (log1pexp(z) - y * z) / kNumTemplates;
      if (grad) {
        double dz = (sigmoid(z) - y) / kNumTemplates;
        for (std::size_t i = 0; i < kContextFeatureDim; ++i)
          (*grad)[t * kContextFeatureDim + i] += dz * q.context[i];
        (*grad)[wsize + t] += dz;
      }
    }
  }
  double n = static_cast<double>(data.size());
  if (grad)
    for (double& g : *grad) g /= n;
  return total / n;
}

namespace {

std::vector<PreparedQuestion> prepare_all(const std::vector<LabeledQuestion>& data,
                                          bool warn_unlabeled) {
  std::vector<PreparedQuestion> prepared;
  prepared.reserve(data.size());
  for (const auto& lq : data) {
    auto pq = prepare_question(lq);
    if (warn_unlabeled && !pq.has_useful)
      std::cerr << "warning: question \"" << lq.id
                << "\" has no useful candidate, skipped\n";
    prepared.push_back(std::move(pq));
  }
  return prepared;
}

std::vector<double> descend(
    std::vector<double>& params, const TrainConfig& cfg,
    const std::function<double(const std::vector<double>&, std::vector<double>*)>& loss) {
  std::vector<double> trace;
  std::vector<double> grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double l = loss(params, &grad);
    trace.push_back(l);
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= cfg.learning_rate * grad[i];
  }
  return trace;
}

}  // namespace

std::vector<double> train_sentence_ranker(const std::vector<LabeledQuestion>& data,
                                          const TrainConfig& cfg, RankerModel& model) {
  auto prepared = prepare_all(data, true);
  bool any = std::any_of(prepared.begin(), prepared.end(),
                         [](const PreparedQuestion& q) { return q.has_useful; });
  if (!any) throw std::invalid_argument("training corpus has no usefulness labels");
  std::vector<double> params(kSentenceFeatureDim + 1, 0.0);
  auto trace = descend(params, cfg, [&](const std::vector<double>& p, std::vector<double>* g) {
    return sentence_loss(p, prepared, g);
  });
  model.sentence_weights.assign(params.begin(), params.begin() + kSentenceFeatureDim);
  model.sentence_bias = params[kSentenceFeatureDim];
  model.seed = cfg.seed;
  model.epochs = cfg.epochs;
  model.learning_rate = cfg.learning_rate;
  return trace;
}

std::vector<double> train_template_ranker(const std::vector<LabeledQuestion>& data,
                                          const TrainConfig& cfg, RankerModel& model) {
  auto prepared = prepare_all(data, false);
  if (prepared.empty()) throw std::invalid_argument("empty training corpus");
  const std::size_t wsize = kNumTemplates * kContextFeatureDim;
  std::vector<double> params(wsize + kNumTemplates, 0.0);
  auto trace = descend(params, cfg, [&](const std::vector<double>& p, std::vector<double>* g) {
    return template_loss(p, prepared, g);
  });
  model.template_weights.assign(params.begin(), params.begin() + wsize);
  for (int t = 0; t < kNumTemplates; ++t) model.template_bias[t] = params[wsize + t];
  model.seed = cfg.seed;
  model.epochs = cfg.epochs;
  model.learning_rate = cfg.learning_rate;
  return trace;
}

std::vector<std::size_t> baseline_rank(BaselineStrategy strategy,
                                       const LabeledQuestion& lq,
                                       std::uint64_t seed) {
  std::vector<std::size_t> order(lq.candidates.size());
  std::iota(order.begin(), order.end(), 0);
  switch (strategy) {
    case BaselineStrategy::Random: {
      std::mt19937_64 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      break;
    }
    case BaselineStrategy::Length:
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lq.candidates[a].sentence.size() < lq.candidates[b].sentence.size();
      });
      break;
    case BaselineStrategy::Lexical: {
      auto ctx = token_set(lq.passage + " " + lq.question);
      std::vector<double> overlap(lq.candidates.size());
      for (std::size_t j = 0; j < lq.candidates.size(); ++j)
        overlap[j] = token_overlap(tokenize(lq.candidates[j].sentence), ctx);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return overlap[a] > overlap[b];
      });
      break;
    }
  }
  return order;
}

}  // namespace ttg
