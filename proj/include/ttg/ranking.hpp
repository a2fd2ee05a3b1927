#pragma once

#include "ttg/realization.hpp"
#include "ttg/text.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ttg {

inline constexpr std::size_t kSentenceFeatureDim = 15;
inline constexpr std::size_t kContextFeatureDim = 256;
inline constexpr int kNumTemplates = 6;

// One question with its generated candidates and supervision.
struct LabeledQuestion {
  std::string id;
  std::string passage;
  std::string question;
  std::string knowledge_text;  // retrieved facts, concatenated
  std::vector<Candidate> candidates;
};

// Template label t is true iff some candidate with tau=t+1 is labeled useful.
std::array<bool, kNumTemplates> derive_template_labels(
    const std::vector<Candidate>& candidates);

// Sentence feature schema (D = 15):
//   0 token overlap with question        1 token overlap with passage
//   2 token overlap with knowledge       3 shared masked-numeric count (capped)
//   4 series label mentioned in question 5 interval label mentioned in question
//   6..12 template one-hot (tau 0..6)    13 sentence length / 160, capped
//   14 candidate set size / 64, capped
std::array<double, kSentenceFeatureDim> sentence_features(
    const Candidate& cand, const LabeledQuestion& lq);

// Template scorer input: binary hashed bag-of-words over passage + question.
std::vector<double> context_features(const LabeledQuestion& lq);

std::string feature_schema_hash();

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankerModel {
  std::vector<double> sentence_weights =
      std::vector<double>(kSentenceFeatureDim, 0.0);
  double sentence_bias = 0.0;
  // Row-major: template_weights[t * kContextFeatureDim + i].
  std::vector<double> template_weights =
      std::vector<double>(kNumTemplates * kContextFeatureDim, 0.0);
  std::array<double, kNumTemplates> template_bias{};

  std::uint64_t seed = 0;
  int epochs = 0;
  double learning_rate = 0.0;

  void save(const std::string& path) const;
  static RankerModel load(const std::string& path);  // ModelError on schema mismatch
  std::string serialize() const;
  static RankerModel deserialize(const std::string& text);
};

// Softmax over per-candidate linear scores; positive, sums to 1.
std::vector<double> score_sentences(const RankerModel& m, const LabeledQuestion& lq);

// Six independent sigmoids over passage+question features only.
std::array<double, kNumTemplates> score_templates(const RankerModel& m,
                                                  const LabeledQuestion& lq);

// Final usefulness score phi_j * psi_{tau_j}; returns indices of the k best,
// ties resolved by lower original index. tau=0 candidates get factor 1.
std::vector<std::size_t> combine_and_select(
    const std::vector<double>& phi,
    const std::array<double, kNumTemplates>& psi,
    const std::vector<Candidate>& candidates, std::size_t k);

// Feature/label view used by the loss functions and the trainers.
struct PreparedQuestion {
  std::vector<std::array<double, kSentenceFeatureDim>> features;
  std::vector<bool> useful;
  std::vector<double> context;  // kContextFeatureDim
  std::array<bool, kNumTemplates> template_labels{};
  bool has_useful = false;
};

PreparedQuestion prepare_question(const LabeledQuestion& lq);

// Listwise NLL: per question -log sum_{j useful} softmax_j. Parameters are
// [w (D), b]. Mean over questions; gradient optional.
double sentence_loss(const std::vector<double>& params,
                     const std::vector<PreparedQuestion>& data,
                     std::vector<double>* grad = nullptr);

// Mean BCE over the six template labels. Parameters are
// [W row-major (6 x D'), b (6)].
double template_loss(const std::vector<double>& params,
                     const std::vector<PreparedQuestion>& data,
                     std::vector<double>* grad = nullptr);

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  std::uint64_t seed = 0;
};

// Full-batch gradient descent from zero init; deterministic. Questions
// without a useful candidate are skipped with a warning; returns the
// per-epoch loss trace.
std::vector<double> train_sentence_ranker(const std::vector<LabeledQuestion>& data,
                                          const TrainConfig& cfg, RankerModel& model);

std::vector<double> train_template_ranker(const std::vector<LabeledQuestion>& data,
                                          const TrainConfig& cfg, RankerModel& model);

enum class BaselineStrategy { Random, Length, Lexical };

// Candidate order under a naive strategy: seeded shuffle, ascending length,
// or descending token overlap with passage+question.
std::vector<std::size_t> baseline_rank(BaselineStrategy strategy,
                                       const LabeledQuestion& lq,
                                       std::uint64_t seed = 0);

}  // namespace ttg
