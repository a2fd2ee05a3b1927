#pragma once

#include "ttg/knowledge.hpp"
#include "ttg/ranking.hpp"
#include "ttg/table.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ttg {

struct Task {
  std::string id;
  std::string passage;
  std::vector<Table> tables;
  std::string question;
  std::array<std::string, 4> options;
  int gold_answer = 0;  // 0..3
  // candidate fingerprint -> usefulness label
  std::map<std::string, bool> sentence_labels;
};

// Hash of (kind, direction, series labels, interval); stable across template
// re-wording.
std::string candidate_fingerprint(const Fact& f);

// One JSON object per line:
// {id, passage, tables:[record], question, options:[4], answer, labels?}
std::vector<Task> load_corpus(const std::string& path);
std::vector<Task> parse_corpus(const std::string& jsonl);
std::string task_to_jsonl_line(const Task& t);

// Generates facts from the task's tables, renders them, and attaches
// usefulness labels and retrieved knowledge.
LabeledQuestion make_labeled_question(const Task& task, const TemplateSet& ts,
                                      const KnowledgeBase& kb, std::size_t epsilon);

// Scenario-grouped k-fold assignment: tasks sharing a passage never straddle
// folds, and within each fold's training portion a deterministic 80/20
// train/dev split is available.
class KFold {
 public:
  KFold(const std::vector<Task>& tasks, int folds, std::uint64_t seed);

  int folds() const { return folds_; }
  int fold_of(std::size_t task_index) const { return fold_of_[task_index]; }
  std::vector<std::size_t> test_indices(int fold) const;
  // Training tasks for `fold`, split 80/20 by scenario.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_dev_indices(
      int fold) const;

 private:
  int folds_;
  std::vector<int> fold_of_;
  std::vector<int> scenario_rank_;  // deterministic order within training pool
};

struct FoldRow {
  int fold = 0;
  double map = 0.0;
  double mrr = 0.0;
  std::optional<double> accuracy;
  std::size_t tasks = 0;
};

struct MetricsReport {
  double map = 0.0;
  double mrr = 0.0;
  std::optional<double> accuracy;
  std::vector<FoldRow> per_fold;
};

// Average precision / reciprocal rank over a full ranked relevance list.
double average_precision(const std::vector<bool>& relevance_in_rank_order);
double reciprocal_rank(const std::vector<bool>& relevance_in_rank_order);

// MAP/MRR over questions, given a ranking callback returning candidate order.
using RankFn = std::function<std::vector<std::size_t>(const LabeledQuestion&)>;
MetricsReport eval_ranking(const RankFn& rank, const std::vector<LabeledQuestion>& questions);

struct ReaderPayload {
  std::string task_id;
  std::string context;  // "[CLS] P s1..sk Q [SEP]" with numbers masked
  std::string option;   // option text, numbers masked
  std::string nums;     // numeric tokens from P, S, Q, option, in order
};

ReaderPayload build_reader_payload(const std::string& task_id,
                                   const std::string& passage,
                                   const std::vector<std::string>& selected,
                                   const std::string& question,
                                   const std::string& option,
                                   const std::vector<std::string>& knowledge);

std::string payload_to_json(const ReaderPayload& p);

// Token-overlap reader: scores each option against passage + selected
// sentences + retrieved knowledge, normalized by option length. Stable ties
// resolve to the lower option index.
int answer_with_baseline(const Task& task, const std::vector<std::string>& selected,
                         const KnowledgeBase& kb, std::size_t epsilon);

// External scorer over the standard streams of a spawned subprocess. One
// JSON request line per option: {"task_id":..., "segments":{"context":...,
// "option":..., "nums":...}}; expects {"scores":[4 reals]} after the last
// request. Timeout or a malformed reply leaves the task unanswered.
class ExternalScorer {
 public:
  explicit ExternalScorer(std::string command, int timeout_seconds = 30);
  std::optional<int> answer(const std::array<ReaderPayload, 4>& payloads) const;

 private:
  std::string command_;
  int timeout_seconds_;
};

}  // namespace ttg
