#include "ttg/commands.hpp"

#include "ttg/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>

namespace ttg {

void RunConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (epsilon < 1) throw std::invalid_argument("epsilon must be >= 1");
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
}

TemplateSet load_templates(const RunConfig& cfg) {
  return cfg.template_path.empty() ? TemplateSet::builtin_english()
                                   : TemplateSet::load(cfg.template_path);
}

KnowledgeBase load_kb(const RunConfig& cfg) {
  return cfg.kb_path.empty() ? KnowledgeBase{} : KnowledgeBase::load(cfg.kb_path);
}

std::vector<std::size_t> rank_candidates(const RankerModel& model,
                                         const LabeledQuestion& lq) {
  auto phi = score_sentences(model, lq);
  auto psi = score_templates(model, lq);
  return combine_and_select(phi, psi, lq.candidates, lq.candidates.size());
}

namespace {

std::vector<LabeledQuestion> build_questions(const std::vector<Task>& tasks,
                                             const TemplateSet& ts,
                                             const KnowledgeBase& kb,
                                             std::size_t epsilon) {
  std::vector<LabeledQuestion> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(make_labeled_question(t, ts, kb, epsilon));
  return out;
}

std::vector<std::string> selected_sentences(const RankerModel& model,
                                            const LabeledQuestion& lq, std::size_t k) {
  std::vector<std::string> out;
  if (lq.candidates.empty()) return out;
  auto phi = score_sentences(model, lq);
  auto psi = score_templates(model, lq);
  for (std::size_t idx : combine_and_select(phi, psi, lq.candidates, k))
    out.push_back(lq.candidates[idx].sentence);
  return out;
}

}  // namespace

MetricsReport run_cv_eval(const std::vector<Task>& tasks, const TemplateSet& ts,
                          const KnowledgeBase& kb, const RunConfig& cfg,
                          std::size_t* task_errors) {
  cfg.validate();
  auto questions = build_questions(tasks, ts, kb, cfg.epsilon);
  KFold kfold(tasks, cfg.folds, cfg.seed);
  MetricsReport report;
  std::size_t errors = 0;
  for (int fold = 0; fold < cfg.folds; ++fold) {
    auto [train_idx, dev_idx] = kfold.train_dev_indices(fold);
    auto test_idx = kfold.test_indices(fold);
    std::vector<LabeledQuestion> train_qs;
    for (std::size_t i : train_idx) train_qs.push_back(questions[i]);

    RankerModel model;
    train_sentence_ranker(train_qs, cfg.train, model);
    train_template_ranker(train_qs, cfg.train, model);

    std::vector<LabeledQuestion> test_qs;
    for (std::size_t i : test_idx) test_qs.push_back(questions[i]);
    auto fold_metrics = eval_ranking(
        [&](const LabeledQuestion& lq) { return rank_candidates(model, lq); }, test_qs);

    std::size_t correct = 0;
    for (std::size_t i : test_idx) {
      const Task& task = tasks[i];
      auto selected = selected_sentences(model, questions[i], cfg.k);
      std::optional<int> answer;
      if (cfg.scorer_command.empty()) {
        answer = answer_with_baseline(task, selected, kb, cfg.epsilon);
      } else {
        std::vector<std::string> knowledge;
        std::array<ReaderPayload, 4> payloads;
        for (int o = 0; o < 4; ++o)
          payloads[o] = build_reader_payload(task.id, task.passage, selected,
                                             task.question, task.options[o], knowledge);
        ExternalScorer scorer(cfg.scorer_command, cfg.scorer_timeout_seconds);
        answer = scorer.answer(payloads);
        if (!answer) ++errors;  // unanswered counts as incorrect
      }
      if (answer && *answer == task.gold_answer) ++correct;
    }
    FoldRow row;
    row.fold = fold;
    row.map = fold_metrics.map;
    row.mrr = fold_metrics.mrr;
    row.tasks = test_idx.size();
    row.accuracy = test_idx.empty()
                       ? 0.0
                       : static_cast<double>(correct) / static_cast<double>(test_idx.size());
    report.per_fold.push_back(row);
  }
  double acc = 0.0;
  for (const auto& row : report.per_fold) {
    report.map += row.map;
    report.mrr += row.mrr;
    acc += row.accuracy.value_or(0.0);
  }
  double n = static_cast<double>(report.per_fold.size());
  report.map /= n;
  report.mrr /= n;
  report.accuracy = acc / n;
  if (task_errors) *task_errors = errors;
  return report;
}

int cmd_generate(const std::string& corpus_path, const RunConfig& cfg,
                 const std::string& out_path) {
  cfg.validate();
  auto tasks = load_corpus(corpus_path);
  auto ts = load_templates(cfg);
  auto kb = load_kb(cfg);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + out_path);
  for (const auto& task : tasks) {
    auto lq = make_labeled_question(task, ts, kb, cfg.epsilon);
    nlohmann::json j;
    j["id"] = task.id;
    auto cands = nlohmann::json::array();
    for (const auto& c : lq.candidates) {
      nlohmann::json cj;
      cj["fingerprint"] = candidate_fingerprint(c.fact);
      cj["sentence"] = c.sentence;
      cj["template"] = c.template_index;
      cands.push_back(std::move(cj));
    }
    j["candidates"] = std::move(cands);
    out << j.dump() << "\n";
  }
  return 0;
}

int cmd_train(const std::string& corpus_path, const RunConfig& cfg,
              const std::string& model_out, std::ostream& log) {
  cfg.validate();
  auto tasks = load_corpus(corpus_path);
  auto ts = load_templates(cfg);
  auto kb = load_kb(cfg);
  std::vector<LabeledQuestion> questions;
  for (const auto& t : tasks) questions.push_back(make_labeled_question(t, ts, kb, cfg.epsilon));

  RankerModel model;
  TrainConfig train = cfg.train;
  train.seed = cfg.seed;
  auto strace = train_sentence_ranker(questions, train, model);
  auto ttrace = train_template_ranker(questions, train, model);
  auto dump_trace = [&log](const char* name, const std::vector<double>& trace) {
    log << name << " loss:";
    for (std::size_t i = 0; i < trace.size(); i += std::max<std::size_t>(1, trace.size() / 10))
      log << " " << trace[i];
    if (!trace.empty()) log << " -> " << trace.back();
    log << "\n";
  };
  dump_trace("sentence ranker", strace);
  dump_trace("template ranker", ttrace);
  model.save(model_out);
  log << "model written to " << model_out << "\n";
  return 0;
}

int cmd_rank(const std::string& corpus_path, const std::string& model_path,
             const RunConfig& cfg, const std::string& out_path, std::ostream& log) {
  cfg.validate();
  auto tasks = load_corpus(corpus_path);
  auto ts = load_templates(cfg);
  auto kb = load_kb(cfg);
  auto model = RankerModel::load(model_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + out_path);

  std::vector<LabeledQuestion> questions;
  for (const auto& task : tasks) {
    auto lq = make_labeled_question(task, ts, kb, cfg.epsilon);
    nlohmann::json j;
    j["id"] = task.id;
    auto sel = nlohmann::json::array();
    if (!lq.candidates.empty()) {
      auto phi = score_sentences(model, lq);
      auto psi = score_templates(model, lq);
      std::vector<double> score(lq.candidates.size());
      for (std::size_t c = 0; c < lq.candidates.size(); ++c) {
        int tau = lq.candidates[c].template_index;
        score[c] = phi[c] * (tau >= 1 && tau <= kNumTemplates ? psi[tau - 1] : 1.0);
      }
      for (std::size_t idx : combine_and_select(phi, psi, lq.candidates, cfg.k)) {
        nlohmann::json sj;
        sj["sentence"] = lq.candidates[idx].sentence;
        sj["score"] = score[idx];
        sel.push_back(std::move(sj));
      }
    }
    j["selected"] = std::move(sel);
    out << j.dump() << "\n";
    questions.push_back(std::move(lq));
  }

  bool any_labels = std::any_of(questions.begin(), questions.end(), [](const LabeledQuestion& q) {
    return std::any_of(q.candidates.begin(), q.candidates.end(),
                       [](const Candidate& c) { return c.useful.has_value(); });
  });
  if (any_labels) {
    auto metrics = eval_ranking(
        [&](const LabeledQuestion& lq) { return rank_candidates(model, lq); }, questions);
    log << "MAP " << metrics.map << " MRR " << metrics.mrr << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& corpus_path, const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  auto tasks = load_corpus(corpus_path);
  auto ts = load_templates(cfg);
  auto kb = load_kb(cfg);
  std::size_t errors = 0;
  auto report = run_cv_eval(tasks, ts, kb, cfg, &errors);
  log << "fold  tasks  MAP      MRR      accuracy\n";
  for (const auto& row : report.per_fold) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-5d %-6zu %-8.4f %-8.4f %.4f\n", row.fold,
                  row.tasks, row.map, row.mrr, row.accuracy.value_or(0.0));
    log << buf;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mean         %-8.4f %-8.4f %.4f\n", report.map,
                report.mrr, report.accuracy.value_or(0.0));
  log << buf;
  if (errors > 0) {
    log << errors << " task(s) unanswered by external scorer\n";
    return 1;
  }
  return 0;
}

}  // namespace ttg
