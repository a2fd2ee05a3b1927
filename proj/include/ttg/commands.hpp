#pragma once

#include "ttg/harness.hpp"

#include <iosfwd>
#include <string>

namespace ttg {

struct RunConfig {
  std::size_t k = 2;        // sentences fed to the reader
  std::size_t epsilon = 2;  // knowledge facts per entity mention
  std::uint64_t seed = 0;
  int folds = 5;
  std::string template_path;   // empty -> builtin English set
  std::string kb_path;         // empty -> no knowledge base
  std::string scorer_command;  // empty -> built-in overlap reader
  int scorer_timeout_seconds = 30;
  TrainConfig train;

  void validate() const;  // k >= 1, epsilon >= 1, folds >= 2
};

TemplateSet load_templates(const RunConfig& cfg);
KnowledgeBase load_kb(const RunConfig& cfg);

// Full ranked candidate order under the combined phi * psi score.
std::vector<std::size_t> rank_candidates(const RankerModel& model,
                                         const LabeledQuestion& lq);

// Trains both rankers per fold and evaluates ranking quality plus end-to-end
// answer accuracy on the held-out folds.
MetricsReport run_cv_eval(const std::vector<Task>& tasks, const TemplateSet& ts,
                          const KnowledgeBase& kb, const RunConfig& cfg,
                          std::size_t* task_errors = nullptr);

// CLI entry points; each returns a process exit code (0 iff no task-level
// errors) and honors cfg.seed for bitwise reproducibility.
int cmd_generate(const std::string& corpus_path, const RunConfig& cfg,
                 const std::string& out_path);
int cmd_train(const std::string& corpus_path, const RunConfig& cfg,
              const std::string& model_out, std::ostream& log);
int cmd_rank(const std::string& corpus_path, const std::string& model_path,
             const RunConfig& cfg, const std::string& out_path, std::ostream& log);
int cmd_eval(const std::string& corpus_path, const RunConfig& cfg, std::ostream& log);

}  // namespace ttg
