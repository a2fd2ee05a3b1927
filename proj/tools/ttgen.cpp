#include "ttg/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common_options(CLI::App* cmd, ttg::RunConfig& cfg, std::string& corpus) {
  cmd->add_option("--corpus", corpus, "corpus JSONL file")
      ->envname("TTGEN_CORPUS")
      ->required();
  cmd->add_option("--templates", cfg.template_path, "template file (default: builtin)")
      ->envname("TTGEN_TEMPLATES");
  cmd->add_option("--kb", cfg.kb_path, "knowledge base TSV")->envname("TTGEN_KB");
  cmd->add_option("--k", cfg.k, "top-k sentences for the reader")->envname("TTGEN_K");
  cmd->add_option("--epsilon", cfg.epsilon, "knowledge facts per mention")
      ->envname("TTGEN_EPSILON");
  cmd->add_option("--folds", cfg.folds, "cross-validation folds")->envname("TTGEN_FOLDS");
  cmd->add_option("--seed", cfg.seed, "random seed")->envname("TTGEN_SEED");
  cmd->add_option("--scorer", cfg.scorer_command,
                  "external scorer command (default: builtin overlap reader)")
      ->envname("TTGEN_SCORER");
  cmd->add_option("--scorer-timeout", cfg.scorer_timeout_seconds,
                  "external scorer timeout, seconds")
      ->envname("TTGEN_SCORER_TIMEOUT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TTGen: table-to-text generation and ranking for tabular QA"};
  app.require_subcommand(1);

  ttg::RunConfig cfg;
  std::string corpus, model, out;

  auto* gen = app.add_subcommand("generate", "generate all candidate sentences");
  add_common_options(gen, cfg, corpus);
  gen->add_option("--out", out, "output JSONL")->required();

  auto* train = app.add_subcommand("train", "train sentence and template rankers");
  add_common_options(train, cfg, corpus);
  train->add_option("--model", model, "model output path")->required();
  train->add_option("--epochs", cfg.train.epochs, "training epochs");
  train->add_option("--lr", cfg.train.learning_rate, "learning rate");

  auto* rank = app.add_subcommand("rank", "select top-k sentences per task");
  add_common_options(rank, cfg, corpus);
  rank->add_option("--model", model, "trained model file")->required();
  rank->add_option("--out", out, "output JSONL")->required();

  auto* eval = app.add_subcommand("eval", "cross-validated ranking and QA evaluation");
  add_common_options(eval, cfg, corpus);
  eval->add_option("--epochs", cfg.train.epochs, "training epochs");
  eval->add_option("--lr", cfg.train.learning_rate, "learning rate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return ttg::cmd_generate(corpus, cfg, out);
    if (train->parsed()) return ttg::cmd_train(corpus, cfg, model, std::cout);
    if (rank->parsed()) return ttg::cmd_rank(corpus, model, cfg, out, std::cout);
    if (eval->parsed()) return ttg::cmd_eval(corpus, cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
