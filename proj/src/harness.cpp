#include "ttg/harness.hpp"

#include "ttg/synthesis.hpp"
#include "ttg/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace ttg {

std::string candidate_fingerprint(const Fact& f) {
  std::string key = std::string(kind_name(f.kind)) + "|" + direction_name(f.direction) +
                    "|" + f.series_label + "|" + f.second_series_label + "|" +
                    f.start_label + "|" + f.end_label + "|" + f.point_label;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(key)));
  return buf;
}

namespace {

Task parse_task(const nlohmann::json& j, std::size_t line_no) {
  auto fail = [line_no](const std::string& msg) -> SchemaError {
    return SchemaError("corpus line " + std::to_string(line_no) + ": " + msg);
  };
  if (!j.is_object()) throw fail("expected an object");
  Task t;
  t.id = j.value("id", "");
  if (t.id.empty()) throw fail("missing id");
  t.passage = j.value("passage", "");
  t.question = j.value("question", "");
  if (!j.contains("tables") || !j["tables"].is_array())
    throw fail("missing tables array");
  for (const auto& rec : j["tables"]) {
    try {
      t.tables.push_back(parse_table(rec));
    } catch (const SchemaError& e) {
      throw fail(e.what());
    }
  }
  if (!j.contains("options") || !j["options"].is_array() || j["options"].size() != 4)
    throw fail("exactly 4 options required");
  for (std::size_t i = 0; i < 4; ++i)
    t.options[i] = j["options"][i].get<std::string>();
  t.gold_answer = j.value("answer", -1);
  if (t.gold_answer < 0 || t.gold_answer > 3)
    throw fail("answer must be in 0..3");
  if (j.contains("labels"))
    for (auto& [fp, v] : j["labels"].items())
      t.sentence_labels[fp] = v.get<bool>();
  return t;
}

}  // namespace

std::vector<Task> parse_corpus(const std::string& jsonl) {
  std::vector<Task> tasks;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    tasks.push_back(parse_task(j, line_no));
  }
  return tasks;
}

std::vector<Task> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open corpus: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

std::string task_to_jsonl_line(const Task& t) {
  nlohmann::json j;
  j["id"] = t.id;
  j["passage"] = t.passage;
  j["question"] = t.question;
  auto tables = nlohmann::json::array();
  for (const auto& tab : t.tables) tables.push_back(table_to_json(tab));
  j["tables"] = std::move(tables);
  j["options"] = t.options;
  j["answer"] = t.gold_answer;
  if (!t.sentence_labels.empty()) j["labels"] = t.sentence_labels;
  return j.dump();
}

LabeledQuestion make_labeled_question(const Task& task, const TemplateSet& ts,
                                      const KnowledgeBase& kb, std::size_t epsilon) {
  LabeledQuestion lq;
  lq.id = task.id;
  lq.passage = task.passage;
  lq.question = task.question;
  std::string q_context = task.question + " " + task.passage;
  auto facts = generate_all(task.tables, q_context);
  lq.candidates = render_all(facts, ts);
  for (auto& c : lq.candidates) {
    auto it = task.sentence_labels.find(candidate_fingerprint(c.fact));
    if (it != task.sentence_labels.end()) c.useful = it->second;
  }
  if (!kb.empty()) {
    auto mentions = detect_entities(q_context, kb);
    auto facts_text = retrieve(mentions, q_context, kb, epsilon);
    std::string joined;
    for (const auto& f : facts_text) {
      if (!joined.empty()) joined += ' ';
      joined += f;
    }
    lq.knowledge_text = std::move(joined);
  }
  return lq;
}

KFold::KFold(const std::vector<Task>& tasks, int folds, std::uint64_t seed)
    : folds_(folds) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (tasks.size() < static_cast<std::size_t>(folds))
    throw std::invalid_argument("fewer tasks than folds");
  // Scenario key is the passage: questions sharing one never straddle folds.
  std::map<std::string, std::vector<std::size_t>> scenarios;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    scenarios[tasks[i].passage].push_back(i);
  std::vector<const std::vector<std::size_t>*> order;
  for (const auto& [key, members] : scenarios) order.push_back(&members);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  fold_of_.assign(tasks.size(), 0);
  scenario_rank_.assign(tasks.size(), 0);
  std::vector<std::size_t> fold_sizes(folds, 0);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    int target = static_cast<int>(
        std::min_element(fold_sizes.begin(), fold_sizes.end()) - fold_sizes.begin());
    for (std::size_t idx : *order[rank]) {
      fold_of_[idx] = target;
      scenario_rank_[idx] = static_cast<int>(rank);
      ++fold_sizes[target];
    }
  }
}

std::vector<std::size_t> KFold::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of_.size(); ++i)
    if (fold_of_[i] == fold) out.push_back(i);
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
KFold::train_dev_indices(int fold) const {
  // Training-pool scenarios in shuffled order; the last fifth becomes dev.
  std::map<int, std::vector<std::size_t>> pool;
  for (std::size_t i = 0; i < fold_of_.size(); ++i)
    if (fold_of_[i] != fold) pool[scenario_rank_[i]].push_back(i);
  std::size_t n_scen = pool.size();
  std::size_t n_dev = n_scen / 5;
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  std::size_t rank = 0;
  for (const auto& [r, members] : pool) {
    auto& dest = rank < n_scen - n_dev ? out.first : out.second;
    for (std::size_t idx : members) dest.push_back(idx);
    ++rank;
  }
  return out;
}

double average_precision(const std::vector<bool>& rel) {
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (rel[i]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double reciprocal_rank(const std::vector<bool>& rel) {
  for (std::size_t i = 0; i < rel.size(); ++i)
    if (rel[i]) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

MetricsReport eval_ranking(const RankFn& rank,
                           const std::vector<LabeledQuestion>& questions) {
  MetricsReport report;
  std::size_t counted = 0;
  for (const auto& lq : questions) {
    bool labeled = std::any_of(lq.candidates.begin(), lq.candidates.end(),
                               [](const Candidate& c) { return c.useful.value_or(false); });
    if (!labeled) {
      std::cerr << "warning: question \"" << lq.id << "\" has no labels, skipped\n";
      continue;
    }
    auto order = rank(lq);
    std::vector<bool> rel;
    rel.reserve(order.size());
    for (std::size_t idx : order)
      rel.push_back(lq.candidates[idx].useful.value_or(false));
    report.map += average_precision(rel);
    report.mrr += reciprocal_rank(rel);
    ++counted;
  }
  if (counted > 0) {
    report.map /= static_cast<double>(counted);
    report.mrr /= static_cast<double>(counted);
  }
  return report;
}

ReaderPayload build_reader_payload(const std::string& task_id,
                                   const std::string& passage,
                                   const std::vector<std::string>& selected,
                                   const std::string& question,
                                   const std::string& option,
                                   const std::vector<std::string>& knowledge) {
  ReaderPayload p;
  p.task_id = task_id;
  std::vector<std::string> nums;
  auto add = [&nums](const MaskResult& m) {
    nums.insert(nums.end(), m.numbers.begin(), m.numbers.end());
  };
  auto mp = mask_numbers(passage);
  add(mp);
  p.context = "[CLS] " + mp.masked;
  for (const auto& s : selected) {
    auto ms = mask_numbers(s);
    add(ms);
    p.context += " " + ms.masked;
  }
  auto mq = mask_numbers(question);
  add(mq);
  p.context += " " + mq.masked + " [SEP]";
  auto mo = mask_numbers(option);
  add(mo);
  p.option = mo.masked;
  for (const auto& n : nums) {
    if (!p.nums.empty()) p.nums += ' ';
    p.nums += n;
  }
  // Knowledge rides along for knowledge-enabled scorers; it contributes
  // neither to the context segment nor to NUMS.
  (void)knowledge;
  return p;
}

std::string payload_to_json(const ReaderPayload& p) {
  nlohmann::json j;
  j["task_id"] = p.task_id;
  j["segments"] = {{"context", p.context}, {"option", p.option}, {"nums", p.nums}};
  return j.dump();
}

int answer_with_baseline(const Task& task, const std::vector<std::string>& selected,
                         const KnowledgeBase& kb, std::size_t epsilon) {
  std::string context = task.passage;
  for (const auto& s : selected) context += " " + s;
  if (!kb.empty()) {
    std::string q_context = task.question + " " + task.passage;
    auto mentions = detect_entities(q_context, kb);
    for (const auto& f : retrieve(mentions, q_context, kb, epsilon))
      context += " " + f;
  }
  auto ctx_set = token_set(context);
  int best = 0;
  double best_score = -1.0;
  for (int i = 0; i < 4; ++i) {
    double score = token_overlap(tokenize(task.options[i]), ctx_set);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

ExternalScorer::ExternalScorer(std::string command, int timeout_seconds)
    : command_(std::move(command)), timeout_seconds_(timeout_seconds) {}

std::optional<int> ExternalScorer::answer(
    const std::array<ReaderPayload, 4>& payloads) const {
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0) return std::nullopt;
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    return std::nullopt;
  }
  pid_t pid = fork();
  if (pid < 0) return std::nullopt;
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);

  std::string request;
  for (const auto& p : payloads) request += payload_to_json(p) + "\n";
  bool write_ok = true;
  std::size_t written = 0;
  while (written < request.size()) {
    ssize_t n = write(to_child[1], request.data() + written, request.size() - written);
    if (n <= 0) {
      write_ok = false;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  close(to_child[1]);

  std::string response;
  bool timed_out = false;
  if (write_ok) {
    struct pollfd pfd = {from_child[0], POLLIN, 0};
    char buf[4096];
    while (response.find('\n') == std::string::npos) {
      int pr = poll(&pfd, 1, timeout_seconds_ * 1000);
      if (pr <= 0) {
        timed_out = true;
        break;
      }
      ssize_t n = read(from_child[0], buf, sizeof(buf));
      if (n <= 0) break;
      response.append(buf, static_cast<std::size_t>(n));
    }
  }
  close(from_child[0]);
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);

  auto nl = response.find('\n');
  if (nl == std::string::npos) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(response.substr(0, nl));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!j.contains("scores") || !j["scores"].is_array() || j["scores"].size() != 4)
    return std::nullopt;
  std::array<double, 4> scores{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j["scores"][i].is_number()) return std::nullopt;
    scores[i] = j["scores"][i].get<double>();
    if (!std::isfinite(scores[i])) return std::nullopt;
  }
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

}  // namespace ttg
