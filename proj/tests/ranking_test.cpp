#include <doctest.h>

#include "ttg/ranking.hpp"

#include <cmath>
#include <fstream>
#include <random>

using namespace ttg;

namespace {

Candidate make_candidate(const std::string& sentence, int tau,
                         std::optional<bool> useful = std::nullopt) {
  Candidate c;
  c.sentence = sentence;
  c.template_index = tau;
  c.fact.kind = static_cast<FactKind>(tau);
  c.fact.series_label = "S";
  c.useful = useful;
  return c;
}

LabeledQuestion make_question(std::vector<Candidate> cands,
                              const std::string& question = "a question",
                              const std::string& passage = "a passage") {
  LabeledQuestion lq;
  lq.id = "q";
  lq.question = question;
  lq.passage = passage;
  lq.candidates = std::move(cands);
  return lq;
}

// Random prepared questions, for gradient checks.
std::vector<PreparedQuestion> random_prepared(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> ncand(1, 6);
  std::uniform_real_distribution<double> feat(-1, 1);
  std::bernoulli_distribution label(0.4);
  std::vector<PreparedQuestion> data(n);
  for (auto& q : data) {
    std::size_t m = ncand(rng);
    q.features.resize(m);
    q.useful.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      for (auto& x : q.features[j]) x = feat(rng);
      q.useful[j] = label(rng);
      q.has_useful = q.has_useful || q.useful[j];
    }
    if (!q.has_useful) {
      q.useful[0] = true;
      q.has_useful = true;
    }
    q.context.resize(kContextFeatureDim);
    for (std::size_t i = 0; i < kContextFeatureDim; ++i)
      q.context[i] = label(rng) ? 1.0 : 0.0;
    for (int t = 0; t < kNumTemplates; ++t) q.template_labels[t] = label(rng);
  }
  return data;
}

using LossFn = double (*)(const std::vector<double>&,
                          const std::vector<PreparedQuestion>&, std::vector<double>*);

double max_rel_grad_error(LossFn loss, std::vector<double> params,
                          const std::vector<PreparedQuestion>& data) {
  std::vector<double> grad;
  loss(params, data, &grad);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    double saved = params[i];
    params[i] = saved + h;
    double fp = loss(params, data, nullptr);
    params[i] = saved - h;
    double fm = loss(params, data, nullptr);
    params[i] = saved;
    double fd = (fp - fm) / (2 * h);
    double denom = std::max({1.0, std::fabs(fd), std::fabs(grad[i])});
    worst = std::max(worst, std::fabs(fd - grad[i]) / denom);
  }
  return worst;
}

}  // namespace

TEST_CASE("mask_numbers replaces maximal numeric tokens") {
  auto m = mask_numbers("ELP at Year 2000 is 2.504");
  CHECK(m.masked == "ELP at Year [NUM] is [NUM]");
  REQUIRE(m.numbers.size() == 2);
  CHECK(m.numbers[0] == "2000");
  CHECK(m.numbers[1] == "2.504");

  auto none = mask_numbers("no digits here");
  CHECK(none.masked == "no digits here");
  CHECK(none.numbers.empty());

  // reinsertion restores the original
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int iter = 0; iter < 100; ++iter) {
    std::string text;
    for (int w = 0; w < 8; ++w) {
      const char* parts[] = {"abc ", "12 ", "3.5 ", "x9y ", ". "};
      text += parts[pick(rng)];
    }
    auto masked = mask_numbers(text);
    CHECK(unmask_numbers(masked.masked, masked.numbers) == text);
  }
}

TEST_CASE("derive_template_labels is an OR-fold per template") {
  std::vector<Candidate> cands = {make_candidate("a", 1, false),
                                  make_candidate("b", 1, true),
                                  make_candidate("c", 4, false)};
  auto labels = derive_template_labels(cands);
  CHECK(labels == std::array<bool, 6>{true, false, false, false, false, false});

  for (auto& c : cands) c.useful = false;
  CHECK(derive_template_labels(cands) == std::array<bool, 6>{});

  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> tau(1, 6);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<Candidate> cs;
    std::array<bool, 6> expect{};
    for (int j = 0; j < 10; ++j) {
      int t = tau(rng);
      bool u = coin(rng);
      cs.push_back(make_candidate("s", t, u));
      if (u) expect[t - 1] = true;
    }
    CHECK(derive_template_labels(cs) == expect);
  }
}

TEST_CASE("score_sentences is a per-question softmax") {
  RankerModel zero;
  auto single = make_question({make_candidate("only", 1)});
  auto phi = score_sentences(zero, single);
  REQUIRE(phi.size() == 1);
  CHECK(phi[0] == doctest::Approx(1.0));

  auto three = make_question(
      {make_candidate("xx", 1), make_candidate("yy", 2), make_candidate("zz", 3)});
  phi = score_sentences(zero, three);
  double sum = 0;
  for (double p : phi) {
    CHECK(p == doctest::Approx(1.0 / 3));
    sum += p;
  }
  CHECK(std::fabs(sum - 1.0) < 1e-9);

  // hand-set weights: only the template one-hot differs between candidates
  RankerModel m;
  m.sentence_weights[6 + 1] = 1.0;  // tau = 1
  m.sentence_weights[6 + 2] = 2.0;  // tau = 2
  phi = score_sentences(m, three);
  double z1 = std::exp(1.0), z2 = std::exp(2.0), z3 = std::exp(0.0);
  CHECK(phi[0] == doctest::Approx(z1 / (z1 + z2 + z3)));
  CHECK(phi[1] == doctest::Approx(z2 / (z1 + z2 + z3)));
  CHECK(phi[2] == doctest::Approx(z3 / (z1 + z2 + z3)));
}

TEST_CASE("score_templates is six independent sigmoids over P+Q features") {
  RankerModel zero;
  auto lq = make_question({make_candidate("a", 1)});
  auto psi = score_templates(zero, lq);
  for (double p : psi) CHECK(p == doctest::Approx(0.5));

  RankerModel biased;
  biased.template_bias[2] = 3.0;
  auto psi2 = score_templates(biased, lq);
  CHECK(psi2[2] == doctest::Approx(1.0 / (1.0 + std::exp(-3.0))));
  CHECK(psi2[2] > psi[2]);
  for (double p : psi2) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }

  // sentence text never reaches the template scorer
  auto other = lq;
  other.candidates[0].sentence = "something completely different";
  CHECK(score_templates(biased, other) == psi2);
}

TEST_CASE("combine_and_select multiplies phi by the template's psi") {
  auto cands = std::vector<Candidate>{make_candidate("a", 1), make_candidate("b", 2),
                                      make_candidate("c", 3)};
  std::array<double, 6> flat;
  flat.fill(0.5);
  auto top = combine_and_select({0.5, 0.3, 0.2}, flat, cands, 2);
  CHECK(top == std::vector<std::size_t>{0, 1});

  // phi=[0.4,0.6], psi for their templates [0.9,0.1] -> scores [0.36,0.06]
  std::array<double, 6> psi{0.9, 0.1, 0.5, 0.5, 0.5, 0.5};
  auto two = std::vector<Candidate>{make_candidate("a", 1), make_candidate("b", 2)};
  auto sel = combine_and_select({0.4, 0.6}, psi, two, 1);
  CHECK(sel == std::vector<std::size_t>{0});

  // k larger than the candidate count returns everything
  CHECK(combine_and_select({0.4, 0.6}, psi, two, 10).size() == 2);

  // ties resolve to the lower original index
  auto tie = combine_and_select({0.5, 0.5}, flat, two, 1);
  CHECK(tie == std::vector<std::size_t>{0});
}

TEST_CASE("adding a constant to all logits never changes the selection") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int iter = 0; iter < 50; ++iter) {
    std::size_t n = 5;
    std::vector<Candidate> cands;
    std::vector<double> logits(n);
    for (std::size_t j = 0; j < n; ++j) {
      cands.push_back(make_candidate("s" + std::to_string(j), 1 + int(j % 6)));
      logits[j] = u(rng);
    }
    std::array<double, 6> psi;
    for (auto& p : psi) p = 0.1 + 0.8 * (u(rng) + 2) / 4;

    auto softmax = [](std::vector<double> z) {
      double mx = *std::max_element(z.begin(), z.end()), s = 0;
      for (auto& x : z) {
        x = std::exp(x - mx);
        s += x;
      }
      for (auto& x : z) x /= s;
      return z;
    };
    auto base = combine_and_select(softmax(logits), psi, cands, 2);
    auto shifted_logits = logits;
    for (auto& z : shifted_logits) z += 7.3;
    auto shifted = combine_and_select(softmax(shifted_logits), psi, cands, 2);
    CHECK(base == shifted);
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  std::mt19937_64 rng(31);
  auto data = random_prepared(rng, 8);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int point = 0; point < 20; ++point) {
    std::vector<double> sp(kSentenceFeatureDim + 1);
    for (auto& p : sp) p = u(rng);
    CHECK(max_rel_grad_error(&sentence_loss, sp, data) < 1e-6);

    std::vector<double> tp(kNumTemplates * kContextFeatureDim + kNumTemplates);
    for (auto& p : tp) p = u(rng);
    CHECK(max_rel_grad_error(&template_loss, tp, data) < 1e-6);
  }
}

TEST_CASE("training: zero epochs leaves the model unchanged") {
  auto data = std::vector<LabeledQuestion>{
      make_question({make_candidate("a", 1, true), make_candidate("b", 2, false)})};
  RankerModel m;
  TrainConfig cfg;
  cfg.epochs = 0;
  auto trace = train_sentence_ranker(data, cfg, m);
  CHECK(trace.empty());
  for (double w : m.sentence_weights) CHECK(w == 0.0);
  CHECK(m.sentence_bias == 0.0);
}

TEST_CASE("training losses decrease monotonically on fixture data") {
  std::vector<LabeledQuestion> data;
  for (int i = 0; i < 10; ++i) {
    auto useful = make_candidate("useful sentence mentions question words", 1, true);
    auto noise1 = make_candidate("irrelevant content", 3, false);
    auto noise2 = make_candidate("other noise", 4, false);
    data.push_back(make_question({useful, noise1, noise2},
                                 "question words q" + std::to_string(i)));
  }
  RankerModel m;
  TrainConfig cfg;
  auto strace = train_sentence_ranker(data, cfg, m);
  auto ttrace = train_template_ranker(data, cfg, m);
  REQUIRE(strace.size() == 200);
  for (std::size_t i = 1; i < strace.size(); ++i) CHECK(strace[i] <= strace[i - 1] + 1e-12);
  for (std::size_t i = 1; i < ttrace.size(); ++i) CHECK(ttrace[i] <= ttrace[i - 1] + 1e-12);
}

TEST_CASE("template ranker drives all-true labels toward 1") {
  std::vector<LabeledQuestion> data{
      make_question({make_candidate("a", 1, true), make_candidate("b", 2, true)})};
  RankerModel m;
  TrainConfig cfg;
  cfg.epochs = 500;
  train_template_ranker(data, cfg, m);
  auto psi = score_templates(m, data[0]);
  CHECK(psi[0] > 0.9);
  CHECK(psi[1] > 0.9);
}

TEST_CASE("synthetic keyword-to-template mapping is learnable") {
  // Questions containing "maximum" label template 1; "decreases" template 4.
  std::mt19937_64 rng(47);
  std::bernoulli_distribution coin(0.5);
  auto build = [&](int n, int offset) {
    std::vector<LabeledQuestion> out;
    for (int i = 0; i < n; ++i) {
      (void)offset;
      bool is_max = coin(rng);
      const char* filler[] = {"lake", "rain", "city", "farm", "coast",
                              "river", "hill", "plain", "delta", "basin"};
      std::string noise = filler[i % 10];
      std::string q = is_max ? "what is the maximum near the " + noise
                             : "where the value decreases near the " + noise;
      auto c1 = make_candidate("series reaches a maximum", 1, is_max);
      auto c4 = make_candidate("series decreases", 4, !is_max);
      out.push_back(make_question({c1, c4}, q));
    }
    return out;
  };
  auto train = build(120, 0);
  auto held = build(40, 1000);
  RankerModel m;
  TrainConfig cfg;
  cfg.epochs = 400;
  train_template_ranker(train, cfg, m);
  int correct = 0;
  for (const auto& lq : held) {
    auto psi = score_templates(m, lq);
    bool expect_max = derive_template_labels(lq.candidates)[0];
    if ((psi[0] > psi[3]) == expect_max) ++correct;
  }
  CHECK(static_cast<double>(correct) / held.size() >= 0.95);
}

TEST_CASE("unlabeled corpus is a training error") {
  auto data = std::vector<LabeledQuestion>{
      make_question({make_candidate("a", 1, false), make_candidate("b", 2)})};
  RankerModel m;
  TrainConfig cfg;
  CHECK_THROWS_AS(train_sentence_ranker(data, cfg, m), std::invalid_argument);
}

TEST_CASE("model serialization round-trips to identical scores") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1, 1);
  RankerModel m;
  for (auto& w : m.sentence_weights) w = u(rng);
  m.sentence_bias = u(rng);
  for (auto& w : m.template_weights) w = u(rng);
  for (auto& b : m.template_bias) b = u(rng);
  m.epochs = 200;
  m.learning_rate = 0.1;

  auto m2 = RankerModel::deserialize(m.serialize());
  auto lq = make_question({make_candidate("alpha one", 1), make_candidate("beta two", 2)},
                          "a question about alpha", "passage text");
  CHECK(score_sentences(m, lq) == score_sentences(m2, lq));
  CHECK(score_templates(m, lq) == score_templates(m2, lq));
  CHECK(m.serialize() == m2.serialize());

  // schema mismatch is refused
  auto text = m.serialize();
  auto pos = text.find("\"schema_hash\": \"");
  text[pos + 16] = text[pos + 16] == '0' ? '1' : '0';
  CHECK_THROWS_AS(RankerModel::deserialize(text), ModelError);
  CHECK_THROWS_AS(RankerModel::deserialize("{not json"), ModelError);
}

TEST_CASE("baseline rankings") {
  auto lq = make_question(
      {make_candidate("zebra walrus yak", 1), make_candidate("three question tokens here", 2),
       make_candidate("no", 3)},
      "three question tokens matter");
  auto lex = baseline_rank(BaselineStrategy::Lexical, lq);
  CHECK(lex[0] == 1);  // shares three question tokens

  auto len = baseline_rank(BaselineStrategy::Length, lq);
  CHECK(len == std::vector<std::size_t>{2, 0, 1});

  auto r1 = baseline_rank(BaselineStrategy::Random, lq, 99);
  auto r2 = baseline_rank(BaselineStrategy::Random, lq, 99);
  CHECK(r1 == r2);
  std::vector<std::size_t> sorted = r1;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::size_t>{0, 1, 2});
}
