#include <doctest.h>

#include "ttg/realization.hpp"
#include "ttg/table.hpp"

#include <algorithm>

using namespace ttg;

namespace {

Fact extremum_max() {
  Fact f;
  f.kind = FactKind::Extremum;
  f.direction = Direction::Max;
  f.series_label = "ELP";
  f.point_label = "Year 2000";
  f.value = 2.504;
  f.value_text = "2.504";
  return f;
}

}  // namespace

TEST_CASE("render reproduces the reference sentences") {
  auto ts = TemplateSet::builtin_english();

  CHECK(render(extremum_max(), ts).sentence ==
        "ELP reaches a maximum of 2.504 at Year 2000.");

  Fact mono;
  mono.kind = FactKind::Monotonicity;
  mono.direction = Direction::Decrease;
  mono.series_label = "ELP";
  mono.start_label = "Year 2000";
  mono.end_label = "Year 2003";
  CHECK(render(mono, ts).sentence == "ELP decreases between Year 2000 and 2003.");

  Fact avg;
  avg.kind = FactKind::AvgComparison;
  avg.direction = Direction::Above;
  avg.series_label = "ELP";
  avg.start_label = "Year 2000";
  avg.end_label = "Year 2002";
  CHECK(render(avg, ts).sentence == "ELP is relatively large between Year 2000 and 2002.");

  Fact trend;
  trend.kind = FactKind::Trend;
  trend.direction = Direction::IncThenDec;
  trend.series_label = "ELP";
  CHECK(render(trend, ts).sentence == "ELP generally increases and then decreases.");

  Fact special;
  special.kind = FactKind::SpecialValue;
  special.series_label = "ELP";
  special.point_label = "Year 2000";
  special.value = 2.504;
  special.value_text = "2.504";
  auto cand = render(special, ts);
  CHECK(cand.sentence == "ELP at Year 2000 is 2.504.");
  CHECK(cand.template_index == 2);
}

TEST_CASE("interval end labels keep distinct prefixes") {
  auto ts = TemplateSet::builtin_english();
  Fact mono;
  mono.kind = FactKind::Monotonicity;
  mono.direction = Direction::Increase;
  mono.series_label = "S";
  mono.start_label = "March";
  mono.end_label = "August";
  CHECK(render(mono, ts).sentence == "S increases between March and August.");
}

TEST_CASE("render errors") {
  TemplateSet empty;
  CHECK_THROWS_AS(render(extremum_max(), empty), RenderError);

  TemplateSet bad;
  bad.set("extremum.max", "{series} peaks at {start}.");  // extremum has no start
  CHECK_THROWS_AS(render(extremum_max(), bad), RenderError);
}

TEST_CASE("template file parsing") {
  auto ts = TemplateSet::parse(
      "# comment\n"
      "\n"
      "extremum.max = {series} tops out at {value} ({point}).\n");
  CHECK(ts.size() == 1);
  CHECK(render(extremum_max(), ts).sentence == "ELP tops out at 2.504 (Year 2000).");
  CHECK_THROWS_AS(TemplateSet::parse("no equals sign"), RenderError);
}

TEST_CASE("render is injective on distinct facts of one kind") {
  auto ts = TemplateSet::builtin_english();
  Fact a = extremum_max();
  Fact b = extremum_max();
  b.point_label = "Year 1998";
  b.value_text = "2.465";
  CHECK(render(a, ts).sentence != render(b, ts).sentence);
}

TEST_CASE("templation paragraph sorts ascending by length and truncates whole sentences") {
  auto mk = [](const std::string& s) {
    Candidate c;
    c.sentence = s;
    return c;
  };
  std::vector<Candidate> cands = {mk(std::string(30, 'a') + "."),
                                  mk(std::string(10, 'b') + "."),
                                  mk(std::string(20, 'c') + ".")};
  auto para = templation_paragraph(cands, 10000);
  CHECK(para.find('b') < para.find('c'));
  CHECK(para.find('c') < para.find('a'));

  CHECK(templation_paragraph(cands, 5).empty());

  // never splits a sentence: budget cuts after the second
  auto cut = templation_paragraph(cands, 11 + 1 + 21);
  CHECK(cut == std::string(10, 'b') + ". " + std::string(20, 'c') + ".");

  // ties keep original order
  std::vector<Candidate> tied = {mk("xx."), mk("yy."), mk("zz.")};
  CHECK(templation_paragraph(tied, 100) == "xx. yy. zz.");
}

TEST_CASE("ELP paragraph contains the reference sentences in length order") {
  auto t = parse_csv_table(
      ",Year 1998,Year 1999,Year 2000,Year 2001,Year 2002,Year 2003\n"
      "ELP,2.465,2.476,2.504,2.490,2.482,2.473\n");
  auto ts = TemplateSet::builtin_english();
  auto cands = render_all(generate_all({t}, "after Year 2000"), ts);
  auto para = templation_paragraph(cands, 100000);
  for (const char* s : {"ELP at Year 2000 is 2.504.",
                        "ELP decreases between Year 2000 and 2003.",
                        "ELP generally increases and then decreases.",
                        "ELP reaches a maximum of 2.504 at Year 2000.",
                        "ELP is relatively large between Year 2000 and 2002."})
    CHECK(para.find(s) != std::string::npos);

  // sort oracle over rendered lengths
  std::vector<std::size_t> lengths;
  std::size_t pos = 0;
  while (pos < para.size()) {
    auto dot = para.find(". ", pos);
    if (dot == std::string::npos) {
      lengths.push_back(para.size() - pos);
      break;
    }
    lengths.push_back(dot + 1 - pos);
    pos = dot + 2;
  }
  CHECK(std::is_sorted(lengths.begin(), lengths.end()));
}
