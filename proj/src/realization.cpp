#include "ttg/realization.hpp"

#include "ttg/text.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ttg {

namespace {

const char* kBuiltinTemplates = R"(# Default English templates, keyed kind.direction.
extremum.max = {series} reaches a maximum of {value} at {point}.
extremum.min = {series} reaches a minimum of {value} at {point}.
special_value.report = {series} at {point} is {value}.
avg_comparison.above = {series} is relatively large between {start} and {end}.
avg_comparison.below = {series} is relatively small between {start} and {end}.
monotonicity.increase = {series} increases between {start} and {end}.
monotonicity.decrease = {series} decreases between {start} and {end}.
trend.increase = {series} generally increases.
trend.decrease = {series} generally decreases.
trend.inc_then_dec = {series} generally increases and then decreases.
trend.dec_then_inc = {series} generally decreases and then increases.
trend.flat = {series} stays generally stable.
trend.mixed = {series} fluctuates without a clear trend.
range_comparison.greater = {series} is greater than {series2} between {start} and {end}.
range_comparison.less = {series} is less than {series2} between {start} and {end}.
non_numeric.report = {series} {point} is {value}.
)";

// Drops the longest common leading word sequence of `end` and `start`,
// keeping `end` intact when nothing would remain.
std::string elide_shared_prefix(const std::string& start, const std::string& end) {
  auto words = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
  };
  auto sw = words(start), ew = words(end);
  std::size_t common = 0;
  while (common < sw.size() && common < ew.size() && sw[common] == ew[common])
    ++common;
  if (common == 0 || common == ew.size()) return end;
  std::string out;
  for (std::size_t i = common; i < ew.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += ew[i];
  }
  return out;
}

}  // namespace

TemplateSet TemplateSet::builtin_english() { return parse(kBuiltinTemplates); }

TemplateSet TemplateSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RenderError("cannot open template file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

TemplateSet TemplateSet::parse(const std::string& text) {
  TemplateSet ts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw RenderError("malformed template line: " + line);
    ts.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return ts;
}

void TemplateSet::set(const std::string& key, const std::string& pattern) {
  patterns_[key] = pattern;
}

const std::string& TemplateSet::pattern_for(const Fact& f) const {
  std::string key = std::string(kind_name(f.kind)) + "." + direction_name(f.direction);
  auto it = patterns_.find(key);
  if (it == patterns_.end()) throw RenderError("no template for " + key);
  return it->second;
}

Candidate render(const Fact& f, const TemplateSet& ts) {
  const std::string& pattern = ts.pattern_for(f);
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] != '{') {
      out.push_back(pattern[i++]);
      continue;
    }
    auto close = pattern.find('}', i);
    if (close == std::string::npos) throw RenderError("unbalanced placeholder");
    std::string name = pattern.substr(i + 1, close - i - 1);
    std::string value;
    if (name == "series") value = f.series_label;
    else if (name == "series2") value = f.second_series_label;
    else if (name == "start") value = f.start_label;
    else if (name == "end") value = elide_shared_prefix(f.start_label, f.end_label);
    else if (name == "end_full") value = f.end_label;
    else if (name == "point") value = f.point_label;
    else if (name == "value") value = f.value_text;
    else throw RenderError("unknown placeholder {" + name + "}");
    if (value.empty())
      throw RenderError("fact provides no value for {" + name + "}");
    out += value;
    i = close + 1;
  }
  Candidate c;
  c.sentence = std::move(out);
  c.template_index = template_index(f.kind);
  c.fact = f;
  return c;
}

std::vector<Candidate> render_all(const std::vector<Fact>& facts,
                                  const TemplateSet& ts) {
  std::vector<Candidate> out;
  out.reserve(facts.size());
  for (const auto& f : facts) out.push_back(render(f, ts));
  return out;
}

std::string templation_paragraph(const std::vector<Candidate>& cands,
                                 std::size_t budget_chars) {
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cands[a].sentence.size() < cands[b].sentence.size();
  });
  std::string out;
  for (std::size_t idx : order) {
    const std::string& s = cands[idx].sentence;
    std::size_t needed = out.empty() ? s.size() : out.size() + 1 + s.size();
    if (needed > budget_chars) break;
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace ttg
