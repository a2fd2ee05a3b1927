#pragma once

#include "ttg/synthesis.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ttg {

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Candidate {
  std::string sentence;
  int template_index = 0;  // tau, 1..6; 0 for NonNumeric
  Fact fact;
  std::optional<bool> useful;
  std::optional<double> score;
};

// Patterns keyed "kind.direction", placeholders {series} {series2} {start}
// {end} {point} {value}. {end} elides the leading words it shares with
// {start} ("Year 2000".."Year 2003" renders "between Year 2000 and 2003");
// {end_full} keeps the label verbatim.
class TemplateSet {
 public:
  static TemplateSet builtin_english();
  static TemplateSet load(const std::string& path);
  static TemplateSet parse(const std::string& text);

  void set(const std::string& key, const std::string& pattern);
  const std::string& pattern_for(const Fact& f) const;  // throws RenderError

  std::size_t size() const { return patterns_.size(); }

 private:
  std::map<std::string, std::string> patterns_;
};

Candidate render(const Fact& f, const TemplateSet& ts);

std::vector<Candidate> render_all(const std::vector<Fact>& facts,
                                  const TemplateSet& ts);

// Templation baseline: sentences sorted ascending by character length
// (ties keep original order), joined by single spaces, truncated at the
// last whole sentence fitting the budget.
std::string templation_paragraph(const std::vector<Candidate>& cands,
                                 std::size_t budget_chars);

}  // namespace ttg
