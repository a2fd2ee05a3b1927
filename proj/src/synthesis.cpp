#include "ttg/synthesis.hpp"

#include "ttg/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ttg {

namespace {

constexpr double kRelTol = 1e-9;

// Pointwise sign classification with runs: +1 / -1 / 0 per point, then
// maximal same-sign runs of at least min_len points.
struct Run {
  int sign;
  std::size_t begin, end;  // inclusive point indices
};

std::vector<Run> maximal_runs(const std::vector<int>& signs, std::size_t min_len) {
  std::vector<Run> runs;
  std::size_t i = 0;
  while (i < signs.size()) {
    if (signs[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < signs.size() && signs[j + 1] == signs[i]) ++j;
    if (j - i + 1 >= min_len) runs.push_back({signs[i], i, j});
    i = j + 1;
  }
  return runs;
}

std::string value_surface(const Cell& c) {
  std::string s = trim(c.raw_text);
  return s.empty() ? c.raw_text : s;
}

}  // namespace

const char* kind_name(FactKind k) {
  switch (k) {
    case FactKind::NonNumeric: return "non_numeric";
    case FactKind::Extremum: return "extremum";
    case FactKind::SpecialValue: return "special_value";
    case FactKind::AvgComparison: return "avg_comparison";
    case FactKind::Monotonicity: return "monotonicity";
    case FactKind::Trend: return "trend";
    case FactKind::RangeComparison: return "range_comparison";
  }
  return "unknown";
}

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Report: return "report";
    case Direction::Max: return "max";
    case Direction::Min: return "min";
    case Direction::Above: return "above";
    case Direction::Below: return "below";
    case Direction::Increase: return "increase";
    case Direction::Decrease: return "decrease";
    case Direction::Greater: return "greater";
    case Direction::Less: return "less";
    case Direction::IncThenDec: return "inc_then_dec";
    case Direction::DecThenInc: return "dec_then_inc";
    case Direction::Flat: return "flat";
    case Direction::Mixed: return "mixed";
  }
  return "unknown";
}

int template_index(FactKind k) { return static_cast<int>(k); }

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <=
         kRelTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::vector<Fact> extremum_facts(const Series& s) {
  std::vector<Fact> facts;
  if (s.values.size() < 2 || !s.all_numeric()) return facts;
  std::size_t max_i = 0, min_i = 0;
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    if (s.values[i].numeric_value > s.values[max_i].numeric_value) max_i = i;
    if (s.values[i].numeric_value < s.values[min_i].numeric_value) min_i = i;
  }
  for (auto [dir, idx] : {std::pair{Direction::Max, max_i},
                          std::pair{Direction::Min, min_i}}) {
    Fact f;
    f.kind = FactKind::Extremum;
    f.direction = dir;
    f.series_label = s.label;
    f.point_label = s.point_labels[idx];
    f.value = s.values[idx].numeric_value;
    f.value_text = value_surface(s.values[idx]);
    facts.push_back(std::move(f));
  }
  return facts;
}

std::vector<Fact> special_value_facts(const Series& s, const std::string& q_context) {
  std::vector<Fact> facts;
  if (s.values.empty() || !s.all_numeric()) return facts;
  auto make = [&](std::size_t i) {
    Fact f;
    f.kind = FactKind::SpecialValue;
    f.series_label = s.label;
    f.point_label = s.point_labels[i];
    f.value = s.values[i].numeric_value;
    f.value_text = value_surface(s.values[i]);
    return f;
  };
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (contains_substring(q_context, s.point_labels[i]))
      facts.push_back(make(i));
  if (facts.empty())  // no mention: every point is a candidate
    for (std::size_t i = 0; i < s.values.size(); ++i) facts.push_back(make(i));
  return facts;
}

std::vector<Fact> avg_comparison_facts(const Series& s) {
  std::vector<Fact> facts;
  if (s.values.size() < 2 || !s.all_numeric()) return facts;
  double mean = 0.0;
  for (const auto& c : s.values) mean += c.numeric_value;
  mean /= static_cast<double>(s.values.size());
  std::vector<int> signs(s.values.size(), 0);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    double v = s.values[i].numeric_value;
    if (!nearly_equal(v, mean)) signs[i] = v > mean ? 1 : -1;
  }
  for (const Run& r : maximal_runs(signs, 2)) {
    Fact f;
    f.kind = FactKind::AvgComparison;
    f.direction = r.sign > 0 ? Direction::Above : Direction::Below;
    f.series_label = s.label;
    f.start_label = s.point_labels[r.begin];
    f.end_label = s.point_labels[r.end];
    facts.push_back(std::move(f));
  }
  return facts;
}

std::vector<Fact> monotonicity_facts(const Series& s) {
  std::vector<Fact> facts;
  if (s.values.size() < 2 || !s.all_numeric()) return facts;
  // Sign of each adjacent delta; a monotone run of d deltas spans d+1 points.
  std::vector<int> delta(s.values.size() - 1, 0);
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
    double a = s.values[i].numeric_value, b = s.values[i + 1].numeric_value;
    if (!nearly_equal(a, b)) delta[i] = b > a ? 1 : -1;
  }
  for (const Run& r : maximal_runs(delta, 2)) {  // >= 2 deltas = >= 3 points
    Fact f;
    f.kind = FactKind::Monotonicity;
    f.direction = r.sign > 0 ? Direction::Increase : Direction::Decrease;
    f.series_label = s.label;
    f.start_label = s.point_labels[r.begin];
    f.end_label = s.point_labels[r.end + 1];
    facts.push_back(std::move(f));
  }
  return facts;
}

std::optional<Fact> trend_fact(const Series& s) {
  if (s.values.size() < 3 || !s.all_numeric()) return std::nullopt;
  // Collapse consecutive nearly-equal values, then merge delta signs.
  std::vector<double> collapsed;
  for (const auto& c : s.values) {
    if (collapsed.empty() || !nearly_equal(collapsed.back(), c.numeric_value))
      collapsed.push_back(c.numeric_value);
  }
  std::vector<int> blocks;
  for (std::size_t i = 0; i + 1 < collapsed.size(); ++i) {
    int sign = collapsed[i + 1] > collapsed[i] ? 1 : -1;
    if (blocks.empty() || blocks.back() != sign) blocks.push_back(sign);
  }
  Fact f;
  f.kind = FactKind::Trend;
  f.series_label = s.label;
  if (blocks.empty())
    f.direction = Direction::Flat;
  else if (blocks.size() == 1)
    f.direction = blocks[0] > 0 ? Direction::Increase : Direction::Decrease;
  else if (blocks.size() == 2)
    f.direction = blocks[0] > 0 ? Direction::IncThenDec : Direction::DecThenInc;
  else
    f.direction = Direction::Mixed;
  return f;
}

std::vector<Fact> range_comparison_facts(const Series& a, const Series& b) {
  if (a.point_labels != b.point_labels)
    throw AlignmentError("range comparison requires aligned point labels");
  std::vector<Fact> facts;
  if (a.values.empty() || !a.all_numeric() || !b.all_numeric()) return facts;
  std::vector<int> signs(a.values.size(), 0);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double x = a.values[i].numeric_value, y = b.values[i].numeric_value;
    if (!nearly_equal(x, y)) signs[i] = x > y ? 1 : -1;
  }
  for (const Run& r : maximal_runs(signs, 2)) {
    Fact f;
    f.kind = FactKind::RangeComparison;
    f.direction = r.sign > 0 ? Direction::Greater : Direction::Less;
    f.series_label = a.label;
    f.second_series_label = b.label;
    f.start_label = a.point_labels[r.begin];
    f.end_label = a.point_labels[r.end];
    facts.push_back(std::move(f));
  }
  return facts;
}

std::vector<Fact> nonnumeric_facts(const Table& t) {
  std::vector<Fact> facts;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const Cell& c = t.cells[i][j];
      if (c.kind != CellKind::Text) continue;
      Fact f;
      f.kind = FactKind::NonNumeric;
      f.series_label = t.row_headers[i];
      f.point_label = t.col_headers[j];
      f.value_text = value_surface(c);
      facts.push_back(std::move(f));
    }
  }
  return facts;
}

std::vector<Fact> generate_all(const std::vector<Table>& tables,
                               const std::string& q_context) {
  std::vector<Fact> out;
  auto append = [&out](std::vector<Fact> facts) {
    for (auto& f : facts) out.push_back(std::move(f));
  };
  for (const Table& t : tables) {
    append(nonnumeric_facts(t));
    for (Axis axis : {Axis::Row, Axis::Column}) {
      std::size_t n = axis == Axis::Row ? t.rows() : t.cols();
      std::vector<Series> series;
      series.reserve(n);
      for (std::size_t i = 0; i < n; ++i)
        series.push_back(extract_series(t, axis, i));
      for (std::size_t i = 0; i < n; ++i) {
        const Series& s = series[i];
        append(extremum_facts(s));
        append(special_value_facts(s, q_context));
        append(avg_comparison_facts(s));
        append(monotonicity_facts(s));
        if (auto f = trend_fact(s)) out.push_back(std::move(*f));
        for (std::size_t j = i + 1; j < n; ++j)
          if (s.all_numeric() && series[j].all_numeric())
            append(range_comparison_facts(s, series[j]));
      }
    }
  }
  return out;
}

}  // namespace ttg
