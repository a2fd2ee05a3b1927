#pragma once

#include "ttg/table.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ttg {

// Template index tau is the kind's ordinal; NonNumeric is the fallback (0).
enum class FactKind {
  NonNumeric = 0,
  Extremum = 1,
  SpecialValue = 2,
  AvgComparison = 3,
  Monotonicity = 4,
  Trend = 5,
  RangeComparison = 6,
};

enum class Direction {
  Report,  // kinds without a direction (SpecialValue, NonNumeric)
  Max,
  Min,
  Above,
  Below,
  Increase,
  Decrease,
  Greater,
  Less,
  IncThenDec,
  DecThenInc,
  Flat,
  Mixed,
};

const char* kind_name(FactKind k);
const char* direction_name(Direction d);
int template_index(FactKind k);

struct Fact {
  FactKind kind = FactKind::NonNumeric;
  Direction direction = Direction::Report;
  std::string series_label;
  std::string second_series_label;  // RangeComparison only
  std::string start_label;
  std::string end_label;
  std::string point_label;           // single-point facts
  std::optional<double> value;       // Extremum / SpecialValue / NonNumeric
  std::string value_text;            // surface form, input precision preserved
};

// Equality tolerance for run segmentation and trend collapsing.
bool nearly_equal(double a, double b);

// One max fact and one min fact; tie-break earliest occurrence. Series with
// an empty or text cell yield no facts.
std::vector<Fact> extremum_facts(const Series& s);

// One fact per point whose label occurs in q_context; if none match, one
// fact per point (ranking decides).
std::vector<Fact> special_value_facts(const Series& s, const std::string& q_context);

// Maximal runs of length >= 2 strictly above / below the series mean;
// values equal to the mean (within tolerance) break runs.
std::vector<Fact> avg_comparison_facts(const Series& s);

// Maximal strictly monotone runs spanning >= 3 points.
std::vector<Fact> monotonicity_facts(const Series& s);

// Whole-series classification into increase / decrease / inc_then_dec /
// dec_then_inc / flat / mixed. Needs >= 3 numeric values.
std::optional<Fact> trend_fact(const Series& s);

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximal runs of length >= 2 where a dominates b pointwise (and the
// symmetric less runs); ties break runs. Point labels must align.
std::vector<Fact> range_comparison_facts(const Series& a, const Series& b);

// One fact per text cell: (row header, col header, cell text).
std::vector<Fact> nonnumeric_facts(const Table& t);

// Union of all operations over every row and column series of every table,
// range comparison over all same-axis pairs. Deterministic order: by table,
// axis (rows first), index, kind ordinal.
std::vector<Fact> generate_all(const std::vector<Table>& tables,
                               const std::string& q_context);

}  // namespace ttg
