#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

namespace shexatlas {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bertin's visual variables, in canonical order.
inline const std::vector<std::string>& bertin_variables() {
  static const std::vector<std::string> vars = {"shape",       "texture",    "brightness",
                                                "size",        "color",      "orientation",
                                                "horizontal",  "vertical"};
  return vars;
}

struct ShapeGroup {
  std::string main_group;   // e.g. "region" vs "line"
  std::string basic_group;  // e.g. "arrow"
};

/// Declarative description of a notation: which value token each graphical
/// symbol takes on each visual variable.
struct NotationSpec {
  std::vector<std::string> symbols;
  std::vector<std::string> variables;
  std::map<std::pair<std::string, std::string>, std::string> assignments;  // (symbol, variable)
  std::map<std::string, ShapeGroup> shape_groups;                         // shape token -> groups
  std::map<std::string, double> weights;
  /// Keyed (smaller symbol, larger symbol, variable).
  std::map<std::tuple<std::string, std::string, std::string>, double> vvd_overrides;
  std::map<std::string, bool> textual_overload;

  const std::string* value(const std::string& symbol, const std::string& variable) const;
  void set_override(const std::string& g, const std::string& h, const std::string& variable,
                    double value);
  /// Throws MetricError on any invariant violation.
  void validate() const;
};

NotationSpec notation_from_json(const nlohmann::json& doc);

double vvd(const NotationSpec& spec, const std::string& variable, const std::string& g,
           const std::string& h);
double visual_distance(const NotationSpec& spec, const std::string& g, const std::string& h);
/// Differing assigned variables over the 8 Bertin variables.
double redundant_coding(const NotationSpec& spec, const std::string& g, const std::string& h);

double metric_VD(const NotationSpec& spec);
double metric_RC(const NotationSpec& spec);
double metric_PPO(const NotationSpec& spec);
double metric_TD(const NotationSpec& spec);

inline constexpr double kDiscriminabilityThreshold = 0.5;

struct MetricReport {
  std::vector<std::string> symbols;
  std::vector<std::vector<double>> vd_matrix;
  std::vector<std::vector<double>> vr_matrix;
  double vd = 0, rc = 0, ppo = 0, td = 0, aggregate = 0;
  bool passes_threshold = false;
};

MetricReport aggregate_discriminability(const NotationSpec& spec);

nlohmann::json to_json(const MetricReport& report);
/// Plain-text tables rounded to two decimals.
std::string format_report(const MetricReport& report);

// Study precision -----------------------------------------------------------

struct StudyRecord {
  std::string participant;
  double elapsed_seconds = 0;
  double success_rate = 0;
};

/// CSV with header "participant,elapsed_seconds,success_rate".
std::vector<StudyRecord> parse_study_csv(std::string_view text);

/// min(T) / T_p * S_p per participant, in input order.
std::vector<std::pair<std::string, double>> precision(const std::vector<StudyRecord>& records);

std::string format_precision(const std::vector<std::pair<std::string, double>>& table);

}  // namespace shexatlas
