#include "shexatlas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace shexatlas {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

bool has_symbol(const NotationSpec& spec, const std::string& s) {
  return std::find(spec.symbols.begin(), spec.symbols.end(), s) != spec.symbols.end();
}

bool has_variable(const NotationSpec& spec, const std::string& v) {
  return std::find(spec.variables.begin(), spec.variables.end(), v) != spec.variables.end();
}

void require_pair(const NotationSpec& spec, const std::string& g, const std::string& h) {
  if (!has_symbol(spec, g)) throw MetricError("unknown symbol '" + g + "'");
  if (!has_symbol(spec, h)) throw MetricError("unknown symbol '" + h + "'");
}

double shape_difference(const NotationSpec& spec, const std::string& a, const std::string& b) {
  if (a == b) return 0.0;
  const ShapeGroup& ga = spec.shape_groups.at(a);
  const ShapeGroup& gb = spec.shape_groups.at(b);
  if (ga.main_group != gb.main_group) return 1.0;
  if (ga.basic_group == gb.basic_group) return 0.5;
  return 1.0;
}

void require_at_least_two(const NotationSpec& spec) {
  spec.validate();
  if (spec.symbols.size() < 2) throw MetricError("metric needs at least 2 graphical symbols");
}

// Mean over ordered pairs g != h; the diagonal is zero by definition.
double off_diagonal_mean(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sum += m[i][j];
  return sum / static_cast<double>(n * n - n);
}

template <typename PairFn>
std::vector<std::vector<double>> symmetric_matrix(const NotationSpec& spec, PairFn fn) {
  const std::size_t n = spec.symbols.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = fn(spec.symbols[i], spec.symbols[j]);
  return m;
}

}  // namespace

const std::string* NotationSpec::value(const std::string& symbol, const std::string& variable) const {
  auto it = assignments.find({symbol, variable});
  return it == assignments.end() ? nullptr : &it->second;
}

void NotationSpec::set_override(const std::string& g, const std::string& h,
                                const std::string& variable, double v) {
  auto key = g <= h ? std::make_tuple(g, h, variable) : std::make_tuple(h, g, variable);
  auto [it, inserted] = vvd_overrides.emplace(key, v);
  if (!inserted && it->second != v)
    throw MetricError("asymmetric vvd override for " + g + "/" + h + " on " + variable);
}

void NotationSpec::validate() const {
  if (symbols.empty()) throw MetricError("notation has no graphical symbols");
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.empty()) throw MetricError("empty symbol id");
    if (!seen.insert(s).second) throw MetricError("duplicate symbol '" + s + "'");
  }
  seen.clear();
  const auto& bertin = bertin_variables();
  for (const auto& v : variables) {
    if (std::find(bertin.begin(), bertin.end(), v) == bertin.end())
      throw MetricError("'" + v + "' is not a Bertin visual variable");
    if (!seen.insert(v).second) throw MetricError("duplicate variable '" + v + "'");
    auto w = weights.find(v);
    if (w == weights.end()) throw MetricError("no weight for variable '" + v + "'");
    if (!(w->second > 0)) throw MetricError("weight for '" + v + "' must be positive");
  }
  for (const auto& [key, token] : assignments) {
    if (!has_symbol(*this, key.first)) throw MetricError("assignment for unknown symbol '" + key.first + "'");
    if (!has_variable(*this, key.second))
      throw MetricError("assignment for unlisted variable '" + key.second + "'");
    if (key.second == "shape" && !shape_groups.count(token))
      throw MetricError("shape token '" + token + "' has no shape group");
  }
  for (const auto& [key, v] : vvd_overrides) {
    const auto& [g, h, var] = key;
    if (!has_symbol(*this, g) || !has_symbol(*this, h)) throw MetricError("override for unknown symbol");
    if (!has_variable(*this, var)) throw MetricError("override for unlisted variable '" + var + "'");
    if (!(v >= 0.0 && v <= 1.0)) throw MetricError("override value outside [0,1]");
  }
  for (const auto& [s, flag] : textual_overload)
    if (!has_symbol(*this, s)) throw MetricError("textual_overload for unknown symbol '" + s + "'");
}

NotationSpec notation_from_json(const nlohmann::json& doc) {
  try {
    NotationSpec spec;
    if (!doc.is_object()) throw MetricError("notation spec must be a JSON object");
    spec.symbols = doc.at("symbols").get<std::vector<std::string>>();
    spec.variables = doc.at("variables").get<std::vector<std::string>>();
    spec.weights = doc.at("weights").get<std::map<std::string, double>>();
    if (doc.contains("assignments")) {
      for (const auto& [symbol, vars] : doc.at("assignments").items())
        for (const auto& [var, token] : vars.items()) spec.assignments[{symbol, var}] = token.get<std::string>();
    }
    if (doc.contains("shape_groups")) {
      for (const auto& [token, g] : doc.at("shape_groups").items())
        spec.shape_groups[token] = {g.at("main_group").get<std::string>(), g.at("basic_group").get<std::string>()};
    }
    if (doc.contains("pairwise_vvd_overrides")) {
      for (const auto& o : doc.at("pairwise_vvd_overrides")) {
        auto pair = o.at("symbols").get<std::vector<std::string>>();
        if (pair.size() != 2) throw MetricError("override needs exactly two symbols");
        spec.set_override(pair[0], pair[1], o.at("variable").get<std::string>(), o.at("value").get<double>());
      }
    }
    if (doc.contains("textual_overload"))
      spec.textual_overload = doc.at("textual_overload").get<std::map<std::string, bool>>();
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw MetricError(std::string("malformed notation spec: ") + e.what());
  }
}

double vvd(const NotationSpec& spec, const std::string& variable, const std::string& g,
           const std::string& h) {
  require_pair(spec, g, h);
  if (!has_variable(spec, variable)) throw MetricError("unknown variable '" + variable + "'");
  if (g == h) return 0.0;
  auto key = g <= h ? std::make_tuple(g, h, variable) : std::make_tuple(h, g, variable);
  if (auto it = spec.vvd_overrides.find(key); it != spec.vvd_overrides.end()) return it->second;
  const std::string* a = spec.value(g, variable);
  const std::string* b = spec.value(h, variable);
  if (!a || !b) return 0.0;  // variable not used by this pair
  if (variable == "shape") return shape_difference(spec, *a, *b);
  return *a == *b ? 0.0 : 1.0;
}

double visual_distance(const NotationSpec& spec, const std::string& g, const std::string& h) {
  require_pair(spec, g, h);
  double norm = 0, sum = 0;
  for (const auto& v : spec.variables) {
    double w = spec.weights.at(v);
    norm += w;
    sum += w * vvd(spec, v, g, h);
  }
  return norm > 0 ? sum / norm : 0.0;
}

double redundant_coding(const NotationSpec& spec, const std::string& g, const std::string& h) {
  require_pair(spec, g, h);
  int differing = 0;
  for (const auto& v : spec.variables) {
    const std::string* a = spec.value(g, v);
    const std::string* b = spec.value(h, v);
    if (a && b && *a != *b) ++differing;
  }
  return differing / static_cast<double>(bertin_variables().size());
}

double metric_VD(const NotationSpec& spec) {
  require_at_least_two(spec);
  return off_diagonal_mean(symmetric_matrix(
      spec, [&](const std::string& g, const std::string& h) { return visual_distance(spec, g, h); }));
}

double metric_RC(const NotationSpec& spec) {
  require_at_least_two(spec);
  return off_diagonal_mean(symmetric_matrix(
      spec, [&](const std::string& g, const std::string& h) { return redundant_coding(spec, g, h); }));
}

double metric_PPO(const NotationSpec& spec) {
  if (spec.symbols.empty()) throw MetricError("notation has no graphical symbols");
  if (spec.symbols.size() == 1) return 1.0;
  std::size_t popping = 0;
  for (const auto& g : spec.symbols) {
    bool unique_somewhere = false;
    for (const auto& v : spec.variables) {
      const std::string* mine = spec.value(g, v);
      if (!mine) continue;
      bool shared = std::any_of(spec.symbols.begin(), spec.symbols.end(), [&](const std::string& h) {
        const std::string* other = spec.value(h, v);
        return h != g && other && *other == *mine;
      });
      if (!shared) {
        unique_somewhere = true;
        break;
      }
    }
    if (unique_somewhere) ++popping;
  }
  return static_cast<double>(popping) / static_cast<double>(spec.symbols.size());
}

double metric_TD(const NotationSpec& spec) {
  if (spec.symbols.empty()) throw MetricError("notation has no graphical symbols");
  std::size_t overloaded = 0;
  for (const auto& g : spec.symbols) {
    auto it = spec.textual_overload.find(g);
    if (it != spec.textual_overload.end() && it->second) ++overloaded;
  }
  return 1.0 - static_cast<double>(overloaded) / static_cast<double>(spec.symbols.size());
}

MetricReport aggregate_discriminability(const NotationSpec& spec) {
  spec.validate();
  require_at_least_two(spec);
  MetricReport r;
  r.symbols = spec.symbols;
  r.vd_matrix = symmetric_matrix(
      spec, [&](const std::string& g, const std::string& h) { return visual_distance(spec, g, h); });
  r.vr_matrix = symmetric_matrix(
      spec, [&](const std::string& g, const std::string& h) { return redundant_coding(spec, g, h); });
  r.vd = off_diagonal_mean(r.vd_matrix);
  r.rc = off_diagonal_mean(r.vr_matrix);
  r.ppo = metric_PPO(spec);
  r.td = metric_TD(spec);
  r.aggregate = (r.vd + r.rc + r.ppo + r.td) / 4.0;
  r.passes_threshold = r.aggregate >= kDiscriminabilityThreshold;
  return r;
}

nlohmann::json to_json(const MetricReport& r) {
  return {{"symbols", r.symbols},     {"vd_matrix", r.vd_matrix}, {"vr_matrix", r.vr_matrix},
          {"VD", r.vd},               {"RC", r.rc},               {"PPO", r.ppo},
          {"TD", r.td},               {"aggregate", r.aggregate}, {"passes_threshold", r.passes_threshold}};
}

std::string format_report(const MetricReport& r) {
  std::size_t width = 6;
  for (const auto& s : r.symbols) width = std::max(width, s.size() + 2);
  auto pad = [&](const std::string& s) { return s + std::string(width - std::min(width, s.size()), ' '); };
  auto table = [&](const std::string& title, const std::vector<std::vector<double>>& m) {
    std::string out = title + "\n" + pad("");
    for (const auto& s : r.symbols) out += pad(s);
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      out += pad(r.symbols[i]);
      for (double v : m[i]) out += pad(fixed2(v));
      out += "\n";
    }
    std::string trimmed;
    std::istringstream lines(out);
    for (std::string line; std::getline(lines, line);) {
      line.erase(line.find_last_not_of(' ') + 1);
      trimmed += line + "\n";
    }
    return trimmed;
  };
  std::string out = table("Visual distance (vd)", r.vd_matrix) + "\n" +
                    table("Redundant coding (vr)", r.vr_matrix) + "\n";
  out += "VD         " + fixed2(r.vd) + "\n";
  out += "RC         " + fixed2(r.rc) + "\n";
  out += "PPO        " + fixed2(r.ppo) + "\n";
  out += "TD         " + fixed2(r.td) + "\n";
  out += "aggregate  " + fixed2(r.aggregate) + "  " + (r.passes_threshold ? "PASS" : "FAIL") +
         " (threshold " + fixed2(kDiscriminabilityThreshold) + ")\n";
  return out;
}

std::vector<StudyRecord> parse_study_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto chomp = [](std::string& s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  };
  if (!std::getline(in, line)) throw MetricError("study CSV is empty");
  chomp(line);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "participant,elapsed_seconds,success_rate")
    throw MetricError("study CSV header must be 'participant,elapsed_seconds,success_rate'");

  auto number = [](const std::string& field, std::size_t row) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != field.size())
      throw MetricError("row " + std::to_string(row) + ": '" + field + "' is not a number");
    return v;
  };

  std::vector<StudyRecord> out;
  std::set<std::string> ids;
  for (std::size_t row = 2; std::getline(in, line); ++row) {
    chomp(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 3) throw MetricError("row " + std::to_string(row) + ": expected 3 fields");
    StudyRecord r{fields[0], number(fields[1], row), number(fields[2], row)};
    if (r.participant.empty()) throw MetricError("row " + std::to_string(row) + ": empty participant");
    if (!ids.insert(r.participant).second)
      throw MetricError("row " + std::to_string(row) + ": duplicate participant '" + r.participant + "'");
    if (!(r.elapsed_seconds > 0))
      throw MetricError("row " + std::to_string(row) + ": elapsed_seconds must be positive");
    if (!(r.success_rate >= 0 && r.success_rate <= 1))
      throw MetricError("row " + std::to_string(row) + ": success_rate must lie in [0,1]");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::pair<std::string, double>> precision(const std::vector<StudyRecord>& records) {
  if (records.empty()) throw MetricError("precision needs at least one record");
  double fastest = records.front().elapsed_seconds;
  for (const auto& r : records) {
    if (!(r.elapsed_seconds > 0))
      throw MetricError("elapsed_seconds must be positive for '" + r.participant + "'");
    fastest = std::min(fastest, r.elapsed_seconds);
  }
  std::vector<std::pair<std::string, double>> out;
  out.reserve(records.size());
  for (const auto& r : records) out.emplace_back(r.participant, fastest / r.elapsed_seconds * r.success_rate);
  return out;
}

std::string format_precision(const std::vector<std::pair<std::string, double>>& table) {
  std::size_t width = 13;
  for (const auto& [id, p] : table) width = std::max(width, id.size() + 2);
  std::string out = "participant" + std::string(width - 11, ' ') + "precision\n";
  for (const auto& [id, p] : table) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", p);
    out += id + std::string(width - id.size(), ' ') + buf + "\n";
  }
  return out;
}

}  // namespace shexatlas
