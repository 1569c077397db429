#include "shexatlas/mermaid.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace shexatlas {

const std::string* SanitizationMap::safe_for(std::string_view original) const {
  auto it = forward_.find(original);
  return it == forward_.end() ? nullptr : &it->second;
}

const std::string* SanitizationMap::original_for(std::string_view safe) const {
  auto it = reverse_.find(safe);
  return it == reverse_.end() ? nullptr : &it->second;
}

void SanitizationMap::insert(std::string original, std::string safe) {
  if (forward_.count(original) || reverse_.count(safe))
    throw std::logic_error("sanitization map entry already present: " + original);
  reverse_.emplace(safe, original);
  forward_.emplace(std::move(original), std::move(safe));
}

std::string SanitizationMap::to_tsv() const {
  std::string out = "safe_id\toriginal_id\n";
  for (const auto& [safe, original] : reverse_) out += safe + "\t" + original + "\n";
  return out;
}

SanitizationMap SanitizationMap::from_tsv(std::string_view text) {
  SanitizationMap map;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "safe_id\toriginal_id")
    throw std::invalid_argument("sanitization map: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("sanitization map: malformed line");
    map.insert(line.substr(tab + 1), line.substr(0, tab));
  }
  return map;
}

std::string sanitize_identifier(std::string_view id, SanitizationMap& map) {
  if (id.empty()) throw std::invalid_argument("cannot sanitize an empty identifier");
  if (const std::string* known = map.safe_for(id)) return *known;

  std::string base;
  base.reserve(id.size() + 1);
  for (char c : id) {
    unsigned char u = static_cast<unsigned char>(c);
    bool ok = u < 0x80 && (std::isalnum(u) || c == '_');
    base += ok ? c : '_';
  }
  if (std::isdigit(static_cast<unsigned char>(base.front()))) base.insert(base.begin(), 'x');

  std::string candidate = base;
  for (int n = 2; map.contains_safe(candidate); ++n) candidate = base + "_" + std::to_string(n);
  map.insert(std::string(id), candidate);
  return candidate;
}

namespace {

bool is_cardinality_symbol(std::string_view token) {
  return token == "?" || token == "*" || token == "+";
}

// Tokens are sanitized individually so rows stay readable and every token is
// recoverable from the map.
std::string sanitize_text(std::string_view text, SanitizationMap& map) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (start == i) break;
    std::string_view token = text.substr(start, i - start);
    if (!out.empty()) out += ' ';
    out += is_cardinality_symbol(token) ? std::string(token) : sanitize_identifier(token, map);
  }
  return out;
}

std::string_view arrow_for(EdgeSymbol symbol) {
  switch (symbol) {
    case EdgeSymbol::DirectedArrow: return "-->";
    case EdgeSymbol::DiamondArrow: return "*--";
    case EdgeSymbol::DashedLine: return "..>";
  }
  return "-->";
}

}  // namespace

DiagramText emit_classdiagram(const VisualGraph& graph) {
  DiagramText out;
  std::string& text = out.text;
  text = "classDiagram\n";
  for (const auto& node : graph.nodes) {
    std::string name = sanitize_identifier(node.id, out.map);
    if (node.rows.empty()) {
      text += "class " + name + "\n";
      continue;
    }
    text += "class " + name + " {\n";
    for (const auto& row : node.rows) text += "  " + sanitize_text(row.text, out.map) + "\n";
    text += "}\n";
  }
  for (const auto& edge : graph.edges) {
    std::string source = sanitize_identifier(edge.source, out.map);
    std::string target = sanitize_identifier(edge.target, out.map);
    text += source + " " + std::string(arrow_for(edge.symbol)) + " " + target;
    std::string label = sanitize_text(edge.label, out.map);
    std::string card = sanitize_text(edge.cardinality_label, out.map);
    if (!card.empty()) label += label.empty() ? card : " " + card;
    if (!label.empty()) text += " : " + label;
    text += "\n";
  }
  return out;
}

std::vector<std::string> restore_labels(const std::vector<std::string>& rendered,
                                        const SanitizationMap& map) {
  std::vector<std::string> out;
  out.reserve(rendered.size());
  for (const auto& safe : rendered) {
    const std::string* original = map.original_for(safe);
    out.push_back(original ? *original : safe);
  }
  return out;
}

std::string restore_text(std::string_view rendered, const SanitizationMap& map) {
  std::string out;
  std::size_t i = 0;
  while (i < rendered.size()) {
    std::size_t start = i;
    while (i < rendered.size() && rendered[i] != ' ') ++i;
    std::string_view token = rendered.substr(start, i - start);
    const std::string* original = map.original_for(token);
    out += original ? *original : std::string(token);
    if (i < rendered.size()) {
      out += ' ';
      ++i;
    }
  }
  return out;
}

}  // namespace shexatlas
