#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "shexatlas/schema_graph.hpp"

namespace shexatlas {

/// Bijection between original identifiers and class-diagram-safe identifiers.
class SanitizationMap {
 public:
  /// Returns the safe id already registered for `original`, if any.
  const std::string* safe_for(std::string_view original) const;
  const std::string* original_for(std::string_view safe) const;

  bool contains_safe(std::string_view safe) const { return original_for(safe) != nullptr; }
  std::size_t size() const { return forward_.size(); }

  const std::map<std::string, std::string, std::less<>>& forward() const { return forward_; }
  const std::map<std::string, std::string, std::less<>>& reverse() const { return reverse_; }

  void insert(std::string original, std::string safe);

  /// Two-column tab-separated document: header "safe_id\toriginal_id", then
  /// one pair per line in safe-id order.
  std::string to_tsv() const;
  static SanitizationMap from_tsv(std::string_view text);

  bool operator==(const SanitizationMap&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> forward_;
  std::map<std::string, std::string, std::less<>> reverse_;
};

struct DiagramText {
  std::string text;
  SanitizationMap map;
};

/// Characters outside [A-Za-z0-9_] become '_'; a leading digit gets an "x"
/// prefix; collisions with another original get "_2", "_3", ... appended.
/// Idempotent per id. Throws std::invalid_argument on an empty id.
std::string sanitize_identifier(std::string_view id, SanitizationMap& map);

/// Mermaid classDiagram text. Node ids become class names, rows become
/// members, and edges use "-->" (reference), "*--" (AND/OR/OneOf, diamond at
/// the owning end) and "..>" (NOT / Composed of).
DiagramText emit_classdiagram(const VisualGraph& graph);

/// Replaces each safe id with its original; unknown ids pass through.
std::vector<std::string> restore_labels(const std::vector<std::string>& rendered,
                                        const SanitizationMap& map);

/// Restores every sanitized token in a whitespace-separated string.
std::string restore_text(std::string_view rendered, const SanitizationMap& map);

}  // namespace shexatlas
