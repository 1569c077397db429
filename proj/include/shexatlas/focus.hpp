#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "shexatlas/schema_graph.hpp"

namespace shexatlas {

/// Thrown when an operation names a node the graph does not contain.
class UnknownNode : public std::runtime_error {
 public:
  UnknownNode(std::string id, std::vector<std::string> suggestions);

  const std::string& id() const { return id_; }
  /// Closest existing ids by edit distance, best first.
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::string id_;
  std::vector<std::string> suggestions_;
};

/// Ordered set of focused node ids. Transitions return new values.
class FocusState {
 public:
  FocusState() = default;

  /// Validates uniqueness and membership in `graph`.
  static FocusState from_ids(const VisualGraph& graph, const std::vector<std::string>& ids);

  const std::vector<std::string>& focused() const { return focused_; }
  bool empty() const { return focused_.empty(); }
  bool contains(const std::string& id) const;

  bool operator==(const FocusState&) const = default;

 private:
  std::vector<std::string> focused_;
  friend FocusState toggle_focus(const VisualGraph&, const FocusState&, const std::string&);
};

enum class VisibilityMode { AllNormal, Partitioned };

struct VisibilityClassification {
  std::set<std::string> highlighted_nodes;
  std::set<std::string> highlighted_edges;
  std::set<std::string> dimmed_nodes;
  std::set<std::string> dimmed_edges;
  VisibilityMode mode = VisibilityMode::AllNormal;

  bool operator==(const VisibilityClassification&) const = default;
};

/// Removes `node` if focused, appends it otherwise.
FocusState toggle_focus(const VisualGraph& graph, const FocusState& state, const std::string& node);

/// Union over focused nodes of the node, its outgoing edges and their targets
/// (plus incoming edges and their sources when asked). Everything else is
/// dimmed. An empty focus leaves the whole graph in AllNormal mode.
VisibilityClassification classify(const VisualGraph& graph, const FocusState& state,
                                  bool include_incoming = false);

/// Induced subgraph on the node and its in- and out-neighbours.
VisualGraph collapse_neighbourhood(const VisualGraph& graph, const std::string& node);

/// Nearest node ids to `query`, at most `limit`.
std::vector<std::string> suggest_nodes(const VisualGraph& graph, const std::string& query,
                                       std::size_t limit = 3);

nlohmann::json to_json(const VisibilityClassification& c);

}  // namespace shexatlas
