#include "shexatlas/focus.hpp"

#include <algorithm>
#include <unordered_set>

namespace shexatlas {

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void require_node(const VisualGraph& graph, const std::string& id) {
  if (!graph.has_node(id)) throw UnknownNode(id, suggest_nodes(graph, id));
}

}  // namespace

UnknownNode::UnknownNode(std::string id, std::vector<std::string> suggestions)
    : std::runtime_error("unknown node '" + id + "'"),
      id_(std::move(id)),
      suggestions_(std::move(suggestions)) {}

std::vector<std::string> suggest_nodes(const VisualGraph& graph, const std::string& query,
                                       std::size_t limit) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& n : graph.nodes) scored.emplace_back(edit_distance(query, n.id), n.id);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  // Anything needing more edits than half the query length is not a near miss.
  std::size_t cutoff = std::max<std::size_t>(2, query.size() / 2);
  for (const auto& [dist, id] : scored) {
    if (out.size() == limit || dist > cutoff) break;
    out.push_back(id);
  }
  return out;
}

bool FocusState::contains(const std::string& id) const {
  return std::find(focused_.begin(), focused_.end(), id) != focused_.end();
}

FocusState FocusState::from_ids(const VisualGraph& graph, const std::vector<std::string>& ids) {
  FocusState state;
  for (const auto& id : ids) {
    require_node(graph, id);
    if (state.contains(id)) throw std::invalid_argument("node '" + id + "' focused twice");
    state = toggle_focus(graph, state, id);
  }
  return state;
}

FocusState toggle_focus(const VisualGraph& graph, const FocusState& state, const std::string& node) {
  require_node(graph, node);
  FocusState next = state;
  auto it = std::find(next.focused_.begin(), next.focused_.end(), node);
  if (it != next.focused_.end()) {
    next.focused_.erase(it);
  } else {
    next.focused_.push_back(node);
  }
  return next;
}

VisibilityClassification classify(const VisualGraph& graph, const FocusState& state,
                                  bool include_incoming) {
  for (const auto& id : state.focused()) require_node(graph, id);

  VisibilityClassification c;
  if (state.empty()) return c;
  c.mode = VisibilityMode::Partitioned;

  std::unordered_set<std::string> focus(state.focused().begin(), state.focused().end());
  for (const auto& id : state.focused()) c.highlighted_nodes.insert(id);
  for (const auto& e : graph.edges) {
    if (focus.count(e.source)) {
      c.highlighted_edges.insert(e.id);
      c.highlighted_nodes.insert(e.target);
    }
    if (include_incoming && focus.count(e.target)) {
      c.highlighted_edges.insert(e.id);
      c.highlighted_nodes.insert(e.source);
    }
  }
  for (const auto& n : graph.nodes)
    if (!c.highlighted_nodes.count(n.id)) c.dimmed_nodes.insert(n.id);
  for (const auto& e : graph.edges)
    if (!c.highlighted_edges.count(e.id)) c.dimmed_edges.insert(e.id);
  return c;
}

VisualGraph collapse_neighbourhood(const VisualGraph& graph, const std::string& node) {
  require_node(graph, node);
  std::unordered_set<std::string> keep{node};
  for (const auto& e : graph.edges) {
    if (e.source == node) keep.insert(e.target);
    if (e.target == node) keep.insert(e.source);
  }
  VisualGraph out;
  for (const auto& n : graph.nodes)
    if (keep.count(n.id)) out.nodes.push_back(n);
  for (const auto& e : graph.edges)
    if (keep.count(e.source) && keep.count(e.target)) out.edges.push_back(e);
  return out;
}

nlohmann::json to_json(const VisibilityClassification& c) {
  return {{"highlighted_nodes", c.highlighted_nodes},
          {"highlighted_edges", c.highlighted_edges},
          {"dimmed_nodes", c.dimmed_nodes},
          {"dimmed_edges", c.dimmed_edges},
          {"mode", c.mode == VisibilityMode::AllNormal ? "all_normal" : "partitioned"}};
}

}  // namespace shexatlas
