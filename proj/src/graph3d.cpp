#include "shexatlas/graph3d.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace shexatlas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using PairKey = std::pair<std::string, std::string>;

PairKey unordered_pair(const std::string& a, const std::string& b) {
  return a <= b ? PairKey{a, b} : PairKey{b, a};
}

double wrap(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

Arrowhead arrowhead_for(RelationKind kind) {
  switch (kind) {
    case RelationKind::Ref: return Arrowhead::Arrow;
    case RelationKind::And:
    case RelationKind::Or:
    case RelationKind::OneOf: return Arrowhead::Diamond;
    case RelationKind::Not:
    case RelationKind::Labelled: return Arrowhead::None;
  }
  return Arrowhead::None;
}

Arrowhead arrowhead_from(const std::string& s) {
  if (s == "none") return Arrowhead::None;
  if (s == "arrow") return Arrowhead::Arrow;
  if (s == "diamond") return Arrowhead::Diamond;
  throw std::invalid_argument("unknown arrowhead '" + s + "'");
}

}  // namespace

std::string_view to_string(Arrowhead head) {
  switch (head) {
    case Arrowhead::None: return "none";
    case Arrowhead::Arrow: return "arrow";
    case Arrowhead::Diamond: return "diamond";
  }
  return "none";
}

std::vector<Link3D> assign_link_geometry(const std::vector<LinkDraft>& drafts,
                                         const GeometryConfig& config) {
  std::vector<Link3D> out;
  out.reserve(drafts.size());
  std::vector<bool> curved(drafts.size(), false);
  std::set<PairKey> straight_taken;

  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const LinkDraft& d = drafts[i];
    Link3D link{d.source, d.target, d.label, 0.0, 0.0, d.arrowhead};
    bool self = d.source == d.target;
    if (d.reference || self) {
      curved[i] = true;
    } else if (!straight_taken.insert(unordered_pair(d.source, d.target)).second) {
      curved[i] = true;  // only one straight link fits between two nodes
    }
    if (curved[i]) link.curvature = self ? config.self_loop_curvature : config.reference_curvature;
    out.push_back(std::move(link));
  }

  std::map<PairKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (curved[i]) groups[unordered_pair(out[i].source, out[i].target)].push_back(i);

  for (const auto& [pair, members] : groups) {
    const std::size_t n = members.size();
    if (n == 1) continue;  // rotation stays 0
    for (std::size_t k = 0; k < n; ++k) {
      Link3D& link = out[members[k]];
      double slot = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      bool reversed = link.source > link.target;
      link.rotation = wrap(reversed ? slot + std::numbers::pi : slot);
    }
  }
  return out;
}

double canonical_rotation(const Link3D& link) {
  return link.source > link.target ? wrap(link.rotation - std::numbers::pi) : link.rotation;
}

Graph3D emit_graph3d(const VisualGraph& graph, const GeometryConfig& config) {
  Graph3D out;
  out.nodes.reserve(graph.nodes.size());
  for (const auto& node : graph.nodes) {
    Node3D n{node.id, node.display_label, {}};
    for (const auto& row : node.rows) n.constraints.push_back(row.text);
    out.nodes.push_back(std::move(n));
  }
  std::vector<LinkDraft> drafts;
  drafts.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    std::string label = e.label;
    if (!e.cardinality_label.empty()) label += label.empty() ? e.cardinality_label : " " + e.cardinality_label;
    drafts.push_back(LinkDraft{e.source, e.target, std::move(label), arrowhead_for(e.relation_kind),
                               e.relation_kind == RelationKind::Ref});
  }
  out.links = assign_link_geometry(drafts, config);
  return out;
}

nlohmann::json to_json(const Graph3D& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes)
    nodes.push_back({{"id", n.id}, {"display_label", n.display_label}, {"constraints", n.constraints}});
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : graph.links) {
    links.push_back({{"source", l.source},
                     {"target", l.target},
                     {"label", l.label},
                     {"curvature", l.curvature},
                     {"rotation", l.rotation},
                     {"arrowhead", std::string(to_string(l.arrowhead))}});
  }
  return {{"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

Graph3D graph3d_from_json(const nlohmann::json& doc) {
  Graph3D g;
  for (const auto& n : doc.at("nodes"))
    g.nodes.push_back(Node3D{n.at("id").get<std::string>(), n.at("display_label").get<std::string>(),
                             n.at("constraints").get<std::vector<std::string>>()});
  for (const auto& l : doc.at("links")) {
    g.links.push_back(Link3D{l.at("source").get<std::string>(), l.at("target").get<std::string>(),
                             l.at("label").get<std::string>(), l.at("curvature").get<double>(),
                             l.at("rotation").get<double>(),
                             arrowhead_from(l.at("arrowhead").get<std::string>())});
  }
  return g;
}

std::string serialize(const Graph3D& graph) { return to_json(graph).dump(2) + "\n"; }

}  // namespace shexatlas
