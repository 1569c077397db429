#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "shexatlas/schema_graph.hpp"

namespace shexatlas {

enum class Arrowhead { None, Arrow, Diamond };

struct Node3D {
  std::string id;
  std::string display_label;
  std::vector<std::string> constraints;  // shown on demand by the viewer

  bool operator==(const Node3D&) const = default;
};

struct Link3D {
  std::string source;
  std::string target;
  std::string label;
  double curvature = 0.0;  // [0, 1]
  double rotation = 0.0;   // radians, [0, 2pi)
  Arrowhead arrowhead = Arrowhead::None;

  bool operator==(const Link3D&) const = default;
};

struct Graph3D {
  std::vector<Node3D> nodes;
  std::vector<Link3D> links;

  bool operator==(const Graph3D&) const = default;
};

/// Link before geometry is assigned. Reference links are always curved;
/// compositional ones are straight unless they are self-loops or share a
/// node pair with an earlier straight link.
struct LinkDraft {
  std::string source;
  std::string target;
  std::string label;
  Arrowhead arrowhead = Arrowhead::None;
  bool reference = false;
};

struct GeometryConfig {
  double reference_curvature = 0.2;
  double self_loop_curvature = 0.4;
};

/// Curved links sharing an unordered node pair split the circle evenly:
/// slot k of n sits at 2*pi*k/n in the frame of the lexicographically
/// smaller endpoint, and a link running the other way stores its slot
/// shifted by pi so it lands at the same spot from its own source. A curved
/// link alone on its pair gets rotation 0.
std::vector<Link3D> assign_link_geometry(const std::vector<LinkDraft>& drafts,
                                         const GeometryConfig& config = {});

/// Angle of `link` expressed in the frame of the smaller endpoint id.
double canonical_rotation(const Link3D& link);

Graph3D emit_graph3d(const VisualGraph& graph, const GeometryConfig& config = {});

std::string_view to_string(Arrowhead head);
nlohmann::json to_json(const Graph3D& graph);
Graph3D graph3d_from_json(const nlohmann::json& doc);

/// Pretty-printed JSON with a trailing newline.
std::string serialize(const Graph3D& graph);

}  // namespace shexatlas
