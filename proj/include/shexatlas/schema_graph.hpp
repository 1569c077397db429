#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shexatlas/ast.hpp"

namespace shexatlas {

enum class RowKind { TripleConstraint, NodeKind, Extra, Closed };

struct ConstraintRow {
  std::string text;
  RowKind kind = RowKind::TripleConstraint;

  bool operator==(const ConstraintRow&) const = default;
};

struct VisualNode {
  std::string id;
  std::string display_label;
  std::vector<ConstraintRow> rows;
  bool synthetic = false;
  bool external = false;  // referenced but never declared
  bool closed = false;
  std::optional<NodeKind> node_kind;

  bool operator==(const VisualNode&) const = default;
};

enum class EdgeSymbol { DirectedArrow, DiamondArrow, DashedLine };
enum class RelationKind { Ref, And, Or, OneOf, Not, Labelled };

/// Ref -> DirectedArrow; And/Or/OneOf -> DiamondArrow; Not/Labelled -> DashedLine.
EdgeSymbol symbol_for(RelationKind kind);
std::string_view to_string(RelationKind kind);
std::string_view to_string(EdgeSymbol symbol);

struct VisualEdge {
  std::string id;
  std::string source;
  std::string target;
  std::string label;
  std::string cardinality_label;
  EdgeSymbol symbol = EdgeSymbol::DirectedArrow;
  RelationKind relation_kind = RelationKind::Ref;

  bool operator==(const VisualEdge&) const = default;
};

struct VisualGraph {
  std::vector<VisualNode> nodes;
  std::vector<VisualEdge> edges;

  bool operator==(const VisualGraph&) const = default;

  const VisualNode* find_node(std::string_view id) const;
  bool has_node(std::string_view id) const { return find_node(id) != nullptr; }
};

/// Deterministic id for a node synthesized under `parent`, e.g. ":User/AND_0".
std::string synth_node_id(std::string_view parent_label, RelationKind kind, std::size_t index);

/// Compiles a schema into the notation-level graph.
///
/// Declared shapes become nodes in schema order. Triple constraints pointing at
/// another shape become directed arrows; every other constraint becomes a row
/// of the owning node. Operand bodies of AND/OR/NOT, OneOf alternatives and
/// "$"-labelled groups become synthetic child nodes. Targets that are never
/// declared are appended as row-less external nodes.
VisualGraph build_graph(const ShExSchema& schema);

}  // namespace shexatlas
