#include "shexatlas/schema_graph.hpp"

#include <map>
#include <unordered_map>
#include <unordered_set>

#include "shexatlas/shexc_parser.hpp"

namespace shexatlas {

EdgeSymbol symbol_for(RelationKind kind) {
  switch (kind) {
    case RelationKind::Ref: return EdgeSymbol::DirectedArrow;
    case RelationKind::And:
    case RelationKind::Or:
    case RelationKind::OneOf: return EdgeSymbol::DiamondArrow;
    case RelationKind::Not:
    case RelationKind::Labelled: return EdgeSymbol::DashedLine;
  }
  return EdgeSymbol::DirectedArrow;
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Ref: return "ref";
    case RelationKind::And: return "and";
    case RelationKind::Or: return "or";
    case RelationKind::OneOf: return "one_of";
    case RelationKind::Not: return "not";
    case RelationKind::Labelled: return "labelled";
  }
  return "ref";
}

std::string_view to_string(EdgeSymbol symbol) {
  switch (symbol) {
    case EdgeSymbol::DirectedArrow: return "directed_arrow";
    case EdgeSymbol::DiamondArrow: return "diamond_arrow";
    case EdgeSymbol::DashedLine: return "dashed_line";
  }
  return "directed_arrow";
}

const VisualNode* VisualGraph::find_node(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::string synth_node_id(std::string_view parent_label, RelationKind kind, std::size_t index) {
  std::string_view tag;
  switch (kind) {
    case RelationKind::Ref: tag = "REF"; break;
    case RelationKind::And: tag = "AND"; break;
    case RelationKind::Or: tag = "OR"; break;
    case RelationKind::OneOf: tag = "ONEOF"; break;
    case RelationKind::Not: tag = "NOT"; break;
    case RelationKind::Labelled: tag = "LABELLED"; break;
  }
  std::string id(parent_label);
  id += '/';
  id += tag;
  id += '_';
  id += std::to_string(index);
  return id;
}

namespace {

std::string edge_label(RelationKind kind) {
  switch (kind) {
    case RelationKind::And: return "AND";
    case RelationKind::Or: return "OR";
    case RelationKind::OneOf: return "OneOf";
    case RelationKind::Not: return "NOT";
    case RelationKind::Labelled: return "Composed of";
    case RelationKind::Ref: return "";
  }
  return "";
}

class GraphBuilder {
 public:
  explicit GraphBuilder(const ShExSchema& schema) {
    for (const auto& decl : schema.shapes) declared_.insert(decl.label);
  }

  VisualGraph run(const ShExSchema& schema) {
    for (const auto& decl : schema.shapes) {
      std::size_t host = add_node(decl.label, decl.label, false);
      process_shape(decl.expr, host);
    }
    for (auto& ext : externals_) {
      index_.emplace(ext.id, graph_.nodes.size());
      graph_.nodes.push_back(std::move(ext));
    }
    return std::move(graph_);
  }

 private:
  VisualGraph graph_;
  std::unordered_set<std::string> declared_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<VisualNode> externals_;
  std::unordered_set<std::string> external_ids_;
  std::map<std::pair<std::string, RelationKind>, std::size_t> counters_;

  std::size_t add_node(const std::string& id, const std::string& display, bool synthetic) {
    VisualNode node;
    node.id = id;
    node.display_label = display;
    node.synthetic = synthetic;
    index_.emplace(id, graph_.nodes.size());
    graph_.nodes.push_back(std::move(node));
    return graph_.nodes.size() - 1;
  }

  void ensure_target(const std::string& target) {
    if (declared_.count(target) || external_ids_.count(target)) return;
    VisualNode node;
    node.id = target;
    node.display_label = target;
    node.external = true;
    external_ids_.insert(target);
    externals_.push_back(std::move(node));
  }

  void add_edge(std::size_t host, const std::string& target, RelationKind kind, std::string label,
                std::string cardinality) {
    VisualEdge e;
    e.id = "e" + std::to_string(graph_.edges.size());
    e.source = graph_.nodes[host].id;
    e.target = target;
    e.label = std::move(label);
    e.cardinality_label = std::move(cardinality);
    e.relation_kind = kind;
    e.symbol = symbol_for(kind);
    graph_.edges.push_back(std::move(e));
  }

  std::size_t synthesize(std::size_t host, RelationKind kind, const std::string& display) {
    std::string parent = graph_.nodes[host].id;
    std::size_t& counter = counters_[{parent, kind}];
    std::string id = synth_node_id(parent, kind, counter++);
    std::size_t child = add_node(id, display.empty() ? id : display, true);
    add_edge(host, id, kind, edge_label(kind), "");
    return child;
  }

  void add_row(std::size_t host, std::string text, RowKind kind) {
    graph_.nodes[host].rows.push_back(ConstraintRow{std::move(text), kind});
  }

  void attach_operand(const ShapeExpr& operand, std::size_t host, RelationKind kind) {
    if (const auto* ref = std::get_if<ShapeRef>(&operand.node)) {
      ensure_target(ref->target);
      add_edge(host, ref->target, kind, edge_label(kind), "");
      return;
    }
    std::size_t child = synthesize(host, kind, "");
    process_shape(operand, child);
  }

  void process_shape(const ShapeExpr& expr, std::size_t host) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Shape>) {
            if (n.node_kind) {
              graph_.nodes[host].node_kind = n.node_kind;
              add_row(host, "nodeKind: " + to_string(*n.node_kind), RowKind::NodeKind);
            }
            if (!n.extra.empty()) {
              std::string text = "EXTRA";
              for (const auto& p : n.extra) text += " " + p;
              add_row(host, std::move(text), RowKind::Extra);
            }
            if (n.closed) {
              graph_.nodes[host].closed = true;
              add_row(host, "CLOSED", RowKind::Closed);
            }
            if (n.triple_expr) walk_triples(*n.triple_expr, host);
          } else if constexpr (std::is_same_v<T, ShapeAnd>) {
            for (const auto& op : n.operands) attach_operand(op, host, RelationKind::And);
          } else if constexpr (std::is_same_v<T, ShapeOr>) {
            for (const auto& op : n.operands) attach_operand(op, host, RelationKind::Or);
          } else if constexpr (std::is_same_v<T, ShapeNot>) {
            attach_operand(*n.operand, host, RelationKind::Not);
          } else if constexpr (std::is_same_v<T, ShapeRef>) {
            // A bare alias ":A @:B" is shown textually; arrows are reserved
            // for triple constraints.
            add_row(host, "@" + n.target, RowKind::NodeKind);
          } else {
            add_row(host, n.text, RowKind::NodeKind);
          }
        },
        expr.node);
  }

  void walk_triples(const TripleExpr& expr, std::size_t host) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, TripleConstraint>) {
            std::string card = format_cardinality(n.cardinality);
            if (n.value.ref_target) {
              ensure_target(*n.value.ref_target);
              add_edge(host, *n.value.ref_target, RelationKind::Ref, n.predicate, card);
            } else {
              std::string text = n.predicate + " " + n.value.raw;
              if (!card.empty()) text += " " + card;
              add_row(host, std::move(text), RowKind::TripleConstraint);
            }
          } else if constexpr (std::is_same_v<T, EachOf>) {
            for (const auto& item : n.items) walk_triples(item, host);
          } else if constexpr (std::is_same_v<T, OneOf>) {
            for (const auto& alt : n.alternatives) {
              std::size_t child = synthesize(host, RelationKind::OneOf, "");
              walk_triples(alt, child);
            }
          } else {
            std::size_t child = synthesize(host, RelationKind::Labelled, "$" + n.name);
            walk_triples(*n.inner, child);
          }
        },
        expr.node);
  }
};

}  // namespace

VisualGraph build_graph(const ShExSchema& schema) { return GraphBuilder(schema).run(schema); }

}  // namespace shexatlas
