#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "shexatlas/io.hpp"
#include "shexatlas/ast.hpp"
#include "shexatlas/schema_graph.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return SHEX_ATLAS_DATA_DIR; }
inline std::filesystem::path golden_dir() { return SHEX_ATLAS_GOLDEN_DIR; }

inline std::string read_data(const std::string& rel) { return shexatlas::read_text_file(data_dir() / rel); }

inline const std::vector<std::string>& construct_cases() {
  static const std::vector<std::string> names = {
      "triple_constraint", "each_of",   "node_kind", "extra",    "closed",  "shape_ref",
      "shape_and",         "shape_or",  "one_of",    "shape_not", "labelled"};
  return names;
}

// Random multigraph with every edge kind, ids ":N<i>". Self-loops and
// parallel edges are allowed.
inline shexatlas::VisualGraph random_graph(std::mt19937& rng, int max_nodes = 50) {
  using namespace shexatlas;
  VisualGraph g;
  int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  for (int i = 0; i < n; ++i) g.nodes.push_back({":N" + std::to_string(i), ":N" + std::to_string(i), {}, false});
  int m = std::uniform_int_distribution<int>(0, 2 * n)(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> kind(0, 5);
  for (int e = 0; e < m; ++e) {
    VisualEdge edge;
    edge.id = "e" + std::to_string(e);
    edge.source = g.nodes[pick(rng)].id;
    edge.target = g.nodes[pick(rng)].id;
    edge.relation_kind = static_cast<RelationKind>(kind(rng));
    edge.symbol = symbol_for(edge.relation_kind);
    edge.label = std::string(to_string(edge.relation_kind));
    g.edges.push_back(edge);
  }
  return g;
}

using namespace shexatlas;

// Independent count of triple constraints whose value is a shape reference.
inline std::size_t count_refs(const TripleExpr& t);
inline std::size_t count_refs(const ShapeExpr& e) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Shape>) {
          return n.triple_expr ? count_refs(*n.triple_expr) : 0;
        } else if constexpr (std::is_same_v<T, ShapeAnd> || std::is_same_v<T, ShapeOr>) {
          std::size_t c = 0;
          for (const auto& o : n.operands) c += count_refs(o);
          return c;
        } else if constexpr (std::is_same_v<T, ShapeNot>) {
          return count_refs(*n.operand);
        } else {
          return 0;
        }
      },
      e.node);
}
inline std::size_t count_refs(const TripleExpr& t) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TripleConstraint>) {
          return n.value.ref_target ? 1 : 0;
        } else if constexpr (std::is_same_v<T, EachOf>) {
          std::size_t c = 0;
          for (const auto& i : n.items) c += count_refs(i);
          return c;
        } else if constexpr (std::is_same_v<T, OneOf>) {
          std::size_t c = 0;
          for (const auto& i : n.alternatives) c += count_refs(i);
          return c;
        } else {
          return count_refs(*n.inner);
        }
      },
      t.node);
}


inline void add_triple_ids(const TripleExpr& t, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TripleConstraint>) {
          out.push_back(n.predicate);
          out.push_back(n.value.raw);
        } else if constexpr (std::is_same_v<T, EachOf>) {
          for (const auto& i : n.items) add_triple_ids(i, out);
        } else if constexpr (std::is_same_v<T, OneOf>) {
          for (const auto& i : n.alternatives) add_triple_ids(i, out);
        } else {
          out.push_back(n.name);
          add_triple_ids(*n.inner, out);
        }
      },
      t.node);
}

inline void add_shape_ids(const ShapeExpr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Shape>) {
          for (const auto& x : n.extra) out.push_back(x);
          if (n.triple_expr) add_triple_ids(*n.triple_expr, out);
        } else if constexpr (std::is_same_v<T, ShapeAnd> || std::is_same_v<T, ShapeOr>) {
          for (const auto& o : n.operands) add_shape_ids(o, out);
        } else if constexpr (std::is_same_v<T, ShapeNot>) {
          add_shape_ids(*n.operand, out);
        } else if constexpr (std::is_same_v<T, ShapeRef>) {
          out.push_back(n.target);
        } else {
          out.push_back(n.text);
        }
      },
      e.node);
}

inline void collect_identifiers(const ShExSchema& s, std::vector<std::string>& out) {
  for (const auto& d : s.shapes) {
    out.push_back(d.label);
    add_shape_ids(d.expr, out);
  }
}

}  // namespace testing_support
