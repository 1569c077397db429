#include <gtest/gtest.h>

#include "property_checks.hpp"
#include "shexatlas/shexc_parser.hpp"
#include "shexatlas/wikidata.hpp"

using namespace shexatlas;

TEST(Properties, FocusEngine) { EXPECT_EQ(property_checks::check_focus(1000, 7), ""); }

TEST(Properties, LinkGeometry) { EXPECT_EQ(property_checks::check_geometry(2000, 11), ""); }

TEST(Properties, MetricOracle) { EXPECT_EQ(property_checks::check_metric_oracle(1000, 13), ""); }

namespace {

struct AstGen {
  std::mt19937& rng;
  int shapes;

  int pick(int n) { return static_cast<int>(rng() % n); }

  TripleConstraint constraint() {
    TripleConstraint tc;
    tc.predicate = ":p" + std::to_string(pick(6));
    switch (pick(4)) {
      case 0: tc.value.raw = "xsd:string"; break;
      case 1: tc.value.raw = "."; break;
      case 2: tc.value.raw = "xsd:integer"; break;
      default: {
        std::string target = ":S" + std::to_string(pick(shapes + 1));
        tc.value = {"@" + target, target};
      }
    }
    const Cardinality cards[] = {{1, 1}, {0, 1}, {0, -1}, {1, -1}, {2, 5}, {3, -1}, {4, 4}};
    tc.cardinality = cards[pick(7)];
    return tc;
  }

  TripleExpr triple(int depth) {
    int choice = depth > 1 ? 0 : pick(4);
    if (choice == 0) return {constraint()};
    if (choice == 1) {
      EachOf e;
      int n = 2 + pick(3);
      for (int i = 0; i < n; ++i) {
        TripleExpr item = triple(depth + 1);
        if (std::holds_alternative<EachOf>(item.node)) item = {constraint()};
        e.items.push_back(item);
      }
      return {e};
    }
    if (choice == 2) {
      OneOf o;
      int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) {
        TripleExpr alt = triple(depth + 1);
        if (std::holds_alternative<OneOf>(alt.node)) alt = {constraint()};
        o.alternatives.push_back(alt);
      }
      return {o};
    }
    return {Labelled{":g" + std::to_string(pick(3)), Box<TripleExpr>(triple(depth + 1))}};
  }

  Shape shape() {
    Shape s;
    if (pick(5) == 0) {
      s.node_kind = static_cast<NodeKind>(pick(4));
      return s;
    }
    if (pick(4)) s.triple_expr = triple(0);
    if (pick(4) == 0) s.extra = {":p" + std::to_string(pick(6))};
    s.closed = pick(4) == 0;
    return s;
  }

  ShapeExpr operand() {
    switch (pick(3)) {
      case 0: return {ShapeRef{":S" + std::to_string(pick(shapes + 1))}};
      case 1: return {ShapeNot{Box<ShapeExpr>(ShapeExpr{shape()})}};
      default: return {shape()};
    }
  }

  ShapeExpr expr() {
    switch (pick(5)) {
      case 0: return {ShapeAnd{{operand(), operand()}}};
      case 1: return {ShapeOr{{operand(), operand(), operand()}}};
      case 2: return {ShapeNot{Box<ShapeExpr>(ShapeExpr{shape()})}};
      default: return {shape()};
    }
  }
};

}  // namespace

TEST(Properties, ParsePrintRoundTrip) {
  std::mt19937 rng(17);
  for (int t = 0; t < 500; ++t) {
    ShExSchema s;
    s.prefixes.mappings[""] = "http://example.org/";
    s.prefixes.mappings["xsd"] = "http://www.w3.org/2001/XMLSchema#";
    AstGen gen{rng, 1 + static_cast<int>(rng() % 6)};
    for (int i = 0; i < gen.shapes; ++i) s.shapes.push_back({":S" + std::to_string(i), gen.expr(), {}});
    std::string text = to_shexc(s);
    ShExSchema back;
    ASSERT_NO_THROW(back = parse_schema(text)) << text;
    ASSERT_EQ(back, s) << text;
    ASSERT_EQ(to_shexc(back), text);
  }
}

TEST(Properties, NonWikidataPrefixesNeverRecognized) {
  std::mt19937 rng(19);
  const std::vector<std::string> prefixes = {"xsd", "schema", "rdf", "rdfs", "foaf", "ex", "", "wdx", "pp", "owl"};
  for (int t = 0; t < 2000; ++t) {
    std::string local = std::string(1, "QPqpX"[rng() % 5]) + std::to_string(rng() % 100000);
    std::string term = prefixes[rng() % prefixes.size()] + ":" + local;
    EXPECT_FALSE(extract_entity_id(term)) << term;
  }
}
