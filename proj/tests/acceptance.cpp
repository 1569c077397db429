// Acceptance gate: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "property_checks.hpp"
#include "shexatlas/cli.hpp"
#include "shexatlas/graph3d.hpp"
#include "shexatlas/mermaid.hpp"
#include "shexatlas/metrics.hpp"
#include "shexatlas/service.hpp"
#include "shexatlas/shexc_parser.hpp"
#include "shexatlas/wikidata.hpp"
#include "test_support.hpp"

using namespace shexatlas;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// Published matrices print two decimals; 0.375 printed as 0.38 sits exactly on the
// 0.005 bound, so allow for floating-point representation of that bound.
bool within(double actual, double expected, double tol) { return std::fabs(actual - expected) <= tol + 1e-9; }

MetricReport fixture_report() {
  return aggregate_discriminability(
      notation_from_json(nlohmann::json::parse(testing_support::read_data("shex-notation.json"))));
}

Outcome aggregate_score() {
  auto start = Clock::now();
  MetricReport r = fixture_report();
  double elapsed = seconds_since(start);
  bool ok = within(r.vd, 0.47, 0.005) && within(r.rc, 0.29, 0.005) && within(r.ppo, 1.0, 0.005) &&
            within(r.td, 0.5, 0.005) && within(r.aggregate, 0.565, 0.005) && r.passes_threshold && elapsed < 1.0;
  return {ok, "VD=" + fmt(r.vd) + " RC=" + fmt(r.rc) + " PPO=" + fmt(r.ppo) + " TD=" + fmt(r.td) +
                  " aggregate=" + fmt(r.aggregate) + (r.passes_threshold ? " PASS" : " FAIL") + " in " +
                  fmt(elapsed * 1000, 1) + " ms"};
}

Outcome published_matrices() {
  const double vd_table[4][4] = {
      {0, 0.57, 0.57, 0.64}, {0.57, 0, 0.32, 0.32}, {0.57, 0.32, 0, 0.39}, {0.64, 0.32, 0.39, 0}};
  const double vr_table[4][4] = {
      {0, 0.25, 0.25, 0.38}, {0.25, 0, 0.25, 0.25}, {0.25, 0.25, 0, 0.38}, {0.38, 0.25, 0.38, 0}};
  MetricReport r = fixture_report();
  double worst_vd = 0, worst_vr = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      worst_vd = std::max(worst_vd, std::fabs(r.vd_matrix[i][j] - vd_table[i][j]));
      worst_vr = std::max(worst_vr, std::fabs(r.vr_matrix[i][j] - vr_table[i][j]));
    }
  return {within(worst_vd, 0, 0.005) && within(worst_vr, 0, 0.005),
          "max vd deviation = " + fmt(worst_vd) + ", max vr deviation = " + fmt(worst_vr)};
}

Outcome metric_oracle() {
  std::string failure = property_checks::check_metric_oracle(1000, 2024);
  return {failure.empty(), failure.empty() ? "1000 random specs agree to 1e-12" : failure};
}

Outcome genewiki_scale() {
  std::string text = testing_support::read_data("corpus/genewiki.shex");
  auto start = Clock::now();
  ShExSchema schema = parse_schema(text);
  VisualGraph graph = build_graph(schema);
  DiagramText diagram = emit_classdiagram(graph);
  Graph3D g3 = emit_graph3d(graph);
  std::string json = serialize(g3);
  double elapsed = seconds_since(start);

  std::size_t refs = 0;
  for (const auto& d : schema.shapes) refs += testing_support::count_refs(d.expr);
  std::size_t arrows = 0, classes = 0, diagram_edges = 0;
  for (const auto& l : g3.links) arrows += l.arrowhead == Arrowhead::Arrow;
  std::istringstream lines(diagram.text);
  for (std::string line; std::getline(lines, line);) {
    classes += line.rfind("class ", 0) == 0;
    diagram_edges += line.find(" --> ") != std::string::npos;
  }
  bool ok = schema.shapes.size() == 23 && refs > 70 && external_targets(schema).empty() &&
            g3.nodes.size() == schema.shapes.size() && classes == schema.shapes.size() && arrows == refs &&
            diagram_edges == refs && !json.empty() && elapsed < 2.0;
  return {ok, std::to_string(schema.shapes.size()) + " shapes, " + std::to_string(refs) + " references (AST); " +
                  std::to_string(classes) + " classes, " + std::to_string(diagram_edges) + " arrows (diagram); " +
                  std::to_string(g3.nodes.size()) + " nodes, " + std::to_string(arrows) + " arrow links (3D) in " +
                  fmt(elapsed * 1000, 1) + " ms"};
}

Outcome construct_goldens() {
  std::size_t matched = 0, total = 0;
  std::string first_mismatch;
  for (const auto& name : testing_support::construct_cases()) {
    auto dir = testing_support::golden_dir() / "constructs";
    std::string src = read_text_file(dir / (name + ".shex"));
    for (int run = 0; run < 2; ++run) {
      VisualGraph g = build_graph(parse_schema(src));
      bool mmd = emit_classdiagram(g).text == read_text_file(dir / (name + ".mmd"));
      bool json = serialize(emit_graph3d(g)) == read_text_file(dir / (name + ".json"));
      total += 2;
      matched += mmd + json;
      if ((!mmd || !json) && first_mismatch.empty()) first_mismatch = name;
    }
  }
  return {matched == total, std::to_string(matched) + "/" + std::to_string(total) + " byte-identical over 2 runs" +
                                (first_mismatch.empty() ? "" : ", first mismatch: " + first_mismatch)};
}

Outcome focus_properties() {
  std::string failure = property_checks::check_focus(1000, 4242);
  return {failure.empty(), failure.empty() ? "1000 random graphs (<=50 nodes)" : failure};
}

Outcome geometry_properties() {
  std::string failure = property_checks::check_geometry(2000, 99);
  if (!failure.empty()) return {false, failure};
  // Exhaustive direction patterns for up to four links on one pair.
  for (int n = 1; n <= 4; ++n)
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<LinkDraft> d;
      for (int i = 0; i < n; ++i)
        d.push_back((mask >> i) & 1 ? LinkDraft{"B", "A", "p", Arrowhead::Arrow, true}
                                    : LinkDraft{"A", "B", "p", Arrowhead::Arrow, true});
      auto links = assign_link_geometry(d);
      if (n == 1) {
        if (links[0].rotation != 0) return {false, "single link rotated"};
        continue;
      }
      double min_gap = 10;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          min_gap = std::min(min_gap, property_checks::circular_gap(canonical_rotation(links[i]),
                                                                    canonical_rotation(links[j])));
      if (std::fabs(min_gap - 2 * std::numbers::pi / n) > 1e-9) return {false, "brute force n=" + std::to_string(n)};
    }
  return {true, "2000 random multigraphs plus all direction patterns for n<=4"};
}

Outcome sanitization() {
  std::vector<std::string> ids;
  for (const char* file : {"corpus/genewiki.shex", "corpus/webindex.shex"})
    testing_support::collect_identifiers(parse_schema(testing_support::read_data(file)), ids);
  for (const auto& name : testing_support::construct_cases())
    testing_support::collect_identifiers(
        parse_schema(read_text_file(testing_support::golden_dir() / "constructs" / (name + ".shex"))), ids);
  SanitizationMap map;
  std::vector<std::string> safe;
  for (const auto& id : ids) safe.push_back(sanitize_identifier(id, map));
  bool round_trip = restore_labels(safe, map) == ids;

  SanitizationMap cmap;
  std::vector<std::string> colliding = {":User", "_User", "-User", ".User", "a:2", "a_2", "a.2"};
  std::set<std::string> distinct;
  for (const auto& c : colliding) distinct.insert(sanitize_identifier(c, cmap));
  std::vector<std::string> back;
  for (const auto& c : colliding) back.push_back(*cmap.original_for(*cmap.safe_for(c)));
  bool collisions = distinct.size() == colliding.size() && back == colliding;
  return {round_trip && collisions, std::to_string(ids.size()) + " corpus identifiers restored; " +
                                        std::to_string(distinct.size()) + "/" + std::to_string(colliding.size()) +
                                        " colliding inputs got distinct safe ids"};
}

Outcome precision_formula() {
  auto table = precision(parse_study_csv(testing_support::read_data("study-synthetic.csv")));
  // min T = 96 (p1, S = 1).
  std::vector<std::pair<std::string, double>> hand = {
      {"p1", 1.0}, {"p2", 96.0 / 120}, {"p3", 96.0 / 150 * 0.8}, {"p4", 96.0 / 240}, {"p5", 96.0 / 300 * 0.5}};
  bool ok = table == hand && table[0].second == 1.0;
  std::string detail;
  for (const auto& [id, p] : table) detail += id + "=" + fmt(p, 3) + " ";
  return {ok, detail + "(exact match)"};
}

class CountingTransport : public HttpTransport {
 public:
  std::string get(const std::string&) override {
    ++calls;
    throw NetworkError("network disabled in acceptance run");
  }
  std::atomic<int> calls{0};
};

Outcome wikidata_fixture() {
  WikidataConfig wc;
  wc.mode = WikidataMode::Fixture;
  wc.fixture_path = testing_support::data_dir() / "wikidata-fixture.json";
  auto transport = std::make_unique<CountingTransport>();
  CountingTransport* counter = transport.get();
  auto client = std::make_shared<WikidataClient>(wc, std::move(transport));

  ServiceConfig sc;
  sc.wikidata_mode = WikidataMode::Fixture;
  sc.fixture_path = wc.fixture_path;
  Service service(sc, testing_support::read_data("corpus/genewiki.shex"), client);
  int port = service.bind(0);
  if (port <= 0) return {false, "could not bind a local port"};
  std::thread server([&] { service.run(); });
  service.wait_until_ready();
  httplib::Client http("127.0.0.1", port);
  auto res = http.Get("/api/entity?term=wd%3AQ42944");
  service.stop();
  server.join();
  std::string api_label;
  if (res && res->status == 200) api_label = nlohmann::json::parse(res->body).value("label", "");

  std::ostringstream out, err;
  int code = run_cli({"entity", "wd:Q42944", "--wikidata-mode", "fixture", "--fixture", wc.fixture_path->string()},
                     out, err);
  bool cli_ok = code == 0 && out.str().rfind("CERN", 0) == 0;
  bool ok = api_label == "CERN" && cli_ok && counter->calls == 0 && client->network_requests() == 0;
  return {ok, "API label \"" + api_label + "\", CLI \"" + out.str().substr(0, out.str().find('\n')) + "\", " +
                  std::to_string(counter->calls.load()) + " network calls"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Aggregate score reproduction", aggregate_score},
      {"Distance and redundancy matrices", published_matrices},
      {"Metric oracle equivalence", metric_oracle},
      {"Genewiki-scale conversion", genewiki_scale},
      {"Construct golden files", construct_goldens},
      {"Focus-engine property suite", focus_properties},
      {"Geometry property suite", geometry_properties},
      {"Sanitization round trip", sanitization},
      {"Precision formula", precision_formula},
      {"Wikidata fixture", wikidata_fixture},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed;
}
