#pragma once

// Randomized checks shared by the unit tests and the acceptance binary.
// Each returns an empty string on success, otherwise the first failure.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shexatlas/focus.hpp"
#include "shexatlas/graph3d.hpp"
#include "shexatlas/metrics.hpp"
#include "test_support.hpp"

namespace property_checks {

using namespace shexatlas;

inline std::set<std::string> all_node_ids(const VisualGraph& g) {
  std::set<std::string> s;
  for (const auto& n : g.nodes) s.insert(n.id);
  return s;
}

inline std::set<std::string> all_edge_ids(const VisualGraph& g) {
  std::set<std::string> s;
  for (const auto& e : g.edges) s.insert(e.id);
  return s;
}

inline bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::string check_focus(int trials, unsigned seed) {
  std::mt19937 rng(seed);
  for (int t = 0; t < trials; ++t) {
    VisualGraph g = testing_support::random_graph(rng);
    std::vector<std::string> ids;
    for (const auto& n : g.nodes) ids.push_back(n.id);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, ids.size())(rng);
    std::size_t k2 = std::uniform_int_distribution<std::size_t>(k, ids.size())(rng);
    bool incoming = rng() % 2;

    FocusState small, large;
    for (std::size_t i = 0; i < k2; ++i) {
      if (i < k) small = toggle_focus(g, small, ids[i]);
      large = toggle_focus(g, large, ids[i]);
    }
    auto cs = classify(g, small, incoming);
    auto cl = classify(g, large, incoming);
    std::ostringstream where;
    where << "trial " << t << ": ";
    if (!subset(cs.highlighted_nodes, cl.highlighted_nodes) || !subset(cs.highlighted_edges, cl.highlighted_edges))
      return where.str() + "monotonicity violated";
    if (!(classify(g, large, incoming) == cl)) return where.str() + "classify not pure";

    for (const auto* c : {&cs, &cl}) {
      const FocusState& s = c == &cs ? small : large;
      if (s.empty()) {
        if (c->mode != VisibilityMode::AllNormal || !c->dimmed_nodes.empty() || !c->dimmed_edges.empty())
          return where.str() + "empty focus not AllNormal";
        continue;
      }
      if (c->mode != VisibilityMode::Partitioned) return where.str() + "nonempty focus not Partitioned";
      std::set<std::string> nodes = c->highlighted_nodes, edges = c->highlighted_edges;
      for (const auto& n : c->dimmed_nodes)
        if (!nodes.insert(n).second) return where.str() + "node both highlighted and dimmed";
      for (const auto& e : c->dimmed_edges)
        if (!edges.insert(e).second) return where.str() + "edge both highlighted and dimmed";
      if (nodes != all_node_ids(g) || edges != all_edge_ids(g)) return where.str() + "partition does not cover graph";
    }

    // Involution from an arbitrary state. Re-focusing a node appends it, so
    // only membership survives when x starts out focused.
    const std::string& x = g.nodes[rng() % g.nodes.size()].id;
    FocusState twice = toggle_focus(g, toggle_focus(g, large, x), x);
    if (!large.contains(x)) {
      if (!(twice == large)) return where.str() + "toggle twice is not identity";
    } else {
      std::set<std::string> a(twice.focused().begin(), twice.focused().end());
      std::set<std::string> b(large.focused().begin(), large.focused().end());
      if (a != b) return where.str() + "toggle twice changed the focus set";
    }
    FocusState fresh = toggle_focus(g, small, x);
    if (!small.contains(x) && !(toggle_focus(g, fresh, x) == small)) return where.str() + "toggle twice is not identity";

    // Collapse: containment and idempotence.
    VisualGraph c1 = collapse_neighbourhood(g, x);
    if (!c1.has_node(x)) return where.str() + "collapse lost focal node";
    if (!subset(all_node_ids(c1), all_node_ids(g)) || !subset(all_edge_ids(c1), all_edge_ids(g)))
      return where.str() + "collapse not a subgraph";
    for (const auto& e : g.edges) {
      bool inside = c1.has_node(e.source) && c1.has_node(e.target);
      if (inside != all_edge_ids(c1).count(e.id)) return where.str() + "collapse not induced";
    }
    if (!(collapse_neighbourhood(c1, x) == c1)) return where.str() + "collapse not idempotent";
  }
  return {};
}

inline double circular_gap(double a, double b) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double d = std::fmod(std::fabs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

inline std::string check_geometry(int trials, unsigned seed) {
  constexpr double two_pi = 2 * std::numbers::pi;
  std::mt19937 rng(seed);
  for (int t = 0; t < trials; ++t) {
    int n_nodes = std::uniform_int_distribution<int>(1, 6)(rng);
    int n_links = std::uniform_int_distribution<int>(1, 24)(rng);
    std::vector<LinkDraft> drafts;
    for (int i = 0; i < n_links; ++i) {
      LinkDraft d;
      d.source = "n" + std::to_string(rng() % n_nodes);
      d.target = "n" + std::to_string(rng() % n_nodes);
      d.reference = rng() % 3 != 0;
      d.arrowhead = d.reference ? Arrowhead::Arrow : Arrowhead::Diamond;
      d.label = "l" + std::to_string(i);
      drafts.push_back(d);
    }
    std::vector<Link3D> links = assign_link_geometry(drafts);
    if (links.size() != drafts.size()) return "link count changed";
    if (!(assign_link_geometry(drafts) == links)) return "geometry not deterministic";

    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> curved, straight;
    for (std::size_t i = 0; i < links.size(); ++i) {
      const auto& l = links[i];
      if (l.rotation < 0 || l.rotation >= two_pi) return "rotation out of [0, 2pi)";
      auto key = std::minmax(l.source, l.target);
      if (drafts[i].reference && l.curvature <= 0) return "reference link not curved";
      if (l.source == l.target && l.curvature != 0.4) return "self-loop curvature not 0.4";
      (l.curvature > 0 ? curved : straight)[{key.first, key.second}].push_back(i);
    }
    for (const auto& [pair, idx] : straight) {
      if (idx.size() > 1) return "two straight links on one pair";
      if (links[idx[0]].rotation != 0) return "straight link rotated";
    }
    for (const auto& [pair, idx] : curved) {
      std::size_t n = idx.size();
      if (n == 1) {
        if (links[idx[0]].rotation != 0) return "single curved link has nonzero rotation";
        continue;
      }
      double min_gap = two_pi;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
          const auto& la = links[idx[a]];
          const auto& lb = links[idx[b]];
          double gap = circular_gap(canonical_rotation(la), canonical_rotation(lb));
          if (la.curvature == lb.curvature && gap < 1e-9) return "two links share curvature and angle";
          min_gap = std::min(min_gap, gap);
        }
      if (std::fabs(min_gap - two_pi / n) > 1e-9) {
        std::ostringstream os;
        os << "trial " << t << ": pair " << pair.first << "," << pair.second << " min separation " << min_gap
           << " expected " << two_pi / n;
        return os.str();
      }
    }
  }
  return {};
}

// Straightforward restatement of the metric definitions, kept independent of
// the library's matrix code.
struct MetricOracle {
  const NotationSpec& spec;

  const std::string* token(const std::string& s, const std::string& v) const {
    auto it = spec.assignments.find({s, v});
    return it == spec.assignments.end() ? nullptr : &it->second;
  }

  double vvd(const std::string& v, const std::string& g, const std::string& h) const {
    if (g == h) return 0;
    auto key = std::make_tuple(std::min(g, h), std::max(g, h), v);
    if (spec.vvd_overrides.count(key)) return spec.vvd_overrides.at(key);
    const std::string* a = token(g, v);
    const std::string* b = token(h, v);
    if (!a || !b || *a == *b) return 0;
    if (v != "shape") return 1;
    const ShapeGroup& ga = spec.shape_groups.at(*a);
    const ShapeGroup& gb = spec.shape_groups.at(*b);
    if (ga.main_group != gb.main_group) return 1;
    return ga.basic_group == gb.basic_group ? 0.5 : 1;
  }

  double vd(const std::string& g, const std::string& h) const {
    double num = 0, den = 0;
    for (const auto& v : spec.variables) {
      num += spec.weights.at(v) * vvd(v, g, h);
      den += spec.weights.at(v);
    }
    return num / den;
  }

  double vr(const std::string& g, const std::string& h) const {
    int diff = 0;
    for (const auto& v : spec.variables) {
      const std::string* a = token(g, v);
      const std::string* b = token(h, v);
      if (a && b && *a != *b) ++diff;
    }
    return diff / 8.0;
  }

  template <typename F>
  double average(F f) const {
    double sum = 0;
    for (const auto& g : spec.symbols)
      for (const auto& h : spec.symbols)
        if (g != h) sum += f(g, h);
    double n = static_cast<double>(spec.symbols.size());
    return sum / (n * n - n);
  }

  double VD() const { return average([&](auto& g, auto& h) { return vd(g, h); }); }
  double RC() const { return average([&](auto& g, auto& h) { return vr(g, h); }); }
};

inline NotationSpec random_spec(std::mt19937& rng) {
  NotationSpec s;
  int n = std::uniform_int_distribution<int>(2, 5)(rng);
  for (int i = 0; i < n; ++i) s.symbols.push_back("s" + std::to_string(i));
  std::vector<std::string> vars = bertin_variables();
  std::shuffle(vars.begin(), vars.end(), rng);
  vars.resize(std::uniform_int_distribution<std::size_t>(1, vars.size())(rng));
  s.variables = vars;
  const std::vector<std::string> shapes = {"rect", "ellipse", "arrow", "diamond", "line"};
  s.shape_groups = {{"rect", {"region", "quad"}},
                    {"ellipse", {"region", "round"}},
                    {"arrow", {"line", "line"}},
                    {"diamond", {"line", "line"}},
                    {"line", {"line", "plain"}}};
  std::uniform_real_distribution<double> weight(0.5, 8.0);
  for (const auto& v : vars) s.weights[v] = std::round(weight(rng) * 4) / 4;
  for (const auto& sym : s.symbols)
    for (const auto& v : vars) {
      if (rng() % 5 == 0) continue;  // leave unassigned
      s.assignments[{sym, v}] = v == "shape" ? shapes[rng() % shapes.size()] : "t" + std::to_string(rng() % 3);
    }
  for (int i = 0; i < n; ++i) s.textual_overload[s.symbols[i]] = rng() % 2;
  if (rng() % 3 == 0) {
    std::uniform_real_distribution<double> unit(0, 1);
    s.set_override(s.symbols[0], s.symbols[1], vars[rng() % vars.size()], unit(rng));
  }
  return s;
}

inline std::string check_metric_oracle(int trials, unsigned seed) {
  std::mt19937 rng(seed);
  for (int t = 0; t < trials; ++t) {
    NotationSpec spec = random_spec(rng);
    MetricOracle oracle{spec};
    double vd = metric_VD(spec), rc = metric_RC(spec);
    if (std::fabs(vd - oracle.VD()) > 1e-12 || std::fabs(rc - oracle.RC()) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "trial " << t << ": VD " << vd << " vs " << oracle.VD() << ", RC " << rc << " vs " << oracle.RC();
      return os.str();
    }
    for (const auto& g : spec.symbols)
      for (const auto& h : spec.symbols)
        if (std::fabs(visual_distance(spec, g, h) - oracle.vd(g, h)) > 1e-12 ||
            visual_distance(spec, g, h) != visual_distance(spec, h, g))
          return "pairwise vd mismatch at trial " + std::to_string(t);
    MetricReport r = aggregate_discriminability(spec);
    for (double m : {r.vd, r.rc, r.ppo, r.td, r.aggregate})
      if (m < 0 || m > 1) return "metric outside [0, 1]";
  }
  return {};
}

}  // namespace property_checks
