#include "shexatlas/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "shexatlas/focus.hpp"
#include "shexatlas/graph3d.hpp"
#include "shexatlas/io.hpp"
#include "shexatlas/mermaid.hpp"
#include "shexatlas/metrics.hpp"
#include "shexatlas/schema_graph.hpp"
#include "shexatlas/service.hpp"
#include "shexatlas/shexc_parser.hpp"
#include "shexatlas/wikidata.hpp"

namespace shexatlas {

namespace {

/// Carries an exit code out of a command body.
struct CommandFailure {
  int code;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

class Commands {
 public:
  Commands(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  [[noreturn]] void fail(int code, const std::string& message) {
    err_ << "shex-atlas: " << message << "\n";
    throw CommandFailure{code};
  }

  std::string read(const std::string& path) {
    try {
      return read_text_file(path);
    } catch (const IoError& e) {
      fail(exit_code::kIoError, e.what());
    }
  }

  void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
      out_ << text;
      return;
    }
    try {
      write_text_file(out_path, text);
    } catch (const IoError& e) {
      fail(exit_code::kIoError, e.what());
    }
  }

  VisualGraph load_graph(const std::string& path) {
    std::string text = read(path);
    try {
      return build_graph(parse_schema(text));
    } catch (const ParseError& e) {
      fail(exit_code::kParseError, path + ":" + e.what());
    }
  }

  [[noreturn]] void unknown_node(const UnknownNode& e) {
    std::string msg = e.what();
    if (!e.suggestions().empty()) {
      msg += "; did you mean";
      for (std::size_t i = 0; i < e.suggestions().size(); ++i)
        msg += (i ? ", " : " ") + e.suggestions()[i];
      msg += "?";
    }
    fail(exit_code::kUnknownNode, msg);
  }

  void convert(const std::string& input, const std::string& format, const std::string& out_path,
               const std::string& map_path) {
    VisualGraph graph = load_graph(input);
    if (format == "classdiagram") {
      DiagramText diagram = emit_classdiagram(graph);
      emit(diagram.text, out_path);
      if (!map_path.empty()) emit(diagram.map.to_tsv(), map_path);
    } else {
      if (!map_path.empty()) fail(exit_code::kUsage, "--map only applies to --format classdiagram");
      emit(serialize(emit_graph3d(graph)), out_path);
    }
  }

  void focus(const std::string& input, const std::string& nodes, bool include_incoming) {
    VisualGraph graph = load_graph(input);
    std::vector<std::string> ids;
    std::string item;
    for (std::size_t i = 0; i <= nodes.size(); ++i) {
      if (i == nodes.size() || nodes[i] == ',') {
        if (!item.empty()) ids.push_back(item);
        item.clear();
      } else if (nodes[i] != ' ') {
        item += nodes[i];
      }
    }
    try {
      FocusState state;
      for (const auto& id : ids) {
        if (state.contains(id)) fail(exit_code::kUsage, "node '" + id + "' listed twice");
        state = toggle_focus(graph, state, id);
      }
      out_ << to_json(classify(graph, state, include_incoming)).dump(2) << "\n";
    } catch (const UnknownNode& e) {
      unknown_node(e);
    }
  }

  void collapse(const std::string& input, const std::string& node) {
    VisualGraph graph = load_graph(input);
    try {
      out_ << serialize(emit_graph3d(collapse_neighbourhood(graph, node)));
    } catch (const UnknownNode& e) {
      unknown_node(e);
    }
  }

  void metrics(const std::string& path, const std::string& format) {
    std::string text = read(path);
    MetricReport report;
    try {
      nlohmann::json doc = nlohmann::json::parse(text);
      report = aggregate_discriminability(notation_from_json(doc));
    } catch (const nlohmann::json::exception& e) {
      fail(exit_code::kParseError, path + ": " + e.what());
    } catch (const MetricError& e) {
      fail(exit_code::kParseError, path + ": " + e.what());
    }
    if (format != "json") out_ << format_report(report);
    if (format == "both") out_ << "\n";
    if (format != "text") out_ << to_json(report).dump(2) << "\n";
  }

  void study(const std::string& path, const std::string& format) {
    std::string text = read(path);
    std::vector<std::pair<std::string, double>> table;
    try {
      table = precision(parse_study_csv(text));
    } catch (const MetricError& e) {
      fail(exit_code::kParseError, path + ": " + e.what());
    }
    if (format != "json") out_ << format_precision(table);
    if (format == "both") out_ << "\n";
    if (format != "text") {
      nlohmann::json doc = nlohmann::json::array();
      for (const auto& [id, p] : table) doc.push_back({{"participant", id}, {"precision", p}});
      out_ << doc.dump(2) << "\n";
    }
  }

  WikidataConfig wikidata_config(const std::string& mode_flag, const std::string& fixture) {
    WikidataConfig wc;
    std::string mode_text = !mode_flag.empty() ? mode_flag : env("SHEX_ATLAS_WIKIDATA_MODE").value_or("off");
    auto mode = parse_wikidata_mode(mode_text);
    if (!mode) fail(exit_code::kUsage, "unknown wikidata mode '" + mode_text + "'");
    wc.mode = *mode;
    if (!fixture.empty()) wc.fixture_path = fixture;
    if (auto dir = env("SHEX_ATLAS_CACHE_DIR")) wc.cache_dir = *dir;
    if (wc.mode == WikidataMode::Fixture && !wc.fixture_path)
      fail(exit_code::kUsage, "--fixture is required in fixture mode");
    return wc;
  }

  void entity(const std::string& term, const std::string& mode, const std::string& fixture,
              const std::string& lang) {
    if (!is_language_tag(lang)) fail(exit_code::kUsage, "invalid language tag '" + lang + "'");
    auto id = extract_entity_id(term);
    if (!id) fail(exit_code::kUnknownNode, "'" + term + "' is not a Wikidata term");
    WikidataConfig wc = wikidata_config(mode, fixture);
    try {
      WikidataClient client(wc);
      out_ << tooltip_text(client.fetch_entity_summary(*id, lang)) << "\n";
    } catch (const EntityNotFound& e) {
      fail(exit_code::kUnknownNode, e.what());
    } catch (const NetworkError& e) {
      fail(exit_code::kNetworkError, e.what());
    } catch (const std::runtime_error& e) {
      fail(exit_code::kIoError, e.what());
    }
  }

  void serve(ServiceConfig config, const std::string& mode, const std::string& fixture) {
    WikidataConfig wc = wikidata_config(mode, fixture);
    config.wikidata_mode = wc.mode;
    config.fixture_path = wc.fixture_path;
    config.cache_dir = wc.cache_dir;
    std::string text = read(config.input_path.string());
    std::unique_ptr<Service> service;
    try {
      std::shared_ptr<WikidataClient> client;
      if (wc.mode != WikidataMode::Off) client = std::make_shared<WikidataClient>(wc);
      service = std::make_unique<Service>(config, text, std::move(client));
    } catch (const ParseError& e) {
      fail(exit_code::kParseError, config.input_path.string() + ":" + e.what());
    } catch (const std::runtime_error& e) {
      fail(exit_code::kIoError, e.what());
    }
    int port = service->bind(config.port);
    if (port < 0) fail(exit_code::kIoError, "cannot bind " + config.host + ":" + std::to_string(config.port));
    err_ << "shex-atlas: serving " << config.input_path.string() << " on http://" << config.host << ":" << port
         << "\n";
    if (!service->run()) fail(exit_code::kIoError, "server stopped unexpectedly");
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ShEx schema visualization compiler", "shex-atlas"};
  app.require_subcommand(1);
  Commands cmd(out, err);

  std::string input, format = "classdiagram", out_path, map_path;
  auto* convert = app.add_subcommand("convert", "Compile a ShExC schema to a diagram document");
  convert->add_option("input", input, "ShExC schema (.shex)")->required();
  convert->add_option("-f,--format", format, "classdiagram or graph3d")
      ->check(CLI::IsMember({"classdiagram", "graph3d"}));
  convert->add_option("-o,--out", out_path, "Write the document here instead of stdout");
  convert->add_option("--map", map_path, "Write the sanitization map (classdiagram only)");

  std::string nodes;
  bool include_incoming = false;
  auto* focus = app.add_subcommand("focus", "Classify elements for a set of focused shapes");
  focus->add_option("input", input, "ShExC schema")->required();
  focus->add_option("--nodes", nodes, "Comma-separated node ids (empty for none)")->required();
  focus->add_flag("--include-incoming", include_incoming, "Also highlight incoming references");

  std::string node;
  auto* collapse = app.add_subcommand("collapse", "Reduce the graph to a node and its neighbours");
  collapse->add_option("input", input, "ShExC schema")->required();
  collapse->add_option("--node", node, "Node id")->required();

  std::string spec_path, report_format = "both";
  auto* metrics = app.add_subcommand("metrics", "Perceptual discriminability of a notation");
  metrics->add_option("spec", spec_path, "Notation spec (JSON)")->required();
  metrics->add_option("--format", report_format, "text, json or both")
      ->check(CLI::IsMember({"text", "json", "both"}));

  std::string records_path;
  auto* study = app.add_subcommand("study", "Precision per participant from a results CSV");
  study->add_option("records", records_path, "CSV: participant,elapsed_seconds,success_rate")->required();
  study->add_option("--format", report_format, "text, json or both")
      ->check(CLI::IsMember({"text", "json", "both"}));

  std::string term, mode, fixture, lang = "en";
  auto* entity = app.add_subcommand("entity", "Tooltip text for a Wikidata term");
  entity->add_option("term", term, "e.g. wd:Q42944")->required();
  entity->add_option("--wikidata-mode", mode, "off, fixture or live (default $SHEX_ATLAS_WIKIDATA_MODE)");
  entity->add_option("--fixture", fixture, "Fixture JSON for fixture mode");
  entity->add_option("--lang", lang, "Preferred label language");

  ServiceConfig service_config;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API for one schema");
  serve->add_option("input", input, "ShExC schema")->required();
  serve->add_option("--host", service_config.host, "Bind address");
  serve->add_option("-p,--port", service_config.port, "TCP port");
  serve->add_option("--wikidata-mode", mode, "off, fixture or live (default $SHEX_ATLAS_WIKIDATA_MODE)");
  serve->add_option("--fixture", fixture, "Fixture JSON for fixture mode");
  serve->add_option("--static-dir", static_dir, "Viewer bundle served at /");
  serve->add_flag("--include-incoming", service_config.include_incoming_focus,
                  "Default focus also highlights incoming references");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  try {
    if (*convert) cmd.convert(input, format, out_path, map_path);
    if (*focus) cmd.focus(input, nodes, include_incoming);
    if (*collapse) cmd.collapse(input, node);
    if (*metrics) cmd.metrics(spec_path, report_format);
    if (*study) cmd.study(records_path, report_format);
    if (*entity) cmd.entity(term, mode, fixture, lang);
    if (*serve) {
      service_config.input_path = input;
      if (!static_dir.empty()) service_config.static_dir = static_dir;
      cmd.serve(service_config, mode, fixture);
    }
  } catch (const CommandFailure& f) {
    return f.code;
  }
  return exit_code::kOk;
}

}  // namespace shexatlas
