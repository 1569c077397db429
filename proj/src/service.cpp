#include "shexatlas/service.hpp"

#include "httplib.h"
#include "json.hpp"
#include "shexatlas/focus.hpp"
#include "shexatlas/graph3d.hpp"
#include "shexatlas/io.hpp"
#include "shexatlas/mermaid.hpp"
#include "shexatlas/schema_graph.hpp"
#include "shexatlas/shexc_parser.hpp"

namespace shexatlas {

namespace {

constexpr const char* kJson = "application/json";

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>shex-atlas</title></head>
<body>
<h1>shex-atlas</h1>
<p>No viewer bundle configured. Start the service with <code>--static-dir</code> to serve one.</p>
<ul>
<li><a href="/api/graph">/api/graph</a></li>
<li><a href="/api/diagram">/api/diagram</a></li>
<li><a href="/api/diagram/map">/api/diagram/map</a></li>
<li><a href="/api/health">/api/health</a></li>
</ul>
</body></html>
)";

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

void send_unknown_node(httplib::Response& res, const UnknownNode& e) {
  send_json(res, 404, {{"error", e.what()}, {"suggestions", e.suggestions()}});
}

}  // namespace

void ServiceConfig::validate() const {
  if (wikidata_mode == WikidataMode::Fixture && !fixture_path)
    throw std::invalid_argument("wikidata fixture mode requires a fixture path");
}

struct Service::Impl {
  ServiceConfig config;
  VisualGraph graph;
  std::string graph_json;
  DiagramText diagram;
  std::string map_json;
  std::shared_ptr<WikidataClient> wikidata;
  httplib::Server server;

  Impl(ServiceConfig cfg, std::string_view schema_text, std::shared_ptr<WikidataClient> client)
      : config(std::move(cfg)), wikidata(std::move(client)) {
    config.validate();
    graph = build_graph(parse_schema(schema_text));
    graph_json = to_json(emit_graph3d(graph)).dump();
    diagram = emit_classdiagram(graph);
    nlohmann::json map = nlohmann::json::object();
    for (const auto& [safe, original] : diagram.map.reverse()) map[safe] = original;
    map_json = map.dump();
    routes();
  }

  void routes() {
    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, {{"status", "ok"}});
    });

    server.Get("/api/graph", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(graph_json, kJson);
    });

    server.Get("/api/diagram", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(diagram.text, "text/plain; charset=utf-8");
    });

    server.Get("/api/diagram/map", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(map_json, kJson);
    });

    server.Post("/api/focus", [this](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("focused") || !body["focused"].is_array())
        return send_error(res, 400, "expected {\"focused\": [node ids]}");
      std::vector<std::string> ids;
      for (const auto& v : body["focused"]) {
        if (!v.is_string()) return send_error(res, 400, "focused entries must be strings");
        ids.push_back(v.get<std::string>());
      }
      bool incoming = config.include_incoming_focus;
      if (body.contains("include_incoming")) {
        if (!body["include_incoming"].is_boolean()) return send_error(res, 400, "include_incoming must be a boolean");
        incoming = body["include_incoming"].get<bool>();
      }
      try {
        FocusState state = FocusState::from_ids(graph, ids);
        send_json(res, 200, to_json(classify(graph, state, incoming)));
      } catch (const UnknownNode& e) {
        send_unknown_node(res, e);
      } catch (const std::invalid_argument& e) {
        send_error(res, 400, e.what());
      }
    });

    server.Get("/api/collapse", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("node")) return send_error(res, 400, "missing 'node' parameter");
      try {
        send_json(res, 200, to_json(emit_graph3d(collapse_neighbourhood(graph, req.get_param_value("node")))));
      } catch (const UnknownNode& e) {
        send_unknown_node(res, e);
      }
    });

    server.Get("/api/entity", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("term")) return send_error(res, 400, "missing 'term' parameter");
      std::string term = req.get_param_value("term");
      std::string lang = req.has_param("lang") ? req.get_param_value("lang") : "en";
      if (!is_language_tag(lang)) return send_error(res, 400, "invalid 'lang' parameter");
      auto id = extract_entity_id(term);
      if (!id) return send_error(res, 404, "'" + term + "' is not a Wikidata term");
      if (!wikidata) return send_error(res, 503, "wikidata lookups are disabled");
      try {
        EntitySummary s = wikidata->fetch_entity_summary(*id, lang);
        send_json(res, 200,
                  {{"term", term},
                   {"id", id->str()},
                   {"label", s.label},
                   {"description", s.description},
                   {"tooltip", tooltip_text(s)}});
      } catch (const EntityNotFound& e) {
        send_error(res, 404, e.what());
      } catch (const WikidataError& e) {
        send_error(res, 503, e.what());
      }
    });

    if (config.static_dir) {
      server.set_mount_point("/", config.static_dir->string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
      });
    }
  }
};

namespace {

std::shared_ptr<WikidataClient> client_for(const ServiceConfig& config) {
  config.validate();
  if (config.wikidata_mode == WikidataMode::Off) return nullptr;
  WikidataConfig wc;
  wc.mode = config.wikidata_mode;
  wc.fixture_path = config.fixture_path;
  wc.cache_dir = config.cache_dir;
  return std::make_shared<WikidataClient>(std::move(wc));
}

}  // namespace

Service::Service(ServiceConfig config)
    : Service(config, read_text_file(config.input_path), client_for(config)) {}

Service::Service(ServiceConfig config, std::string_view schema_text, std::shared_ptr<WikidataClient> client)
    : impl_(std::make_unique<Impl>(std::move(config), schema_text, std::move(client))) {}

Service::~Service() = default;

int Service::bind(int port) {
  if (port == 0) return impl_->server.bind_to_any_port(impl_->config.host);
  return impl_->server.bind_to_port(impl_->config.host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace shexatlas
