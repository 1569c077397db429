#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "shexatlas/wikidata.hpp"

namespace shexatlas {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8080;
  std::filesystem::path input_path;
  WikidataMode wikidata_mode = WikidataMode::Off;
  std::optional<std::filesystem::path> fixture_path;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> static_dir;
  bool include_incoming_focus = false;

  /// Throws std::invalid_argument when fixture mode lacks a fixture path.
  void validate() const;
};

/// HTTP front end over one immutable schema. Focus state is owned by the
/// client and sent with every request, so handlers share nothing mutable
/// except the Wikidata cache.
///
///   GET  /api/health            {"status":"ok"}
///   GET  /api/graph             3D graph document
///   GET  /api/diagram           class-diagram text (text/plain)
///   GET  /api/diagram/map       {"safe id": "original id", ...}
///   POST /api/focus             {"focused":[ids], "include_incoming":bool?}
///   GET  /api/collapse?node=id  3D graph document of the neighbourhood
///   GET  /api/entity?term=t     {"term","id","label","description","tooltip"}
class Service {
 public:
  /// Reads and parses config.input_path; throws on I/O or parse failure.
  explicit Service(ServiceConfig config);
  /// Serves `schema_text` directly. `client` may be null (lookups disabled).
  Service(ServiceConfig config, std::string_view schema_text, std::shared_ptr<WikidataClient> client);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to config.host; port 0 picks a free port. Returns the bound port
  /// or -1 on failure.
  int bind(int port);
  /// Blocks serving requests until stop().
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shexatlas
