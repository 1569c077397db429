#pragma once

#include <atomic>
#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace shexatlas {

enum class EntityKind { Item, Property };

struct EntityId {
  EntityKind kind = EntityKind::Item;
  std::uint64_t number = 1;

  /// "Q42944" / "P31".
  std::string str() const;
  auto operator<=>(const EntityId&) const = default;
};

struct EntitySummary {
  EntityId id;
  std::string label;
  std::string description;
  std::string language;

  bool operator==(const EntitySummary&) const = default;
};

class WikidataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EntityNotFound : public WikidataError {
 public:
  explicit EntityNotFound(const EntityId& id);
};

/// Transport failure, disabled lookups, or an exhausted request budget.
class NetworkError : public WikidataError {
 public:
  using WikidataError::WikidataError;
};

/// "Q42944" or "P31" exactly.
std::optional<EntityId> parse_entity_id(std::string_view text);

/// Recognizes wd:, wdt:, p:, ps:, pq: prefixed names and full Wikidata IRIs
/// (entity, prop/direct, prop, prop/statement, prop/qualifier, wiki pages).
std::optional<EntityId> extract_entity_id(std::string_view term);

/// Letters, digits and inner hyphens, e.g. "en", "pt-br".
bool is_language_tag(std::string_view tag);

/// "<label>: <description>", or the label alone when there is no description.
std::string tooltip_text(const EntitySummary& summary);

/// Minimal GET abstraction so tests can count requests without a network.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Returns the response body of GET https://www.wikidata.org<path_and_query>.
  /// Throws NetworkError on transport failure or a non-200 status.
  virtual std::string get(const std::string& path_and_query) = 0;
};

std::unique_ptr<HttpTransport> make_https_transport(std::string user_agent);

/// wbgetentities request path for one id, requested language then English.
std::string wbgetentities_path(const EntityId& id, const std::string& language);

/// Extracts the summary from a wbgetentities response. Throws EntityNotFound
/// for missing entities and NetworkError for unparseable bodies.
EntitySummary parse_wbgetentities(std::string_view body, const EntityId& id,
                                  const std::string& language);

enum class WikidataMode { Off, Fixture, Live };

std::optional<WikidataMode> parse_wikidata_mode(std::string_view text);

struct WikidataConfig {
  WikidataMode mode = WikidataMode::Off;
  std::optional<std::filesystem::path> fixture_path;
  std::optional<std::filesystem::path> cache_dir;
  std::size_t request_budget = 100;
  std::chrono::milliseconds min_spacing{100};
  std::string user_agent = "shex-atlas/0.1 (ShEx schema visualization tool)";
};

/// Label/description lookups with a process-lifetime cache keyed by
/// (id, language). Concurrent lookups of the same key share one request.
class WikidataClient {
 public:
  /// Fixture mode reads `config.fixture_path` eagerly. Live mode uses
  /// `transport` when given, otherwise an HTTPS transport.
  explicit WikidataClient(WikidataConfig config, std::unique_ptr<HttpTransport> transport = nullptr);

  WikidataClient(const WikidataClient&) = delete;
  WikidataClient& operator=(const WikidataClient&) = delete;

  /// Throws std::invalid_argument for a malformed language tag.
  EntitySummary fetch_entity_summary(const EntityId& id, const std::string& language = "en");

  WikidataMode mode() const { return config_.mode; }
  /// Requests actually sent through the transport.
  std::size_t network_requests() const { return requests_.load(); }

 private:
  using Key = std::pair<EntityId, std::string>;

  WikidataConfig config_;
  std::unique_ptr<HttpTransport> transport_;
  nlohmann::json fixture_;

  mutable std::shared_mutex cache_mutex_;
  std::map<Key, std::shared_future<EntitySummary>> cache_;

  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point last_request_{};
  std::atomic<std::size_t> requests_{0};

  EntitySummary lookup(const EntityId& id, const std::string& language);
  EntitySummary lookup_fixture(const EntityId& id, const std::string& language) const;
  EntitySummary lookup_live(const EntityId& id, const std::string& language);
  std::optional<EntitySummary> read_disk_cache(const EntityId& id, const std::string& language) const;
  void write_disk_cache(const EntitySummary& summary, const std::string& language) const;
};

}  // namespace shexatlas
