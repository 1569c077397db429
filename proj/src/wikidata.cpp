#include "shexatlas/wikidata.hpp"

#include <algorithm>

#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "httplib.h"

namespace shexatlas {

std::string EntityId::str() const {
  return (kind == EntityKind::Item ? "Q" : "P") + std::to_string(number);
}

EntityNotFound::EntityNotFound(const EntityId& id)
    : WikidataError("entity " + id.str() + " not found") {}

std::optional<EntityId> parse_entity_id(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  EntityId id;
  if (text[0] == 'Q') {
    id.kind = EntityKind::Item;
  } else if (text[0] == 'P') {
    id.kind = EntityKind::Property;
  } else {
    return std::nullopt;
  }
  std::string_view digits = text.substr(1);
  if (digits.front() == '0') return std::nullopt;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id.number);
  if (ec != std::errc() || end != digits.data() + digits.size() || id.number == 0) return std::nullopt;
  return id;
}

namespace {

struct IriPattern {
  std::string_view path;
  bool items_allowed;
};

constexpr IriPattern kIriPatterns[] = {
    {"/entity/", true},          {"/prop/direct/", false},   {"/prop/statement/", false},
    {"/prop/qualifier/", false}, {"/prop/", false},          {"/wiki/Property:", false},
    {"/wiki/", true},
};

std::optional<EntityId> accept(std::optional<EntityId> id, bool items_allowed) {
  if (!id) return std::nullopt;
  if (!items_allowed && id->kind == EntityKind::Item) return std::nullopt;
  return id;
}

}  // namespace

std::optional<EntityId> extract_entity_id(std::string_view term) {
  if (term.size() >= 2 && term.front() == '<' && term.back() == '>')
    term = term.substr(1, term.size() - 2);

  for (std::string_view scheme : {"http://www.wikidata.org", "https://www.wikidata.org"}) {
    if (term.substr(0, scheme.size()) != scheme) continue;
    std::string_view rest = term.substr(scheme.size());
    for (const auto& p : kIriPatterns) {
      if (rest.substr(0, p.path.size()) == p.path)
        return accept(parse_entity_id(rest.substr(p.path.size())), p.items_allowed);
    }
    return std::nullopt;
  }

  auto colon = term.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view prefix = term.substr(0, colon);
  std::string_view local = term.substr(colon + 1);
  if (prefix == "wd") return parse_entity_id(local);
  if (prefix == "wdt" || prefix == "p" || prefix == "ps" || prefix == "pq")
    return accept(parse_entity_id(local), false);
  return std::nullopt;
}

std::string tooltip_text(const EntitySummary& summary) {
  if (summary.description.empty()) return summary.label;
  return summary.label + ": " + summary.description;
}

std::optional<WikidataMode> parse_wikidata_mode(std::string_view text) {
  if (text == "off") return WikidataMode::Off;
  if (text == "fixture") return WikidataMode::Fixture;
  if (text == "live") return WikidataMode::Live;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Live transport
// ---------------------------------------------------------------------------

namespace {

class HttpsTransport : public HttpTransport {
 public:
  explicit HttpsTransport(std::string user_agent) : user_agent_(std::move(user_agent)) {}

  std::string get(const std::string& path_and_query) override {
    httplib::Client client("https://www.wikidata.org");
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    client.set_follow_location(true);
    auto res = client.Get(path_and_query, {{"User-Agent", user_agent_}});
    if (!res) throw NetworkError("wikidata request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw NetworkError("wikidata returned HTTP " + std::to_string(res->status));
    return res->body;
  }

 private:
  std::string user_agent_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_https_transport(std::string user_agent) {
  return std::make_unique<HttpsTransport>(std::move(user_agent));
}

std::string wbgetentities_path(const EntityId& id, const std::string& language) {
  std::string langs = language == "en" ? "en" : httplib::detail::encode_query_param(language) + "%7Cen";
  return "/w/api.php?action=wbgetentities&format=json&props=labels%7Cdescriptions&ids=" + id.str() +
         "&languages=" + langs;
}

EntitySummary parse_wbgetentities(std::string_view body, const EntityId& id,
                                  const std::string& language) {
  nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw NetworkError("unparseable wikidata response");
  if (doc.contains("error")) {
    std::string code = doc["error"].value("code", "");
    if (code == "no-such-entity") throw EntityNotFound(id);
    throw NetworkError("wikidata error: " + code);
  }
  const auto entities = doc.find("entities");
  if (entities == doc.end() || !entities->contains(id.str())) throw EntityNotFound(id);
  const auto& entity = (*entities)[id.str()];
  if (entity.contains("missing")) throw EntityNotFound(id);

  auto pick = [&](const char* field, std::string* lang_out) -> std::string {
    if (!entity.contains(field)) return "";
    const auto& values = entity[field];
    for (const std::string& lang : {language, std::string("en")}) {
      if (values.contains(lang)) {
        if (lang_out) *lang_out = lang;
        return values[lang].value("value", "");
      }
    }
    return "";
  };
  EntitySummary s;
  s.id = id;
  s.language = language;
  s.label = pick("labels", &s.language);
  s.description = pick("descriptions", nullptr);
  if (s.label.empty()) throw EntityNotFound(id);
  return s;
}

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

WikidataClient::WikidataClient(WikidataConfig config, std::unique_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (config_.mode == WikidataMode::Fixture) {
    if (!config_.fixture_path) throw std::invalid_argument("fixture mode requires a fixture path");
    std::ifstream in(*config_.fixture_path);
    if (!in) throw std::runtime_error("cannot open wikidata fixture " + config_.fixture_path->string());
    fixture_ = nlohmann::json::parse(in, nullptr, false);
    if (fixture_.is_discarded() || !fixture_.is_object())
      throw std::runtime_error("wikidata fixture must be a JSON object");
    for (const auto& [key, value] : fixture_.items()) {
      if (!parse_entity_id(key)) throw std::runtime_error("fixture key '" + key + "' is not an entity id");
      if (!value.is_object() || !value.contains("label"))
        throw std::runtime_error("fixture entry '" + key + "' needs a label");
    }
  } else if (config_.mode == WikidataMode::Live && !transport_) {
    transport_ = make_https_transport(config_.user_agent);
  }
}

bool is_language_tag(std::string_view tag) {
  if (tag.empty() || tag.size() > 35 || tag.front() == '-' || tag.back() == '-') return false;
  return std::all_of(tag.begin(), tag.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
  });
}

EntitySummary WikidataClient::fetch_entity_summary(const EntityId& id, const std::string& language) {
  if (!is_language_tag(language)) throw std::invalid_argument("invalid language tag '" + language + "'");
  Key key{id, language};
  {
    std::shared_lock lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      auto fut = it->second;
      lock.unlock();
      return fut.get();
    }
  }

  std::promise<EntitySummary> promise;
  std::shared_future<EntitySummary> fut;
  {
    std::unique_lock lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      fut = it->second;
    } else {
      fut = promise.get_future().share();
      cache_.emplace(key, fut);
      lock.unlock();
      try {
        promise.set_value(lookup(id, language));
      } catch (const EntityNotFound&) {
        promise.set_exception(std::current_exception());
      } catch (...) {
        promise.set_exception(std::current_exception());
        // Transient failures are not remembered; the next call retries.
        std::unique_lock relock(cache_mutex_);
        cache_.erase(key);
      }
    }
  }
  return fut.get();
}

EntitySummary WikidataClient::lookup(const EntityId& id, const std::string& language) {
  switch (config_.mode) {
    case WikidataMode::Off:
      throw NetworkError("wikidata lookups are disabled");
    case WikidataMode::Fixture:
      return lookup_fixture(id, language);
    case WikidataMode::Live:
      return lookup_live(id, language);
  }
  throw NetworkError("wikidata lookups are disabled");
}

EntitySummary WikidataClient::lookup_fixture(const EntityId& id, const std::string& /*language*/) const {
  auto it = fixture_.find(id.str());
  if (it == fixture_.end()) throw EntityNotFound(id);
  EntitySummary s;
  s.id = id;
  s.label = it->value("label", "");
  s.description = it->value("description", "");
  s.language = it->value("language", "en");
  if (s.label.empty()) throw EntityNotFound(id);
  return s;
}

EntitySummary WikidataClient::lookup_live(const EntityId& id, const std::string& language) {
  if (auto cached = read_disk_cache(id, language)) return *cached;

  std::string body;
  {
    std::lock_guard lock(rate_mutex_);
    if (requests_.load() >= config_.request_budget)
      throw NetworkError("wikidata request budget of " + std::to_string(config_.request_budget) +
                         " exhausted");
    auto now = std::chrono::steady_clock::now();
    auto due = last_request_ + config_.min_spacing;
    if (requests_.load() > 0 && now < due) std::this_thread::sleep_until(due);
    last_request_ = std::chrono::steady_clock::now();
    ++requests_;
  }
  body = transport_->get(wbgetentities_path(id, language));
  EntitySummary s = parse_wbgetentities(body, id, language);
  write_disk_cache(s, language);
  return s;
}

std::optional<EntitySummary> WikidataClient::read_disk_cache(const EntityId& id,
                                                             const std::string& language) const {
  if (!config_.cache_dir) return std::nullopt;
  std::ifstream in(*config_.cache_dir / language / (id.str() + ".json"));
  if (!in) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("label")) return std::nullopt;
  return EntitySummary{id, doc.value("label", ""), doc.value("description", ""),
                       doc.value("language", language)};
}

void WikidataClient::write_disk_cache(const EntitySummary& s, const std::string& language) const {
  if (!config_.cache_dir) return;
  std::error_code ec;
  auto dir = *config_.cache_dir / language;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;
  std::ofstream out(dir / (s.id.str() + ".json"));
  out << nlohmann::json{{"label", s.label}, {"description", s.description}, {"language", s.language}}.dump();
}

}  // namespace shexatlas
