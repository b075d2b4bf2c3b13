#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ecoloom/eol.hpp"
#include "ecoloom/errors.hpp"

namespace ecoloom::eol {
namespace {

using nlohmann::json;

std::string slugify(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "empty" : out;
}

bool all_digits(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(const ClientConfig& cfg) : cfg_(cfg) {
    static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(cfg.base_url, m, url)) {
      throw NetworkError("bad EOL base url '" + cfg.base_url + "'");
    }
    origin_ = m[1];
    prefix_ = m[2];
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }

  std::optional<std::string> get(const Request& req) override {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (origin_.rfind("https://", 0) == 0) {
      throw NetworkError("this build has no TLS support; set ECOLOOM_EOL_BASE_URL to an http:// "
                         "mirror or use fixtures");
    }
#endif
    httplib::Client cli(origin_);
    cli.set_connection_timeout(cfg_.timeout_seconds, 0);
    cli.set_read_timeout(cfg_.timeout_seconds, 0);
    cli.set_follow_location(true);
    httplib::Headers headers{{"Accept", "application/json"}};
    if (!cfg_.token.empty()) headers.emplace("Authorization", "JWT " + cfg_.token);
    httplib::Params params(req.query.begin(), req.query.end());
    auto res = cli.Get(prefix_ + req.path, params, headers);
    if (!res) {
      throw NetworkError("EOL request " + req.path + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 404) return std::nullopt;
    if (res->status != 200) {
      throw NetworkError("EOL request " + req.path + " returned HTTP " +
                         std::to_string(res->status));
    }
    return res->body;
  }

 private:
  ClientConfig cfg_;
  std::string origin_;
  std::string prefix_;
};

class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<std::string> get(const Request& req) override {
    auto path = dir_ / (req.key + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NetworkError("no recorded response " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
  }

 private:
  std::filesystem::path dir_;
};

class RecordingTransport : public Transport {
 public:
  RecordingTransport(std::unique_ptr<Transport> live, std::filesystem::path dir)
      : live_(std::move(live)), dir_(std::move(dir)) {}

  std::optional<std::string> get(const Request& req) override {
    auto body = live_->get(req);
    if (body) {
      std::filesystem::create_directories(dir_);
      std::ofstream out(dir_ / (req.key + ".json"), std::ios::binary);
      out << *body;
      if (!out) throw IoError("could not write fixture for " + req.key);
    }
    return body;
  }

 private:
  std::unique_ptr<Transport> live_;
  std::filesystem::path dir_;
};

json parse_body(const std::string& body, const std::string& what) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw MalformedResponse(what + " is not JSON: " + e.what());
  }
}

std::string id_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw MalformedResponse("search result id is neither a string nor an integer");
}

// The search API puts all known names in one "; "-separated string. The
// first one not starting with the genus is taken as the common name.
std::optional<std::string> common_name_from(const std::string& content,
                                            const std::string& scientific) {
  std::string genus = scientific.substr(0, scientific.find(' '));
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  std::string lgenus = lower(genus);
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find(';', pos);
    if (end == std::string::npos) end = content.size();
    std::string name = content.substr(pos, end - pos);
    auto first = name.find_first_not_of(' ');
    if (first != std::string::npos) {
      name = name.substr(first, name.find_last_not_of(' ') - first + 1);
      if (!lgenus.empty() && lower(name).rfind(lgenus, 0) != 0) return name;
    }
    pos = end + 1;
  }
  return std::nullopt;
}

std::optional<double> numeric(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) return std::nullopt;
  const std::string s = v.get<std::string>();
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) return std::nullopt;
  return d;
}

}  // namespace

ClientConfig ClientConfig::from_env() {
  ClientConfig cfg;
  if (const char* v = std::getenv("ECOLOOM_EOL_BASE_URL"); v && *v) cfg.base_url = v;
  if (const char* v = std::getenv("ECOLOOM_EOL_TOKEN"); v && *v) cfg.token = v;
  if (const char* v = std::getenv("ECOLOOM_EOL_FIXTURES"); v && *v) {
    cfg.fixture_dir = v;
    cfg.mode = Mode::Replay;
  }
  if (const char* v = std::getenv("ECOLOOM_EOL_MODE"); v && *v) {
    std::string m = v;
    if (m == "live") cfg.mode = Mode::Live;
    else if (m == "replay") cfg.mode = Mode::Replay;
    else if (m == "record") cfg.mode = Mode::Record;
    else throw ConfigError("ECOLOOM_EOL_MODE must be live, replay or record");
  }
  return cfg;
}

std::unique_ptr<Transport> http_transport(const ClientConfig& cfg) {
  return std::make_unique<HttpTransport>(cfg);
}

std::unique_ptr<Transport> replay_transport(std::filesystem::path dir) {
  return std::make_unique<ReplayTransport>(std::move(dir));
}

std::unique_ptr<Transport> recording_transport(std::unique_ptr<Transport> live,
                                               std::filesystem::path dir) {
  return std::make_unique<RecordingTransport>(std::move(live), std::move(dir));
}

std::unique_ptr<Transport> make_transport(const ClientConfig& cfg) {
  switch (cfg.mode) {
    case ClientConfig::Mode::Replay:
      if (cfg.fixture_dir.empty()) throw ConfigError("replay mode needs a fixture directory");
      return replay_transport(cfg.fixture_dir);
    case ClientConfig::Mode::Record:
      if (cfg.fixture_dir.empty()) throw ConfigError("record mode needs a fixture directory");
      return recording_transport(http_transport(cfg), cfg.fixture_dir);
    case ClientConfig::Mode::Live:
      break;
  }
  return http_transport(cfg);
}

Client::Client(std::shared_ptr<Transport> transport) : transport_(std::move(transport)) {}
Client::Client(const ClientConfig& cfg) : transport_(make_transport(cfg)) {}

Request Client::search_request(const std::string& query) {
  return {"search-" + slugify(query), "/api/search/1.0.json", {{"q", query}, {"page", "1"}}};
}

Request Client::traits_request(const std::string& taxon_id) {
  std::string cypher = "MATCH (p:Page {page_id: " + taxon_id +
                       "})-[:trait]->(t:Trait)-[:predicate]->(pred:Term) "
                       "OPTIONAL MATCH (t)-[:units_term]->(units:Term) "
                       "RETURN pred.name AS predicate, t.measurement AS measurement, "
                       "units.name AS units, t.source AS source LIMIT 1000";
  return {"traits-" + taxon_id, "/service/cypher", {{"query", cypher}, {"format", "cypher"}}};
}

std::vector<SpeciesCandidate> Client::search_species(const std::string& query) const {
  if (query.find_first_not_of(" \t") == std::string::npos) {
    throw Error("species search needs a non-empty query");
  }
  auto body = transport_->get(search_request(query));
  std::vector<SpeciesCandidate> out;
  if (!body) return out;
  json j = parse_body(*body, "search response");
  if (!j.is_object() || !j.contains("results")) {
    throw MalformedResponse("search response has no results array");
  }
  const json& results = j["results"];
  if (results.is_null()) return out;
  if (!results.is_array()) throw MalformedResponse("search results is not an array");
  for (const auto& r : results) {
    if (!r.is_object() || !r.contains("id") || !r.contains("title") || !r["title"].is_string()) {
      throw MalformedResponse("search result lacks id or title");
    }
    SpeciesCandidate c;
    c.taxon_id = id_text(r["id"]);
    if (c.taxon_id.empty()) throw MalformedResponse("search result has an empty id");
    c.scientific_name = r["title"].get<std::string>();
    if (r.contains("content") && r["content"].is_string()) {
      c.common_name = common_name_from(r["content"].get<std::string>(), c.scientific_name);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<TraitRecord> Client::fetch_traits(const std::string& taxon_id) const {
  std::vector<TraitRecord> out;
  // page ids are numeric; anything else cannot name a page
  if (!all_digits(taxon_id)) return out;
  auto body = transport_->get(traits_request(taxon_id));
  if (!body) return out;
  json j = parse_body(*body, "trait response");
  if (!j.is_object() || !j.contains("columns") || !j.contains("data") ||
      !j["columns"].is_array() || !j["data"].is_array()) {
    throw MalformedResponse("trait response needs columns and data arrays");
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto& cols = j["columns"];
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] == name) return i;
    }
    return std::nullopt;
  };
  auto pred = column("predicate");
  auto value = column("measurement");
  auto units = column("units");
  auto source = column("source");
  if (!pred || !value) throw MalformedResponse("trait response lacks predicate or measurement");
  for (const auto& row : j["data"]) {
    if (!row.is_array() || row.size() != j["columns"].size()) {
      throw MalformedResponse("trait row width does not match the columns");
    }
    if (!row[*pred].is_string()) throw MalformedResponse("trait predicate is not text");
    auto v = numeric(row[*value]);
    if (!v) continue;
    TraitRecord t;
    t.predicate = row[*pred].get<std::string>();
    t.value = *v;
    if (units && row[*units].is_string()) t.units = row[*units].get<std::string>();
    if (source && row[*source].is_string()) t.source = row[*source].get<std::string>();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace ecoloom::eol
