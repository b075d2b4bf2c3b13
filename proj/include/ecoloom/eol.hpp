#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecoloom/model.hpp"

namespace ecoloom::eol {

struct SpeciesCandidate {
  std::string taxon_id;
  std::string scientific_name;
  std::optional<std::string> common_name;

  bool operator==(const SpeciesCandidate&) const = default;
};

struct TraitRecord {
  std::string predicate;
  double value = 0;
  std::string units;  // as the service spelled them
  std::string source;

  bool operator==(const TraitRecord&) const = default;
};

struct Request {
  std::string key;  // stable fixture name, e.g. "search-gray-wolf"
  std::string path;
  std::vector<std::pair<std::string, std::string>> query;
};

class Transport {
 public:
  virtual ~Transport() = default;
  /// Response body, or nullopt for 404. Throws NetworkError otherwise.
  virtual std::optional<std::string> get(const Request& req) = 0;
};

struct ClientConfig {
  std::string base_url = "https://eol.org";
  std::string token;  // sent as "Authorization: JWT <token>" when set
  int timeout_seconds = 20;
  enum class Mode { Live, Replay, Record } mode = Mode::Live;
  std::filesystem::path fixture_dir;

  /// Defaults overridden by ECOLOOM_EOL_BASE_URL, ECOLOOM_EOL_TOKEN,
  /// ECOLOOM_EOL_FIXTURES (switches to replay) and ECOLOOM_EOL_MODE.
  static ClientConfig from_env();
};

std::unique_ptr<Transport> http_transport(const ClientConfig& cfg);

/// Serves <dir>/<key>.json. A missing file is a NetworkError, since the
/// request could not be answered.
std::unique_ptr<Transport> replay_transport(std::filesystem::path dir);

/// Forwards to `live` and writes each body to <dir>/<key>.json.
std::unique_ptr<Transport> recording_transport(std::unique_ptr<Transport> live,
                                               std::filesystem::path dir);

std::unique_ptr<Transport> make_transport(const ClientConfig& cfg);

class Client {
 public:
  explicit Client(std::shared_ptr<Transport> transport);
  explicit Client(const ClientConfig& cfg);

  std::vector<SpeciesCandidate> search_species(const std::string& query) const;
  /// Unknown ids give an empty list. Records without a numeric value are dropped.
  std::vector<TraitRecord> fetch_traits(const std::string& taxon_id) const;

  static Request search_request(const std::string& query);
  static Request traits_request(const std::string& taxon_id);

 private:
  std::shared_ptr<Transport> transport_;
};

struct UnitRule {
  double times = 1;
  double over = 1;
};

struct TraitMapping {
  std::string parameter;  // BioticParams field name
  std::vector<std::string> predicates;
  std::map<std::string, UnitRule> units;
};

struct TraitMap {
  int version = 0;
  std::vector<TraitMapping> mappings;

  /// The table shipped in data/eol/trait_map.json.
  static const TraitMap& builtin();
  static TraitMap from_json(const std::string& doc);
};

struct TraitFlag {
  std::string predicate;
  std::string units;
  std::string reason;

  bool operator==(const TraitFlag&) const = default;
};

struct TraitEstimate {
  BioticParams params;  // only matched fields are set
  std::vector<TraitFlag> flags;

  bool operator==(const TraitEstimate&) const = default;
};

/// Median of the converted values per parameter; whole-number parameters
/// are rounded to the nearest integer.
TraitEstimate traits_to_parameters(const std::vector<TraitRecord>& traits,
                                   const TraitMap& map = TraitMap::builtin());

/// {"parameters": {name: value}, "flags": [{predicate, units, reason}]}
nlohmann::ordered_json estimate_to_json(const TraitEstimate& e);

}  // namespace ecoloom::eol
