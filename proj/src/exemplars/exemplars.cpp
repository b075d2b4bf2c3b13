#include "ecoloom/exemplars.hpp"

#include <array>
#include <string>

#include "ecoloom/errors.hpp"
#include "ecoloom/model_io.hpp"
#include "exemplar_data.hpp"

namespace ecoloom {
namespace {

struct Entry {
  ExemplarId id;
  std::string_view slug;
  std::string_view enum_name;
  std::string_view title;
};

constexpr std::array<Entry, 4> kEntries{{
    {ExemplarId::LogisticGrowth, "logistic_growth", "LogisticGrowth", "Logistic growth"},
    {ExemplarId::ExponentialGrowth, "exponential_growth", "ExponentialGrowth",
     "Exponential growth"},
    {ExemplarId::PredatorPrey, "predator_prey", "PredatorPrey", "Predator-prey"},
    {ExemplarId::CompetitiveExclusion, "competitive_exclusion", "CompetitiveExclusion",
     "Competitive exclusion"},
}};

constexpr std::array<ExemplarId, 4> kIds{ExemplarId::LogisticGrowth, ExemplarId::ExponentialGrowth,
                                         ExemplarId::PredatorPrey,
                                         ExemplarId::CompetitiveExclusion};

const Entry& entry(ExemplarId id) {
  for (const auto& e : kEntries) {
    if (e.id == id) return e;
  }
  return kEntries.front();
}

std::string_view embedded(const std::string& name) {
  auto doc = detail::embedded_exemplar_file(name);
  if (doc.empty()) throw IoError("exemplar data '" + name + "' is not embedded");
  return doc;
}

}  // namespace

std::span<const ExemplarId> all_exemplars() { return kIds; }

std::string_view slug(ExemplarId id) { return entry(id).slug; }
std::string_view title(ExemplarId id) { return entry(id).title; }

std::optional<ExemplarId> exemplar_from_string(std::string_view s) {
  for (const auto& e : kEntries) {
    if (s == e.slug || s == e.enum_name) return e.id;
  }
  return std::nullopt;
}

std::string_view exemplar_document(ExemplarId id) {
  return embedded(std::string(slug(id)) + ".json");
}

std::string_view exemplar_config_document(ExemplarId id) {
  return embedded(std::string(slug(id)) + ".config.json");
}

Exemplar load_exemplar(ExemplarId id) {
  Exemplar ex;
  ex.model = parse_model(exemplar_document(id), DocumentFormat::Json);
  ex.config = config_from_json(nlohmann::json::parse(exemplar_config_document(id)));
  return ex;
}

}  // namespace ecoloom
