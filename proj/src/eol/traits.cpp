#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "ecoloom/eol.hpp"
#include "ecoloom/errors.hpp"
#include "ecoloom/param_fields.hpp"
#include "trait_map_data.hpp"

namespace ecoloom::eol {
namespace {

std::string fold(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto first = s.find_first_not_of(' ');
  auto last = s.find_last_not_of(' ');
  return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

const std::set<std::string> kWholeNumbers{"lifespan", "reproductive_maturity",
                                          "reproductive_interval", "offspring_count"};
// zero would mean "no limit" or "no spacing" for these
const std::set<std::string> kAtLeastOne{"lifespan", "reproductive_interval"};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

TraitMap TraitMap::from_json(const std::string& doc) {
  TraitMap map;
  try {
    auto j = nlohmann::json::parse(doc);
    map.version = j.at("version").get<int>();
    for (const auto& m : j.at("mappings")) {
      TraitMapping tm;
      tm.parameter = m.at("parameter").get<std::string>();
      bool known = std::any_of(kBioticFields.begin(), kBioticFields.end(),
                               [&](const auto& f) { return f.name == tm.parameter; });
      if (!known) throw ConfigError("trait map names unknown parameter '" + tm.parameter + "'");
      for (const auto& p : m.at("predicates")) tm.predicates.push_back(fold(p.get<std::string>()));
      for (const auto& [unit, rule] : m.at("units").items()) {
        tm.units[fold(unit)] = UnitRule{rule.value("times", 1.0), rule.value("over", 1.0)};
      }
      map.mappings.push_back(std::move(tm));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad trait map: ") + e.what());
  }
  return map;
}

const TraitMap& TraitMap::builtin() {
  static const TraitMap map = from_json(std::string(detail::embedded_trait_file("trait_map.json")));
  return map;
}

TraitEstimate traits_to_parameters(const std::vector<TraitRecord>& traits, const TraitMap& map) {
  TraitEstimate out;
  std::map<std::string, std::vector<double>> values;
  for (const auto& t : traits) {
    const std::string pred = fold(t.predicate);
    for (const auto& m : map.mappings) {
      if (std::find(m.predicates.begin(), m.predicates.end(), pred) == m.predicates.end()) {
        continue;
      }
      auto rule = m.units.find(fold(t.units));
      if (rule == m.units.end()) {
        out.flags.push_back({t.predicate, t.units, "units do not fit " + m.parameter});
      } else if (!std::isfinite(t.value) || t.value < 0) {
        out.flags.push_back({t.predicate, t.units, "value out of range"});
      } else {
        const UnitRule& r = rule->second;
        double v = t.value;
        if (r.times != 1) v *= r.times;
        if (r.over != 1) v /= r.over;
        values[m.parameter].push_back(v);
      }
      break;
    }
  }
  for (const auto& f : kBioticFields) {
    auto it = values.find(std::string(f.name));
    if (it == values.end()) continue;
    double v = median(it->second);
    const std::string name(f.name);
    if (kWholeNumbers.count(name)) v = std::round(v);
    if (kAtLeastOne.count(name)) v = std::max(v, 1.0);
    out.params.*(f.member) = v;
  }
  return out;
}

nlohmann::ordered_json estimate_to_json(const TraitEstimate& e) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& f : kBioticFields) {
    const auto& v = e.params.*f.member;
    if (!v) continue;
    if (*v == std::floor(*v) && std::abs(*v) < 1e15) {
      params[std::string(f.name)] = static_cast<std::int64_t>(*v);
    } else {
      params[std::string(f.name)] = *v;
    }
  }
  nlohmann::ordered_json flags = nlohmann::ordered_json::array();
  for (const auto& f : e.flags) {
    flags.push_back({{"predicate", f.predicate}, {"units", f.units}, {"reason", f.reason}});
  }
  return {{"parameters", params}, {"flags", flags}};
}

}  // namespace ecoloom::eol
