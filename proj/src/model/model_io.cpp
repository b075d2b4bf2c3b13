#include "ecoloom/model_io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "ecoloom/errors.hpp"
#include "ecoloom/param_fields.hpp"

namespace ecoloom {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& what, const std::string& key = {}) {
  throw ParseError(what, key);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
}

std::string get_string(const json& obj, const char* key, const std::string& where,
                       bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) fail(where + ": missing required key '" + key + "'", key);
    return {};
  }
  if (!it->is_string()) fail(where + ": '" + key + "' must be a string", key);
  return it->get<std::string>();
}

double get_number(const json& v, const std::string& key, const std::string& where) {
  if (!v.is_number()) fail(where + ": parameter '" + key + "' must be a number", key);
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + ": parameter '" + key + "' is not finite", key);
  return d;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == it.key();
    if (!ok) fail(where + ": unknown key '" + it.key() + "'", it.key());
  }
}

template <typename Params, std::size_t N>
Params parse_params(const json& obj, const std::array<ParamField<Params>, N>& fields,
                    const std::string& where) {
  Params p;
  require_object(obj, where + " params");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const auto& f : fields) {
      if (f.name == it.key()) {
        p.*(f.member) = get_number(it.value(), it.key(), where);
        found = true;
        break;
      }
    }
    if (!found) fail(where + ": unknown parameter '" + it.key() + "'", it.key());
  }
  return p;
}

Component parse_component(const json& j, std::size_t index) {
  std::string where = "component #" + std::to_string(index);
  require_object(j, where);
  check_keys(j, {"id", "display_name", "kind", "population_basis", "params"}, where);
  Component c;
  c.id = get_string(j, "id", where, true);
  where = "component '" + c.id + "'";
  c.display_name = get_string(j, "display_name", where, false);
  std::string kind = get_string(j, "kind", where, true);
  auto k = component_kind_from_string(kind);
  if (!k) fail(where + ": unknown component kind '" + kind + "'", "kind");
  c.kind = *k;
  if (j.contains("population_basis")) {
    std::string basis = get_string(j, "population_basis", where, true);
    auto b = population_basis_from_string(basis);
    if (!b) fail(where + ": unknown population_basis '" + basis + "'", "population_basis");
    c.population_basis = *b;
  }
  json params = j.contains("params") ? j.at("params") : json::object();
  if (c.kind == ComponentKind::Biotic) {
    c.params = parse_params(params, kBioticFields, where);
  } else {
    c.params = parse_params(params, kAbioticFields, where);
  }
  return c;
}

Relationship parse_relationship(const json& j, std::size_t index) {
  std::string where = "relationship #" + std::to_string(index);
  require_object(j, where);
  check_keys(j, {"id", "kind", "source", "target", "params"}, where);
  Relationship r;
  r.id = get_string(j, "id", where, true);
  where = "relationship '" + r.id + "'";
  std::string kind = get_string(j, "kind", where, true);
  auto k = relationship_kind_from_string(kind);
  if (!k) fail(where + ": unknown relationship kind '" + kind + "'", "kind");
  r.kind = *k;
  r.source = get_string(j, "source", where, true);
  r.target = get_string(j, "target", where, true);
  json params = j.contains("params") ? j.at("params") : json::object();
  require_object(params, where + " params");
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!relationship_has_param(r.kind, it.key())) {
      fail(where + ": unknown parameter '" + it.key() + "' for " +
               std::string(to_string(r.kind)),
           it.key());
    }
  }
  r.params = parse_params(params, kRelationshipFields, where);
  return r;
}

// --- XML <-> JSON projection ------------------------------------------------

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void reject_attributes(const pt::ptree& node, const std::string& where) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>") fail(where + ": attributes are not supported", name);
  }
}

json xml_params_to_json(const pt::ptree& node, const std::string& where) {
  json out = json::object();
  for (const auto& [name, child] : node) {
    if (name == "<xmlcomment>") continue;
    if (name == "<xmlattr>") fail(where + ": attributes are not supported", name);
    if (!child.empty()) fail(where + ": parameter '" + name + "' must be a number", name);
    std::string text = trimmed(child.data());
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(where + ": parameter '" + name + "' must be a number", name);
    }
    if (out.contains(name)) fail(where + ": duplicate parameter '" + name + "'", name);
    out[name] = v;
  }
  return out;
}

json xml_element_to_json(const pt::ptree& node, const std::string& where) {
  json out = json::object();
  for (const auto& [name, child] : node) {
    if (name == "<xmlcomment>") continue;
    if (name == "<xmlattr>") fail(where + ": attributes are not supported", name);
    if (out.contains(name)) fail(where + ": duplicate element '" + name + "'", name);
    if (name == "params") {
      out[name] = xml_params_to_json(child, where);
    } else {
      if (!child.empty()) fail(where + ": element '" + name + "' must be text", name);
      out[name] = child.data();
    }
  }
  return out;
}

json xml_list_to_json(const pt::ptree& node, const std::string& item, const std::string& where) {
  json out = json::array();
  for (const auto& [name, child] : node) {
    if (name == "<xmlcomment>") continue;
    if (name != item) fail(where + ": unexpected element '" + name + "'", name);
    out.push_back(xml_element_to_json(child, where + "/" + item));
  }
  return out;
}

json xml_to_json(std::string_view document) {
  pt::ptree tree;
  std::istringstream in{std::string(document)};
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    fail(std::string("malformed XML: ") + e.what());
  }
  if (tree.size() != 1 || tree.front().first != "model") {
    fail("XML document must have a single <model> root element", "model");
  }
  const pt::ptree& root = tree.front().second;
  reject_attributes(root, "model");
  json out = json::object();
  for (const auto& [name, child] : root) {
    if (out.contains(name)) fail("model: duplicate element '" + name + "'", name);
    if (name == "components") {
      out[name] = xml_list_to_json(child, "component", "components");
    } else if (name == "relationships") {
      out[name] = xml_list_to_json(child, "relationship", "relationships");
    } else {
      if (!child.empty()) fail("model: element '" + name + "' must be text", name);
      out[name] = child.data();
    }
  }
  return out;
}

template <typename Params, std::size_t N>
ordered_json params_to_json(const Params& p, const std::array<ParamField<Params>, N>& fields) {
  ordered_json out = ordered_json::object();
  for (const auto& f : fields) {
    if (const auto& v = p.*(f.member)) out[std::string(f.name)] = *v;
  }
  return out;
}

template <typename Params, std::size_t N>
void params_to_ptree(pt::ptree& node, const Params& p,
                     const std::array<ParamField<Params>, N>& fields) {
  for (const auto& f : fields) {
    if (const auto& v = p.*(f.member)) node.add(std::string(f.name), format_number(*v));
  }
}

std::string model_to_xml(const ConceptualModel& m) {
  pt::ptree root;
  root.add("id", m.id);
  root.add("name", m.name);
  root.add("project_id", m.project_id);
  if (m.notes) root.add("notes", *m.notes);
  pt::ptree& comps = root.add_child("components", pt::ptree{});
  for (const auto& c : m.components) {
    pt::ptree& node = comps.add_child("component", pt::ptree{});
    node.add("id", c.id);
    if (!c.display_name.empty()) node.add("display_name", c.display_name);
    node.add("kind", std::string(to_string(c.kind)));
    node.add("population_basis", std::string(to_string(c.population_basis)));
    pt::ptree& params = node.add_child("params", pt::ptree{});
    if (const auto* b = c.biotic()) params_to_ptree(params, *b, kBioticFields);
    if (const auto* a = c.abiotic()) params_to_ptree(params, *a, kAbioticFields);
  }
  pt::ptree& rels = root.add_child("relationships", pt::ptree{});
  for (const auto& r : m.relationships) {
    pt::ptree& node = rels.add_child("relationship", pt::ptree{});
    node.add("id", r.id);
    node.add("kind", std::string(to_string(r.kind)));
    node.add("source", r.source);
    node.add("target", r.target);
    pt::ptree& params = node.add_child("params", pt::ptree{});
    params_to_ptree(params, r.params, kRelationshipFields);
  }
  pt::ptree doc;
  doc.add_child("model", root);
  std::ostringstream out;
  pt::write_xml(out, doc, pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

}  // namespace

ConceptualModel model_from_json(const json& doc) {
  require_object(doc, "model document");
  check_keys(doc, {"id", "name", "project_id", "components", "relationships", "notes"},
             "model");
  ConceptualModel m;
  m.id = get_string(doc, "id", "model", false);
  m.name = get_string(doc, "name", "model", false);
  m.project_id = get_string(doc, "project_id", "model", false);
  if (doc.contains("notes")) m.notes = get_string(doc, "notes", "model", true);

  auto list = [&](const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) return json::array();
    if (!it->is_array()) fail(std::string("model: '") + key + "' must be a list", key);
    return *it;
  };

  const json comps = list("components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    m.components.push_back(parse_component(comps[i], i));
  }
  const json rels = list("relationships");
  for (std::size_t i = 0; i < rels.size(); ++i) {
    m.relationships.push_back(parse_relationship(rels[i], i));
  }

  std::set<std::string> ids;
  for (const auto& c : m.components) {
    if (!ids.insert(c.id).second) fail("duplicate component id '" + c.id + "'", c.id);
  }
  for (const auto& r : m.relationships) {
    for (const auto* end : {&r.source, &r.target}) {
      if (!ids.count(*end)) {
        fail("relationship '" + r.id + "' references missing component '" + *end +
                 "' (dangling reference)",
             *end);
      }
    }
  }
  return m;
}

ordered_json model_to_json(const ConceptualModel& m) {
  ordered_json out = ordered_json::object();
  out["id"] = m.id;
  out["name"] = m.name;
  out["project_id"] = m.project_id;
  if (m.notes) out["notes"] = *m.notes;
  ordered_json comps = ordered_json::array();
  for (const auto& c : m.components) {
    ordered_json j = ordered_json::object();
    j["id"] = c.id;
    if (!c.display_name.empty()) j["display_name"] = c.display_name;
    j["kind"] = to_string(c.kind);
    j["population_basis"] = to_string(c.population_basis);
    if (const auto* b = c.biotic()) j["params"] = params_to_json(*b, kBioticFields);
    if (const auto* a = c.abiotic()) j["params"] = params_to_json(*a, kAbioticFields);
    comps.push_back(std::move(j));
  }
  out["components"] = std::move(comps);
  ordered_json rels = ordered_json::array();
  for (const auto& r : m.relationships) {
    ordered_json j = ordered_json::object();
    j["id"] = r.id;
    j["kind"] = to_string(r.kind);
    j["source"] = r.source;
    j["target"] = r.target;
    j["params"] = params_to_json(r.params, kRelationshipFields);
    rels.push_back(std::move(j));
  }
  out["relationships"] = std::move(rels);
  return out;
}

ConceptualModel parse_model(std::string_view document, DocumentFormat format) {
  if (format == DocumentFormat::Xml) return model_from_json(xml_to_json(document));
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  return model_from_json(doc);
}

ConceptualModel parse_model(std::string_view document) {
  auto pos = document.find_first_not_of(" \t\r\n");
  bool xml = pos != std::string_view::npos && document[pos] == '<';
  return parse_model(document, xml ? DocumentFormat::Xml : DocumentFormat::Json);
}

std::string serialize_model(const ConceptualModel& m, DocumentFormat format) {
  if (format == DocumentFormat::Xml) return model_to_xml(m);
  return model_to_json(m).dump(2) + "\n";
}

}  // namespace ecoloom
