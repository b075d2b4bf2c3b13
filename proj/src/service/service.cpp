#include "ecoloom/service.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <list>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ecoloom/compiler.hpp"
#include "ecoloom/engine.hpp"
#include "ecoloom/exemplars.hpp"
#include "ecoloom/model_io.hpp"

namespace ecoloom {
namespace {

using nlohmann::json;

const std::string kModels = "models";
const std::string kProjects = "projects";

struct HttpError {
  int status;
  std::string message;
  json extra = json::object();
};

[[noreturn]] void fail(int status, std::string message, json extra = json::object()) {
  throw HttpError{status, std::move(message), std::move(extra)};
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json violations_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& v : r.violations) {
    out.push_back({{"element_id", v.element_id}, {"rule", v.rule}, {"message", v.message}});
  }
  return out;
}

// Counts are whole for breeds; pools may be fractional.
json count_value(double v) {
  if (std::floor(v) == v && std::fabs(v) < 9e15) return static_cast<std::int64_t>(v);
  return v;
}

json record_json(const PopulationRecord& r) {
  json counts = json::array();
  for (double v : r.counts) counts.push_back(count_value(v));
  return {{"tick", r.tick}, {"counts", counts}};
}

enum class RunStatus { Pending, Running, Done, Failed };

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Pending: return "pending";
    case RunStatus::Running: return "running";
    case RunStatus::Done: return "done";
    case RunStatus::Failed: return "failed";
  }
  return "?";
}

struct RunSession {
  std::string id;
  std::string model_id;
  EngineConfig config;
  SimProgram program;

  mutable std::mutex mu;
  std::condition_variable cv;
  RunStatus status = RunStatus::Pending;
  std::vector<PopulationRecord> records;
  std::string error;
  std::atomic<bool> cancel{false};
  std::thread worker;

  bool finished() const { return status == RunStatus::Done || status == RunStatus::Failed; }

  void advance(RunStatus next) {
    std::lock_guard g(mu);
    if (static_cast<int>(next) > static_cast<int>(status)) status = next;
    cv.notify_all();
  }

  void execute() {
    advance(RunStatus::Running);
    try {
      run(program, config, [this](const PopulationRecord& r) {
        std::lock_guard g(mu);
        records.push_back(r);
        cv.notify_all();
        return !cancel.load();
      });
      if (cancel) {
        std::lock_guard g(mu);
        error = "cancelled";
        status = RunStatus::Failed;
        cv.notify_all();
      } else {
        advance(RunStatus::Done);
      }
    } catch (const std::exception& e) {
      std::lock_guard g(mu);
      error = e.what();
      status = RunStatus::Failed;
      cv.notify_all();
    }
  }

  json summary() const {
    std::lock_guard g(mu);
    json j{{"id", id},
           {"model_id", model_id},
           {"status", status_name(status)},
           {"records", records.size()},
           {"config", config_to_json(config)}};
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

}  // namespace

struct Service::Impl {
  ServiceOptions opts;
  std::shared_ptr<DocumentStore> store;
  std::shared_ptr<eol::Transport> eol_transport;
  httplib::Server server;
  std::thread listener;

  std::mutex runs_mu;
  std::map<std::string, std::shared_ptr<RunSession>> runs;

  explicit Impl(ServiceOptions o) : opts(std::move(o)) {
    store = opts.store ? opts.store : std::make_shared<MemoryStore>();
    eol_transport = opts.eol;
    routes();
  }

  ~Impl() {
    stop();
    std::lock_guard g(runs_mu);
    for (auto& [id, s] : runs) {
      s->cancel = true;
      if (s->worker.joinable()) s->worker.join();
    }
  }

  void stop() {
    server.stop();
    if (listener.joinable()) listener.join();
  }

  // ---- helpers --------------------------------------------------------------

  template <typename F>
  httplib::Server::Handler wrap(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const HttpError& e) {
        json body = e.extra;
        body["error"] = e.message;
        send_json(res, body, e.status);
      } catch (const ParseError& e) {
        send_json(res, {{"error", e.what()}, {"key", e.key()}}, 400);
      } catch (const CompileError& e) {
        send_json(res, {{"error", "model failed validation"},
                        {"violations", violations_json(e.report())}},
                  422);
      } catch (const ConfigError& e) {
        send_json(res, {{"error", e.what()}}, 400);
      } catch (const NetworkError& e) {
        send_json(res, {{"error", e.what()}, {"kind", "network"}}, 502);
      } catch (const MalformedResponse& e) {
        send_json(res, {{"error", e.what()}, {"kind", "malformed_response"}}, 502);
      } catch (const std::exception& e) {
        send_json(res, {{"error", e.what()}}, 500);
      }
    };
  }

  static json body_json(const httplib::Request& req) {
    try {
      return json::parse(req.body);
    } catch (const json::parse_error& e) {
      fail(400, std::string("request body is not JSON: ") + e.what());
    }
  }

  ConceptualModel load_model(const std::string& id) {
    auto doc = store->get(kModels, id);
    if (!doc) fail(404, "no model '" + id + "'");
    return model_from_json(*doc);
  }

  static void require_valid(const ConceptualModel& m) {
    if (!DocumentStore::valid_id(m.id)) fail(400, "model id '" + m.id + "' is not allowed");
    ValidationReport r = validate_model(m);
    if (!r.ok()) {
      fail(422, "model failed validation", {{"violations", violations_json(r)}});
    }
  }

  void check_project(const ConceptualModel& m) {
    if (!m.project_id.empty() && !store->get(kProjects, m.project_id)) {
      fail(422, "no project '" + m.project_id + "'");
    }
  }

  void link_project(const std::string& project_id, const std::string& model_id, bool add) {
    if (project_id.empty()) return;
    auto guard = store->lock(kProjects, project_id);
    auto p = store->get(kProjects, project_id);
    if (!p) return;
    auto& ids = (*p)["model_ids"];
    json kept = json::array();
    for (const auto& x : ids) {
      if (x != model_id) kept.push_back(x);
    }
    if (add) kept.push_back(model_id);
    ids = kept;
    store->put(kProjects, project_id, *p);
  }

  // Persists a new model under a fresh or given id; returns its document.
  json create_model(ConceptualModel m) {
    if (m.id.empty()) m.id = generate_id();
    require_valid(m);
    check_project(m);
    {
      auto guard = store->lock(kModels, m.id);
      if (store->get(kModels, m.id)) fail(409, "model '" + m.id + "' already exists");
      store->put(kModels, m.id, model_to_json(m));
    }
    link_project(m.project_id, m.id, true);
    return model_to_json(m);
  }

  std::shared_ptr<RunSession> find_run(const std::string& id) {
    std::lock_guard g(runs_mu);
    auto it = runs.find(id);
    if (it == runs.end()) fail(404, "no run '" + id + "'");
    return it->second;
  }

  eol::Client eol_client() {
    if (!eol_transport) eol_transport = eol::make_transport(opts.eol_config);
    return eol::Client(eol_transport);
  }

  // ---- routes ---------------------------------------------------------------

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"status", "ok"}});
    });

    // projects
    server.Post("/projects", wrap([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_json(req);
      if (!body.is_object()) fail(400, "project body must be an object");
      json project{{"id", body.value("id", generate_id())},
                   {"name", body.value("name", std::string("Untitled project"))},
                   {"model_ids", json::array()}};
      const std::string id = project["id"];
      if (!DocumentStore::valid_id(id)) fail(400, "project id '" + id + "' is not allowed");
      for (const auto& m : body.value("model_ids", json::array())) {
        if (!m.is_string() || !store->get(kModels, m.get<std::string>())) {
          fail(422, "project lists unknown model " + m.dump());
        }
        project["model_ids"].push_back(m);
      }
      auto guard = store->lock(kProjects, id);
      if (store->get(kProjects, id)) fail(409, "project '" + id + "' already exists");
      store->put(kProjects, id, project);
      res.set_header("Location", "/projects/" + id);
      send_json(res, project, 201);
    }));

    server.Get("/projects", wrap([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& id : store->list(kProjects)) {
        if (auto p = store->get(kProjects, id)) out.push_back(*p);
      }
      send_json(res, out);
    }));

    server.Get(R"(/projects/([^/]+))",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 auto p = store->get(kProjects, req.matches[1]);
                 if (!p) fail(404, "no project '" + std::string(req.matches[1]) + "'");
                 send_json(res, *p);
               }));

    // models
    server.Post("/models", wrap([this](const httplib::Request& req, httplib::Response& res) {
      json doc = create_model(parse_model(req.body));
      res.set_header("Location", "/models/" + doc["id"].get<std::string>());
      send_json(res, doc, 201);
    }));

    server.Get("/models", wrap([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& id : store->list(kModels)) {
        if (auto m = store->get(kModels, id)) {
          out.push_back({{"id", id}, {"name", (*m).value("name", "")},
                         {"project_id", (*m).value("project_id", "")}});
        }
      }
      send_json(res, out);
    }));

    server.Get(R"(/models/([^/]+))",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, model_to_json(load_model(req.matches[1])));
               }));

    server.Put(R"(/models/([^/]+))",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 ConceptualModel m = parse_model(req.body);
                 if (m.id.empty()) m.id = id;
                 if (m.id != id) fail(400, "body id '" + m.id + "' does not match the url");
                 require_valid(m);
                 check_project(m);
                 std::string old_project;
                 {
                   auto guard = store->lock(kModels, id);
                   auto old = store->get(kModels, id);
                   if (!old) fail(404, "no model '" + id + "'");
                   old_project = old->value("project_id", "");
                   store->put(kModels, id, model_to_json(m));
                 }
                 if (old_project != m.project_id) {
                   link_project(old_project, id, false);
                   link_project(m.project_id, id, true);
                 }
                 send_json(res, model_to_json(m));
               }));

    server.Delete(R"(/models/([^/]+))",
                  wrap([this](const httplib::Request& req, httplib::Response& res) {
                    const std::string id = req.matches[1];
                    std::string project;
                    {
                      auto guard = store->lock(kModels, id);
                      auto old = store->get(kModels, id);
                      if (!old) fail(404, "no model '" + id + "'");
                      project = old->value("project_id", "");
                      store->remove(kModels, id);
                    }
                    link_project(project, id, false);
                    res.status = 204;
                  }));

    server.Post(R"(/models/([^/]+)/copy)",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  ConceptualModel m = load_model(req.matches[1]);
                  m.id = generate_id();
                  m.name = m.name.empty() ? "Copy" : m.name + " (copy)";
                  json doc = create_model(std::move(m));
                  res.set_header("Location", "/models/" + doc["id"].get<std::string>());
                  send_json(res, doc, 201);
                }));

    server.Get("/exemplars", wrap([](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (ExemplarId id : all_exemplars()) {
        Exemplar ex = load_exemplar(id);
        out.push_back({{"id", slug(id)},
                       {"title", title(id)},
                       {"model", model_to_json(ex.model)},
                       {"config", config_to_json(ex.config)}});
      }
      send_json(res, out);
    }));

    server.Post(R"(/models/from-exemplar/([^/]+))",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  auto id = exemplar_from_string(std::string(req.matches[1]));
                  if (!id) fail(404, "no exemplar '" + std::string(req.matches[1]) + "'");
                  Exemplar ex = load_exemplar(*id);
                  ex.model.id = generate_id();
                  ex.model.project_id.clear();
                  json doc = create_model(std::move(ex.model));
                  res.set_header("Location", "/models/" + doc["id"].get<std::string>());
                  send_json(res, {{"model", doc}, {"config", config_to_json(ex.config)}}, 201);
                }));

    server.Post(R"(/models/([^/]+)/compile)",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  ConceptualModel m = load_model(req.matches[1]);
                  std::string emit =
                      req.has_param("emit") ? req.get_param_value("emit") : "netlogo";
                  EngineConfig cfg;
                  if (!req.body.empty()) cfg = config_from_json(body_json(req));
                  SimProgram p = compile(m);
                  if (emit == "netlogo") {
                    res.set_content(emit_netlogo(p, cfg), "text/plain; charset=utf-8");
                  } else if (emit == "ir") {
                    res.set_content(emit_ir(p), "application/json");
                  } else {
                    fail(400, "emit must be netlogo or ir");
                  }
                }));

    // runs
    server.Post("/runs", wrap([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_json(req);
      if (!body.is_object() || !body.contains("model_id") || !body["model_id"].is_string()) {
        fail(400, "run needs a model_id");
      }
      auto session = std::make_shared<RunSession>();
      session->id = generate_id();
      session->model_id = body["model_id"];
      ConceptualModel m = load_model(session->model_id);
      session->config = config_from_json(body.value("config", json::object()));
      session->config.validate();
      if (session->config.max_ticks > opts.max_ticks_limit) {
        fail(400, "max_ticks above the service limit of " + std::to_string(opts.max_ticks_limit));
      }
      session->program = compile(m);
      {
        std::lock_guard g(runs_mu);
        runs[session->id] = session;
        session->worker = std::thread([session] { session->execute(); });
      }
      res.set_header("Location", "/runs/" + session->id);
      send_json(res, session->summary(), 201);
    }));

    server.Get(R"(/runs/([^/]+))",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, find_run(req.matches[1])->summary());
               }));

    server.Get(R"(/runs/([^/]+)/csv)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 auto s = find_run(req.matches[1]);
                 std::lock_guard g(s->mu);
                 if (s->status != RunStatus::Done) {
                   fail(409, std::string("run is ") + status_name(s->status));
                 }
                 std::string csv = csv_header(s->program);
                 for (const auto& r : s->records) csv += csv_row(r);
                 res.set_content(csv, "text/csv; charset=utf-8");
               }));

    server.Get(R"(/runs/([^/]+)/stream)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 auto s = find_run(req.matches[1]);
                 res.set_header("Cache-Control", "no-cache");
                 auto next = std::make_shared<std::size_t>(0);
                 res.set_chunked_content_provider(
                     "text/event-stream",
                     [s, next](std::size_t, httplib::DataSink& sink) {
                       if (!sink.is_writable()) return false;
                       std::string out;
                       bool done = false;
                       {
                         std::unique_lock lk(s->mu);
                         s->cv.wait_for(lk, std::chrono::milliseconds(250), [&] {
                           return s->records.size() > *next || s->finished();
                         });
                         if (*next == 0) {
                           json meta{{"run_id", s->id},
                                     {"component_ids", json::array()},
                                     {"labels", json::array()}};
                           for (const auto& c : s->program.components) {
                             meta["component_ids"].push_back(c.id);
                             meta["labels"].push_back(c.label);
                           }
                           if (!s->records.empty() || s->finished()) {
                             out += "event: meta\ndata: " + meta.dump() + "\n\n";
                           }
                         }
                         for (; *next < s->records.size(); ++*next) {
                           out += "event: record\ndata: " + record_json(s->records[*next]).dump() +
                                  "\n\n";
                         }
                         if (s->finished()) {
                           json end{{"status", status_name(s->status)}};
                           if (!s->error.empty()) end["error"] = s->error;
                           out += "event: end\ndata: " + end.dump() + "\n\n";
                           done = true;
                         }
                       }
                       if (!out.empty() && !sink.write(out.data(), out.size())) return false;
                       if (done) sink.done();
                       return true;
                     });
               }));

    // EOL lookups
    server.Get("/eol/search", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::string q = req.get_param_value("q");
      if (q.find_first_not_of(" \t") == std::string::npos) fail(400, "q is required");
      json out = json::array();
      for (const auto& c : eol_client().search_species(q)) {
        json j{{"taxon_id", c.taxon_id}, {"scientific_name", c.scientific_name}};
        j["common_name"] = c.common_name ? json(*c.common_name) : json(nullptr);
        out.push_back(j);
      }
      send_json(res, out);
    }));

    server.Get("/eol/traits", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::string taxon = req.get_param_value("taxon");
      if (taxon.empty()) fail(400, "taxon is required");
      auto traits = eol_client().fetch_traits(taxon);
      json records = json::array();
      for (const auto& t : traits) {
        records.push_back({{"predicate", t.predicate}, {"value", t.value}, {"units", t.units},
                           {"source", t.source}});
      }
      json estimate = eol::estimate_to_json(eol::traits_to_parameters(traits));
      send_json(res, {{"taxon_id", taxon},
                      {"traits", records},
                      {"parameters", estimate["parameters"]},
                      {"flags", estimate["flags"]}});
    }));
  }
};

Service::Service(ServiceOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}
Service::~Service() = default;

int Service::bind(int port) {
  if (port == 0) return impl_->server.bind_to_any_port(impl_->opts.host);
  if (!impl_->server.bind_to_port(impl_->opts.host, port)) {
    throw IoError("cannot bind " + impl_->opts.host + ":" + std::to_string(port));
  }
  return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

int Service::start(int port) {
  int bound = bind(port);
  if (bound < 0) throw IoError("cannot bind " + impl_->opts.host);
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::stop() { impl_->stop(); }

}  // namespace ecoloom
