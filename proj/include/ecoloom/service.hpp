#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ecoloom/eol.hpp"
#include "ecoloom/store.hpp"

namespace ecoloom {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  std::shared_ptr<DocumentStore> store;       // memory store when null
  std::shared_ptr<eol::Transport> eol;        // built from eol_config when null
  eol::ClientConfig eol_config;
  std::int64_t max_ticks_limit = 100000;      // per run
};

/// REST facade over the store, compiler and engine.
///
///   POST /projects, GET /projects, GET /projects/{id}
///   POST /models, GET|PUT|DELETE /models/{id}, POST /models/{id}/copy
///   GET /exemplars, POST /models/from-exemplar/{slug}
///   POST /models/{id}/compile?emit=netlogo|ir
///   POST /runs, GET /runs/{id}, GET /runs/{id}/stream, GET /runs/{id}/csv
///   GET /eol/search?q=, GET /eol/traits?taxon=
class Service {
 public:
  explicit Service(ServiceOptions opts = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to host:port (0 picks a free port) and returns the port.
  int bind(int port);
  /// Serves until stop(). bind() first.
  void listen();
  /// bind + listen on a background thread; returns the port.
  int start(int port = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ecoloom
