#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ecoloom {

/// Keyed JSON documents grouped by collection ("models", "projects").
/// Implementations are thread-safe per call; callers that read, modify and
/// write one document hold lock(collection, id) around the sequence.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  virtual std::optional<nlohmann::json> get(const std::string& collection,
                                            const std::string& id) const = 0;
  virtual void put(const std::string& collection, const std::string& id,
                   const nlohmann::json& doc) = 0;
  /// False if there was nothing to remove.
  virtual bool remove(const std::string& collection, const std::string& id) = 0;
  /// Ids in ascending order.
  virtual std::vector<std::string> list(const std::string& collection) const = 0;

  std::unique_lock<std::mutex> lock(const std::string& collection, const std::string& id);

  /// Ids usable as file names: 1-128 of [A-Za-z0-9._-], not starting with '.'.
  static bool valid_id(const std::string& id);

 private:
  std::mutex locks_guard_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

class MemoryStore : public DocumentStore {
 public:
  std::optional<nlohmann::json> get(const std::string& collection,
                                    const std::string& id) const override;
  void put(const std::string& collection, const std::string& id,
           const nlohmann::json& doc) override;
  bool remove(const std::string& collection, const std::string& id) override;
  std::vector<std::string> list(const std::string& collection) const override;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::map<std::string, nlohmann::json>> docs_;
};

/// One file per document: <root>/<collection>/<id>.json, replaced atomically.
class FileStore : public DocumentStore {
 public:
  explicit FileStore(std::filesystem::path root);

  std::optional<nlohmann::json> get(const std::string& collection,
                                    const std::string& id) const override;
  void put(const std::string& collection, const std::string& id,
           const nlohmann::json& doc) override;
  bool remove(const std::string& collection, const std::string& id) override;
  std::vector<std::string> list(const std::string& collection) const override;

 private:
  std::filesystem::path path_of(const std::string& collection, const std::string& id) const;

  std::filesystem::path root_;
};

}  // namespace ecoloom
