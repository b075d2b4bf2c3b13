#include "ecoloom/store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "ecoloom/errors.hpp"

namespace ecoloom {

namespace fs = std::filesystem;

bool DocumentStore::valid_id(const std::string& id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

std::unique_lock<std::mutex> DocumentStore::lock(const std::string& collection,
                                                 const std::string& id) {
  std::mutex* m = nullptr;
  {
    std::lock_guard g(locks_guard_);
    auto& slot = locks_[collection + '/' + id];
    if (!slot) slot = std::make_unique<std::mutex>();
    m = slot.get();
  }
  return std::unique_lock(*m);
}

// ---- memory -----------------------------------------------------------------

std::optional<nlohmann::json> MemoryStore::get(const std::string& collection,
                                               const std::string& id) const {
  std::lock_guard g(mu_);
  auto c = docs_.find(collection);
  if (c == docs_.end()) return std::nullopt;
  auto d = c->second.find(id);
  if (d == c->second.end()) return std::nullopt;
  return std::optional<nlohmann::json>(std::in_place, d->second);
}

void MemoryStore::put(const std::string& collection, const std::string& id,
                      const nlohmann::json& doc) {
  std::lock_guard g(mu_);
  docs_[collection][id] = doc;
}

bool MemoryStore::remove(const std::string& collection, const std::string& id) {
  std::lock_guard g(mu_);
  auto c = docs_.find(collection);
  return c != docs_.end() && c->second.erase(id) > 0;
}

std::vector<std::string> MemoryStore::list(const std::string& collection) const {
  std::lock_guard g(mu_);
  std::vector<std::string> out;
  auto c = docs_.find(collection);
  if (c == docs_.end()) return out;
  for (const auto& [id, doc] : c->second) out.push_back(id);
  return out;
}

// ---- files ------------------------------------------------------------------

FileStore::FileStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw IoError("cannot create store directory " + root_.string() + ": " + ec.message());
}

fs::path FileStore::path_of(const std::string& collection, const std::string& id) const {
  if (!valid_id(collection) || !valid_id(id)) {
    throw IoError("'" + collection + "/" + id + "' is not a storable document name");
  }
  return root_ / collection / (id + ".json");
}

std::optional<nlohmann::json> FileStore::get(const std::string& collection,
                                             const std::string& id) const {
  if (!valid_id(id)) return std::nullopt;
  std::ifstream in(path_of(collection, id), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return std::optional<nlohmann::json>(std::in_place, nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("stored document " + collection + "/" + id + " is corrupt: " + e.what());
  }
}

void FileStore::put(const std::string& collection, const std::string& id,
                    const nlohmann::json& doc) {
  fs::path target = path_of(collection, id);
  fs::create_directories(target.parent_path());
  // unique temp name so concurrent writers of different ids never collide
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream tmp_name;
  tmp_name << id << ".tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '-'
           << counter++;
  fs::path tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot replace " + target.string() + ": " + ec.message());
  }
}

bool FileStore::remove(const std::string& collection, const std::string& id) {
  if (!valid_id(id)) return false;
  std::error_code ec;
  bool removed = fs::remove(path_of(collection, id), ec);
  if (ec) throw IoError("cannot remove " + collection + "/" + id + ": " + ec.message());
  return removed;
}

std::vector<std::string> FileStore::list(const std::string& collection) const {
  std::vector<std::string> out;
  fs::path dir = root_ / collection;
  std::error_code ec;
  if (!valid_id(collection) || !fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json") out.push_back(p.stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ecoloom
