#pragma once

#include <stdexcept>
#include <string>

namespace ecoloom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by parse_model. `key()` names the offending element when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Transport failure talking to a remote service: no connection, timeout,
/// or an unexpected HTTP status.
class NetworkError : public Error {
 public:
  using Error::Error;
};

/// The remote answered, but not with the document shape we expect.
class MalformedResponse : public Error {
 public:
  using Error::Error;
};

}  // namespace ecoloom
