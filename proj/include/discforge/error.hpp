#pragma once

#include <stdexcept>
#include <string>

namespace discforge {

/// Failure category; the CLI maps config errors to exit code 2 and
/// everything else to exit code 1.
enum class ErrorKind { config, domain, numerical, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& what) {
  return Error(ErrorKind::config, what);
}
inline Error domain_error(const std::string& what) {
  return Error(ErrorKind::domain, what);
}
inline Error numerical_error(const std::string& what) {
  return Error(ErrorKind::numerical, what);
}
inline Error internal_error(const std::string& what) {
  return Error(ErrorKind::internal, what);
}

}  // namespace discforge
