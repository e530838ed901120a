#pragma once

#include <stdexcept>
#include <string>

namespace ldwait {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// A computation that was well posed but failed to converge or locate a
/// required feature (maximum, bracket, tail bound).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw domain_error(what);
}

}  // namespace detail
}  // namespace ldwait
