#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hkpr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input passed to an operation (bad parameter, out-of-range vertex).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Edge-list text that could not be parsed.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

} // namespace detail
} // namespace hkpr
