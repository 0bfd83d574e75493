#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wheelsim {

/// Malformed document. `path` names the offending field ("route[2][0]")
/// and `line` is 1-based when known, 0 otherwise.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what, std::size_t line = 0)
      : std::runtime_error(format(path, what, line)), path_(std::move(path)), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& path, const std::string& what,
                            std::size_t line) {
    std::string out;
    if (line != 0) out += "line " + std::to_string(line) + ": ";
    if (!path.empty()) out += path + ": ";
    return out + what;
  }

  std::string path_;
  std::size_t line_;
};

/// A parsed level that breaks one or more invariants. Every violation is listed.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "level invalid";
    for (const auto& s : v) out += "; " + s;
    return out;
  }

  std::vector<std::string> violations_;
};

class DescriptorMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonMonotonicTimestamps : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SessionEnded : public std::logic_error {
 public:
  SessionEnded() : std::logic_error("session already ended") {}
};

class SessionNotEnded : public std::logic_error {
 public:
  SessionNotEnded() : std::logic_error("session has not ended") {}
};

/// Wire message that could not be decoded; `path` is the offending JSON path.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace wheelsim
