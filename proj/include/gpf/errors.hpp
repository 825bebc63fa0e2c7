#pragma once

#include <stdexcept>
#include <string>

namespace gpf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected by an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Model factorization or objective evaluation failed.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Scenario / configuration problems. `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, std::string source = {}, int line = 0)
      : Error(format(msg, source, line)), source_(std::move(source)), line_(line) {}

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& msg, const std::string& source, int line) {
    std::string out;
    if (!source.empty()) out += source;
    if (line > 0) out += (out.empty() ? "line " : ":") + std::to_string(line);
    if (!out.empty()) out += ": ";
    return out + msg;
  }

  std::string source_;
  int line_ = 0;
};

}  // namespace gpf
