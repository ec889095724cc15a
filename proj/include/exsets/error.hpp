#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exsets {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Power iteration hit its iteration cap. Carries the last two eigenvalue
/// estimates so callers can judge how far from convergence it was.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}

  double previous_estimate() const noexcept { return previous_; }
  double last_estimate() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// Invalid configuration or model file. `line` is 1-based, 0 if unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& file, std::size_t line, const std::string& message)
      : Error(format(file, line, message)), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& file, std::size_t line, const std::string& msg) {
    std::string out = file.empty() ? std::string("<config>") : file;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + msg;
  }

  std::string file_;
  std::size_t line_;
};

}  // namespace exsets
