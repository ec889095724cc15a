#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "exsets/exceptional.hpp"
#include "exsets/io.hpp"

namespace exsets::verify {

struct Criterion {
  int id;
  std::string key;
  std::vector<std::string> tags;
  std::string title;
  double budget_seconds;
};

struct Result {
  int id = 0;
  std::string key;
  std::string title;
  std::string expected;
  std::string got;
  std::string tolerance;
  bool passed = false;
  double seconds = 0.0;  // side channel, never serialised with the results
  double budget = 0.0;
  std::vector<std::string> details;
};

/// Shipped models the suite runs on.
struct Context {
  HyperbolicModel symmetric;
  HyperbolicModel asymmetric;
  HyperbolicModel catmap;
  std::uint64_t seed = 20240611;
};

/// Loads symmetric.yaml, asymmetric.yaml and catmap.yaml from `dir`.
Context load_context(const std::filesystem::path& dir, std::uint64_t seed = 20240611);

const std::vector<Criterion>& criteria();

/// True if `filter` is empty, a tag of the criterion, its key or its number.
bool matches(const Criterion& c, const std::string& filter);

Result run(int id, const Context& ctx, const std::string& filter = "");
std::vector<Result> run_all(const Context& ctx, const std::string& filter = "");

/// Results without timings, for byte comparison.
io::Json results_json(const std::vector<Result>& results);
io::Json timings_json(const std::vector<Result>& results);

/// Table with criterion, expected, got, tolerance and verdict columns.
std::string table(const std::vector<Result>& results);

}  // namespace exsets::verify
