#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exsets/exceptional.hpp"
#include "exsets/symbolic.hpp"
#include "exsets/thermo.hpp"

namespace exsets::config {

inline constexpr int kSchemaVersion = 1;

/// Model file: {schema_version, id, type: horseshoe|toral, branches | matrix}.
HyperbolicModel load_model(const std::filesystem::path& path);

/// Tolerance table file (or inline block): every one of thmA..thmE required.
Tolerances load_tolerances(const std::filesystem::path& path);

struct MeasureSpec {
  std::string kind = "bernoulli";  // bernoulli | markov | parry | haar
  std::vector<double> weights;           // bernoulli
  int block = 1;                         // markov
  std::vector<std::vector<double>> rows;  // markov, aligned with successors
};

/// Builds the measure on the full shift of the model's alphabet.
MarkovMeasure make_measure(const MeasureSpec& spec, int alphabet_size);

struct ExperimentConfig {
  std::filesystem::path source;
  std::string name;
  std::optional<HyperbolicModel> model;
  std::filesystem::path model_path;
  TargetSet target;
  std::vector<int> depths;
  MeasureSpec measure;
  Tolerances tolerances;
  std::uint64_t seed = 20240611;
  std::string out;
  // entropy / pressure commands
  std::optional<ForbiddenFamily> family;
  std::optional<LocallyConstantPotential> potential;
  // dim command
  int memory = 1;
  std::optional<int> sample_depth;
  // toral runs
  ToralRun toral;
};

/// Parses and validates an experiment file; throws ConfigError with the
/// offending line.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace exsets::config
