#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "exsets/symbolic.hpp"

namespace exsets {

/// Potential that depends on the first `depth` symbols of a sequence (nats
/// per step). Values are stored densely by base-M block index, first symbol
/// most significant; NaN marks an undefined block.
class LocallyConstantPotential {
 public:
  LocallyConstantPotential(int alphabet_size, int depth, std::vector<double> values);

  static LocallyConstantPotential constant(int alphabet_size, double value);
  /// Depth-one potential with one value per symbol.
  static LocallyConstantPotential per_symbol(std::vector<double> values);
  static LocallyConstantPotential from_table(int alphabet_size, int depth,
                                             const std::map<Word, double>& table);

  int alphabet_size() const noexcept { return alphabet_size_; }
  int depth() const noexcept { return depth_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Value on the first `depth` symbols of `block` (which must be long enough).
  double operator()(std::span<const int> block) const;
  double operator()(const Word& block) const { return (*this)(block.symbols()); }

  LocallyConstantPotential scaled(double factor) const;

  /// Extremes over defined blocks.
  double min_value() const;
  double max_value() const;
  double max_abs() const;
  double min_abs() const;
  bool strictly_negative() const;

  /// Throws unless every legal depth-block of `sft` has a finite value.
  void validate_on(const Sft& sft) const;

  std::map<Word, double> table() const;

 private:
  int alphabet_size_;
  int depth_;
  std::vector<double> values_;
};

/// Markov chain on the states of an SFT. `rows()[s][k]` is the probability of
/// the edge s -> sft.successors(s)[k].
class MarkovMeasure {
 public:
  /// Computes the stationary vector from the lazy chain started uniform.
  MarkovMeasure(Sft sft, std::vector<std::vector<double>> rows);
  /// Validates a supplied stationary vector instead of computing one.
  MarkovMeasure(Sft sft, std::vector<std::vector<double>> rows, std::vector<double> stationary);

  const Sft& sft() const noexcept { return sft_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  const std::vector<double>& stationary() const noexcept { return stationary_; }

  /// Stationary mass of the edge s -> successors(s)[k].
  double edge_mass(std::size_t state, std::size_t k) const { return stationary_[state] * rows_[state][k]; }

  /// The same process on the presentation with longer blocks.
  MarkovMeasure lifted(int block_length) const;

 private:
  void validate_rows() const;

  Sft sft_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> stationary_;
};

/// Product measure with the given symbol probabilities, on any presentation
/// of the full shift.
MarkovMeasure bernoulli_measure(const Sft& full_shift, const std::vector<double>& probabilities);

/// Equilibrium state of a potential of depth <= block_length + 1, carried by
/// the dominant component: P(s->t) = w(s,t) v_t / (rho v_s).
MarkovMeasure equilibrium_measure(const Sft& sft, const LocallyConstantPotential& phi);

/// Measure of maximal entropy.
MarkovMeasure parry_measure(const Sft& sft);

struct HyperbolicSpectrum {
  double chi_s;
  double chi_u;
  double entropy;
};

/// Topological pressure, log spectral radius of e^{phi} on the edges. The SFT
/// is reblocked when the potential is deeper than its edge words.
double pressure(const Sft& sft, const LocallyConstantPotential& phi);

/// Unique d >= 0 with P(d phi) = 0 for a strictly negative potential.
double bowen_root(const Sft& sft, const LocallyConstantPotential& phi);

/// Entropy rate -sum_i pi_i sum_j p_ij log p_ij.
double measure_entropy(const MarkovMeasure& mu);

/// Integral of phi against mu. Requires phi.depth() <= block_length + 1.
double lyapunov(const MarkovMeasure& mu, const LocallyConstantPotential& phi);

HyperbolicSpectrum spectrum_of(const MarkovMeasure& mu, const LocallyConstantPotential& phi_s,
                               const LocallyConstantPotential& phi_u);

/// Young's formula h (1/chi_u - 1/chi_s).
double young_dimension(const HyperbolicSpectrum& spectrum);

struct DynamicalDimensionOptions {
  int restarts = 20;
  std::uint64_t seed = 20240611;
  double tolerance = 1e-8;
  int max_iterations = 20000;
};

struct DynamicalDimension {
  double value;
  MarkovMeasure measure;
};

/// Best Young dimension over Markov measures of the given memory, by
/// projected gradient ascent on the transition rows with seeded restarts.
/// A lower bound for the supremum over all ergodic measures.
DynamicalDimension dynamical_dimension(const Sft& sft, const LocallyConstantPotential& phi_s,
                                       const LocallyConstantPotential& phi_u, int memory,
                                       const DynamicalDimensionOptions& options = {});

}  // namespace exsets
