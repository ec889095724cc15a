#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "exsets/symbolic.hpp"
#include "exsets/thermo.hpp"

namespace exsets {

struct Cylinder {
  Word word;
  double birkhoff_sum;  // S_n psi over the n complete windows of `word`
};

/// Cylinders of a Moran cover. The weight of a cylinder is its length.
struct CylinderCover {
  std::vector<Cylinder> cylinders;
  double r = 0.0;
  int potential_depth = 1;
};

/// Stops every legal sequence at the smallest n with S_n psi < log r. With a
/// depth-k potential the emitted cylinder has length n + k - 1.
CylinderCover moran_cover(const Sft& sft, const LocallyConstantPotential& psi, double r,
                          std::size_t max_cylinders = std::size_t{1} << 24);

struct PartitionCheck {
  bool ok = true;
  std::size_t leaves = 0;  // cover cylinders reached by the walk
  std::string failure;
};

/// Walks every legal word up to `depth` and checks that exactly one cover
/// cylinder is a prefix of it (and that no cylinder is illegal).
PartitionCheck check_partition(const Sft& sft, const CylinderCover& cover, std::size_t depth);

/// Worst violation of log r - C0 <= S < log r, with C0 = max|psi| (zero if none).
double sandwich_violation(const CylinderCover& cover, const LocallyConstantPotential& psi);

/// Terms of a cylinder cover at one refinement level: `multiplicity` cylinders
/// of weight `length`.
struct CoverTerm {
  double length;
  double multiplicity;
};
using CoverGenerator = std::function<std::vector<CoverTerm>(int depth)>;

/// Legal words of length n on the survivor.
CoverGenerator survivor_cover_generator(const SurvivorSet& target);

/// Forward continuations of length n of a fixed legal past, i.e. the
/// survivor restricted to the unstable fibre selected by `past`
/// (`past` is read left to right, its last symbol just before time zero).
CoverGenerator fiber_cover_generator(const SurvivorSet& target, const Word& past);

enum class BowenKind { zero, finite, infinite, empty };
std::string to_string(BowenKind kind);

struct BowenEntropy {
  BowenKind kind = BowenKind::empty;  // behaviour of m(d) as the depth grows
  double critical = 0.0;              // empirical critical exponent
  std::vector<int> depths;
  std::vector<double> crossings;  // per-depth d_n with sum mult e^{-d_n n} = 1
  double log_mass_slope = 0.0;    // slope of log m_n(d) in n
};

/// Evaluates the cover sums at depths 8..24. The critical exponent is the
/// least-squares slope of n d_n against n (the level-independent offset of
/// the log counts drops out).
BowenEntropy bowen_entropy(const CoverGenerator& generator, const SurvivorSet& target, double d,
                           int min_depth = 8, int max_depth = 24);

/// Points in [0,1]^2 (the second coordinate is ignored for a 1D cloud).
struct PointCloud {
  std::vector<std::array<double, 2>> points;
  int dimension = 2;
  std::map<std::string, std::string> metadata;
};

struct DimEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double residual = 0.0;  // root mean square
  std::vector<double> scales;
  std::vector<std::size_t> counts;
};

/// Least-squares slope of log N(delta) against log(1/delta).
DimEstimate box_dimension(const PointCloud& cloud, const std::vector<double>& scales);

/// Number of occupied boxes of side delta.
std::size_t box_count(const PointCloud& cloud, double delta);

/// b1 + min(fibre dimensions).
double marstrand_bound(double b1, const std::vector<double>& fiber_dims);

/// Decreasing scales base^-lo, ..., base^-hi.
std::vector<double> power_scales(double base, int lo, int hi);

}  // namespace exsets
