#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "exsets/fractal.hpp"
#include "exsets/symbolic.hpp"
#include "exsets/systems.hpp"
#include "exsets/thermo.hpp"

namespace exsets {

struct HyperbolicModel {
  std::string id;
  std::variant<AffineHorseshoe, ToralAutomorphism> system;

  bool is_horseshoe() const { return std::holds_alternative<AffineHorseshoe>(system); }
  const AffineHorseshoe& horseshoe() const;
  const ToralAutomorphism& toral() const;
};

struct TargetSet {
  enum class Kind { empty, points, cylinders, ball };
  Kind kind = Kind::empty;
  std::vector<std::array<double, 2>> points;  // the points, or the ball centres
  std::vector<Word> cylinders;                // forward cylinders
  double radius = 0.0;
  std::string label;  // free text carried into reports

  std::string description() const;
};

/// Allowed shortfall of each estimate below its bound.
struct Tolerances {
  double thmA = 0.03;
  double thmB = 0.05;
  double thmC = 0.05;
  double thmD = 0.05;
  double thmE = 0.1;
};

enum class Verdict { satisfied, violated, not_applicable };
std::string to_string(Verdict v);

struct BoundCheck {
  std::string name;     // thmA_entropy, thmB_dim, ...
  std::string formula;  // what the bound is computed from
  double bound = 0.0;
  double estimate = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // estimate - (bound - tolerance)
  Verdict verdict = Verdict::not_applicable;
  std::string hypothesis;  // holds / fails / unchecked, for the theorem's dim or entropy condition
  std::vector<std::pair<std::string, double>> inputs;
};

struct DimensionReport {
  std::string model_id;
  std::string target;
  std::string measure;
  int depth = 0;
  std::vector<Word> family;
  std::size_t survivor_states = 0;
  std::size_t survivor_edges = 0;
  bool survivor_empty = false;
  double ambient_entropy = 0.0;
  double survivor_entropy = 0.0;  // -infinity for an empty survivor
  double d_u_ambient = 0.0;
  double d_u_survivor = 0.0;
  double d_s_ambient = 0.0;
  double dimension_estimate = 0.0;
  HyperbolicSpectrum spectrum{0.0, 0.0, 0.0};
  double dynamical_dimension = 0.0;
  std::optional<DimEstimate> box;  // toral reports only
  std::vector<BoundCheck> bounds;
  std::vector<std::string> diagnostics;
  std::string phase_convention;

  bool any_violated() const;
};

/// Forward itineraries of length n of the depth-n cells meeting the target.
/// A cylinder shorter than n contributes all its extensions.
ForbiddenFamily cover_target(const AffineHorseshoe& model, const TargetSet& target, int depth);

/// Verdict rule shared by every bound: satisfied iff bound - estimate <= tolerance,
/// not-applicable if either value is not finite or the hypothesis fails.
BoundCheck check_bound(std::string name, std::string formula, double bound, double estimate, double tolerance,
                       std::string hypothesis, std::vector<std::pair<std::string, double>> inputs);

struct ReportOptions {
  Tolerances tolerances;
  int dd_memory = 1;
  DynamicalDimensionOptions dd;
};

DimensionReport exceptional_report(const HyperbolicModel& model, const TargetSet& target, int depth,
                                   const MarkovMeasure& measure, const std::string& measure_label,
                                   const ReportOptions& options = {});

std::vector<DimensionReport> sweep_depth(const HyperbolicModel& model, const TargetSet& target,
                                         const std::vector<int>& depths, const MarkovMeasure& measure,
                                         const std::string& measure_label, const ReportOptions& options = {});

struct ToralRun {
  std::int64_t grid = 2048;
  std::size_t steps = 12;
  std::vector<double> scales;  // defaults to 2^-2 .. 2^-9
};

/// Haar-measure report for a toral automorphism: grid survivors of the ball
/// target and their box dimension against 1 + h/chi_u.
DimensionReport toral_report(const HyperbolicModel& model, const TargetSet& target, const ToralRun& run,
                             const Tolerances& tolerances = {});

/// Eventually periodic one-sided sequence prefix period period ...
struct EventuallyPeriodic {
  Word prefix;
  Word period;
  int at(std::size_t i) const;
};

/// Symbolic target A = union of the cylinders [U], U in the family.
bool in_exceptional(const EventuallyPeriodic& x, const ForbiddenFamily& family);        // E+
bool in_limit_exceptional(const EventuallyPeriodic& x, const ForbiddenFamily& family);  // I+
/// Some shift of x lies in {a in A : omega(a) misses A}.
bool in_tilde_preimage(const EventuallyPeriodic& x, const ForbiddenFamily& family);

}  // namespace exsets
