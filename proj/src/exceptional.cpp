#include "exsets/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "exsets/error.hpp"

namespace exsets {

const AffineHorseshoe& HyperbolicModel::horseshoe() const {
  if (!is_horseshoe()) throw Error("model " + id + " is not a horseshoe");
  return std::get<AffineHorseshoe>(system);
}

const ToralAutomorphism& HyperbolicModel::toral() const {
  if (is_horseshoe()) throw Error("model " + id + " is not a toral automorphism");
  return std::get<ToralAutomorphism>(system);
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string TargetSet::description() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::empty: os << "empty"; break;
    case Kind::points:
      os << "points";
      for (const auto& p : points) os << " (" << fmt_double(p[0]) << "," << fmt_double(p[1]) << ")";
      break;
    case Kind::cylinders:
      os << "cylinders";
      for (const auto& w : cylinders) os << " " << w.str();
      break;
    case Kind::ball:
      os << "ball radius " << fmt_double(radius) << " around";
      for (const auto& p : points) os << " (" << fmt_double(p[0]) << "," << fmt_double(p[1]) << ")";
      break;
  }
  if (!label.empty()) os << " [" << label << "]";
  return os.str();
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "not-applicable";
}

bool DimensionReport::any_violated() const {
  return std::any_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.verdict == Verdict::violated; });
}

// ---------------------------------------------------------------- covers

ForbiddenFamily cover_target(const AffineHorseshoe& model, const TargetSet& target, int depth) {
  if (depth < 1) throw Error("covering depth must be at least 1");
  const int m = model.branches();
  const auto n = static_cast<std::size_t>(depth);
  std::set<Word> words;
  switch (target.kind) {
    case TargetSet::Kind::empty:
      return ForbiddenFamily(m, {});
    case TargetSet::Kind::points:
      if (target.points.empty()) throw Error("point target has no points");
      for (const auto& p : target.points) words.insert(code_point(model, p, n).forward);
      break;
    case TargetSet::Kind::cylinders:
      if (target.cylinders.empty()) throw Error("cylinder target has no cylinders");
      for (const auto& w : target.cylinders) {
        if (w.empty()) throw Error("cylinder words must be nonempty");
        if (w.max_symbol() >= m) throw Error("cylinder " + w.str() + " uses a symbol outside the alphabet");
        if (w.size() >= n) {
          words.insert(w.slice(0, n));
        } else {
          for (const auto& tail : all_words(m, n - w.size())) words.insert(w + tail);
        }
      }
      break;
    case TargetSet::Kind::ball: {
      if (target.points.empty()) throw Error("ball target has no centre");
      if (!(target.radius > 0.0)) throw Error("ball radius must be positive");
      if (static_cast<double>(n) * std::log2(static_cast<double>(m)) > 22.0) throw Error("ball cover depth too large");
      for (const auto& w : all_words(m, n)) {
        const auto cell = realize_cylinder(model, w, Word{});
        for (const auto& c : target.points) {
          if (cell.x1 >= c[0] - target.radius && cell.x0 <= c[0] + target.radius) {
            words.insert(w);
            break;
          }
        }
      }
      break;
    }
  }
  const double all = std::pow(static_cast<double>(m), static_cast<double>(depth));
  if (static_cast<double>(words.size()) >= all) throw Error("cover is everything; increase depth");
  return ForbiddenFamily(m, std::vector<Word>(words.begin(), words.end()));
}

BoundCheck check_bound(std::string name, std::string formula, double bound, double estimate, double tolerance,
                       std::string hypothesis, std::vector<std::pair<std::string, double>> inputs) {
  BoundCheck b;
  b.name = std::move(name);
  b.formula = std::move(formula);
  b.bound = bound;
  b.estimate = estimate;
  b.tolerance = tolerance;
  b.hypothesis = std::move(hypothesis);
  b.inputs = std::move(inputs);
  if (!std::isfinite(bound) || !std::isfinite(estimate)) {
    b.verdict = Verdict::not_applicable;
    b.margin = 0.0;
    return b;
  }
  b.margin = estimate - (bound - tolerance);
  if (b.hypothesis == "fails") {
    b.verdict = Verdict::not_applicable;  // the theorem claims nothing here
    return b;
  }
  b.verdict = (bound - estimate <= tolerance) ? Verdict::satisfied : Verdict::violated;
  return b;
}

// ---------------------------------------------------------------- reports

DimensionReport exceptional_report(const HyperbolicModel& model, const TargetSet& target, int depth,
                                   const MarkovMeasure& measure, const std::string& measure_label,
                                   const ReportOptions& options) {
  const auto& hs = model.horseshoe();
  const int m = hs.branches();
  if (measure.sft().alphabet_size() != m) throw Error("measure alphabet does not match the model");
  const auto ambient = Sft::full_shift(m);
  const auto [phi_s, phi_u] = horseshoe_potentials(hs);
  const auto& tol = options.tolerances;

  DimensionReport r;
  r.model_id = model.id;
  r.target = target.description();
  r.measure = measure_label;
  r.depth = depth;
  r.phase_convention = "itineraries start at the point itself; backward symbols are listed nearest first";

  const auto family = cover_target(hs, target, depth);
  SurvivorSet survivor{family, ambient, false};
  if (!family.empty()) survivor = build_survivor(family);
  r.family = survivor.family.words();
  r.survivor_states = survivor.sft.num_states();
  r.survivor_edges = survivor.sft.num_edges();
  r.survivor_empty = survivor.empty;

  r.ambient_entropy = sft_entropy(ambient);
  r.survivor_entropy = sft_entropy(survivor.sft);
  r.d_s_ambient = bowen_root(ambient, phi_s);
  r.d_u_ambient = bowen_root(ambient, phi_u);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.d_u_survivor = survivor.empty ? nan : bowen_root(survivor.sft, phi_u);
  r.dimension_estimate = survivor.empty ? nan : r.d_s_ambient + r.d_u_survivor;

  r.spectrum = spectrum_of(measure, phi_s, phi_u);
  const double dim_mu = young_dimension(r.spectrum);
  r.dynamical_dimension = dynamical_dimension(ambient, phi_s, phi_u, options.dd_memory, options.dd).value;

  // Size of the target itself, for the theorem hypotheses.
  std::string small_entropy = "unchecked", small_dim_mu = "unchecked", small_dim_dd = "unchecked";
  switch (target.kind) {
    case TargetSet::Kind::empty:
    case TargetSet::Kind::points:
      small_entropy = "holds";
      small_dim_mu = dim_mu > 0.0 ? "holds" : "fails";
      small_dim_dd = r.dynamical_dimension > 0.0 ? "holds" : "fails";
      break;
    case TargetSet::Kind::cylinders: {
      // A cylinder carries a scaled copy of the whole invariant set.
      const double dim_a = r.d_s_ambient + r.d_u_ambient;
      small_entropy = "fails";
      small_dim_mu = dim_a < dim_mu ? "holds" : "fails";
      small_dim_dd = dim_a < r.dynamical_dimension ? "holds" : "fails";
      break;
    }
    case TargetSet::Kind::ball:
      break;
  }

  const double h = r.spectrum.entropy;
  const double chi_u = r.spectrum.chi_u;
  const double chi_s = r.spectrum.chi_s;
  r.bounds.push_back(check_bound("thmA_entropy", "ambient entropy", r.ambient_entropy,
                                 survivor.empty ? nan : r.survivor_entropy, tol.thmA, small_entropy,
                                 {{"ambient_entropy", r.ambient_entropy}}));
  r.bounds.push_back(check_bound("thmB_dim", "h (1/chi_u - 1/chi_s)", dim_mu, r.dimension_estimate, tol.thmB,
                                 small_dim_mu, {{"h", h}, {"chi_s", chi_s}, {"chi_u", chi_u}}));
  r.bounds.push_back(check_bound("thmC_dim", "dynamical dimension, memory " + std::to_string(options.dd_memory),
                                 r.dynamical_dimension, r.dimension_estimate, tol.thmC, small_dim_dd,
                                 {{"memory", static_cast<double>(options.dd_memory)},
                                  {"restarts", static_cast<double>(options.dd.restarts)}}));
  r.bounds.push_back(check_bound("thmD_dim", "d_s(W) + h/chi_u", r.d_s_ambient + h / chi_u, r.dimension_estimate,
                                 tol.thmD, small_dim_mu, {{"d_s_ambient", r.d_s_ambient}, {"h", h}, {"chi_u", chi_u}}));
  r.bounds.push_back(check_bound("thmE_dim", "1 + h/chi_u (Anosov models only)", nan, nan, tol.thmE, "unchecked", {}));

  if (survivor.empty) {
    r.diagnostics.push_back("survivor is empty: the depth-" + std::to_string(depth) +
                            " cover is too coarse for the hypothesis dim_H(A) < dim_H(mu)");
    for (auto& b : r.bounds) {
      b.verdict = Verdict::not_applicable;
      b.margin = 0.0;
    }
  }
  if (family.empty()) r.diagnostics.push_back("empty target: survivor is the ambient shift");
  return r;
}

std::vector<DimensionReport> sweep_depth(const HyperbolicModel& model, const TargetSet& target,
                                         const std::vector<int>& depths, const MarkovMeasure& measure,
                                         const std::string& measure_label, const ReportOptions& options) {
  for (std::size_t i = 1; i < depths.size(); ++i) {
    if (depths[i] < depths[i - 1]) throw Error("sweep depths must be nondecreasing");
  }
  std::vector<DimensionReport> out;
  for (int d : depths) out.push_back(exceptional_report(model, target, d, measure, measure_label, options));
  return out;
}

DimensionReport toral_report(const HyperbolicModel& model, const TargetSet& target, const ToralRun& run,
                             const Tolerances& tolerances) {
  const auto& a = model.toral();
  DimensionReport r;
  r.model_id = model.id;
  r.target = target.description();
  r.measure = "haar";
  r.depth = static_cast<int>(run.steps);
  r.phase_convention = "iterates x_0 .. x_n are tested against open sup-metric balls";
  std::vector<std::array<double, 2>> centres;
  double rho = 0.0;
  switch (target.kind) {
    case TargetSet::Kind::empty: break;
    case TargetSet::Kind::ball:
      centres = target.points;
      rho = target.radius;
      break;
    default: throw Error("toral targets must be balls (or empty)");
  }
  const double log_lambda = std::log(a.lambda());
  r.ambient_entropy = log_lambda;
  r.spectrum = {-log_lambda, log_lambda, log_lambda};
  const auto cloud = toral_survivors(a, centres, rho, run.grid, run.steps);
  r.survivor_states = cloud.points.size();
  r.survivor_empty = cloud.points.empty();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.survivor_entropy = nan;
  r.d_u_ambient = r.d_u_survivor = r.d_s_ambient = nan;
  r.dynamical_dimension = young_dimension(r.spectrum);
  if (!cloud.points.empty()) {
    r.box = box_dimension(cloud, run.scales.empty() ? power_scales(2.0, 2, 9) : run.scales);
    r.dimension_estimate = r.box->value;
  } else {
    r.dimension_estimate = nan;
    r.diagnostics.push_back("no grid point survives");
  }
  const double h = r.spectrum.entropy;
  const double chi_u = r.spectrum.chi_u;
  const std::string hypothesis = target.kind == TargetSet::Kind::empty ? "holds" : "unchecked";
  r.bounds.push_back(check_bound("thmA_entropy", "symbolic models only", nan, nan, tolerances.thmA, "unchecked", {}));
  r.bounds.push_back(check_bound("thmB_dim", "symbolic models only", nan, nan, tolerances.thmB, "unchecked", {}));
  r.bounds.push_back(check_bound("thmC_dim", "symbolic models only", nan, nan, tolerances.thmC, "unchecked", {}));
  r.bounds.push_back(check_bound("thmD_dim", "symbolic models only", nan, nan, tolerances.thmD, "unchecked", {}));
  r.bounds.push_back(check_bound("thmE_dim", "1 + h/chi_u", 1.0 + h / chi_u, r.dimension_estimate, tolerances.thmE,
                                 hypothesis,
                                 {{"h", h},
                                  {"chi_u", chi_u},
                                  {"rho", rho},
                                  {"grid", static_cast<double>(run.grid)},
                                  {"steps", static_cast<double>(run.steps)}}));
  return r;
}

// ---------------------------------------------------------------- symbolic E+ / I+

int EventuallyPeriodic::at(std::size_t i) const {
  if (period.empty()) throw Error("eventually periodic sequence needs a nonempty period");
  if (i < prefix.size()) return prefix[i];
  return period[(i - prefix.size()) % period.size()];
}

namespace {

bool hit_at(const EventuallyPeriodic& x, std::size_t pos, const ForbiddenFamily& family) {
  for (const auto& u : family.words()) {
    bool match = true;
    for (std::size_t k = 0; k < u.size() && match; ++k) match = x.at(pos + k) == u[k];
    if (match) return true;
  }
  return false;
}

// Positions hit by the omega-limit: the periodic tail, one period's worth.
bool tail_hits(const EventuallyPeriodic& x, const ForbiddenFamily& family) {
  for (std::size_t j = 0; j < x.period.size(); ++j) {
    if (hit_at(x, x.prefix.size() + j, family)) return true;
  }
  return false;
}

}  // namespace

bool in_exceptional(const EventuallyPeriodic& x, const ForbiddenFamily& family) {
  // The orbit is finite, so its closure is itself.
  for (std::size_t n = 0; n < x.prefix.size() + x.period.size(); ++n) {
    if (hit_at(x, n, family)) return false;
  }
  return true;
}

bool in_limit_exceptional(const EventuallyPeriodic& x, const ForbiddenFamily& family) {
  const EventuallyPeriodic cycle{Word{}, x.period};
  for (std::size_t j = 0; j < x.period.size(); ++j) {
    if (hit_at(cycle, j, family)) return false;
  }
  return true;
}

bool in_tilde_preimage(const EventuallyPeriodic& x, const ForbiddenFamily& family) {
  for (std::size_t n = 0; n < x.prefix.size() + x.period.size(); ++n) {
    if (hit_at(x, n, family)) return !tail_hits(x, family);
  }
  return false;
}

}  // namespace exsets
