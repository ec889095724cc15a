#include "exsets/thermo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "exsets/error.hpp"
#include "exsets/spectral.hpp"

namespace exsets {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t block_index(std::span<const int> block, int alphabet, int depth) {
  std::size_t idx = 0;
  for (int i = 0; i < depth; ++i) idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(block[static_cast<std::size_t>(i)]);
  return idx;
}

std::size_t ipow(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

// Sft on a subset of states (edges leaving the subset are dropped).
Sft restrict_states(const Sft& sft, const std::vector<int>& states) {
  std::vector<int> local(sft.num_states(), -1);
  for (std::size_t i = 0; i < states.size(); ++i) local[static_cast<std::size_t>(states[i])] = static_cast<int>(i);
  std::vector<Word> labels;
  std::vector<std::vector<int>> succ(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    labels.push_back(sft.label(static_cast<std::size_t>(states[i])));
    for (int t : sft.successors(static_cast<std::size_t>(states[i]))) {
      if (local[static_cast<std::size_t>(t)] >= 0) succ[i].push_back(local[static_cast<std::size_t>(t)]);
    }
  }
  return Sft(sft.alphabet_size(), sft.block_length(), std::move(labels), std::move(succ));
}

spectral::Digraph unit_graph(const Sft& sft) {
  std::vector<std::vector<spectral::Edge>> out(sft.num_states());
  for (std::size_t s = 0; s < sft.num_states(); ++s) {
    for (int t : sft.successors(s)) out[s].push_back({t, 1.0});
  }
  return spectral::Digraph(std::move(out));
}

// Presentation whose edge words are long enough for `phi`.
Sft compatible(const Sft& sft, const LocallyConstantPotential& phi) {
  if (phi.alphabet_size() != sft.alphabet_size()) {
    throw Error("potential alphabet (" + std::to_string(phi.alphabet_size()) +
                ") does not match the shift alphabet (" + std::to_string(sft.alphabet_size()) + ")");
  }
  if (phi.depth() <= sft.block_length() + 1) return sft;
  return sft.reblocked(phi.depth() - 1);
}

struct WeightedEdges {
  spectral::Digraph graph;
  double offset;  // weights are e^{phi - offset}
};

WeightedEdges weigh(const Sft& sft, const LocallyConstantPotential& phi) {
  std::vector<std::vector<double>> values(sft.num_states());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sft.num_states(); ++s) {
    for (std::size_t k = 0; k < sft.successors(s).size(); ++k) {
      const double v = phi(sft.edge_word(s, k));
      if (!std::isfinite(v)) throw Error("potential undefined on legal block " + sft.edge_word(s, k).str());
      values[s].push_back(v);
      top = std::max(top, v);
    }
  }
  std::vector<std::vector<spectral::Edge>> out(sft.num_states());
  for (std::size_t s = 0; s < sft.num_states(); ++s) {
    for (std::size_t k = 0; k < values[s].size(); ++k) {
      out[s].push_back({sft.successors(s)[k], std::exp(values[s][k] - top)});
    }
  }
  return {spectral::Digraph(std::move(out)), top};
}

}  // namespace

// ---------------------------------------------------------------- potentials

LocallyConstantPotential::LocallyConstantPotential(int alphabet_size, int depth, std::vector<double> values)
    : alphabet_size_(alphabet_size), depth_(depth), values_(std::move(values)) {
  if (alphabet_size_ < 1) throw Error("potential alphabet must be nonempty");
  if (depth_ < 1) throw Error("potential depth must be at least 1");
  if (static_cast<double>(depth_) * std::log2(static_cast<double>(alphabet_size_)) > 24.0) {
    throw Error("potential table too large");
  }
  if (values_.size() != ipow(alphabet_size_, depth_)) throw Error("potential table has wrong size");
  for (double v : values_) {
    if (std::isinf(v)) throw Error("potential values must be finite");
  }
}

LocallyConstantPotential LocallyConstantPotential::constant(int alphabet_size, double value) {
  return LocallyConstantPotential(alphabet_size, 1, std::vector<double>(static_cast<std::size_t>(alphabet_size), value));
}

LocallyConstantPotential LocallyConstantPotential::per_symbol(std::vector<double> values) {
  const int m = static_cast<int>(values.size());
  return LocallyConstantPotential(m, 1, std::move(values));
}

LocallyConstantPotential LocallyConstantPotential::from_table(int alphabet_size, int depth,
                                                              const std::map<Word, double>& table) {
  std::vector<double> values(ipow(alphabet_size, depth), kNaN);
  for (const auto& [block, v] : table) {
    if (block.size() != static_cast<std::size_t>(depth)) {
      throw Error("potential block '" + block.str() + "' does not have depth " + std::to_string(depth));
    }
    if (block.max_symbol() >= alphabet_size) throw Error("potential block '" + block.str() + "' outside alphabet");
    values[block_index(block.symbols(), alphabet_size, depth)] = v;
  }
  return LocallyConstantPotential(alphabet_size, depth, std::move(values));
}

double LocallyConstantPotential::operator()(std::span<const int> block) const {
  if (block.size() < static_cast<std::size_t>(depth_)) throw Error("block shorter than potential depth");
  return values_[block_index(block, alphabet_size_, depth_)];
}

LocallyConstantPotential LocallyConstantPotential::scaled(double factor) const {
  auto v = values_;
  for (auto& x : v) x *= factor;
  return LocallyConstantPotential(alphabet_size_, depth_, std::move(v));
}

double LocallyConstantPotential::min_value() const {
  double out = std::numeric_limits<double>::infinity();
  for (double v : values_) if (!std::isnan(v)) out = std::min(out, v);
  return out;
}

double LocallyConstantPotential::max_value() const {
  double out = -std::numeric_limits<double>::infinity();
  for (double v : values_) if (!std::isnan(v)) out = std::max(out, v);
  return out;
}

double LocallyConstantPotential::max_abs() const { return std::max(std::abs(min_value()), std::abs(max_value())); }

double LocallyConstantPotential::min_abs() const {
  double out = std::numeric_limits<double>::infinity();
  for (double v : values_) if (!std::isnan(v)) out = std::min(out, std::abs(v));
  return out;
}

bool LocallyConstantPotential::strictly_negative() const {
  bool any = false;
  for (double v : values_) {
    if (std::isnan(v)) continue;
    any = true;
    if (!(v < 0.0)) return false;
  }
  return any;
}

void LocallyConstantPotential::validate_on(const Sft& sft) const {
  const auto core = compatible(sft.trimmed(), *this);
  for (std::size_t s = 0; s < core.num_states(); ++s) {
    for (std::size_t k = 0; k < core.successors(s).size(); ++k) {
      const auto w = core.edge_word(s, k);
      if (!std::isfinite((*this)(w))) throw Error("potential undefined on legal block " + w.slice(0, static_cast<std::size_t>(depth_)).str());
    }
  }
}

std::map<Word, double> LocallyConstantPotential::table() const {
  std::map<Word, double> out;
  for (const auto& w : all_words(alphabet_size_, static_cast<std::size_t>(depth_))) {
    const double v = (*this)(w);
    if (!std::isnan(v)) out.emplace(w, v);
  }
  return out;
}

// ---------------------------------------------------------------- Markov measures

namespace {

std::vector<double> lazy_stationary(const Sft& sft, const std::vector<std::vector<double>>& rows) {
  const std::size_t n = sft.num_states();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  for (long it = 0; it < 1'000'000; ++it) {
    for (std::size_t i = 0; i < n; ++i) next[i] = 0.5 * pi[i];
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t k = 0; k < rows[s].size(); ++k) next[static_cast<std::size_t>(sft.successors(s)[k])] += 0.5 * pi[s] * rows[s][k];
    }
    double change = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      change += std::abs(next[i] - pi[i]);
      total += next[i];
    }
    for (std::size_t i = 0; i < n; ++i) pi[i] = next[i] / total;
    if (change < 1e-15) return pi;
  }
  throw ConvergenceError("stationary vector did not converge", 0.0, 0.0);
}

}  // namespace

MarkovMeasure::MarkovMeasure(Sft sft, std::vector<std::vector<double>> rows)
    : sft_(std::move(sft)), rows_(std::move(rows)) {
  if (sft_.empty()) throw Error("Markov measure on an empty shift");
  validate_rows();
  stationary_ = lazy_stationary(sft_, rows_);
}

MarkovMeasure::MarkovMeasure(Sft sft, std::vector<std::vector<double>> rows, std::vector<double> stationary)
    : sft_(std::move(sft)), rows_(std::move(rows)), stationary_(std::move(stationary)) {
  if (sft_.empty()) throw Error("Markov measure on an empty shift");
  validate_rows();
  if (stationary_.size() != sft_.num_states()) throw Error("stationary vector has wrong size");
  double total = 0.0;
  for (double p : stationary_) {
    if (p < 0.0) throw Error("stationary vector has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("stationary vector does not sum to one");
  std::vector<double> image(stationary_.size(), 0.0);
  for (std::size_t s = 0; s < sft_.num_states(); ++s) {
    for (std::size_t k = 0; k < rows_[s].size(); ++k) image[static_cast<std::size_t>(sft_.successors(s)[k])] += stationary_[s] * rows_[s][k];
  }
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (std::abs(image[i] - stationary_[i]) > 1e-10) throw Error("supplied vector is not stationary");
  }
}

void MarkovMeasure::validate_rows() const {
  if (rows_.size() != sft_.num_states()) throw Error("transition rows do not match the shift states");
  for (std::size_t s = 0; s < rows_.size(); ++s) {
    if (rows_[s].size() != sft_.successors(s).size()) {
      throw Error("transition row " + std::to_string(s) + " does not match the successors of state " + sft_.label(s).str());
    }
    double total = 0.0;
    for (double p : rows_[s]) {
      if (!(p >= 0.0)) throw Error("transition probabilities must be nonnegative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error("transition row " + std::to_string(s) + " does not sum to one");
  }
}

MarkovMeasure MarkovMeasure::lifted(int block_length) const {
  const int base = sft_.block_length();
  if (block_length == base) return *this;
  auto bigger = sft_.reblocked(block_length);
  std::map<Word, int> old;
  for (std::size_t s = 0; s < sft_.num_states(); ++s) old.emplace(sft_.label(s), static_cast<int>(s));
  auto old_state = [&](const Word& block, std::size_t pos) {
    return old.at(block.slice(pos, static_cast<std::size_t>(base)));
  };
  auto transition = [&](int from, int to) {
    const auto succ = sft_.successors(static_cast<std::size_t>(from));
    const auto it = std::lower_bound(succ.begin(), succ.end(), to);
    return rows_[static_cast<std::size_t>(from)][static_cast<std::size_t>(it - succ.begin())];
  };
  const auto span = static_cast<std::size_t>(block_length - base);
  std::vector<std::vector<double>> rows(bigger.num_states());
  std::vector<double> pi(bigger.num_states());
  for (std::size_t w = 0; w < bigger.num_states(); ++w) {
    const auto& lab = bigger.label(w);
    double mass = stationary_[static_cast<std::size_t>(old_state(lab, 0))];
    for (std::size_t i = 0; i < span; ++i) mass *= transition(old_state(lab, i), old_state(lab, i + 1));
    pi[w] = mass;
    const int last = old_state(lab, span);
    for (int t : bigger.successors(w)) {
      rows[w].push_back(transition(last, old_state(bigger.label(static_cast<std::size_t>(t)), span)));
    }
  }
  return MarkovMeasure(std::move(bigger), std::move(rows), std::move(pi));
}

MarkovMeasure bernoulli_measure(const Sft& full_shift, const std::vector<double>& probabilities) {
  if (probabilities.size() != static_cast<std::size_t>(full_shift.alphabet_size())) {
    throw Error("Bernoulli weights do not match the alphabet");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw Error("Bernoulli weights must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("Bernoulli weights must sum to one");
  std::vector<std::vector<double>> rows(full_shift.num_states());
  std::vector<double> pi(full_shift.num_states(), 1.0);
  for (std::size_t s = 0; s < full_shift.num_states(); ++s) {
    for (int sym : full_shift.label(s).symbols()) pi[s] *= probabilities[static_cast<std::size_t>(sym)];
    for (int t : full_shift.successors(s)) rows[s].push_back(probabilities[static_cast<std::size_t>(full_shift.label(static_cast<std::size_t>(t)).back())]);
  }
  return MarkovMeasure(full_shift, std::move(rows), std::move(pi));
}

MarkovMeasure equilibrium_measure(const Sft& sft, const LocallyConstantPotential& phi) {
  const auto core = compatible(sft.trimmed(), phi);
  if (core.empty()) throw Error("equilibrium measure of an empty shift");
  const auto weighted = weigh(core, phi);
  const auto pf = spectral::perron(weighted.graph);
  std::vector<char> in_comp(core.num_states(), 0);
  for (int s : pf.component) in_comp[static_cast<std::size_t>(s)] = 1;
  std::vector<std::vector<double>> rows(core.num_states());
  for (std::size_t s = 0; s < core.num_states(); ++s) {
    const auto edges = weighted.graph.out(s);
    rows[s].assign(edges.size(), 0.0);
    if (!in_comp[s]) {
      std::fill(rows[s].begin(), rows[s].end(), 1.0 / static_cast<double>(edges.size()));
      continue;
    }
    double row_total = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto t = static_cast<std::size_t>(edges[k].target);
      if (in_comp[t]) rows[s][k] = edges[k].weight * pf.right[t];
      row_total += rows[s][k];
    }
    for (auto& p : rows[s]) p /= row_total;
  }
  return MarkovMeasure(core, std::move(rows));
}

MarkovMeasure parry_measure(const Sft& sft) {
  return equilibrium_measure(sft, LocallyConstantPotential::constant(sft.alphabet_size(), 0.0));
}

// ---------------------------------------------------------------- pressure

double pressure(const Sft& sft, const LocallyConstantPotential& phi) {
  const auto core = compatible(sft.trimmed(), phi);
  if (core.empty()) throw Error("pressure of an empty shift");
  const auto weighted = weigh(core, phi);
  return weighted.offset + std::log(spectral::spectral_radius(weighted.graph));
}

double bowen_root(const Sft& sft, const LocallyConstantPotential& phi) {
  if (!phi.strictly_negative()) throw Error("Bowen root requires negative potential");
  const auto core = compatible(sft.trimmed(), phi);
  if (core.empty()) throw Error("Bowen root of an empty shift");
  auto p = [&](double d) { return pressure(core, phi.scaled(d)); };
  const double p0 = p(0.0);
  if (p0 < 0.0) throw Error("Bowen root requires nonnegative pressure at zero");
  if (p0 == 0.0) return 0.0;
  double lo = 0.0;
  double hi = p0 / phi.min_abs() + 1.0;
  double p_lo = p0;
  double p_hi = p(hi);
  if (p_hi > 0.0) throw Error("Bowen root bracket failed");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = p(mid);
    if (pm > 0.0) {
      lo = mid;
      p_lo = pm;
    } else {
      hi = mid;
      p_hi = pm;
    }
    if (hi - lo < 1e-7) break;
  }
  // Newton polish; P'(d) is the integral of phi against the equilibrium state of d phi.
  double d = (std::abs(p_lo) < std::abs(p_hi)) ? lo : hi;
  double pd = (d == lo) ? p_lo : p_hi;
  for (int it = 0; it < 8 && std::abs(pd) > 1e-14; ++it) {
    const auto mu = equilibrium_measure(core, phi.scaled(d));
    const double slope = lyapunov(mu, phi);
    if (!(slope < 0.0)) break;
    double next = d - pd / slope;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double pn = p(next);
    if (pn > 0.0) lo = next; else hi = next;
    if (std::abs(pn) >= std::abs(pd) && std::abs(pd) <= 1e-10) break;
    d = next;
    pd = pn;
  }
  while (std::abs(pd) > 1e-10 && hi - lo > 1e-16) {
    d = 0.5 * (lo + hi);
    pd = p(d);
    if (pd > 0.0) lo = d; else hi = d;
  }
  return d;
}

// ---------------------------------------------------------------- functionals

double measure_entropy(const MarkovMeasure& mu) {
  double h = 0.0;
  for (std::size_t s = 0; s < mu.rows().size(); ++s) {
    double row = 0.0;
    for (double p : mu.rows()[s]) {
      if (p > 0.0) row -= p * std::log(p);
    }
    h += mu.stationary()[s] * row;
  }
  return h;
}

double lyapunov(const MarkovMeasure& mu, const LocallyConstantPotential& phi) {
  const auto& sft = mu.sft();
  if (phi.depth() > sft.block_length() + 1) throw Error("incompatible depths: lift the measure first");
  if (phi.alphabet_size() != sft.alphabet_size()) throw Error("potential alphabet does not match the measure");
  double total = 0.0;
  for (std::size_t s = 0; s < sft.num_states(); ++s) {
    if (mu.stationary()[s] == 0.0) continue;
    for (std::size_t k = 0; k < sft.successors(s).size(); ++k) {
      const double m = mu.edge_mass(s, k);
      if (m > 0.0) total += m * phi(sft.edge_word(s, k));
    }
  }
  return total;
}

HyperbolicSpectrum spectrum_of(const MarkovMeasure& mu, const LocallyConstantPotential& phi_s,
                               const LocallyConstantPotential& phi_u) {
  return {lyapunov(mu, phi_s), -lyapunov(mu, phi_u), measure_entropy(mu)};
}

double young_dimension(const HyperbolicSpectrum& spectrum) {
  if (!(spectrum.chi_s < 0.0 && spectrum.chi_u > 0.0)) throw Error("Young's formula requires chi_s < 0 < chi_u");
  return spectrum.entropy * (1.0 / spectrum.chi_u - 1.0 / spectrum.chi_s);
}

// ---------------------------------------------------------------- dynamical dimension

namespace {

using Rows = std::vector<std::vector<double>>;

constexpr double kFloor = 1e-12;

// Euclidean projection onto {p >= floor, sum p = 1}.
std::vector<double> project_row(std::vector<double> v) {
  const std::size_t k = v.size();
  if (k == 1) return {1.0};
  const double budget = 1.0 - static_cast<double>(k) * kFloor;
  for (auto& x : v) x -= kFloor;
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - budget) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  double total = 0.0;
  for (auto& x : v) {
    x = std::max(x - theta, 0.0) + kFloor;
    total += x;
  }
  for (auto& x : v) x /= total;
  return v;
}

struct Landscape {
  const Sft& chain;
  std::vector<std::vector<double>> phi_s;  // per edge
  std::vector<std::vector<double>> phi_u;

  Eigen::VectorXd stationary(const Rows& rows) const {
    const auto n = static_cast<Eigen::Index>(chain.num_states());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t s = 0; s < chain.num_states(); ++s) {
      for (std::size_t k = 0; k < rows[s].size(); ++k) {
        a(chain.successors(s)[k], static_cast<Eigen::Index>(s)) -= rows[s][k];
      }
    }
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) pi(i) = std::max(pi(i), 0.0);
    return pi / pi.sum();
  }

  struct Value {
    double dimension, h, a, b;
    Eigen::VectorXd pi;
  };

  Value evaluate(const Rows& rows) const {
    Value v{0.0, 0.0, 0.0, 0.0, stationary(rows)};
    for (std::size_t s = 0; s < rows.size(); ++s) {
      double gh = 0.0, gu = 0.0, gs = 0.0;
      for (std::size_t k = 0; k < rows[s].size(); ++k) {
        const double p = rows[s][k];
        if (p > 0.0) gh -= p * std::log(p);
        gu -= p * phi_u[s][k];
        gs -= p * phi_s[s][k];
      }
      const double w = v.pi(static_cast<Eigen::Index>(s));
      v.h += w * gh;
      v.a += w * gu;
      v.b += w * gs;
    }
    v.dimension = v.h * (1.0 / v.a + 1.0 / v.b);
    return v;
  }

  // Ascent direction per row: d g_s / d p_sk + V_t with V the Poisson solution
  // for the linearised objective.
  Rows direction(const Rows& rows, const Value& v) const {
    const auto n = static_cast<Eigen::Index>(chain.num_states());
    const double c1 = 1.0 / v.a + 1.0 / v.b;
    const double c2 = -v.h / (v.a * v.a);
    const double c3 = -v.h / (v.b * v.b);
    Eigen::VectorXd g(n);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      double gh = 0.0, gu = 0.0, gs = 0.0;
      for (std::size_t k = 0; k < rows[s].size(); ++k) {
        const double p = rows[s][k];
        if (p > 0.0) gh -= p * std::log(p);
        gu -= p * phi_u[s][k];
        gs -= p * phi_s[s][k];
      }
      g(static_cast<Eigen::Index>(s)) = c1 * gh + c2 * gu + c3 * gs;
    }
    const double mean = v.pi.dot(g);
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      for (std::size_t k = 0; k < rows[s].size(); ++k) z(static_cast<Eigen::Index>(s), chain.successors(s)[k]) -= rows[s][k];
    }
    z += Eigen::VectorXd::Ones(n) * v.pi.transpose();
    const Eigen::VectorXd value = z.fullPivLu().solve(g - mean * Eigen::VectorXd::Ones(n));
    Rows dir(rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
      for (std::size_t k = 0; k < rows[s].size(); ++k) {
        const double p = std::max(rows[s][k], kFloor);
        const double local = c1 * (-std::log(p) - 1.0) + c2 * (-phi_u[s][k]) + c3 * (-phi_s[s][k]);
        dir[s].push_back(local + value(chain.successors(s)[k]));
      }
    }
    return dir;
  }
};

struct Ascent {
  double dimension;
  Rows rows;
};

Ascent ascend(const Landscape& land, Rows rows, const DynamicalDimensionOptions& options) {
  for (auto& r : rows) r = project_row(std::move(r));
  auto current = land.evaluate(rows);
  double step = 1.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const auto dir = land.direction(rows, current);
    bool improved = false;
    double gain = 0.0;
    while (step > 1e-14) {
      Rows trial(rows.size());
      for (std::size_t s = 0; s < rows.size(); ++s) {
        std::vector<double> moved(rows[s].size());
        for (std::size_t k = 0; k < rows[s].size(); ++k) moved[k] = rows[s][k] + step * dir[s][k];
        trial[s] = project_row(std::move(moved));
      }
      auto next = land.evaluate(trial);
      if (next.dimension > current.dimension) {
        gain = next.dimension - current.dimension;
        rows = std::move(trial);
        current = std::move(next);
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved || gain < options.tolerance * 1e-3) break;
  }
  return {current.dimension, std::move(rows)};
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool better(const Ascent& a, const Ascent& b) {
  if (a.dimension > b.dimension + 1e-12) return true;
  if (a.dimension < b.dimension - 1e-12) return false;
  return a.rows < b.rows;
}

DynamicalDimension optimise_component(const Sft& chain, const LocallyConstantPotential& phi_s,
                                      const LocallyConstantPotential& phi_u,
                                      const std::vector<Rows>& warm_starts,
                                      const DynamicalDimensionOptions& options) {
  Landscape land{chain, {}, {}};
  land.phi_s.resize(chain.num_states());
  land.phi_u.resize(chain.num_states());
  for (std::size_t s = 0; s < chain.num_states(); ++s) {
    for (std::size_t k = 0; k < chain.successors(s).size(); ++k) {
      const auto w = chain.edge_word(s, k);
      land.phi_s[s].push_back(phi_s(w));
      land.phi_u[s].push_back(phi_u(w));
    }
  }
  std::vector<Rows> starts = warm_starts;
  std::uint64_t seeder = options.seed;
  for (int r = 0; r < options.restarts; ++r) {
    std::mt19937_64 rng(splitmix(seeder));
    Rows rows(chain.num_states());
    for (std::size_t s = 0; s < chain.num_states(); ++s) {
      double total = 0.0;
      for (std::size_t k = 0; k < chain.successors(s).size(); ++k) {
        rows[s].push_back(-std::log(1.0 - unit(rng)));  // exponential draws give a flat Dirichlet
        total += rows[s].back();
      }
      for (auto& p : rows[s]) p /= total;
    }
    starts.push_back(std::move(rows));
  }
  std::optional<Ascent> best;
  for (auto& start : starts) {
    auto result = ascend(land, std::move(start), options);
    if (!best || better(result, *best)) best = std::move(result);
  }
  return {best->dimension, MarkovMeasure(chain, best->rows)};
}

}  // namespace

DynamicalDimension dynamical_dimension(const Sft& sft, const LocallyConstantPotential& phi_s,
                                       const LocallyConstantPotential& phi_u, int memory,
                                       const DynamicalDimensionOptions& options) {
  if (memory < 1) throw Error("memory must be at least 1");
  if (!phi_s.strictly_negative() || !phi_u.strictly_negative()) {
    throw Error("dynamical dimension requires phi_s < 0 < -phi_u");
  }
  auto core = sft.trimmed();
  if (core.empty()) throw Error("dynamical dimension of an empty shift");
  const int block = std::max({core.block_length(), memory, phi_s.depth() - 1, phi_u.depth() - 1});
  const auto chain = core.reblocked(block);

  std::optional<DynamicalDimension> lower;
  if (memory > 1 && memory > core.block_length() && block == memory) {
    lower = dynamical_dimension(sft, phi_s, phi_u, memory - 1, options);
  }

  std::optional<DynamicalDimension> best;
  for (const auto& comp : spectral::strongly_connected_components(unit_graph(chain))) {
    auto piece = restrict_states(chain, comp);
    if (piece.num_edges() == 0) continue;
    std::vector<Rows> warm;
    if (lower) {
      std::set<Word> labels;
      for (std::size_t s = 0; s < piece.num_states(); ++s) labels.insert(piece.label(s));
      const auto lifted = lower->measure.lifted(block);
      bool inside = true;
      for (std::size_t s = 0; s < lifted.sft().num_states() && inside; ++s) {
        inside = labels.count(lifted.sft().label(s)) > 0;
      }
      if (inside && lifted.sft().num_states() == piece.num_states()) warm.push_back(lifted.rows());
    }
    auto candidate = optimise_component(piece, phi_s, phi_u, warm, options);
    if (!best || candidate.value > best->value + 1e-12) best = std::move(candidate);
  }
  if (!best) throw Error("dynamical dimension: no measure of positive entropy");
  return std::move(*best);
}

}  // namespace exsets
