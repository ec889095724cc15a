#include "exsets/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "exsets/error.hpp"

namespace exsets {

// ---------------------------------------------------------------- horseshoes

AffineHorseshoe::AffineHorseshoe(const std::vector<double>& u, const std::vector<double>& s) {
  if (u.size() != s.size()) throw Error("horseshoe needs one contraction rate per expansion rate");
  if (u.size() < 2) throw Error("horseshoe needs at least two branches");
  const auto m = static_cast<double>(u.size());
  double widths = 0.0, heights = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 1.0)) throw Error("expansion rates must exceed one");
    if (!(s[i] > 0.0 && s[i] < 1.0)) throw Error("contraction rates must lie in (0, 1)");
    widths += 1.0 / u[i];
    heights += s[i];
  }
  const double gap_x = (1.0 - widths) / (m - 1.0);
  const double gap_y = (1.0 - heights) / (m - 1.0);
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    branches_.push_back({u[i], s[i], a, b});
    a += 1.0 / u[i] + gap_x;
    b += s[i] + gap_y;
  }
  validate();
}

AffineHorseshoe::AffineHorseshoe(std::vector<Branch> branches) : branches_(std::move(branches)) { validate(); }

void AffineHorseshoe::validate() const {
  if (branches_.size() < 2) throw Error("horseshoe needs at least two branches");
  constexpr double slack = 1e-12;
  for (const auto& br : branches_) {
    if (!(br.u > 1.0)) throw Error("expansion rates must exceed one");
    if (!(br.s > 0.0 && br.s < 1.0)) throw Error("contraction rates must lie in (0, 1)");
    if (br.a < -slack || br.a + 1.0 / br.u > 1.0 + slack) throw Error("vertical strip leaves the unit square");
    if (br.b < -slack || br.b + br.s > 1.0 + slack) throw Error("horizontal band leaves the unit square");
  }
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    for (std::size_t j = i + 1; j < branches_.size(); ++j) {
      const auto& p = branches_[i];
      const auto& q = branches_[j];
      if (std::min(p.a + 1.0 / p.u, q.a + 1.0 / q.u) - std::max(p.a, q.a) > slack) {
        throw Error("vertical strips " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
      if (std::min(p.b + p.s, q.b + q.s) - std::max(p.b, q.b) > slack) {
        throw Error("horizontal bands " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
}

int AffineHorseshoe::strip_of(double x, double tol) const {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& br = branches_[i];
    if (x >= br.a - tol && x <= br.a + 1.0 / br.u + tol) return static_cast<int>(i);
  }
  return -1;
}

int AffineHorseshoe::band_of(double y, double tol) const {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& br = branches_[i];
    if (y >= br.b - tol && y <= br.b + br.s + tol) return static_cast<int>(i);
  }
  return -1;
}

std::array<double, 2> AffineHorseshoe::map(std::array<double, 2> p) const {
  const int i = strip_of(p[0], 1e-9);
  if (i < 0) throw Error("point outside every vertical strip");
  const auto& br = branch(i);
  return {br.u * (p[0] - br.a), br.b + br.s * p[1]};
}

Itinerary code_point(const AffineHorseshoe& model, std::array<double, 2> point, std::size_t depth, double tol) {
  Itinerary it;
  std::vector<int> fwd, bwd;
  double x = point[0], y = point[1];
  double slack = tol;
  for (std::size_t k = 0; k < depth; ++k) {
    const int i = model.strip_of(x, slack);
    if (i < 0) throw Error("not in invariant set at step " + std::to_string(k));
    fwd.push_back(i);
    const auto& br = model.branch(i);
    x = std::clamp(br.u * (x - br.a), 0.0, 1.0);
    slack *= br.u;
  }
  slack = tol;
  for (std::size_t j = 0; j < depth; ++j) {
    const int i = model.band_of(y, slack);
    if (i < 0) throw Error("not in invariant set at step -" + std::to_string(j + 1));
    bwd.push_back(i);
    const auto& br = model.branch(i);
    y = std::clamp((y - br.b) / br.s, 0.0, 1.0);
    slack /= br.s;
  }
  it.forward = Word(std::move(fwd));
  it.backward = Word(std::move(bwd));
  return it;
}

namespace {

// Composition of inner-to-outer affine maps t -> offset + scale t.
std::pair<double, double> compose_x(const AffineHorseshoe& model, const Word& w) {
  double alpha = 0.0, beta = 1.0;
  for (std::size_t k = w.size(); k-- > 0;) {
    if (w[k] < 0 || w[k] >= model.branches()) throw Error("symbol outside the horseshoe alphabet");
    const auto& br = model.branch(w[k]);
    alpha = br.a + alpha / br.u;
    beta /= br.u;
  }
  return {alpha, beta};
}

std::pair<double, double> compose_y(const AffineHorseshoe& model, const Word& w) {
  double alpha = 0.0, beta = 1.0;
  for (std::size_t k = w.size(); k-- > 0;) {
    if (w[k] < 0 || w[k] >= model.branches()) throw Error("symbol outside the horseshoe alphabet");
    const auto& br = model.branch(w[k]);
    alpha = br.b + br.s * alpha;
    beta *= br.s;
  }
  return {alpha, beta};
}

}  // namespace

Rect realize_cylinder(const AffineHorseshoe& model, const Word& forward, const Word& backward) {
  const auto [ax, bx] = compose_x(model, forward);
  const auto [ay, by] = compose_y(model, backward);
  return {ax, ax + bx, ay, ay + by};
}

std::array<double, 2> periodic_point(const AffineHorseshoe& model, const Word& word) {
  if (word.empty()) throw Error("periodic word must be nonempty");
  std::vector<int> rev(word.symbols().rbegin(), word.symbols().rend());
  const auto [ax, bx] = compose_x(model, word);
  const auto [ay, by] = compose_y(model, Word(std::move(rev)));
  return {ax / (1.0 - bx), ay / (1.0 - by)};
}

std::pair<LocallyConstantPotential, LocallyConstantPotential> horseshoe_potentials(const AffineHorseshoe& model) {
  std::vector<double> phi_s, phi_u;
  for (const auto& br : model.all_branches()) {
    phi_s.push_back(std::log(br.s));
    phi_u.push_back(-std::log(br.u));
  }
  return {LocallyConstantPotential::per_symbol(std::move(phi_s)),
          LocallyConstantPotential::per_symbol(std::move(phi_u))};
}

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do v = rng(); while (v >= limit);
  return v % range;
}

}  // namespace

PointCloud sample_invariant_set(const AffineHorseshoe& model, std::size_t depth, std::size_t max_points,
                                std::uint64_t seed) {
  const auto m = model.branches();
  if (static_cast<double>(depth) * std::log2(static_cast<double>(m)) > 22.0) {
    throw Error("sample depth too large for the cell enumeration");
  }
  if (max_points == 0) throw Error("max_points must be positive");
  std::vector<double> xs, ys;
  for (const auto& w : all_words(m, depth)) {
    const auto [ax, bx] = compose_x(model, w);
    const auto [ay, by] = compose_y(model, w);
    xs.push_back(ax + 0.5 * bx);
    ys.push_back(ay + 0.5 * by);
  }
  if (depth == 0) {
    xs = {0.5};
    ys = {0.5};
  }
  PointCloud cloud;
  const auto side = static_cast<std::uint64_t>(xs.size());
  const std::uint64_t total = side * side;
  std::vector<std::uint64_t> chosen;
  if (total <= max_points) {
    chosen.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) chosen[i] = i;
  } else {
    // Floyd's sampling of max_points distinct cells.
    std::mt19937_64 rng(seed);
    std::set<std::uint64_t> picked;
    for (std::uint64_t j = total - max_points; j < total; ++j) {
      const auto t = bounded(rng, j + 1);
      if (!picked.insert(t).second) picked.insert(j);
    }
    chosen.assign(picked.begin(), picked.end());
  }
  cloud.points.reserve(chosen.size());
  for (auto idx : chosen) cloud.points.push_back({xs[idx / side], ys[idx % side]});
  cloud.metadata = {{"model", "affine-horseshoe"},
                    {"branches", std::to_string(m)},
                    {"depth", std::to_string(depth)},
                    {"seed", std::to_string(seed)},
                    {"points", std::to_string(cloud.points.size())}};
  return cloud;
}

// ---------------------------------------------------------------- toral automorphisms

ToralAutomorphism::ToralAutomorphism(Matrix m) : m_(m) {
  const auto d = det();
  if (d != 1 && d != -1) throw Error("toral automorphism must have determinant +-1");
  const auto t = trace();
  if ((d == 1 && std::abs(t) <= 2) || (d == -1 && t == 0)) {
    throw Error("toral automorphism must be hyperbolic (no eigenvalue of modulus one)");
  }
}

double ToralAutomorphism::lambda() const {
  const auto t = static_cast<double>(trace());
  const auto d = static_cast<double>(det());
  return 0.5 * (std::abs(t) + std::sqrt(t * t - 4.0 * d));
}

namespace {

std::int64_t reduce(__int128 v, std::int64_t q) {
  auto r = static_cast<std::int64_t>(v % q);
  return r < 0 ? r + q : r;
}

RationalPoint step(const ToralAutomorphism::Matrix& m, const RationalPoint& x) {
  return {reduce(static_cast<__int128>(m[0][0]) * x.p0 + static_cast<__int128>(m[0][1]) * x.p1, x.q),
          reduce(static_cast<__int128>(m[1][0]) * x.p0 + static_cast<__int128>(m[1][1]) * x.p1, x.q), x.q};
}

}  // namespace

std::vector<RationalPoint> toral_orbit(const ToralAutomorphism& a, RationalPoint x, std::size_t steps) {
  if (x.q <= 0) throw Error("denominator must be positive");
  x = {reduce(x.p0, x.q), reduce(x.p1, x.q), x.q};
  std::vector<RationalPoint> orbit{x};
  for (std::size_t k = 0; k < steps; ++k) orbit.push_back(step(a.matrix(), orbit.back()));
  return orbit;
}

std::vector<std::array<double, 2>> toral_orbit(const ToralAutomorphism& a, std::array<double, 2> x,
                                               std::size_t steps) {
  const auto& m = a.matrix();
  auto frac = [](double v) { return v - std::floor(v); };
  std::vector<std::array<double, 2>> orbit{{frac(x[0]), frac(x[1])}};
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& p = orbit.back();
    orbit.push_back({frac(static_cast<double>(m[0][0]) * p[0] + static_cast<double>(m[0][1]) * p[1]),
                     frac(static_cast<double>(m[1][0]) * p[0] + static_cast<double>(m[1][1]) * p[1])});
  }
  return orbit;
}

std::size_t rational_period(const ToralAutomorphism& a, RationalPoint x) {
  if (x.q <= 0) throw Error("denominator must be positive");
  x = {reduce(x.p0, x.q), reduce(x.p1, x.q), x.q};
  auto y = step(a.matrix(), x);
  const auto cap = static_cast<std::size_t>(x.q) * static_cast<std::size_t>(x.q) + 1;
  for (std::size_t k = 1; k <= cap; ++k) {
    if (y == x) return k;
    y = step(a.matrix(), y);
  }
  throw Error("rational orbit is not periodic");
}

std::size_t order_mod(const ToralAutomorphism& a, std::int64_t q) {
  if (q < 1) throw Error("modulus must be positive");
  if (q == 1) return 1;
  const auto& m = a.matrix();
  using M = std::array<std::array<std::int64_t, 2>, 2>;
  M p{{{reduce(m[0][0], q), reduce(m[0][1], q)}, {reduce(m[1][0], q), reduce(m[1][1], q)}}};
  const M base = p;
  const auto cap = 6 * static_cast<std::size_t>(q) * static_cast<std::size_t>(q);
  for (std::size_t k = 1; k <= cap; ++k) {
    if (p[0][0] == 1 && p[1][1] == 1 && p[0][1] == 0 && p[1][0] == 0) return k;
    M next{};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        next[i][j] = reduce(static_cast<__int128>(p[i][0]) * base[0][j] + static_cast<__int128>(p[i][1]) * base[1][j], q);
      }
    }
    p = next;
  }
  throw Error("matrix order not found");
}

double torus_distance(std::array<double, 2> p, std::array<double, 2> q) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    double d = std::fmod(std::abs(p[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(i)]), 1.0);
    worst = std::max(worst, std::min(d, 1.0 - d));
  }
  return worst;
}

PointCloud toral_survivors(const ToralAutomorphism& a, const std::vector<std::array<double, 2>>& targets,
                           double rho, std::int64_t grid, std::size_t steps) {
  if (grid < 1 || grid > (std::int64_t{1} << 16)) throw Error("grid size must lie in [1, 65536]");
  if (rho < 0.0) throw Error("ball radius must be nonnegative");
  if (rho > 0.0 && !(rho > 1.0 / static_cast<double>(grid))) throw Error("ball radius must exceed the grid spacing");
  if (static_cast<double>(steps) * std::log(a.lambda()) > 45.0) throw Error("too many steps for the float safety bound");
  PointCloud cloud;
  const double g = static_cast<double>(grid);
  const bool nothing = rho == 0.0 || targets.empty();
  for (std::int64_t i = 0; i < grid; ++i) {
    for (std::int64_t j = 0; j < grid; ++j) {
      bool alive = true;
      if (!nothing) {
        RationalPoint x{i, j, grid};
        for (std::size_t k = 0; k <= steps && alive; ++k) {
          const std::array<double, 2> p{static_cast<double>(x.p0) / g, static_cast<double>(x.p1) / g};
          for (const auto& t : targets) {
            if (torus_distance(p, t) < rho) {
              alive = false;
              break;
            }
          }
          x = step(a.matrix(), x);
        }
      }
      if (alive) cloud.points.push_back({static_cast<double>(i) / g, static_cast<double>(j) / g});
    }
  }
  cloud.metadata = {{"model", "toral-automorphism"},
                    {"grid", std::to_string(grid)},
                    {"steps", std::to_string(steps)},
                    {"points", std::to_string(cloud.points.size())}};
  return cloud;
}

double periodic_entropy(const ToralAutomorphism& a, int n) {
  if (n < 1) throw Error("period must be positive");
  if (static_cast<double>(n) * std::log(a.lambda()) > 40.0) throw Error("period too large for exact arithmetic");
  using M = std::array<std::array<__int128, 2>, 2>;
  const auto& m = a.matrix();
  M p{{{1, 0}, {0, 1}}};
  for (int k = 0; k < n; ++k) {
    M next{};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) next[i][j] = p[i][0] * m[0][j] + p[i][1] * m[1][j];
    }
    p = next;
  }
  // det(A^n - I) = det(A^n) - tr(A^n) + 1.
  const __int128 det_n = (n % 2 == 0 || a.det() == 1) ? 1 : -1;
  __int128 value = det_n - (p[0][0] + p[1][1]) + 1;
  if (value < 0) value = -value;
  return std::log(static_cast<long double>(value)) / n;
}

double expansion_rate(const ToralAutomorphism& a, int n) {
  const auto& m = a.matrix();
  std::array<double, 2> v{1.0, 0.0};
  double rate = 0.0;
  for (int k = 0; k < n; ++k) {
    const std::array<double, 2> w{m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
    const double norm = std::hypot(w[0], w[1]);
    rate = std::log(norm);  // v has unit length
    v = {w[0] / norm, w[1] / norm};
  }
  return rate;
}

}  // namespace exsets
