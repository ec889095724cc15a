#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "exsets/fractal.hpp"
#include "exsets/symbolic.hpp"
#include "exsets/thermo.hpp"

namespace exsets {

/// Branch i maps the vertical strip [a, a + 1/u] x [0, 1] onto the
/// horizontal band [0, 1] x [b, b + s] by (x, y) -> (u (x - a), b + s y).
struct Branch {
  double u;
  double s;
  double a;
  double b;
};

struct Rect {
  double x0, x1, y0, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(double x, double y, double tol = 0.0) const {
    return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
  }
};

class AffineHorseshoe {
 public:
  /// Standard placement: strips left to right starting at x = 0 and bands
  /// bottom to top starting at y = 0, with equal gaps in between.
  AffineHorseshoe(const std::vector<double>& u, const std::vector<double>& s);
  explicit AffineHorseshoe(std::vector<Branch> branches);

  int branches() const noexcept { return static_cast<int>(branches_.size()); }
  const Branch& branch(int i) const { return branches_[static_cast<std::size_t>(i)]; }
  const std::vector<Branch>& all_branches() const noexcept { return branches_; }

  /// Strip containing x (within tol), or -1.
  int strip_of(double x, double tol) const;
  int band_of(double y, double tol) const;

  /// Points within 1e-9 of a strip count as inside it.
  std::array<double, 2> map(std::array<double, 2> p) const;

 private:
  void validate() const;
  std::vector<Branch> branches_;
};

/// Itineraries of a point: forward[k] is the strip of f^k(p); backward[j] is
/// the band of p seen through f^{-j}, i.e. the symbol at time -(j+1).
struct Itinerary {
  Word forward;
  Word backward;
};

Itinerary code_point(const AffineHorseshoe& model, std::array<double, 2> point, std::size_t depth,
                     double tol = 1e-9);

/// Cell of points with the given forward and backward itineraries.
Rect realize_cylinder(const AffineHorseshoe& model, const Word& forward, const Word& backward);

/// Point of the periodic orbit whose itinerary repeats `word` from time zero.
std::array<double, 2> periodic_point(const AffineHorseshoe& model, const Word& word);

/// Depth-one potentials phi_s = log s_i and phi_u = -log u_i.
std::pair<LocallyConstantPotential, LocallyConstantPotential> horseshoe_potentials(const AffineHorseshoe& model);

/// Centre of every depth-n bi-cylinder, subsampled by seed above max_points.
PointCloud sample_invariant_set(const AffineHorseshoe& model, std::size_t depth, std::size_t max_points,
                                std::uint64_t seed);

class ToralAutomorphism {
 public:
  using Matrix = std::array<std::array<std::int64_t, 2>, 2>;
  explicit ToralAutomorphism(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  std::int64_t det() const noexcept { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }
  std::int64_t trace() const noexcept { return m_[0][0] + m_[1][1]; }
  /// Expanding eigenvalue (in absolute value) from trace and determinant.
  double lambda() const;

 private:
  Matrix m_;
};

/// Point (p0/q, p1/q) of the torus.
struct RationalPoint {
  std::int64_t p0, p1, q;
  bool operator==(const RationalPoint&) const = default;
};

/// x_0, ..., x_steps in exact arithmetic (numerators reduced into [0, q)).
std::vector<RationalPoint> toral_orbit(const ToralAutomorphism& a, RationalPoint x, std::size_t steps);
/// Floating point orbit, reduced mod 1.
std::vector<std::array<double, 2>> toral_orbit(const ToralAutomorphism& a, std::array<double, 2> x,
                                               std::size_t steps);

/// Exact period of a rational point, by cycle detection.
std::size_t rational_period(const ToralAutomorphism& a, RationalPoint x);
/// Multiplicative order of the matrix modulo q.
std::size_t order_mod(const ToralAutomorphism& a, std::int64_t q);

/// Sup-metric distance on the torus.
double torus_distance(std::array<double, 2> p, std::array<double, 2> q);

/// Grid points (i/G, j/G) whose iterates x_0, ..., x_steps all stay out of the
/// open balls of radius rho around the targets.
PointCloud toral_survivors(const ToralAutomorphism& a, const std::vector<std::array<double, 2>>& targets,
                           double rho, std::int64_t grid, std::size_t steps);

/// (1/n) log |det(A^n - I)|, the growth rate of periodic points.
double periodic_entropy(const ToralAutomorphism& a, int n = 30);
/// One-step log growth of a unit vector after n normalised iterations.
double expansion_rate(const ToralAutomorphism& a, int n = 60);

}  // namespace exsets
