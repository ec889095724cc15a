#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace exsets::spectral {

struct Edge {
  int target;
  double weight;
};

/// Nonnegative weighted digraph stored as out-edge lists.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::vector<std::vector<Edge>> out_edges);

  std::size_t size() const noexcept { return out_.size(); }
  std::span<const Edge> out(std::size_t v) const { return out_[v]; }

 private:
  std::vector<std::vector<Edge>> out_;
};

struct PerronOptions {
  double relative_tolerance = 1e-12;
  long max_iterations = 1'000'000;
};

/// Perron data of the dominant strongly connected component. `right` and
/// `left` are indexed by global vertex and vanish off `component`; both are
/// scaled so that their largest entry is one.
struct PerronResult {
  double root = 0.0;
  std::vector<int> component;
  std::vector<double> right;
  std::vector<double> left;
  long iterations = 0;
};

/// Strongly connected components (Tarjan), each sorted ascending, listed in
/// order of their smallest vertex.
std::vector<std::vector<int>> strongly_connected_components(const Digraph& g);

/// Spectral radius of the nonnegative matrix represented by `g`.
///
/// Each nontrivial strongly connected component is handled separately by
/// power iteration on A + cI from the all-ones vector, where c is the mean row
/// sum of the component. The shift makes every irreducible block primitive
/// without moving the Perron vector. Iteration stops once the Collatz-Wielandt
/// bounds min (Ax)_i/x_i <= rho <= max (Ax)_i/x_i agree to the relative
/// tolerance. Throws ConvergenceError past the iteration cap.
double spectral_radius(const Digraph& g, const PerronOptions& options = {});

/// Same as spectral_radius, but also returns the left and right Perron
/// vectors of the dominant component (first one on ties).
PerronResult perron(const Digraph& g, const PerronOptions& options = {});

}  // namespace exsets::spectral
