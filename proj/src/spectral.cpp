#include "exsets/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "exsets/error.hpp"

namespace exsets::spectral {

Digraph::Digraph(std::vector<std::vector<Edge>> out_edges) : out_(std::move(out_edges)) {
  const auto n = static_cast<int>(out_.size());
  for (const auto& edges : out_) {
    for (const auto& e : edges) {
      if (e.target < 0 || e.target >= n) throw Error("digraph edge target out of range");
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
        throw Error("digraph edge weights must be finite and nonnegative");
      }
    }
  }
}

std::vector<std::vector<int>> strongly_connected_components(const Digraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  // Explicit call stack of (vertex, next edge position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto edges = g.out(v);
      if (pos < edges.size()) {
        const int w = edges[pos++].target;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<int> comp;
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

namespace {

struct Block {
  // Local adjacency of one component, CSR layout.
  std::vector<std::size_t> offsets;
  std::vector<int> targets;
  std::vector<double> weights;
  std::size_t size() const { return offsets.size() - 1; }
};

Block restrict_to(const Digraph& g, const std::vector<int>& comp, bool transpose) {
  std::vector<int> local(g.size(), -1);
  for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
  std::vector<std::vector<Edge>> rows(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) {
    for (const auto& e : g.out(comp[i])) {
      const int j = local[e.target];
      if (j < 0) continue;
      if (transpose) {
        rows[j].push_back({static_cast<int>(i), e.weight});
      } else {
        rows[i].push_back({j, e.weight});
      }
    }
  }
  Block b;
  b.offsets.push_back(0);
  for (const auto& row : rows) {
    for (const auto& e : row) {
      b.targets.push_back(e.target);
      b.weights.push_back(e.weight);
    }
    b.offsets.push_back(b.targets.size());
  }
  return b;
}

bool trivial(const Digraph& g, const std::vector<int>& comp) {
  if (comp.size() > 1) return false;
  for (const auto& e : g.out(comp.front())) {
    if (e.target == comp.front() && e.weight > 0.0) return false;
  }
  return true;
}

struct BlockRoot {
  double root;
  std::vector<double> vector;
  long iterations;
};

BlockRoot iterate(const Block& b, const PerronOptions& options) {
  const std::size_t n = b.size();
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = b.offsets[i]; k < b.offsets[i + 1]; ++k) shift += b.weights[k];
  }
  shift /= static_cast<double>(n);

  std::vector<double> x(n, 1.0), y(n, 0.0);
  double previous = std::numeric_limits<double>::quiet_NaN();
  double rayleigh = previous;
  for (long it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = shift * x[i];
      for (std::size_t k = b.offsets[i]; k < b.offsets[i + 1]; ++k) {
        acc += b.weights[k] * x[b.targets[k]];
      }
      y[i] = acc;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double num = 0.0, den = 0.0, top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      num += x[i] * y[i];
      den += x[i] * x[i];
      top = std::max(top, y[i]);
    }
    previous = rayleigh;
    rayleigh = num / den - shift;
    const double root_hi = hi - shift;
    const double root_lo = lo - shift;
    if (root_hi - root_lo <= options.relative_tolerance * std::max(root_hi, 0.0) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / top;
      return {0.5 * (root_lo + root_hi), std::move(x), it};
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / top;
  }
  throw ConvergenceError("power iteration did not converge within " +
                             std::to_string(options.max_iterations) + " iterations",
                         previous, rayleigh);
}

}  // namespace

double spectral_radius(const Digraph& g, const PerronOptions& options) {
  double best = 0.0;
  for (const auto& comp : strongly_connected_components(g)) {
    if (trivial(g, comp)) continue;
    best = std::max(best, iterate(restrict_to(g, comp, false), options).root);
  }
  return best;
}

PerronResult perron(const Digraph& g, const PerronOptions& options) {
  PerronResult result;
  result.right.assign(g.size(), 0.0);
  result.left.assign(g.size(), 0.0);
  const std::vector<int>* best_comp = nullptr;
  std::vector<double> best_right;
  const auto components = strongly_connected_components(g);
  for (const auto& comp : components) {
    if (trivial(g, comp)) continue;
    auto r = iterate(restrict_to(g, comp, false), options);
    result.iterations += r.iterations;
    if (best_comp == nullptr || r.root > result.root) {
      result.root = r.root;
      best_comp = &comp;
      best_right = std::move(r.vector);
    }
  }
  if (best_comp == nullptr) return result;
  auto l = iterate(restrict_to(g, *best_comp, true), options);
  result.iterations += l.iterations;
  result.component = *best_comp;
  for (std::size_t i = 0; i < best_comp->size(); ++i) {
    result.right[(*best_comp)[i]] = best_right[i];
    result.left[(*best_comp)[i]] = l.vector[i];
  }
  return result;
}

}  // namespace exsets::spectral
