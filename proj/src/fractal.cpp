#include "exsets/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "exsets/error.hpp"

namespace exsets {

namespace {

// Enumerates legal finite words of a trimmed SFT one symbol at a time.
class PrefixWalker {
 public:
  struct Node {
    Word word;
    int state;  // -1 while the word is shorter than a block
  };

  explicit PrefixWalker(const Sft& sft) : sft_(sft.trimmed()) {
    for (std::size_t s = 0; s < sft_.num_states(); ++s) index_.emplace(sft_.label(s), static_cast<int>(s));
  }

  const Sft& sft() const { return sft_; }

  std::vector<Node> children(const Node& node) const {
    std::vector<Node> out;
    const auto block = static_cast<std::size_t>(sft_.block_length());
    if (node.word.size() >= block) {
      for (int t : sft_.successors(static_cast<std::size_t>(node.state))) {
        out.push_back({node.word.appended(sft_.label(static_cast<std::size_t>(t)).back()), t});
      }
      return out;
    }
    for (int a = 0; a < sft_.alphabet_size(); ++a) {
      auto next = node.word.appended(a);
      if (next.size() == block) {
        const auto it = index_.find(next);
        if (it != index_.end()) out.push_back({std::move(next), it->second});
        continue;
      }
      const auto it = index_.lower_bound(next);
      if (it != index_.end() && it->first.slice(0, next.size()) == next) out.push_back({std::move(next), -1});
    }
    return out;
  }

  /// State reached after reading `word`, or -1 if it is not legal (or too short).
  int state_of(const Word& word) const {
    const auto block = static_cast<std::size_t>(sft_.block_length());
    if (word.size() < block) return -1;
    auto it = index_.find(word.slice(0, block));
    if (it == index_.end()) return -1;
    int state = it->second;
    for (std::size_t i = block; i < word.size(); ++i) {
      const auto succ = sft_.successors(static_cast<std::size_t>(state));
      int found = -1;
      for (int t : succ) {
        if (sft_.label(static_cast<std::size_t>(t)).back() == word[i]) {
          found = t;
          break;
        }
      }
      if (found < 0) return -1;
      state = found;
    }
    return state;
  }

 private:
  Sft sft_;
  std::map<Word, int> index_;
};

struct Fit {
  double slope, intercept, std_error, residual;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("degenerate regression: all abscissae equal");
  Fit f{sxy / sxx, 0.0, 0.0, 0.0};
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  f.std_error = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace

// ---------------------------------------------------------------- Moran covers

CylinderCover moran_cover(const Sft& sft, const LocallyConstantPotential& psi, double r,
                          std::size_t max_cylinders) {
  if (!(r > 0.0) || r >= 1.0) throw Error("Moran cover parameter must lie in (0, 1)");
  if (!psi.strictly_negative()) throw Error("Moran cover requires a negative potential");
  if (psi.alphabet_size() != sft.alphabet_size()) throw Error("potential alphabet does not match the shift");
  const PrefixWalker walker(sft);
  if (walker.sft().empty()) throw Error("Moran cover of an empty shift");
  const double log_r = std::log(r);
  const auto depth = static_cast<std::size_t>(psi.depth());

  CylinderCover cover;
  cover.r = r;
  cover.potential_depth = psi.depth();
  struct Frame {
    PrefixWalker::Node node;
    double sum;
  };
  std::vector<Frame> stack{{{Word{}, -1}, 0.0}};
  while (!stack.empty()) {
    auto frame = std::move(stack.back());
    stack.pop_back();
    auto kids = walker.children(frame.node);
    // Reverse push keeps the output in lexicographic order.
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      double sum = frame.sum;
      if (it->word.size() >= depth) {
        const double v = psi(it->word.symbols().subspan(it->word.size() - depth));
        if (!std::isfinite(v)) throw Error("potential undefined on legal block " + it->word.slice(it->word.size() - depth, depth).str());
        sum += v;
      }
      if (it->word.size() >= depth && sum < log_r) {
        cover.cylinders.push_back({it->word, sum});
        if (cover.cylinders.size() > max_cylinders) throw Error("Moran cover exceeds the cylinder cap");
      } else {
        stack.push_back({std::move(*it), sum});
      }
    }
  }
  std::sort(cover.cylinders.begin(), cover.cylinders.end(),
            [](const Cylinder& a, const Cylinder& b) { return a.word < b.word; });
  return cover;
}

PartitionCheck check_partition(const Sft& sft, const CylinderCover& cover, std::size_t depth) {
  const PrefixWalker walker(sft);
  std::vector<Word> words;
  for (const auto& c : cover.cylinders) words.push_back(c.word);
  std::sort(words.begin(), words.end());
  PartitionCheck check;
  std::vector<PrefixWalker::Node> stack{{Word{}, -1}};
  while (!stack.empty() && check.ok) {
    auto node = std::move(stack.back());
    stack.pop_back();
    if (!node.word.empty() && std::binary_search(words.begin(), words.end(), node.word)) {
      ++check.leaves;
      auto next = std::upper_bound(words.begin(), words.end(), node.word);
      if (next != words.end() && next->size() > node.word.size() && next->slice(0, node.word.size()) == node.word) {
        check.ok = false;
        check.failure = "cylinder " + node.word.str() + " is a prefix of cylinder " + next->str();
      }
      continue;
    }
    if (node.word.size() == depth) {
      check.ok = false;
      check.failure = "legal word " + node.word.str() + " has no cover cylinder as prefix";
      break;
    }
    for (auto& child : walker.children(node)) stack.push_back(std::move(child));
  }
  if (check.ok && check.leaves != words.size()) {
    check.ok = false;
    check.failure = std::to_string(words.size() - check.leaves) + " cylinders are illegal or never reached";
  }
  return check;
}

double sandwich_violation(const CylinderCover& cover, const LocallyConstantPotential& psi) {
  const double log_r = std::log(cover.r);
  const double c0 = psi.max_abs();
  double worst = 0.0;
  for (const auto& c : cover.cylinders) {
    if (c.birkhoff_sum >= log_r) worst = std::max(worst, c.birkhoff_sum - log_r);
    if (c.birkhoff_sum < log_r - c0) worst = std::max(worst, log_r - c0 - c.birkhoff_sum);
  }
  return worst;
}

// ---------------------------------------------------------------- Bowen entropy

CoverGenerator survivor_cover_generator(const SurvivorSet& target) {
  return [sft = target.sft](int depth) -> std::vector<CoverTerm> {
    const auto count = word_count(sft, static_cast<std::size_t>(depth));
    return {{static_cast<double>(depth), static_cast<double>(count)}};
  };
}

CoverGenerator fiber_cover_generator(const SurvivorSet& target, const Word& past) {
  const PrefixWalker walker(target.sft);
  if (past.size() < static_cast<std::size_t>(walker.sft().block_length())) {
    throw Error("fibre past must be at least one block long");
  }
  const int state = walker.state_of(past);
  if (state < 0) throw Error("fibre past " + past.str() + " is not legal in the survivor");
  return [sft = walker.sft(), state](int depth) -> std::vector<CoverTerm> {
    std::vector<double> ways(sft.num_states(), 0.0), next(sft.num_states());
    ways[static_cast<std::size_t>(state)] = 1.0;
    for (int step = 0; step < depth; ++step) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t s = 0; s < sft.num_states(); ++s) {
        if (ways[s] == 0.0) continue;
        for (int t : sft.successors(s)) next[static_cast<std::size_t>(t)] += ways[s];
      }
      std::swap(ways, next);
    }
    double total = 0.0;
    for (double w : ways) total += w;
    return {{static_cast<double>(depth), total}};
  };
}

std::string to_string(BowenKind kind) {
  switch (kind) {
    case BowenKind::zero: return "zero";
    case BowenKind::finite: return "finite";
    case BowenKind::infinite: return "infinite";
    case BowenKind::empty: return "empty";
  }
  return "empty";
}

namespace {

double log_mass(const std::vector<CoverTerm>& terms, double d) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (t.multiplicity > 0.0) top = std::max(top, std::log(t.multiplicity) - d * t.length);
  }
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (const auto& t : terms) {
    if (t.multiplicity > 0.0) acc += std::exp(std::log(t.multiplicity) - d * t.length - top);
  }
  return top + std::log(acc);
}

}  // namespace

BowenEntropy bowen_entropy(const CoverGenerator& generator, const SurvivorSet& target, double d,
                           int min_depth, int max_depth) {
  BowenEntropy out;
  if (target.empty || target.sft.empty()) return out;
  if (min_depth < 1 || max_depth - min_depth < 3) throw Error("Bowen entropy needs at least four depths");
  if (max_depth > 24) throw Error("Bowen entropy cover depth is capped at 24");
  std::vector<double> xs, scaled, masses;
  for (int n = min_depth; n <= max_depth; ++n) {
    const auto terms = generator(n);
    const double at_zero = log_mass(terms, 0.0);
    if (!std::isfinite(at_zero)) return out;  // nothing to cover
    double lo = 0.0, hi = 1.0;
    while (log_mass(terms, hi) > 0.0) hi *= 2.0;
    if (at_zero <= 0.0) hi = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (log_mass(terms, mid) > 0.0 ? lo : hi) = mid;
    }
    const double crossing = 0.5 * (lo + hi);
    out.depths.push_back(n);
    out.crossings.push_back(crossing);
    xs.push_back(static_cast<double>(n));
    scaled.push_back(static_cast<double>(n) * crossing);
    masses.push_back(log_mass(terms, d));
  }
  out.critical = least_squares(xs, scaled).slope;
  out.log_mass_slope = least_squares(xs, masses).slope;
  if (out.log_mass_slope < -0.02) {
    out.kind = BowenKind::zero;
  } else if (out.log_mass_slope > 0.02) {
    out.kind = BowenKind::infinite;
  } else {
    out.kind = BowenKind::finite;
  }
  return out;
}

// ---------------------------------------------------------------- box counting

std::size_t box_count(const PointCloud& cloud, double delta) {
  if (!(delta > 0.0) || delta >= 1.0) throw Error("box side must lie in (0, 1)");
  const auto boxes = static_cast<std::uint64_t>(std::ceil(1.0 / delta - 1e-9));
  auto cell = [&](double v) {
    const auto i = static_cast<std::int64_t>(std::floor(v / delta));
    return static_cast<std::uint64_t>(std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(boxes) - 1));
  };
  std::vector<std::uint64_t> keys;
  keys.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    keys.push_back(cloud.dimension == 1 ? cell(p[0]) : cell(p[0]) * boxes + cell(p[1]));
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

DimEstimate box_dimension(const PointCloud& cloud, const std::vector<double>& scales) {
  if (scales.size() < 4) throw Error("box dimension needs at least four scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || scales[i] >= 1.0) throw Error("scales must lie in (0, 1)");
    if (i > 0 && !(scales[i] < scales[i - 1])) throw Error("scales must be strictly decreasing");
  }
  if (cloud.dimension != 1 && cloud.dimension != 2) throw Error("point cloud dimension must be 1 or 2");
  if (cloud.points.empty()) throw Error("box dimension of an empty point cloud");
  DimEstimate est;
  est.scales = scales;
  std::vector<double> x, y;
  for (double delta : scales) {
    const auto n = box_count(cloud, delta);
    est.counts.push_back(n);
    x.push_back(std::log(1.0 / delta));
    y.push_back(std::log(static_cast<double>(n)));
  }
  if (std::all_of(est.counts.begin(), est.counts.end(), [&](std::size_t c) { return c == est.counts.front(); })) {
    throw Error("degenerate regression: all box counts equal");
  }
  if (cloud.points.size() < 10 * est.counts.back()) {
    throw Error("undersampled point cloud: " + std::to_string(cloud.points.size()) + " points for " +
                std::to_string(est.counts.back()) + " boxes at the finest scale");
  }
  const auto fit = least_squares(x, y);
  est.value = fit.slope;
  est.std_error = fit.std_error;
  est.residual = fit.residual;
  return est;
}

double marstrand_bound(double b1, const std::vector<double>& fiber_dims) {
  if (fiber_dims.empty()) throw Error("Marstrand bound needs at least one fibre dimension");
  if (b1 < 0.0) throw Error("base dimension must be nonnegative");
  return b1 + *std::min_element(fiber_dims.begin(), fiber_dims.end());
}

std::vector<double> power_scales(double base, int lo, int hi) {
  if (!(base > 1.0)) throw Error("scale base must exceed one");
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::pow(base, -k));
  return out;
}

}  // namespace exsets
