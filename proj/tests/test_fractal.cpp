#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "exsets/error.hpp"
#include "exsets/fractal.hpp"

using namespace exsets;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
const double kGolden = std::log((1.0 + std::sqrt(5.0)) / 2.0);

// Cell centres of the depth-n middle-thirds construction, from ternary digits.
std::vector<double> cantor(int n) {
  std::vector<double> out;
  const double cell = std::pow(3.0, -n);
  for (std::uint32_t code = 0; code < (1u << n); ++code) {
    double x = 0.0, scale = 1.0;
    for (int k = n - 1; k >= 0; --k) {
      scale /= 3.0;
      x += 2.0 * ((code >> k) & 1u) * scale;
    }
    out.push_back(x + cell / 2);
  }
  return out;
}

PointCloud line(const std::vector<double>& xs) {
  PointCloud c;
  c.dimension = 1;
  for (double x : xs) c.points.push_back({x, 0.0});
  return c;
}

PointCloud product(const std::vector<double>& xs, const std::vector<double>& ys) {
  PointCloud c;
  for (double x : xs)
    for (double y : ys) c.points.push_back({x, y});
  return c;
}

// Exhaustive check that every length-n word has exactly one cylinder prefix.
bool unique_ancestor(const CylinderCover& cover, std::size_t n) {
  for (const auto& w : all_words(2, n)) {
    int hits = 0;
    for (const auto& c : cover.cylinders) hits += c.word.size() <= n && w.slice(0, c.word.size()) == c.word;
    if (hits != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("Moran cover with constant potentials") {
  const auto full = Sft::full_shift(2);
  const auto a = moran_cover(full, LocallyConstantPotential::constant(2, -kLog3), std::pow(3.0, -4.5));
  CHECK(a.cylinders.size() == 32);
  for (const auto& c : a.cylinders) CHECK(c.word.size() == 5);
  const auto b = moran_cover(full, LocallyConstantPotential::constant(2, -kLog2), std::pow(2.0, -8.5));
  CHECK(b.cylinders.size() == 512);
  for (const auto& c : b.cylinders) CHECK(c.word.size() == 9);
}

TEST_CASE("Moran cover with mixed lengths") {
  const auto full = Sft::full_shift(2);
  const auto psi = LocallyConstantPotential::per_symbol({-kLog2, -2 * kLog2});
  const auto cover = moran_cover(full, psi, std::pow(2.0, -6.5));
  std::set<std::size_t> lengths;
  for (const auto& c : cover.cylinders) lengths.insert(c.word.size());
  CHECK(lengths.size() > 1);
  CHECK(unique_ancestor(cover, 12));
  CHECK(check_partition(full, cover, 12).ok);
  CHECK(sandwich_violation(cover, psi) == 0.0);
}

TEST_CASE("property: Moran partition and sandwich on a grid of radii") {
  std::mt19937_64 rng(12);
  const std::vector<Sft> shifts{Sft::full_shift(2), build_survivor(ForbiddenFamily(2, {Word{1, 1}})).sft,
                                build_survivor(ForbiddenFamily(3, {Word{0, 0}, Word{1, 2, 1}})).sft};
  for (const auto& sft : shifts) {
    const int m = sft.alphabet_size();
    std::uniform_real_distribution<double> u(-1.5, -0.2);
    for (int depth : {1, 2}) {
      std::map<Word, double> t;
      for (const auto& w : all_words(m, static_cast<std::size_t>(depth))) t.emplace(w, u(rng));
      const auto psi = LocallyConstantPotential::from_table(m, depth, t);
      for (double r : {0.5, 0.2, 0.05, 0.01, 0.002}) {
        const auto cover = moran_cover(sft, psi, r);
        const auto check = check_partition(sft, cover, 30);
        CHECK_MESSAGE(check.ok, check.failure);
        CHECK(sandwich_violation(cover, psi) == 0.0);
        for (const auto& c : cover.cylinders) {
          CHECK(c.birkhoff_sum < std::log(r));
          CHECK(c.birkhoff_sum >= std::log(r) - psi.max_abs());
        }
      }
    }
  }
}

TEST_CASE("check_partition detects overlaps and gaps") {
  const auto full = Sft::full_shift(2);
  CylinderCover gap;
  gap.cylinders = {{Word{0}, -1.0}, {Word{1, 0}, -2.0}};
  CHECK(!check_partition(full, gap, 6).ok);
  CylinderCover overlap;
  overlap.cylinders = {{Word{0}, -1.0}, {Word{0, 1}, -2.0}, {Word{1}, -1.0}};
  CHECK(!check_partition(full, overlap, 6).ok);
}

TEST_CASE("Bowen entropy of survivors") {
  const auto g = build_survivor(ForbiddenFamily(2, {Word{1, 1}}));
  const auto e = bowen_entropy(survivor_cover_generator(g), g, kGolden);
  CHECK(std::abs(e.critical - 0.4812) < 0.02);
  CHECK(std::abs(e.critical - sft_entropy(g.sft)) < 0.02);
  CHECK(e.kind == BowenKind::finite);
  CHECK(bowen_entropy(survivor_cover_generator(g), g, 0.3).kind == BowenKind::infinite);
  CHECK(bowen_entropy(survivor_cover_generator(g), g, 0.7).kind == BowenKind::zero);

  const SurvivorSet full{ForbiddenFamily(2, {}), Sft::full_shift(2), false};
  CHECK(std::abs(bowen_entropy(survivor_cover_generator(full), full, kLog2).critical - kLog2) < 0.02);

  const auto empty = build_survivor(ForbiddenFamily(2, {Word{0}, Word{1}}));
  CHECK(bowen_entropy(survivor_cover_generator(empty), empty, 0.5).kind == BowenKind::empty);
  CHECK(to_string(BowenKind::empty) == "empty");
}

TEST_CASE("box dimension") {
  const auto c = box_dimension(line(cantor(12)), power_scales(3.0, 2, 7));
  CHECK(std::abs(c.value - kLog2 / kLog3) < 0.03);

  std::vector<double> grid;
  for (int i = 0; i < 512; ++i) grid.push_back((i + 0.5) / 512);
  CHECK(std::abs(box_dimension(product(grid, grid), power_scales(2.0, 2, 7)).value - 2.0) < 0.02);

  const auto cc = box_dimension(product(cantor(10), cantor(10)), power_scales(3.0, 2, 7));
  CHECK(std::abs(cc.value - 2 * kLog2 / kLog3) < 0.05);
}

TEST_CASE("box dimension errors") {
  CHECK_THROWS_AS(box_dimension(line(cantor(8)), power_scales(3.0, 2, 4)), Error);
  CHECK_THROWS_AS(box_dimension(line(cantor(8)), {0.1, 0.2, 0.05, 0.01}), Error);
  CHECK_THROWS_WITH_AS(box_dimension(line(cantor(6)), power_scales(3.0, 2, 7)), doctest::Contains("undersampled"), Error);
  PointCloud same = line(std::vector<double>(5000, 0.25));
  CHECK_THROWS_WITH_AS(box_dimension(same, power_scales(2.0, 1, 4)), doctest::Contains("degenerate"), Error);
}

TEST_CASE("property: box estimate bias shrinks with depth") {
  // Uniform samples from the depth-n intervals of the construction.
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double prev = 1.0;
  for (int n : {2, 3, 4, 5, 8, 12}) {
    const double width = std::pow(3.0, -n);
    std::vector<double> xs;
    for (int i = 0; i < 8192; ++i) {
      double x = 0.0, scale = 1.0;
      for (int k = 0; k < n; ++k) x += 2.0 * static_cast<double>(rng() & 1u) * (scale /= 3.0);
      xs.push_back(x + width * u(rng));
    }
    const double err = std::abs(box_dimension(line(xs), power_scales(3.0, 2, 6)).value - kLog2 / kLog3);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
  CHECK(prev < 0.03);
}

TEST_CASE("marstrand bound") {
  CHECK(marstrand_bound(kLog2 / kLog3, {kLog2 / kLog3, kLog2 / kLog3}) == doctest::Approx(2 * kLog2 / kLog3));
  CHECK(marstrand_bound(1.0, {0.5, 0.7}) == doctest::Approx(1.5));
  CHECK(marstrand_bound(0.0, {0.8}) == doctest::Approx(0.8));
  // Numeric check on a product of a Cantor set with a 1/4-Cantor set.
  std::vector<double> quarter;
  for (std::uint32_t code = 0; code < 1024; ++code) {
    double x = 0.0, s = 1.0;
    for (int k = 9; k >= 0; --k) {
      s /= 4.0;
      x += 3.0 * ((code >> k) & 1u) * s;
    }
    quarter.push_back(x + std::pow(4.0, -10) / 2);
  }
  const auto p = box_dimension(product(cantor(10), quarter), power_scales(2.0, 2, 8));
  CHECK(p.value >= marstrand_bound(kLog2 / kLog3, {0.5}) - 0.05);
}

TEST_CASE("power scales") {
  const auto s = power_scales(2.0, 2, 4);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == 0.25);
  CHECK(s[2] == 0.0625);
}
