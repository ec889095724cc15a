#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "exsets/error.hpp"
#include "exsets/systems.hpp"

using namespace exsets;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

AffineHorseshoe symmetric() { return AffineHorseshoe({3.0, 3.0}, {1.0 / 3, 1.0 / 3}); }
AffineHorseshoe asymmetric() { return AffineHorseshoe({2.0, 4.0}, {0.5, 0.25}); }

Word random_word(std::mt19937_64& rng, int m, std::size_t n) {
  std::vector<int> s(n);
  for (auto& x : s) x = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
  return Word(std::move(s));
}

}  // namespace

TEST_CASE("placement") {
  const auto hs = symmetric();
  CHECK(hs.branch(0).a == 0.0);
  CHECK(hs.branch(1).a == doctest::Approx(2.0 / 3));
  CHECK(hs.branch(1).b == doctest::Approx(2.0 / 3));
  const auto p = hs.map({0.1, 0.5});
  CHECK(p[0] == doctest::Approx(0.3));
  CHECK(p[1] == doctest::Approx(0.5 / 3));
  CHECK_THROWS_AS(AffineHorseshoe({2.0, 1.5}, {0.5, 0.5}), Error);
}

TEST_CASE("code_point on periodic points") {
  const auto hs = symmetric();
  const auto fixed = code_point(hs, periodic_point(hs, Word{0}), 12);
  CHECK(fixed.forward == Word(std::vector<int>(12, 0)));
  CHECK(fixed.backward == Word(std::vector<int>(12, 0)));
  const auto two = code_point(hs, periodic_point(hs, Word{0, 1}), 8);
  CHECK(two.forward == Word::parse("01010101"));
  // Backward symbols are read from time -1: the (01)-orbit has 1 there.
  CHECK(two.backward == Word::parse("10101010"));
  CHECK_THROWS_WITH_AS(code_point(hs, {0.5, 0.5}, 4), doctest::Contains("not in invariant set"), Error);
}

TEST_CASE("realize_cylinder") {
  const auto hs = symmetric();
  const auto a = realize_cylinder(hs, Word{0}, Word{});
  CHECK(a.x0 == 0.0);
  CHECK(a.width() == doctest::Approx(1.0 / 3));
  CHECK(a.height() == doctest::Approx(1.0));
  const auto b = realize_cylinder(hs, Word{0, 1}, Word{1});
  CHECK(b.width() == doctest::Approx(1.0 / 9));
  CHECK(b.height() == doctest::Approx(1.0 / 3));
  CHECK(realize_cylinder(hs, Word(std::vector<int>(8, 1)), Word{}).width() == doctest::Approx(std::pow(3.0, -8)));
}

TEST_CASE("property: coding round trip") {
  for (const auto& hs : {symmetric(), asymmetric()}) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto cell = realize_cylinder(hs, random_word(rng, 2, 14), random_word(rng, 2, 14));
      const std::array<double, 2> p{0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1)};
      const auto it = code_point(hs, p, 10);
      CHECK(realize_cylinder(hs, it.forward, it.backward).contains(p[0], p[1]));
    }
  }
}

TEST_CASE("horseshoe potentials") {
  const auto [s1, u1] = horseshoe_potentials(symmetric());
  CHECK(s1(Word{0}) == doctest::Approx(-kLog3));
  CHECK(u1(Word{1}) == doctest::Approx(-kLog3));
  const auto [s2, u2] = horseshoe_potentials(asymmetric());
  CHECK(u2(Word{0}) == doctest::Approx(-kLog2));
  CHECK(u2(Word{1}) == doctest::Approx(-2 * kLog2));
  CHECK(s2(Word{1}) == doctest::Approx(-2 * kLog2));
}

TEST_CASE("sample_invariant_set") {
  const auto hs = symmetric();
  CHECK(sample_invariant_set(hs, 4, 1u << 20, 1).points.size() == 256);
  const auto one = sample_invariant_set(hs, 0, 10, 1);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0][0] == 0.5);
  const auto small = sample_invariant_set(hs, 6, 1000, 5);
  CHECK(small.points.size() == 1000);
  CHECK(sample_invariant_set(hs, 6, 1000, 5).points == small.points);
}

TEST_CASE("property: conjugacy entropy") {
  // Period-n points of the horseshoe are the M^n words of length n.
  for (const auto& hs : {symmetric(), asymmetric()}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      std::set<std::pair<long long, long long>> seen;
      for (const auto& w : all_words(2, n)) {
        auto p = periodic_point(hs, w);
        const auto start = p;
        for (std::size_t k = 0; k < n; ++k) p = hs.map(p);
        CHECK(std::abs(p[0] - start[0]) < 1e-6);
        CHECK(std::abs(p[1] - start[1]) < 1e-6);
        seen.insert({std::llround(start[0] * 1e9), std::llround(start[1] * 1e9)});
      }
      CHECK(std::abs(std::log(static_cast<double>(seen.size())) / n - sft_entropy(Sft::full_shift(2))) < 1e-12);
    }
  }
}

TEST_CASE("property: dimension decomposition on shipped models") {
  const auto full = Sft::full_shift(2);
  struct Case {
    AffineHorseshoe hs;
    std::size_t depth;
    std::vector<double> scales;
  };
  for (const auto& c : {Case{symmetric(), 8, power_scales(3.0, 2, 6)}, Case{asymmetric(), 10, power_scales(2.0, 2, 8)}}) {
    const auto [phi_s, phi_u] = horseshoe_potentials(c.hs);
    const double sum = bowen_root(full, phi_s) + bowen_root(full, phi_u);
    const auto est = box_dimension(sample_invariant_set(c.hs, c.depth, 1u << 20, 3), c.scales);
    CHECK(std::abs(est.value - sum) < 0.05);
  }
}

TEST_CASE("toral automorphism") {
  const ToralAutomorphism cat({{{2, 1}, {1, 1}}});
  CHECK(cat.det() == 1);
  CHECK(cat.trace() == 3);
  CHECK(cat.lambda() == doctest::Approx((3 + std::sqrt(5.0)) / 2));
  CHECK_THROWS_AS(ToralAutomorphism({{{1, 1}, {0, 1}}}), Error);
  CHECK_THROWS_AS(ToralAutomorphism({{{2, 0}, {0, 1}}}), Error);
  for (const auto& p : toral_orbit(cat, RationalPoint{0, 0, 7}, 20)) CHECK(p == RationalPoint{0, 0, 7});
}

TEST_CASE("rational orbits") {
  const ToralAutomorphism cat({{{2, 1}, {1, 1}}});
  // Oracle: plain integer iteration mod 5 with cycle detection.
  long long x = 1, y = 2;
  std::size_t period = 0;
  do {
    const long long nx = (2 * x + y) % 5, ny = (x + y) % 5;
    x = nx;
    y = ny;
    ++period;
  } while (!(x == 1 && y == 2));
  CHECK(rational_period(cat, {1, 2, 5}) == period);
  for (const auto& p : toral_orbit(cat, RationalPoint{1, 2, 5}, 30)) CHECK(p.q == 5);
}

TEST_CASE("property: toral exactness") {
  std::mt19937_64 rng(31);
  for (const auto& m : {ToralAutomorphism::Matrix{{{2, 1}, {1, 1}}}, ToralAutomorphism::Matrix{{{3, 2}, {1, 1}}}}) {
    const ToralAutomorphism a(m);
    for (int trial = 0; trial < 200; ++trial) {
      const std::int64_t q = 2 + static_cast<std::int64_t>(rng() % 60);
      const RationalPoint p{static_cast<std::int64_t>(rng() % q), static_cast<std::int64_t>(rng() % q), q};
      CHECK(order_mod(a, q) % rational_period(a, p) == 0);
    }
  }
}

TEST_CASE("toral survivors") {
  const ToralAutomorphism cat({{{2, 1}, {1, 1}}});
  CHECK(toral_survivors(cat, {{0.0, 0.0}}, 0.6, 64, 3).points.empty());
  CHECK(toral_survivors(cat, {{0.0, 0.0}}, 0.0, 64, 3).points.size() == 64 * 64);
  // Survivors really avoid the ball along the orbit.
  const auto s = toral_survivors(cat, {{0.0, 0.0}}, 0.1, 128, 4);
  CHECK(!s.points.empty());
  for (std::size_t i = 0; i < s.points.size(); i += 37) {
    for (const auto& p : toral_orbit(cat, s.points[i], 4)) CHECK(torus_distance(p, {0.0, 0.0}) >= 0.1 - 1e-12);
  }
  CHECK(torus_distance({0.95, 0.1}, {0.05, 0.1}) == doctest::Approx(0.1));
}

TEST_CASE("property: Haar identity") {
  for (const auto& m : {ToralAutomorphism::Matrix{{{2, 1}, {1, 1}}}, ToralAutomorphism::Matrix{{{3, 1}, {2, 1}}}}) {
    const ToralAutomorphism a(m);
    const double h = std::log(a.lambda());
    CHECK(std::abs(expansion_rate(a) - h) < 1e-9);
    CHECK(std::abs(periodic_entropy(a) - h) < 1e-9);
  }
}
