#include <doctest.h>

#include <cmath>
#include <random>

#include "exsets/error.hpp"
#include "exsets/symbolic.hpp"
#include "exsets/thermo.hpp"

using namespace exsets;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
const double kGolden = std::log((1.0 + std::sqrt(5.0)) / 2.0);

Sft golden() { return build_survivor(ForbiddenFamily(2, {Word{1, 1}})).sft; }

MarkovMeasure random_markov(const Sft& sft, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<std::vector<double>> rows(sft.num_states());
  for (std::size_t s = 0; s < sft.num_states(); ++s) {
    double total = 0.0;
    for (std::size_t k = 0; k < sft.successors(s).size(); ++k) total += rows[s].emplace_back(u(rng));
    for (auto& x : rows[s]) x /= total;
  }
  return MarkovMeasure(sft, std::move(rows));
}

LocallyConstantPotential random_potential(int m, int depth, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::map<Word, double> t;
  for (const auto& w : all_words(m, static_cast<std::size_t>(depth))) t.emplace(w, u(rng));
  return LocallyConstantPotential::from_table(m, depth, t);
}

}  // namespace

TEST_CASE("pressure") {
  for (int m : {2, 3, 5}) {
    CHECK(pressure(Sft::full_shift(m), LocallyConstantPotential::constant(m, -0.7)) ==
          doctest::Approx(std::log(m) - 0.7).epsilon(1e-12));
  }
  CHECK(std::abs(pressure(golden(), LocallyConstantPotential::constant(2, 0.0)) - sft_entropy(golden())) < 1e-12);
  // Full shift, depth-1 potential: P = log sum e^{phi_i}.
  const auto phi = LocallyConstantPotential::per_symbol({-0.3, -1.1, 0.4});
  CHECK(pressure(Sft::full_shift(3), phi) ==
        doctest::Approx(std::log(std::exp(-0.3) + std::exp(-1.1) + std::exp(0.4))).epsilon(1e-12));
}

TEST_CASE("bowen_root") {
  CHECK(std::abs(bowen_root(Sft::full_shift(2), LocallyConstantPotential::constant(2, -kLog3)) - kLog2 / kLog3) < 1e-10);
  CHECK(std::abs(bowen_root(Sft::full_shift(3), LocallyConstantPotential::constant(3, -kLog3)) - 1.0) < 1e-10);
  CHECK(std::abs(bowen_root(golden(), LocallyConstantPotential::constant(2, -kLog2)) - kGolden / kLog2) < 1e-10);
  // Oracle: 2^-d + 4^-d = 1.
  const double d = bowen_root(Sft::full_shift(2), LocallyConstantPotential::per_symbol({-kLog2, -2 * kLog2}));
  CHECK(std::abs(std::pow(2.0, -d) + std::pow(4.0, -d) - 1.0) < 1e-10);
  CHECK_THROWS_AS(bowen_root(Sft::full_shift(2), LocallyConstantPotential::per_symbol({-1.0, 0.0})), Error);
}

TEST_CASE("measure_entropy") {
  const auto full = Sft::full_shift(2);
  CHECK(measure_entropy(bernoulli_measure(full, {0.5, 0.5})) == doctest::Approx(kLog2).epsilon(1e-12));
  CHECK(measure_entropy(bernoulli_measure(full, {1.0, 0.0})) == 0.0);
  const double oracle = -(1.0 / 3) * std::log(1.0 / 3) - (2.0 / 3) * std::log(2.0 / 3);
  CHECK(std::abs(measure_entropy(bernoulli_measure(full, {1.0 / 3, 2.0 / 3})) - oracle) < 1e-12);
  CHECK(std::abs(oracle - (kLog3 - (2.0 / 3) * kLog2)) < 1e-12);
  CHECK(std::abs(measure_entropy(parry_measure(golden())) - kGolden) < 1e-9);
}

TEST_CASE("lyapunov") {
  const auto mu = bernoulli_measure(Sft::full_shift(2), {0.5, 0.5});
  CHECK(lyapunov(mu, LocallyConstantPotential::constant(2, -kLog3)) == doctest::Approx(-kLog3));
  CHECK(lyapunov(parry_measure(golden()), LocallyConstantPotential::constant(2, -kLog2)) == doctest::Approx(-kLog2));
  const auto p = bernoulli_measure(Sft::full_shift(2), {0.25, 0.75});
  CHECK(lyapunov(p, LocallyConstantPotential::per_symbol({-1.0, -2.0})) == doctest::Approx(-1.75));
}

TEST_CASE("young_dimension") {
  CHECK(std::abs(young_dimension({-kLog3, kLog3, kLog2}) - 2 * kLog2 / kLog3) < 1e-12);
  CHECK(young_dimension({-kLog3, kLog3, 0.0}) == 0.0);
  const double chi = std::log((3 + std::sqrt(5.0)) / 2);
  CHECK(std::abs(young_dimension({-chi, chi, chi}) - 2.0) < 1e-12);
}

TEST_CASE("markov measures") {
  std::mt19937_64 rng(1);
  const auto mu = random_markov(golden(), rng);
  double total = 0.0;
  for (double x : mu.stationary()) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const auto lifted = mu.lifted(3);
  CHECK(std::abs(measure_entropy(lifted) - measure_entropy(mu)) < 1e-10);
  CHECK_THROWS_AS(MarkovMeasure(golden(), {{0.5, 0.6}, {1.0}}), Error);
  CHECK_THROWS_AS(MarkovMeasure(golden(), {{0.5, 0.5}, {1.0}}, {0.5, 0.4}), Error);
}

TEST_CASE("dynamical_dimension") {
  const auto full = Sft::full_shift(2);
  const auto c = LocallyConstantPotential::constant(2, -kLog3);
  const auto dd = dynamical_dimension(full, c, c, 1);
  CHECK(std::abs(dd.value - 2 * kLog2 / kLog3) < 1e-8);
  // Oracle: brute-force grid over Bernoulli(p, 1-p) for the asymmetric model.
  const auto phi = LocallyConstantPotential::per_symbol({-kLog2, -2 * kLog2});
  double grid = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double p = i / 20000.0;
    const double h = -p * std::log(p) - (1 - p) * std::log(1 - p);
    const double chi = p * kLog2 + (1 - p) * 2 * kLog2;
    grid = std::max(grid, 2 * h / chi);
  }
  const auto a1 = dynamical_dimension(full, phi, phi, 1);
  CHECK(std::abs(a1.value - grid) < 1e-6);
  const auto a2 = dynamical_dimension(full, phi, phi, 2);
  CHECK(a2.value >= a1.value - 1e-8);
  // Memory-1 optimum on a constrained shift is not below its Parry measure.
  const auto g = golden();
  const auto gp = parry_measure(g);
  const auto gd = dynamical_dimension(g, phi, phi, 1);
  CHECK(gd.value >= young_dimension(spectrum_of(gp, phi, phi)) - 1e-9);
}

TEST_CASE("property: variational principle") {
  std::mt19937_64 rng(2024);
  const auto sft = build_survivor(ForbiddenFamily(3, {Word{1, 1}, Word{2, 0, 2}})).sft;
  const auto phi = random_potential(3, 2, -2.0, 1.0, rng);
  const double p = pressure(sft, phi);
  for (int trial = 0; trial < 200; ++trial) {
    const auto mu = random_markov(sft, rng);
    CHECK(measure_entropy(mu) + lyapunov(mu, phi) <= p + 1e-9);
  }
  const auto eq = equilibrium_measure(sft, phi);
  CHECK(std::abs(measure_entropy(eq) + lyapunov(eq, phi) - p) < 1e-6);
  const auto c = LocallyConstantPotential::constant(3, -0.4);
  const auto parry = parry_measure(sft);
  CHECK(std::abs(measure_entropy(parry) + lyapunov(parry, c) - pressure(sft, c)) < 1e-6);
}

TEST_CASE("property: bowen root scaling") {
  std::mt19937_64 rng(9);
  const auto full = Sft::full_shift(3);
  for (double c : {1.5, 2.0, 3.7}) {
    const auto k = LocallyConstantPotential::constant(3, -0.9);
    CHECK(std::abs(bowen_root(full, k.scaled(c)) - bowen_root(full, k) / c) < 1e-9);
    const auto g = random_potential(3, 2, -2.0, -0.2, rng);
    CHECK(bowen_root(full, g.scaled(c)) < bowen_root(full, g) + 1e-9);
  }
}

TEST_CASE("property: pressure convex and decreasing") {
  std::mt19937_64 rng(4);
  const auto sft = golden();
  const auto phi = random_potential(2, 2, -2.0, -0.1, rng);
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(pressure(sft, phi.scaled(0.1 * i)));
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i - 1] + v[i + 1] - 2 * v[i] >= -1e-12);
}

TEST_CASE("property: Ruelle inequality") {
  std::mt19937_64 rng(8);
  const auto sft = build_survivor(ForbiddenFamily(2, {Word{0, 0, 0}})).sft;
  const auto phi_u = LocallyConstantPotential::per_symbol({-kLog2, -2 * kLog2});
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = random_markov(sft, rng);
    CHECK(measure_entropy(mu) <= -lyapunov(mu, phi_u) + 1e-9);
  }
}

TEST_CASE("property: Young formula splits into stable and unstable roots") {
  // Homogeneous horseshoe: the measure of maximal dimension is the uniform
  // Bernoulli measure and each half of Young's formula is a Bowen root.
  for (double u : {2.5, 3.0, 5.0}) {
    const auto full = Sft::full_shift(2);
    const auto phi_u = LocallyConstantPotential::constant(2, -std::log(u));
    const auto phi_s = LocallyConstantPotential::constant(2, std::log(1.0 / (u + 1)));
    const auto mu = bernoulli_measure(full, {0.5, 0.5});
    const auto sp = spectrum_of(mu, phi_s, phi_u);
    CHECK(std::abs(sp.entropy / sp.chi_u - bowen_root(full, phi_u)) < 1e-9);
    CHECK(std::abs(sp.entropy / -sp.chi_s - bowen_root(full, phi_s)) < 1e-9);
    CHECK(std::abs(young_dimension(sp) - bowen_root(full, phi_u) - bowen_root(full, phi_s)) < 1e-9);
  }
}
