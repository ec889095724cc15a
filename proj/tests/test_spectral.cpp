#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "exsets/spectral.hpp"

using namespace exsets::spectral;

namespace {

Digraph from_matrix(const Eigen::MatrixXd& a) {
  std::vector<std::vector<Edge>> out(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) out[static_cast<std::size_t>(i)].push_back({j, a(i, j)});
  return Digraph(std::move(out));
}

double eigen_radius(const Eigen::MatrixXd& a) {
  return Eigen::EigenSolver<Eigen::MatrixXd>(a).eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("golden mean matrix") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 0;
  CHECK(spectral_radius(from_matrix(a)) == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12));
}

TEST_CASE("periodic irreducible matrix") {
  // 3-cycle: imprimitive, radius 1.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 2) = a(2, 0) = 1;
  CHECK(spectral_radius(from_matrix(a)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("acyclic graph has radius zero") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 2) = 1;
  CHECK(spectral_radius(from_matrix(a)) == 0.0);
}

TEST_CASE("components") {
  Digraph g({{{1, 1}}, {{0, 1}, {2, 1}}, {{2, 1}}, {}});
  const auto c = strongly_connected_components(g);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::vector<int>{0, 1});
  CHECK(c[1] == std::vector<int>{2});
  CHECK(c[2] == std::vector<int>{3});
}

TEST_CASE("random nonnegative matrices against a dense eigensolver") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 7;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = u(rng) < 0.4 ? u(rng) : 0.0;
    const double expect = eigen_radius(a);
    CHECK(spectral_radius(from_matrix(a)) == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("perron vectors") {
  Eigen::MatrixXd a(3, 3);
  a << 0.5, 1, 0, 2, 0, 1, 0, 1, 1;
  const auto p = perron(from_matrix(a));
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(p.right.data(), 3);
  Eigen::VectorXd l = Eigen::Map<const Eigen::VectorXd>(p.left.data(), 3);
  CHECK((a * r - p.root * r).norm() < 1e-9);
  CHECK((a.transpose() * l - p.root * l).norm() < 1e-9);
  CHECK(r.maxCoeff() == doctest::Approx(1.0));
}
