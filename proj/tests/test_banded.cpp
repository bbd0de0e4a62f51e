#include "doctest.h"

#include "fiberspin/banded.hpp"

#include <Eigen/Dense>

#include <random>

using namespace fiberspin;

namespace {

struct Pair {
  BandedMatrix band;
  Eigen::MatrixXd dense;
};

Pair random_band(std::size_t n, std::size_t kl, std::size_t ku, std::mt19937& rng,
                 bool zero_diagonal) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Pair p{BandedMatrix(n, kl, ku), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                        static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!p.band.in_band(i, j)) continue;
      double v = d(rng);
      if (zero_diagonal && i == j) v = 0.0;
      p.band(i, j) = v;
      p.dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return p;
}

}  // namespace

TEST_CASE("band membership") {
  BandedMatrix m(6, 2, 1);
  CHECK(m.in_band(3, 1));
  CHECK(m.in_band(3, 4));
  CHECK_FALSE(m.in_band(3, 0));
  CHECK_FALSE(m.in_band(3, 5));
}

TEST_CASE("multiply matches dense") {
  std::mt19937 rng(1);
  auto p = random_band(30, 3, 5, rng, false);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(30, -1.0, 2.0);
  const auto y = p.band.multiply({x.data(), 30});
  const Eigen::VectorXd ref = p.dense * x;
  for (int i = 0; i < 30; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("solve agrees with dense LU, including pivoting") {
  std::mt19937 rng(2);
  for (bool zero_diag : {false, true}) {
    for (auto [n, kl, ku] : {std::tuple{40, 14, 12}, std::tuple{26, 1, 1}, std::tuple{60, 4, 7}}) {
      auto p = random_band(n, kl, ku, rng, zero_diag);
      Eigen::VectorXd b = Eigen::VectorXd::Random(n);
      const Eigen::VectorXd ref = p.dense.fullPivLu().solve(b);
      p.band.factorize();
      CHECK(p.band.factorized());
      p.band.solve({b.data(), static_cast<std::size_t>(n)});
      CHECK((b - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
    }
  }
}

TEST_CASE("exactly singular matrix") {
  BandedMatrix m(4, 1, 1);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(3, 3) = 1.0;  // row and column 2 are zero
  CHECK_THROWS_AS(m.factorize(), SingularMatrix);
}
