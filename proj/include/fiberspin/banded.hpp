#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fiberspin {

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square band matrix with `lower` subdiagonals and `upper` superdiagonals,
/// factored in place by Gaussian elimination with partial pivoting.
/// Row interchanges widen U to lower + upper superdiagonals; storage is
/// reserved for that fill from the start (same layout idea as LAPACK's gbtrf).
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t lower() const { return kl_; }
  [[nodiscard]] std::size_t upper() const { return ku_; }

  /// True if (i, j) lies inside the original band.
  [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const;

  double& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

  void set_zero();

  /// LU factorization with partial pivoting. Throws SingularMatrix on an
  /// exactly zero pivot.
  void factorize();
  [[nodiscard]] bool factorized() const { return factorized_; }

  /// Solves A x = b in place using the stored factors.
  void solve(std::span<double> b) const;

  /// y = A x with the unfactored matrix (for tests).
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

 private:
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const {
    // Row-major band rows of width 2 kl + ku + 1, column offset j - i + kl.
    return i * width_ + (j + kl_ - i);
  }

  std::size_t n_;
  std::size_t kl_;
  std::size_t ku_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<std::size_t> pivots_;
  bool factorized_ = false;
};

}  // namespace fiberspin
