#include "fiberspin/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fiberspin {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), width_(2 * lower + upper + 1), data_(n * width_, 0.0),
      pivots_(n, 0) {}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) return false;
  return (j <= i + ku_) && (i <= j + kl_);
}

void BandedMatrix::set_zero() {
  std::fill(data_.begin(), data_.end(), 0.0);
  factorized_ = false;
}

void BandedMatrix::factorize() {
  if (factorized_) throw std::logic_error("BandedMatrix already factorized");
  // Rightmost column that may hold a nonzero in the rows processed so far.
  std::size_t ju = 0;
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    std::size_t p = k;
    double best = std::abs((*this)(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double v = std::abs((*this)(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    pivots_[k] = p;
    if (best == 0.0) {
      throw SingularMatrix("zero pivot in banded LU at column " + std::to_string(k));
    }
    ju = std::max(ju, std::min(n_ - 1, p + ku_));
    if (p != k) {
      for (std::size_t j = k; j <= ju; ++j) std::swap((*this)(k, j), (*this)(p, j));
    }
    const double pivot = (*this)(k, k);
    const double* row_k = &data_[index(k, k)];
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      double& lik = (*this)(i, k);
      if (lik == 0.0) continue;
      lik /= pivot;
      const double l = lik;
      double* row_i = &data_[index(i, k)];
      for (std::size_t j = 1; j <= ju - k; ++j) row_i[j] -= l * row_k[j];
    }
  }
  factorized_ = true;
}

void BandedMatrix::solve(std::span<double> b) const {
  if (!factorized_) throw std::logic_error("BandedMatrix::solve before factorize");
  if (b.size() != n_) throw std::invalid_argument("right-hand side size mismatch");
  // Forward: apply interchanges and unit-lower L.
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t p = pivots_[k];
    if (p != k) std::swap(b[k], b[p]);
    const double bk = b[k];
    if (bk == 0.0) continue;
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last_row; ++i) b[i] -= (*this)(i, k) * bk;
  }
  // Backward with U (kl + ku superdiagonals).
  const std::size_t ubw = kl_ + ku_;
  for (std::size_t kk = n_; kk-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, kk + ubw);
    double acc = b[kk];
    for (std::size_t j = kk + 1; j <= last_col; ++j) acc -= (*this)(kk, j) * b[j];
    b[kk] = acc / (*this)(kk, kk);
  }
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  if (factorized_) throw std::logic_error("BandedMatrix::multiply after factorize");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > kl_ ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + ku_);
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace fiberspin
