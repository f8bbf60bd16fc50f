#include "msvortex/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "msvortex/errors.hpp"

namespace msv {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

double BandMatrix::operator()(int i, int j) const { return in_band(i, j) ? ab_[index(i, j)] : 0.0; }

void BandMatrix::add(int i, int j, double v) { ab_[index(i, j)] += v; }

void BandMatrix::set(int i, int j, double v) { ab_[index(i, j)] = v; }

void BandMatrix::zero_row_col(int i) {
  for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) ab_[index(i, j)] = 0.0;
  for (int r = std::max(0, i - ku_); r <= std::min(n_ - 1, i + kl_); ++r) ab_[index(r, i)] = 0.0;
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) y[i] += ab_[index(i, j)] * xj;
  }
  return y;
}

std::vector<double> BandMatrix::solve(std::span<const double> rhs) const {
  std::vector<double> ab = ab_;
  std::vector<double> x(rhs.begin(), rhs.end());
  std::vector<lapack_int> ipiv(n_);
  const lapack_int info =
      LAPACKE_dgbsv(LAPACK_COL_MAJOR, n_, kl_, ku_, 1, ab.data(), ldab_, ipiv.data(), x.data(), n_);
  if (info != 0)
    throw Error(ErrorKind::singular_system, "banded solve failed (dgbsv info = " + std::to_string(info) + ")");
  return x;
}

std::vector<double> solve_spd_tridiagonal(std::vector<double> diag, std::vector<double> off,
                                          std::vector<double> rhs) {
  const auto n = static_cast<lapack_int>(diag.size());
  const lapack_int info = LAPACKE_dptsv(LAPACK_COL_MAJOR, n, 1, diag.data(), off.data(), rhs.data(), n);
  if (info != 0)
    throw Error(ErrorKind::singular_system, "tridiagonal solve failed (dptsv info = " + std::to_string(info) + ")");
  return rhs;
}

}  // namespace msv
