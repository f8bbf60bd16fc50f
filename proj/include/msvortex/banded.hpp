#pragma once

#include <span>
#include <vector>

namespace msv {

/// General banded matrix in LAPACK band storage (with the kl extra rows that
/// dgbsv needs for pivoting).
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku);

  int size() const noexcept { return n_; }
  int lower() const noexcept { return kl_; }
  int upper() const noexcept { return ku_; }

  bool in_band(int i, int j) const noexcept { return j - i <= ku_ && i - j <= kl_; }
  double operator()(int i, int j) const;
  void add(int i, int j, double v);
  void set(int i, int j, double v);
  void zero_row_col(int i);

  std::vector<double> multiply(std::span<const double> x) const;
  /// LU with partial pivoting; throws Error(singular_system).
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_;
  }
  int n_;
  int kl_;
  int ku_;
  int ldab_;
  std::vector<double> ab_;
};

/// Symmetric positive definite tridiagonal solve (LAPACK dptsv).
std::vector<double> solve_spd_tridiagonal(std::vector<double> diag, std::vector<double> off,
                                          std::vector<double> rhs);

}  // namespace msv
