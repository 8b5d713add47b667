#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace chernflow {

/// Complex n x n matrix field over a point set (a single fiber or a grid).
/// Layout: entry (i, j) at point p sits at a[p*n*n + i*n + j].
struct MatrixField {
  int n = 0;
  std::int64_t points = 0;
  std::vector<std::complex<double>> a;

  MatrixField() = default;
  MatrixField(int n_, std::int64_t points_)
      : n(n_), points(points_),
        a(static_cast<std::size_t>(points_) * n_ * n_, std::complex<double>(0.0)) {}

  static MatrixField constant(const Eigen::MatrixXcd& m, std::int64_t points = 1);

  std::complex<double>& at(std::int64_t p, int i, int j) {
    return a[static_cast<std::size_t>(p) * n * n + static_cast<std::size_t>(i) * n + j];
  }
  std::complex<double> at(std::int64_t p, int i, int j) const {
    return a[static_cast<std::size_t>(p) * n * n + static_cast<std::size_t>(i) * n + j];
  }

  Eigen::MatrixXcd matrix(std::int64_t p) const;
  void set_matrix(std::int64_t p, const Eigen::MatrixXcd& m);

  Eigen::VectorXcd component(int i, int j) const;
  void set_component(int i, int j, const Eigen::VectorXcd& v);

  /// Largest |A - A^H| entry over all points.
  double hermitian_defect() const;
  /// Replaces every matrix by its Hermitian part (A + A^H)/2.
  void hermitize();

  /// Smallest eigenvalue of the Hermitian part over all points (closed form
  /// for n <= 2, solver otherwise).
  double min_hermitian_eigenvalue() const;
  double min_hermitian_eigenvalue_at(std::int64_t p) const;

  /// Determinant per point, real part (exact for Hermitian matrices).
  Eigen::VectorXd determinant_real() const;

  double sup_abs() const;

  MatrixField operator+(const MatrixField& o) const;
  MatrixField operator-(const MatrixField& o) const;
};

/// Hermitian 2x2 helpers used by the grid kernels.
inline double herm2_det(std::complex<double> a00, std::complex<double> a01,
                        std::complex<double> a11) {
  return a00.real() * a11.real() - std::norm(a01);
}
inline double herm2_min_eig(std::complex<double> a00, std::complex<double> a01,
                            std::complex<double> a11) {
  const double mean = 0.5 * (a00.real() + a11.real());
  const double half = 0.5 * (a00.real() - a11.real());
  const double disc = half * half + std::norm(a01);
  return mean - std::sqrt(disc > 0.0 ? disc : 0.0);
}

}  // namespace chernflow
