#include "chernflow/fields.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chernflow {

MatrixField MatrixField::constant(const Eigen::MatrixXcd& m, std::int64_t points) {
  if (m.rows() != m.cols()) throw std::invalid_argument("MatrixField: square matrix required");
  MatrixField f(static_cast<int>(m.rows()), points);
  for (std::int64_t p = 0; p < points; ++p) f.set_matrix(p, m);
  return f;
}

Eigen::MatrixXcd MatrixField::matrix(std::int64_t p) const {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = at(p, i, j);
  return m;
}

void MatrixField::set_matrix(std::int64_t p, const Eigen::MatrixXcd& m) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(p, i, j) = m(i, j);
}

Eigen::VectorXcd MatrixField::component(int i, int j) const {
  Eigen::VectorXcd v(points);
  for (std::int64_t p = 0; p < points; ++p) v[p] = at(p, i, j);
  return v;
}

void MatrixField::set_component(int i, int j, const Eigen::VectorXcd& v) {
  for (std::int64_t p = 0; p < points; ++p) at(p, i, j) = v[p];
}

double MatrixField::hermitian_defect() const {
  double worst = 0.0;
  for (std::int64_t p = 0; p < points; ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        worst = std::max(worst, std::abs(at(p, i, j) - std::conj(at(p, j, i))));
  }
  return worst;
}

void MatrixField::hermitize() {
  for (std::int64_t p = 0; p < points; ++p) {
    for (int i = 0; i < n; ++i) {
      at(p, i, i) = std::complex<double>(at(p, i, i).real(), 0.0);
      for (int j = i + 1; j < n; ++j) {
        const auto v = 0.5 * (at(p, i, j) + std::conj(at(p, j, i)));
        at(p, i, j) = v;
        at(p, j, i) = std::conj(v);
      }
    }
  }
}

double MatrixField::min_hermitian_eigenvalue_at(std::int64_t p) const {
  if (n == 1) return at(p, 0, 0).real();
  if (n == 2) return herm2_min_eig(at(p, 0, 0), 0.5 * (at(p, 0, 1) + std::conj(at(p, 1, 0))), at(p, 1, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix(p));
  return es.eigenvalues().minCoeff();
}

double MatrixField::min_hermitian_eigenvalue() const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::int64_t p = 0; p < points; ++p) {
    worst = std::min(worst, min_hermitian_eigenvalue_at(p));
  }
  return worst;
}

Eigen::VectorXd MatrixField::determinant_real() const {
  Eigen::VectorXd d(points);
  for (std::int64_t p = 0; p < points; ++p) {
    if (n == 1) {
      d[p] = at(p, 0, 0).real();
    } else if (n == 2) {
      d[p] = herm2_det(at(p, 0, 0), 0.5 * (at(p, 0, 1) + std::conj(at(p, 1, 0))), at(p, 1, 1));
    } else {
      d[p] = matrix(p).determinant().real();
    }
  }
  return d;
}

double MatrixField::sup_abs() const {
  double worst = 0.0;
  for (const auto& v : a) worst = std::max(worst, std::abs(v));
  return worst;
}

MatrixField MatrixField::operator+(const MatrixField& o) const {
  if (n != o.n || points != o.points) throw std::invalid_argument("MatrixField: shape mismatch");
  MatrixField out(n, points);
  for (std::size_t k = 0; k < a.size(); ++k) out.a[k] = a[k] + o.a[k];
  return out;
}

MatrixField MatrixField::operator-(const MatrixField& o) const {
  if (n != o.n || points != o.points) throw std::invalid_argument("MatrixField: shape mismatch");
  MatrixField out(n, points);
  for (std::size_t k = 0; k < a.size(); ++k) out.a[k] = a[k] - o.a[k];
  return out;
}

}  // namespace chernflow
