#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace chernflow {

using Complex = std::complex<double>;

/// Default tolerance for structural identities (double precision, fibers of
/// real dimension <= 8).
inline constexpr double kStructuralTol = 1e-12;

/// Real 2-form on a 2n-dimensional fiber. Storage is an exactly
/// antisymmetric matrix of values on basis pairs.
class TwoForm {
 public:
  TwoForm() = default;
  explicit TwoForm(int dim) : m_(Eigen::MatrixXd::Zero(dim, dim)) {}

  /// Builds a form from a square matrix, antisymmetrizing exactly: the
  /// strict upper triangle wins and the lower triangle is its mirror.
  static TwoForm from_matrix(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int a, int b) const { return m_(a, b); }

  /// Sets the value on (v_a, v_b) and its mirror.
  void set(int a, int b, double value);

  const Eigen::MatrixXd& matrix() const { return m_; }
  double sup_norm() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

  /// Value on a pair of (possibly complexified) vectors.
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return x.dot(m_ * y); }
  Complex value(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
    return x.transpose() * (m_ * y);
  }

  TwoForm operator+(const TwoForm& o) const { return from_matrix(m_ + o.m_); }
  TwoForm operator-(const TwoForm& o) const { return from_matrix(m_ - o.m_); }
  TwoForm operator*(double s) const { return from_matrix(m_ * s); }

 private:
  Eigen::MatrixXd m_;
};

/// Left-invariant geometric data on a Lie algebra of real dimension 2n:
/// structure constants, an almost complex structure and a compatible
/// nondegenerate 2-form.
struct LieAlgebraModel {
  Eigen::MatrixXd J;                 // 2n x 2n, J^2 = -Id
  Eigen::MatrixXd omega0;            // 2n x 2n skew, J-invariant, taming
  std::vector<Eigen::MatrixXd> f;    // f[c](a,b): coefficient of v_c in [v_a, v_b]

  int dim() const { return static_cast<int>(J.rows()); }

  /// [X, Y] in basis coordinates.
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// Bilinear extension of the bracket to complexified vectors.
  Eigen::VectorXcd bracket(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  /// Matrix of ad X = [X, .].
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

  /// Symmetric matrix of the metric g0(X, Y) = omega0(X, JY).
  Eigen::MatrixXd metric() const;
};

struct ValidationIssue {
  std::string invariant;
  double residual = 0.0;
  std::string detail;
  bool warning = false;  // downgraded issue, does not fail the report
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const;
  std::string summary() const;
};

struct ValidationOptions {
  double tol = kStructuralTol;
  bool allow_non_lie = false;  // Jacobi failure becomes a warning
};

/// Checks every model invariant and reports the violated ones with their
/// worst-case residuals. Never throws; an empty report means a valid model.
ValidationReport validate_model(const LieAlgebraModel& m, const ValidationOptions& opts = {});

/// (J xi)(X, Y) = xi(JX, JY) for a 2-form.
TwoForm apply_J_to_form(const TwoForm& xi, const Eigen::MatrixXd& J);

/// J-invariant part of a 2-form: (xi(X,Y) + xi(JX,JY)) / 2.
TwoForm project_11(const TwoForm& xi, const Eigen::MatrixXd& J);

/// Complement xi - project_11(xi); the two parts sum back to xi.
TwoForm anti_part(const TwoForm& xi, const Eigen::MatrixXd& J);

/// Nijenhuis tensor N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y].
Eigen::VectorXd nijenhuis(const LieAlgebraModel& m, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y);
Eigen::VectorXcd nijenhuis(const LieAlgebraModel& m, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& y);

/// Full table over basis pairs: table[c](a, b) is the v_c component of N(v_a, v_b).
std::vector<Eigen::MatrixXd> nijenhuis_tensor(const LieAlgebraModel& m);

/// Largest absolute entry of the Nijenhuis table; zero iff J is integrable.
double nijenhuis_sup_norm(const LieAlgebraModel& m);

/// A (1,0) frame e_1..e_n adapted to J plus the dual coframe.
struct ComplexFrame {
  Eigen::MatrixXd J;        // the structure the frame diagonalizes
  Eigen::MatrixXcd vectors; // 2n x n, columns e_j with J e_j = i e_j
  Eigen::MatrixXcd dual;    // n x 2n, rows theta^i with theta^i(e_j) = delta_ij

  int n() const { return static_cast<int>(vectors.cols()); }
  int dim() const { return static_cast<int>(vectors.rows()); }

  Eigen::VectorXcd vector(int j) const { return vectors.col(j); }
  Eigen::VectorXcd vector_bar(int j) const { return vectors.col(j).conjugate(); }

  /// theta-coordinates of a complexified vector; the conjugate coordinates
  /// are dual.conjugate() * x.
  Eigen::VectorXcd coordinates(const Eigen::VectorXcd& x) const { return dual * x; }
};

/// Builds the frame e_j = (u_j - i J u_j) / 2 from a deterministic greedy
/// adapted basis: u_1 is the first standard basis vector, each next u is the
/// lowest-index standard basis vector outside the current span, orthonormalized
/// against it only for conditioning. Throws std::invalid_argument when
/// J^2 != -Id.
ComplexFrame build_complex_frame(const Eigen::MatrixXd& J);

/// Worst defect among J e = i e, duality, and spanning; ~1e-15 for a healthy frame.
double frame_residual(const ComplexFrame& fr);

/// Bracket coefficients of the frame:
///   [e_i, e_j]       = C[k](i,j) e_k - conj(Nbar[k](i,j)) ebar_k
///   [e_i, ebar_j]    = Cmix[k](i,j) e_k + CmixBar[k](i,j) ebar_k
///   [ebar_i, ebar_j] = -Nbar[k](i,j) e_k + conj(C[k](i,j)) ebar_k
struct StructureCoefficients {
  int n = 0;
  std::vector<Eigen::MatrixXcd> C;
  std::vector<Eigen::MatrixXcd> Nbar;
  std::vector<Eigen::MatrixXcd> Cmix;
  std::vector<Eigen::MatrixXcd> CmixBar;

  static StructureCoefficients zero(int n);

  /// Contraction sum_q CmixBar[q](p, q); enters the connection trace.
  Complex mix_bar_trace(int p) const;
  /// Contraction -sum_i Cmix[i](i, p): the e_i coefficient of [ebar_p, e_i], traced.
  Complex mix_trace_lowered(int p) const;
};

/// Extracts all coefficient blocks by contracting complexified brackets with
/// the dual coframe. Throws std::invalid_argument on a singular frame.
StructureCoefficients extract_structure_coefficients(const LieAlgebraModel& m,
                                                     const ComplexFrame& fr);

/// Rebuilds every real basis bracket from the coefficient blocks and returns
/// the worst deviation from the model's structure constants.
double bracket_reconstruction_residual(const LieAlgebraModel& m, const ComplexFrame& fr,
                                       const StructureCoefficients& sc);

/// Values of d theta^i on frame pairs, one block per index type:
///   d20[i](k,l) = dtheta^i(e_k, e_l)      = -C[i](k,l)
///   d11[i](k,l) = dtheta^i(e_k, ebar_l)   = -Cmix[i](k,l)
///   d02[i](k,l) = dtheta^i(ebar_k, ebar_l) = Nbar[i](k,l)
struct DThetaBlocks {
  std::vector<Eigen::MatrixXcd> d20, d11, d02;
};
DThetaBlocks dtheta_coefficients(const StructureCoefficients& sc);

/// Evaluates d(theta^i) on a pair of complexified invariant vectors through
/// the exterior-derivative formula; for invariant data this is
/// -theta^i([Z, W]).
Complex dtheta_evaluate(const LieAlgebraModel& m, const ComplexFrame& fr, int i,
                        const Eigen::VectorXcd& z, const Eigen::VectorXcd& w);

}  // namespace chernflow
