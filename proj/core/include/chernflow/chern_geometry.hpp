#pragma once

#include "chernflow/fiber_algebra.hpp"
#include "chernflow/fields.hpp"
#include "chernflow/torus_grid.hpp"

#include <Eigen/Dense>

#include <memory>

namespace chernflow {

/// Evaluates frame derivatives of scalar fields. Two realizations: constant
/// (left-invariant) data, where every derivative vanishes, and periodic grids
/// with central differences.
class DerivationBackend {
 public:
  virtual ~DerivationBackend() = default;

  virtual std::int64_t points() const = 0;
  virtual int cdim() const = 0;

  /// e_i f along the holomorphic frame direction.
  virtual Eigen::VectorXcd d(int i, const Eigen::VectorXcd& f) const = 0;
  /// ebar_j f along the conjugate direction.
  virtual Eigen::VectorXcd dbar(int j, const Eigen::VectorXcd& f) const = 0;
  /// e_i ebar_j f with compact second-order stencils.
  virtual Eigen::VectorXcd ddbar(int i, int j, const Eigen::VectorXcd& f) const = 0;

  /// Laplace-Beltrami operator of the Riemannian metric underlying g, in
  /// divergence form with midpoint-averaged coefficients.
  virtual Eigen::VectorXd laplace_beltrami(const MatrixField& g,
                                           const Eigen::VectorXd& f) const = 0;
};

/// Single-fiber backend: all derivatives are exactly zero.
class ConstantBackend final : public DerivationBackend {
 public:
  explicit ConstantBackend(int n) : n_(n) {}
  std::int64_t points() const override { return 1; }
  int cdim() const override { return n_; }
  Eigen::VectorXcd d(int, const Eigen::VectorXcd&) const override {
    return Eigen::VectorXcd::Zero(1);
  }
  Eigen::VectorXcd dbar(int, const Eigen::VectorXcd&) const override {
    return Eigen::VectorXcd::Zero(1);
  }
  Eigen::VectorXcd ddbar(int, int, const Eigen::VectorXcd&) const override {
    return Eigen::VectorXcd::Zero(1);
  }
  Eigen::VectorXd laplace_beltrami(const MatrixField&, const Eigen::VectorXd&) const override {
    return Eigen::VectorXd::Zero(1);
  }

 private:
  int n_;
};

/// Flat-torus backend for the constant coordinate frame e_j = d/dz_j.
class TorusBackend final : public DerivationBackend {
 public:
  explicit TorusBackend(const TorusGrid& grid) : grid_(grid) {}

  const TorusGrid& grid() const { return grid_; }
  std::int64_t points() const override { return grid_.points; }
  int cdim() const override { return grid_.n; }

  Eigen::VectorXcd d(int i, const Eigen::VectorXcd& f) const override;
  Eigen::VectorXcd dbar(int j, const Eigen::VectorXcd& f) const override;
  Eigen::VectorXcd ddbar(int i, int j, const Eigen::VectorXcd& f) const override;
  Eigen::VectorXd laplace_beltrami(const MatrixField& g, const Eigen::VectorXd& f) const override;

 private:
  TorusGrid grid_;
};

/// Connection coefficients of the second canonical connection in the frame:
/// gamma(p, out, dir, arg) stores the e_out coefficient of the covariant
/// derivative of e_arg along e_dir. Conjugate-direction coefficients are the
/// constants -Cmix and are taken from the structure coefficients directly.
struct ChristoffelField {
  int n = 0;
  std::int64_t points = 0;
  std::vector<std::complex<double>> a;

  std::complex<double>& at(std::int64_t p, int out, int dir, int arg) {
    return a[((static_cast<std::size_t>(p) * n + out) * n + dir) * n + arg];
  }
  std::complex<double> at(std::int64_t p, int out, int dir, int arg) const {
    return a[((static_cast<std::size_t>(p) * n + out) * n + dir) * n + arg];
  }
};

/// Torsion data: t_up(p, out, i, k) = T^out_{ik}; t_low(p, l, i, k) = T_{ik lbar}.
struct TorsionField {
  int n = 0;
  std::int64_t points = 0;
  std::vector<std::complex<double>> t_up, t_low;

  std::complex<double> up(std::int64_t p, int out, int i, int k) const {
    return t_up[((static_cast<std::size_t>(p) * n + out) * n + i) * n + k];
  }
  std::complex<double> low(std::int64_t p, int l, int i, int k) const {
    return t_low[((static_cast<std::size_t>(p) * n + l) * n + i) * n + k];
  }
};

/// The three Ricci trace blocks: r20(k,l) = R_{kl}, r11(k,l) = R_{k lbar},
/// r02(k,l) = R_{kbar lbar}. r11_raw keeps the unsymmetrized trace; r11 is
/// its Hermitian part and hermitian_defect reports the gap.
struct RicciField {
  MatrixField r20, r11, r02, r11_raw;
  double hermitian_defect = 0.0;

  /// max |r02 + conj(r20)|: vanishes when the assembled form is real.
  double reality_defect() const;
};

/// Metric inverse per point (g^{lbar p} = inverse(l, p) of the stored matrix).
MatrixField invert_metric(const MatrixField& g);

ChristoffelField chern_christoffels(const MatrixField& g, const StructureCoefficients& sc,
                                    const DerivationBackend& bk);

TorsionField torsion_components(const ChristoffelField& gamma, const StructureCoefficients& sc,
                                const MatrixField& g);

/// Residual of the connection trace identity against e_i(log det g) and the
/// structure-coefficient correction; ~0 for a correct connection.
double christoffel_trace_residual(const ChristoffelField& gamma, const MatrixField& g,
                                  const StructureCoefficients& sc, const DerivationBackend& bk);

/// Residual of metric compatibility e_i<e_k, ebar_l> = <D e_k, ebar_l> + <e_k, D ebar_l>.
double metric_compatibility_residual(const ChristoffelField& gamma, const MatrixField& g,
                                     const StructureCoefficients& sc,
                                     const DerivationBackend& bk);

/// Ricci traces of the second canonical connection. Derivatives of log det g
/// are computed through tr(g^{-1} e(g)) rather than from the determinant field.
RicciField ricci_traces(const MatrixField& g, const StructureCoefficients& sc,
                        const DerivationBackend& bk);

/// Ricci form of a positive density: log det g is replaced by the log of the
/// density, differentiated directly as a scalar field.
RicciField ric_of_volume_form(const Eigen::VectorXd& density, const StructureCoefficients& sc,
                              const DerivationBackend& bk);

/// Per-point real 2-form of the Ricci blocks on the real basis, plus the
/// worst imaginary defect of the assembly.
struct RealFormField {
  int dim = 0;
  std::int64_t points = 0;
  std::vector<Eigen::MatrixXd> values;  // exactly antisymmetric matrices
  double imaginary_defect = 0.0;

  TwoForm fiber() const;  // points == 1 convenience
};

RealFormField chern_ricci_form(const RicciField& ric, const ComplexFrame& fr);

/// (1,1) projection applied pointwise.
RealFormField project_11(const RealFormField& form, const Eigen::MatrixXd& J);
double sup_abs(const RealFormField& form);

/// Chern scalar curvature g^{jbar i} R_{i jbar} per point.
Eigen::VectorXd scalar_curvature(const MatrixField& g, const RicciField& ric);

/// Canonical Laplacian g^{jbar i}(e_i ebar_j - [e_i, ebar_j]^{(0,1)}) phi.
Eigen::VectorXcd canonical_laplacian(const MatrixField& g, const StructureCoefficients& sc,
                                     const DerivationBackend& bk, const Eigen::VectorXcd& phi);

/// Residual of the two-Laplacian comparison: Delta_g phi - 2 Delta^C phi - tau(d phi).
Eigen::VectorXd laplace_compare(const MatrixField& g, const StructureCoefficients& sc,
                                const DerivationBackend& bk, const Eigen::VectorXd& phi);

/// Difference-of-Ricci residual for two metrics on the same frame: the blocks
/// of ric(g_tilde) - ric(g) + (1/2) d J d log(det g_tilde / det g), which
/// vanish up to discretization error.
struct DiffRicResidual {
  MatrixField v20, v11, v02;  // values on frame pairs
  double sup() const;
};
DiffRicResidual diffric_check(const MatrixField& g_tilde, const MatrixField& g,
                              const StructureCoefficients& sc, const DerivationBackend& bk);

/// Hermitian metric matrix of an invariant model in the frame built from its J.
MatrixField metric_from_invariant(const LieAlgebraModel& m, const ComplexFrame& fr);

/// Chern-Ricci form of an invariant model as a real 2-form on the basis,
/// and its (1,1) part.
struct InvariantRicci {
  TwoForm ric;
  TwoForm cric;
  double scalar = 0.0;  // g-trace of the (1,1) block
};
InvariantRicci invariant_cric(const LieAlgebraModel& m);

}  // namespace chernflow
