#include "chernflow/fiber_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chernflow {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": square matrix required");
  }
}

}  // namespace

TwoForm TwoForm::from_matrix(const Eigen::MatrixXd& m) {
  require_square(m, "TwoForm");
  TwoForm out(static_cast<int>(m.rows()));
  for (int a = 0; a < m.rows(); ++a) {
    for (int b = a + 1; b < m.cols(); ++b) {
      const double v = 0.5 * (m(a, b) - m(b, a));
      out.m_(a, b) = v;
      out.m_(b, a) = -v;
    }
  }
  return out;
}

void TwoForm::set(int a, int b, double value) {
  if (a == b) {
    if (value != 0.0) throw std::invalid_argument("TwoForm: diagonal entries must vanish");
    return;
  }
  m_(a, b) = value;
  m_(b, a) = -value;
}

Eigen::VectorXd LieAlgebraModel::bracket(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y) const {
  const int d = dim();
  if (x.size() != d || y.size() != d) throw std::invalid_argument("bracket: dimension mismatch");
  Eigen::VectorXd out(d);
  for (int c = 0; c < d; ++c) out[c] = x.dot(f[static_cast<std::size_t>(c)] * y);
  return out;
}

Eigen::VectorXcd LieAlgebraModel::bracket(const Eigen::VectorXcd& x,
                                          const Eigen::VectorXcd& y) const {
  const int d = dim();
  if (x.size() != d || y.size() != d) throw std::invalid_argument("bracket: dimension mismatch");
  Eigen::VectorXcd out(d);
  for (int c = 0; c < d; ++c) {
    out[c] = x.transpose() * (f[static_cast<std::size_t>(c)] * y);
  }
  return out;
}

Eigen::MatrixXd LieAlgebraModel::ad(const Eigen::VectorXd& x) const {
  const int d = dim();
  Eigen::MatrixXd out(d, d);
  for (int c = 0; c < d; ++c) {
    out.row(c) = x.transpose() * f[static_cast<std::size_t>(c)];
  }
  return out;
}

Eigen::MatrixXd LieAlgebraModel::metric() const {
  const Eigen::MatrixXd g = omega0 * J;
  return 0.5 * (g + g.transpose());
}

bool ValidationReport::ok() const {
  for (const auto& i : issues) {
    if (!i.warning) return false;
  }
  return true;
}

std::string ValidationReport::summary() const {
  if (issues.empty()) return "valid";
  std::ostringstream os;
  for (const auto& i : issues) {
    os << (i.warning ? "warning " : "violated ") << i.invariant << " (residual " << i.residual
       << ")";
    if (!i.detail.empty()) os << ": " << i.detail;
    os << "\n";
  }
  return os.str();
}

ValidationReport validate_model(const LieAlgebraModel& m, const ValidationOptions& opts) {
  ValidationReport rep;
  const int d = m.dim();
  auto flag = [&rep](const std::string& name, double residual, const std::string& detail,
                     bool warning = false) {
    rep.issues.push_back({name, residual, detail, warning});
  };

  if (d <= 0 || d % 2 != 0) {
    flag("dimension", static_cast<double>(d), "real dimension must be a positive even number");
    return rep;
  }
  if (m.omega0.rows() != d || m.omega0.cols() != d ||
      m.f.size() != static_cast<std::size_t>(d)) {
    flag("shape", 1.0, "J, omega0 and structure constants must share the dimension");
    return rep;
  }
  for (const auto& fc : m.f) {
    if (fc.rows() != d || fc.cols() != d) {
      flag("shape", 1.0, "structure-constant slices must be dim x dim");
      return rep;
    }
  }

  // Bracket antisymmetry f[c](a,b) = -f[c](b,a).
  double anti = 0.0;
  for (int c = 0; c < d; ++c) anti = std::max(anti, (m.f[c] + m.f[c].transpose()).cwiseAbs().maxCoeff());
  if (anti > opts.tol) flag("bracket_antisymmetry", anti, "f[c](a,b) + f[c](b,a) != 0");

  // Jacobi identity over all basis triples.
  double jac = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      for (int c = b + 1; c < d; ++c) {
        for (int e = 0; e < d; ++e) {
          double s = 0.0;
          for (int q = 0; q < d; ++q) {
            s += m.f[q](a, b) * m.f[e](q, c) + m.f[q](b, c) * m.f[e](q, a) +
                 m.f[q](c, a) * m.f[e](q, b);
          }
          jac = std::max(jac, std::abs(s));
        }
      }
    }
  }
  if (jac > opts.tol) {
    flag("jacobi", jac, opts.allow_non_lie ? "tensor-only mode, Jacobi not enforced" : "",
         opts.allow_non_lie);
  }

  const double jsq = (m.J * m.J + Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (jsq > opts.tol) flag("j_squared", jsq, "J*J != -Id");

  const double oskew = (m.omega0 + m.omega0.transpose()).cwiseAbs().maxCoeff();
  if (oskew > opts.tol) flag("omega_antisymmetry", oskew, "");

  const double compat = (m.J.transpose() * m.omega0 * m.J - m.omega0).cwiseAbs().maxCoeff();
  if (compat > opts.tol) flag("omega_J_invariance", compat, "omega0(JX,JY) != omega0(X,Y)");

  // Taming: omega0(X, JX) > 0, i.e. the associated metric is positive definite.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.metric());
  const double min_eig = es.eigenvalues().minCoeff();
  if (!(min_eig > opts.tol)) {
    flag("omega_positivity", min_eig, "metric omega0(., J.) is not positive definite");
  }

  return rep;
}

TwoForm apply_J_to_form(const TwoForm& xi, const Eigen::MatrixXd& J) {
  if (xi.dim() != J.rows()) throw std::invalid_argument("apply_J_to_form: dimension mismatch");
  return TwoForm::from_matrix(J.transpose() * xi.matrix() * J);
}

TwoForm project_11(const TwoForm& xi, const Eigen::MatrixXd& J) {
  if (xi.dim() != J.rows()) throw std::invalid_argument("project_11: dimension mismatch");
  return TwoForm::from_matrix(0.5 * (xi.matrix() + J.transpose() * xi.matrix() * J));
}

TwoForm anti_part(const TwoForm& xi, const Eigen::MatrixXd& J) {
  return TwoForm::from_matrix(xi.matrix() - project_11(xi, J).matrix());
}

Eigen::VectorXd nijenhuis(const LieAlgebraModel& m, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) {
  const Eigen::VectorXd jx = m.J * x, jy = m.J * y;
  return m.bracket(jx, jy) - m.J * m.bracket(jx, y) - m.J * m.bracket(x, jy) - m.bracket(x, y);
}

Eigen::VectorXcd nijenhuis(const LieAlgebraModel& m, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& y) {
  const Eigen::VectorXcd jx = m.J * x, jy = m.J * y;
  return m.bracket(jx, jy) - m.J * m.bracket(jx, y) - m.J * m.bracket(x, jy) - m.bracket(x, y);
}

std::vector<Eigen::MatrixXd> nijenhuis_tensor(const LieAlgebraModel& m) {
  const int d = m.dim();
  std::vector<Eigen::MatrixXd> table(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, d));
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const Eigen::VectorXd nab =
          nijenhuis(m, Eigen::VectorXd::Unit(d, a), Eigen::VectorXd::Unit(d, b));
      for (int c = 0; c < d; ++c) {
        table[c](a, b) = nab[c];
        table[c](b, a) = -nab[c];
      }
    }
  }
  return table;
}

double nijenhuis_sup_norm(const LieAlgebraModel& m) {
  double sup = 0.0;
  for (const auto& slice : nijenhuis_tensor(m)) sup = std::max(sup, slice.cwiseAbs().maxCoeff());
  return sup;
}

ComplexFrame build_complex_frame(const Eigen::MatrixXd& J) {
  require_square(J, "build_complex_frame");
  const int d = static_cast<int>(J.rows());
  if (d % 2 != 0) throw std::invalid_argument("build_complex_frame: odd dimension");
  const double jsq = (J * J + Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (jsq > 1e-10) throw std::invalid_argument("build_complex_frame: J*J != -Id");
  const int n = d / 2;

  Eigen::MatrixXd q(d, 0);  // orthonormal basis of the span built so far
  auto residual_against = [&q](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (q.cols() == 0) return v;
    return v - q * (q.transpose() * v);
  };

  Eigen::MatrixXcd vectors(d, n);
  int next_candidate = 0;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd u;
    for (; next_candidate < d; ++next_candidate) {
      Eigen::VectorXd r = residual_against(Eigen::VectorXd::Unit(d, next_candidate));
      if (r.norm() > 1e-8) {
        u = r / r.norm();
        break;
      }
    }
    if (u.size() == 0) throw std::invalid_argument("build_complex_frame: degenerate span");

    q.conservativeResize(d, q.cols() + 1);
    q.col(q.cols() - 1) = u;
    Eigen::VectorXd ju = residual_against(J * u);
    if (ju.norm() < 1e-8) throw std::invalid_argument("build_complex_frame: J u falls in span");
    q.conservativeResize(d, q.cols() + 1);
    q.col(q.cols() - 1) = ju / ju.norm();

    vectors.col(j) = 0.5 * (u.cast<Complex>() - kI * (J * u).cast<Complex>());
  }

  Eigen::MatrixXcd basis(d, d);
  basis.leftCols(n) = vectors;
  basis.rightCols(n) = vectors.conjugate();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(basis);
  if (!lu.isInvertible()) throw std::invalid_argument("build_complex_frame: frame not spanning");

  ComplexFrame fr;
  fr.J = J;
  fr.vectors = vectors;
  fr.dual = lu.inverse().topRows(n);
  return fr;
}

double frame_residual(const ComplexFrame& fr) {
  const int n = fr.n();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    worst = std::max(worst,
                     (fr.J * fr.vectors.col(j) - kI * fr.vectors.col(j)).cwiseAbs().maxCoeff());
  }
  const Eigen::MatrixXcd on_frame = fr.dual * fr.vectors;
  worst = std::max(worst,
                   (on_frame - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
  const Eigen::MatrixXcd on_conj = fr.dual * fr.vectors.conjugate();
  worst = std::max(worst, on_conj.cwiseAbs().maxCoeff());
  return worst;
}

StructureCoefficients StructureCoefficients::zero(int n) {
  StructureCoefficients sc;
  sc.n = n;
  sc.C.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(n, n));
  sc.Nbar = sc.C;
  sc.Cmix = sc.C;
  sc.CmixBar = sc.C;
  return sc;
}

Complex StructureCoefficients::mix_bar_trace(int p) const {
  Complex s = 0.0;
  for (int q = 0; q < n; ++q) s += CmixBar[static_cast<std::size_t>(q)](p, q);
  return s;
}

Complex StructureCoefficients::mix_trace_lowered(int p) const {
  Complex s = 0.0;
  for (int i = 0; i < n; ++i) s -= Cmix[static_cast<std::size_t>(i)](i, p);
  return s;
}

StructureCoefficients extract_structure_coefficients(const LieAlgebraModel& m,
                                                     const ComplexFrame& fr) {
  if (m.dim() != fr.dim()) {
    throw std::invalid_argument("extract_structure_coefficients: dimension mismatch");
  }
  if (frame_residual(fr) > 1e-8) {
    throw std::invalid_argument("extract_structure_coefficients: singular frame");
  }
  const int n = fr.n();
  StructureCoefficients sc = StructureCoefficients::zero(n);
  const Eigen::MatrixXcd dual_bar = fr.dual.conjugate();

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::VectorXcd br = m.bracket(fr.vector(i), fr.vector(j));
      const Eigen::VectorXcd br_bar = m.bracket(fr.vector_bar(i), fr.vector_bar(j));
      for (int k = 0; k < n; ++k) {
        const Complex c = fr.dual.row(k) * br;
        sc.C[k](i, j) = c;
        sc.C[k](j, i) = -c;
        const Complex nb = -(fr.dual.row(k) * br_bar)(0);
        sc.Nbar[k](i, j) = nb;
        sc.Nbar[k](j, i) = -nb;
      }
    }
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXcd br = m.bracket(fr.vector(i), fr.vector_bar(j));
      for (int k = 0; k < n; ++k) {
        sc.Cmix[k](i, j) = fr.dual.row(k) * br;
        sc.CmixBar[k](i, j) = dual_bar.row(k) * br;
      }
    }
  }
  return sc;
}

double bracket_reconstruction_residual(const LieAlgebraModel& m, const ComplexFrame& fr,
                                       const StructureCoefficients& sc) {
  const int n = sc.n;
  const int d = m.dim();
  const Eigen::MatrixXcd e = fr.vectors;
  const Eigen::MatrixXcd ebar = fr.vectors.conjugate();

  auto frame_bracket = [&](const Eigen::VectorXcd& zc, const Eigen::VectorXcd& zbc,
                           const Eigen::VectorXcd& wc, const Eigen::VectorXcd& wbc) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          // [e_i, e_j], [e_i, ebar_j], [ebar_i, ebar_j] expanded in the frame.
          const Complex holo = zc[i] * wc[j];
          const Complex mix = zc[i] * wbc[j] - zbc[j] * wc[i];
          const Complex anti = zbc[i] * wbc[j];
          out += (holo * sc.C[k](i, j) - anti * sc.Nbar[k](i, j) + mix * sc.Cmix[k](i, j)) * e.col(k);
          out += (-holo * std::conj(sc.Nbar[k](i, j)) + anti * std::conj(sc.C[k](i, j)) +
                  mix * sc.CmixBar[k](i, j)) *
                 ebar.col(k);
        }
      }
    }
    return out;
  };

  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXcd za = Eigen::VectorXcd::Unit(d, a);
    const Eigen::VectorXcd zc = fr.dual * za;
    const Eigen::VectorXcd zbc = fr.dual.conjugate() * za;
    for (int b = a + 1; b < d; ++b) {
      const Eigen::VectorXcd wb = Eigen::VectorXcd::Unit(d, b);
      const Eigen::VectorXcd rebuilt =
          frame_bracket(zc, zbc, fr.dual * wb, fr.dual.conjugate() * wb);
      Eigen::VectorXd direct(d);
      for (int c = 0; c < d; ++c) direct[c] = m.f[static_cast<std::size_t>(c)](a, b);
      worst = std::max(worst, (rebuilt - direct.cast<Complex>()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

DThetaBlocks dtheta_coefficients(const StructureCoefficients& sc) {
  DThetaBlocks out;
  out.d20.reserve(static_cast<std::size_t>(sc.n));
  out.d11.reserve(static_cast<std::size_t>(sc.n));
  out.d02.reserve(static_cast<std::size_t>(sc.n));
  for (int i = 0; i < sc.n; ++i) {
    out.d20.push_back(-sc.C[static_cast<std::size_t>(i)]);
    out.d11.push_back(-sc.Cmix[static_cast<std::size_t>(i)]);
    out.d02.push_back(sc.Nbar[static_cast<std::size_t>(i)]);
  }
  return out;
}

Complex dtheta_evaluate(const LieAlgebraModel& m, const ComplexFrame& fr, int i,
                        const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
  // Invariant coframe: the derivative terms of the exterior formula vanish.
  return -(fr.dual.row(i) * m.bracket(z, w))(0);
}

}  // namespace chernflow
