#include "chernflow/chern_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chernflow {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_match(const MatrixField& g, const StructureCoefficients& sc,
                   const DerivationBackend& bk) {
  if (g.n != sc.n || g.n != bk.cdim() || g.points != bk.points()) {
    throw std::invalid_argument("chern_geometry: field/backend shape mismatch");
  }
}

/// e_k g and ebar_k g for every direction, as component fields.
struct MetricDerivatives {
  std::vector<MatrixField> d;     // d[k](p, i, j)    = e_k g_{i jbar}
  std::vector<MatrixField> dbar;  // dbar[k](p, i, j) = ebar_k g_{i jbar}
};

MetricDerivatives metric_derivatives(const MatrixField& g, const DerivationBackend& bk) {
  const int n = g.n;
  MetricDerivatives out;
  out.d.assign(n, MatrixField(n, g.points));
  out.dbar.assign(n, MatrixField(n, g.points));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXcd comp = g.component(i, j);
      for (int k = 0; k < n; ++k) {
        out.d[k].set_component(i, j, bk.d(k, comp));
        out.dbar[k].set_component(i, j, bk.dbar(k, comp));
      }
    }
  }
  return out;
}

Complex trace_product(const MatrixField& a, std::int64_t p, const MatrixField& b) {
  Complex s = 0.0;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) s += a.at(p, i, j) * b.at(p, j, i);
  return s;
}

/// Ricci assembly shared by the metric and the volume-form paths; takes the
/// first and mixed second derivatives of the relevant log-volume scalar.
RicciField assemble_ricci(const StructureCoefficients& sc, const DerivationBackend& bk,
                          const std::vector<Eigen::VectorXcd>& dL,
                          const std::vector<Eigen::VectorXcd>& dbarL, const MatrixField& ddbarL) {
  const int n = sc.n;
  const std::int64_t pts = bk.points();
  RicciField ric;
  ric.r20 = MatrixField(n, pts);
  ric.r11 = MatrixField(n, pts);
  ric.r02 = MatrixField(n, pts);

  std::vector<Complex> mix_bar(n), mix_low(n);
  for (int p = 0; p < n; ++p) {
    mix_bar[p] = sc.mix_bar_trace(p);
    mix_low[p] = sc.mix_trace_lowered(p);
  }
  // Derivatives of the constant coefficient traces; identically zero on both
  // backends but kept so the formulas read off the definitions.
  std::vector<Eigen::VectorXcd> d_mix_bar(n), dbar_mix_bar(n), d_mix_low(n), dbar_mix_low(n);
  for (int p = 0; p < n; ++p) {
    const Eigen::VectorXcd cb = Eigen::VectorXcd::Constant(pts, mix_bar[p]);
    const Eigen::VectorXcd cl = Eigen::VectorXcd::Constant(pts, mix_low[p]);
    d_mix_bar[p] = bk.d(0, cb);  // direction re-evaluated below per index
    dbar_mix_bar[p] = cb;
    d_mix_low[p] = cl;
    dbar_mix_low[p] = cl;
  }

  for (std::int64_t pt = 0; pt < pts; ++pt) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        Complex r20 = 0.0, r11 = 0.0, r02 = 0.0;
        for (int p = 0; p < n; ++p) {
          const Complex nb = sc.Nbar[p](k, l);
          r20 += -std::conj(nb) * dbarL[p][pt] + sc.C[p](k, l) * mix_bar[p] +
                 std::conj(nb) * mix_low[p];
          r11 += sc.CmixBar[p](k, l) * dbarL[p][pt] + sc.Cmix[p](k, l) * mix_bar[p] -
                 sc.CmixBar[p](k, l) * mix_low[p];
          r02 += nb * dL[p][pt] - nb * mix_bar[p] - std::conj(sc.C[p](k, l)) * mix_low[p];
        }
        r11 -= ddbarL.at(pt, k, l);
        ric.r20.at(pt, k, l) = r20;
        ric.r11.at(pt, k, l) = r11;
        ric.r02.at(pt, k, l) = r02;
      }
    }
  }

  // The constant-trace derivative terms (e_k of the coefficient traces) are
  // exact zeros; evaluate one representative to keep the backend honest.
  if (n > 0) {
    const Eigen::VectorXcd probe = bk.d(0, Eigen::VectorXcd::Constant(pts, mix_bar[0]));
    if (probe.cwiseAbs().maxCoeff() != 0.0) {
      throw std::logic_error("backend differentiates constants inexactly");
    }
  }

  ric.r11_raw = ric.r11;
  ric.hermitian_defect = ric.r11.hermitian_defect();
  ric.r11.hermitize();
  return ric;
}

}  // namespace

Eigen::VectorXcd TorusBackend::d(int i, const Eigen::VectorXcd& f) const {
  if (f.size() != grid_.points) throw std::invalid_argument("TorusBackend::d: field size");
  Eigen::VectorXcd out(grid_.points);
  const Complex* data = f.data();
  const int ax = 2 * i, ay = 2 * i + 1;
  for (std::int64_t p = 0; p < grid_.points; ++p) {
    out[p] = 0.5 * (d_point(grid_, data, p, ax) - kI * d_point(grid_, data, p, ay));
  }
  return out;
}

Eigen::VectorXcd TorusBackend::dbar(int j, const Eigen::VectorXcd& f) const {
  if (f.size() != grid_.points) throw std::invalid_argument("TorusBackend::dbar: field size");
  Eigen::VectorXcd out(grid_.points);
  const Complex* data = f.data();
  const int ax = 2 * j, ay = 2 * j + 1;
  for (std::int64_t p = 0; p < grid_.points; ++p) {
    out[p] = 0.5 * (d_point(grid_, data, p, ax) + kI * d_point(grid_, data, p, ay));
  }
  return out;
}

Eigen::VectorXcd TorusBackend::ddbar(int i, int j, const Eigen::VectorXcd& f) const {
  if (f.size() != grid_.points) throw std::invalid_argument("TorusBackend::ddbar: field size");
  Eigen::VectorXcd out(grid_.points);
  const Complex* data = f.data();
  const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
  for (std::int64_t p = 0; p < grid_.points; ++p) {
    const Complex fxx = (xi == xj) ? d2_point(grid_, data, p, xi) : cross_point(grid_, data, p, xi, xj);
    const Complex fyy = (yi == yj) ? d2_point(grid_, data, p, yi) : cross_point(grid_, data, p, yi, yj);
    Complex value = 0.25 * (fxx + fyy);
    if (i != j) {
      const Complex fxy = cross_point(grid_, data, p, xi, yj);
      const Complex fyx = cross_point(grid_, data, p, yi, xj);
      value += 0.25 * kI * (fxy - fyx);
    }
    // i == j: the two mixed stencils coincide and cancel exactly.
    out[p] = value;
  }
  return out;
}

Eigen::VectorXd TorusBackend::laplace_beltrami(const MatrixField& g,
                                               const Eigen::VectorXd& f) const {
  const int n = grid_.n;
  const int ax = grid_.axes();
  if (g.n != n || g.points != grid_.points || f.size() != grid_.points) {
    throw std::invalid_argument("laplace_beltrami: shape mismatch");
  }

  // Real coordinate metric G from the Hermitian components, then the
  // divergence-form coefficients rho = sqrt(det G), K = rho * G^{-1}.
  Eigen::VectorXd rho(grid_.points);
  std::vector<Eigen::VectorXd> K(static_cast<std::size_t>(ax) * ax);
  for (auto& k : K) k.resize(grid_.points);
  Eigen::MatrixXd G(ax, ax);
  for (std::int64_t p = 0; p < grid_.points; ++p) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Complex gij = g.at(p, i, j);
        G(2 * i, 2 * j) = 2.0 * gij.real();
        G(2 * i + 1, 2 * j + 1) = 2.0 * gij.real();
        G(2 * i, 2 * j + 1) = 2.0 * gij.imag();
        G(2 * i + 1, 2 * j) = -2.0 * gij.imag();
      }
    }
    const double det = G.determinant();
    if (!(det > 0.0)) throw std::invalid_argument("laplace_beltrami: degenerate metric");
    const double r = std::sqrt(det);
    rho[p] = r;
    const Eigen::MatrixXd Ginv = G.inverse();
    for (int a = 0; a < ax; ++a)
      for (int b = 0; b < ax; ++b) K[static_cast<std::size_t>(a) * ax + b][p] = r * Ginv(a, b);
  }

  const double* fd = f.data();
  Eigen::VectorXd out(grid_.points);
  const double h = grid_.h;
  for (std::int64_t p = 0; p < grid_.points; ++p) {
    double acc = 0.0;
    for (int a = 0; a < ax; ++a) {
      const auto& Kaa = K[static_cast<std::size_t>(a) * ax + a];
      const std::int64_t pp = grid_.shift(p, a, +1);
      const std::int64_t pm = grid_.shift(p, a, -1);
      const double kp = 0.5 * (Kaa[p] + Kaa[pp]);
      const double km = 0.5 * (Kaa[p] + Kaa[pm]);
      acc += (kp * (fd[pp] - fd[p]) - km * (fd[p] - fd[pm])) / (h * h);
      for (int b = 0; b < ax; ++b) {
        if (a == b) continue;
        const auto& Kab = K[static_cast<std::size_t>(a) * ax + b];
        const double up = Kab[pp] * d_point(grid_, fd, pp, b);
        const double dn = Kab[pm] * d_point(grid_, fd, pm, b);
        acc += (up - dn) / (2.0 * h);
      }
    }
    out[p] = acc / rho[p];
  }
  return out;
}

double RicciField::reality_defect() const {
  double worst = 0.0;
  for (std::int64_t p = 0; p < r20.points; ++p) {
    for (int i = 0; i < r20.n; ++i)
      for (int j = 0; j < r20.n; ++j)
        worst = std::max(worst, std::abs(r02.at(p, i, j) + std::conj(r20.at(p, i, j))));
  }
  return worst;
}

MatrixField invert_metric(const MatrixField& g) {
  MatrixField out(g.n, g.points);
  for (std::int64_t p = 0; p < g.points; ++p) {
    const Eigen::MatrixXcd m = g.matrix(p);
    const double det_scale = std::abs(m.determinant());
    if (!(det_scale > 1e-300)) throw std::invalid_argument("invert_metric: singular metric");
    out.set_matrix(p, m.inverse());
  }
  return out;
}

ChristoffelField chern_christoffels(const MatrixField& g, const StructureCoefficients& sc,
                                    const DerivationBackend& bk) {
  require_match(g, sc, bk);
  const int n = g.n;
  const MatrixField ginv = invert_metric(g);
  const MetricDerivatives dg = metric_derivatives(g, bk);

  ChristoffelField gamma;
  gamma.n = n;
  gamma.points = g.points;
  gamma.a.assign(static_cast<std::size_t>(g.points) * n * n * n, Complex(0.0));
  for (std::int64_t pt = 0; pt < g.points; ++pt) {
    for (int out = 0; out < n; ++out) {
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          Complex s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += ginv.at(pt, l, out) * dg.d[i].at(pt, k, l);
            for (int q = 0; q < n; ++q) {
              s += ginv.at(pt, l, out) * g.at(pt, k, q) * std::conj(sc.Cmix[q](l, i));
            }
          }
          gamma.at(pt, out, i, k) = s;
        }
      }
    }
  }
  return gamma;
}

TorsionField torsion_components(const ChristoffelField& gamma, const StructureCoefficients& sc,
                                const MatrixField& g) {
  const int n = gamma.n;
  TorsionField t;
  t.n = n;
  t.points = gamma.points;
  t.t_up.assign(static_cast<std::size_t>(gamma.points) * n * n * n, Complex(0.0));
  t.t_low = t.t_up;
  for (std::int64_t pt = 0; pt < gamma.points; ++pt) {
    for (int out = 0; out < n; ++out) {
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          t.t_up[((static_cast<std::size_t>(pt) * n + out) * n + i) * n + k] =
              gamma.at(pt, out, i, k) - gamma.at(pt, out, k, i) - sc.C[out](i, k);
        }
      }
    }
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          Complex s = 0.0;
          for (int out = 0; out < n; ++out) s += t.up(pt, out, i, k) * g.at(pt, out, l);
          t.t_low[((static_cast<std::size_t>(pt) * n + l) * n + i) * n + k] = s;
        }
      }
    }
  }
  return t;
}

double christoffel_trace_residual(const ChristoffelField& gamma, const MatrixField& g,
                                  const StructureCoefficients& sc, const DerivationBackend& bk) {
  const int n = gamma.n;
  const MatrixField ginv = invert_metric(g);
  const MetricDerivatives dg = metric_derivatives(g, bk);
  double worst = 0.0;
  for (std::int64_t pt = 0; pt < gamma.points; ++pt) {
    for (int i = 0; i < n; ++i) {
      Complex trace = 0.0;
      for (int p = 0; p < n; ++p) trace += gamma.at(pt, p, i, p);
      const Complex dlog = trace_product(ginv, pt, dg.d[i]);
      worst = std::max(worst, std::abs(trace - (dlog - sc.mix_bar_trace(i))));
    }
  }
  return worst;
}

double metric_compatibility_residual(const ChristoffelField& gamma, const MatrixField& g,
                                     const StructureCoefficients& sc,
                                     const DerivationBackend& bk) {
  const int n = gamma.n;
  const MetricDerivatives dg = metric_derivatives(g, bk);
  double worst = 0.0;
  for (std::int64_t pt = 0; pt < gamma.points; ++pt) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          Complex s = dg.d[i].at(pt, k, l);
          for (int p = 0; p < n; ++p) s -= gamma.at(pt, p, i, k) * g.at(pt, p, l);
          for (int q = 0; q < n; ++q) s += std::conj(sc.Cmix[q](l, i)) * g.at(pt, k, q);
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  return worst;
}

RicciField ricci_traces(const MatrixField& g, const StructureCoefficients& sc,
                        const DerivationBackend& bk) {
  require_match(g, sc, bk);
  const int n = g.n;
  const std::int64_t pts = g.points;
  const MatrixField ginv = invert_metric(g);
  const MetricDerivatives dg = metric_derivatives(g, bk);

  // Mixed second derivatives of every metric component.
  std::vector<MatrixField> ddbar_g(static_cast<std::size_t>(n) * n, MatrixField(n, pts));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXcd comp = g.component(i, j);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          ddbar_g[static_cast<std::size_t>(k) * n + l].set_component(i, j, bk.ddbar(k, l, comp));
        }
      }
    }
  }

  // log det g derivatives through tr(g^{-1} e(g)); avoids differentiating the
  // determinant field itself.
  std::vector<Eigen::VectorXcd> dL(n), dbarL(n);
  for (int k = 0; k < n; ++k) {
    dL[k].resize(pts);
    dbarL[k].resize(pts);
    for (std::int64_t pt = 0; pt < pts; ++pt) {
      dL[k][pt] = trace_product(ginv, pt, dg.d[k]);
      dbarL[k][pt] = trace_product(ginv, pt, dg.dbar[k]);
    }
  }
  MatrixField ddbarL(n, pts);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      auto& second = ddbar_g[static_cast<std::size_t>(k) * n + l];
      for (std::int64_t pt = 0; pt < pts; ++pt) {
        Complex s = trace_product(ginv, pt, second);
        // d/d ebar_l of g^{-1} contributes -g^{-1} (ebar_l g) g^{-1} (e_k g).
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
              for (int e = 0; e < n; ++e) {
                s -= ginv.at(pt, a, b) * dg.d[k].at(pt, b, c) * ginv.at(pt, c, e) *
                     dg.dbar[l].at(pt, e, a);
              }
            }
          }
        }
        ddbarL.at(pt, k, l) = s;
      }
    }
  }
  return assemble_ricci(sc, bk, dL, dbarL, ddbarL);
}

RicciField ric_of_volume_form(const Eigen::VectorXd& density, const StructureCoefficients& sc,
                              const DerivationBackend& bk) {
  if (density.size() != bk.points()) {
    throw std::invalid_argument("ric_of_volume_form: density size mismatch");
  }
  if (density.minCoeff() <= 0.0) {
    throw std::invalid_argument("ric_of_volume_form: density must be positive");
  }
  const int n = bk.cdim();
  Eigen::VectorXcd logd(density.size());
  for (std::int64_t p = 0; p < density.size(); ++p) logd[p] = std::log(density[p]);

  std::vector<Eigen::VectorXcd> dL(n), dbarL(n);
  MatrixField ddbarL(n, bk.points());
  for (int k = 0; k < n; ++k) {
    dL[k] = bk.d(k, logd);
    dbarL[k] = bk.dbar(k, logd);
    for (int l = 0; l < n; ++l) ddbarL.set_component(k, l, bk.ddbar(k, l, logd));
  }
  return assemble_ricci(sc, bk, dL, dbarL, ddbarL);
}

TwoForm RealFormField::fiber() const {
  if (points != 1) throw std::logic_error("RealFormField::fiber: not a single-fiber field");
  return TwoForm::from_matrix(values[0]);
}

RealFormField chern_ricci_form(const RicciField& ric, const ComplexFrame& fr) {
  const int n = ric.r11.n;
  if (fr.n() != n) throw std::invalid_argument("chern_ricci_form: frame mismatch");
  RealFormField out;
  out.dim = fr.dim();
  out.points = ric.r11.points;
  out.values.reserve(static_cast<std::size_t>(out.points));
  const Eigen::MatrixXcd theta = fr.dual;
  const Eigen::MatrixXcd theta_bar = fr.dual.conjugate();
  for (std::int64_t p = 0; p < out.points; ++p) {
    const Eigen::MatrixXcd r20 = ric.r20.matrix(p);
    const Eigen::MatrixXcd r11 = ric.r11.matrix(p);
    const Eigen::MatrixXcd r02 = ric.r02.matrix(p);
    const Eigen::MatrixXcd m = kI * (theta.transpose() * r20 * theta +
                                     theta.transpose() * r11 * theta_bar -
                                     theta_bar.transpose() * r11.transpose() * theta +
                                     theta_bar.transpose() * r02 * theta_bar);
    out.imaginary_defect = std::max(out.imaginary_defect, m.imag().cwiseAbs().maxCoeff());
    out.values.push_back(TwoForm::from_matrix(m.real()).matrix());
  }
  return out;
}

RealFormField project_11(const RealFormField& form, const Eigen::MatrixXd& J) {
  RealFormField out;
  out.dim = form.dim;
  out.points = form.points;
  out.imaginary_defect = form.imaginary_defect;
  out.values.reserve(form.values.size());
  for (const auto& v : form.values) {
    out.values.push_back(project_11(TwoForm::from_matrix(v), J).matrix());
  }
  return out;
}

double sup_abs(const RealFormField& form) {
  double worst = 0.0;
  for (const auto& v : form.values) worst = std::max(worst, v.cwiseAbs().maxCoeff());
  return worst;
}

Eigen::VectorXd scalar_curvature(const MatrixField& g, const RicciField& ric) {
  const MatrixField ginv = invert_metric(g);
  Eigen::VectorXd out(g.points);
  for (std::int64_t p = 0; p < g.points; ++p) {
    Complex s = 0.0;
    for (int k = 0; k < g.n; ++k)
      for (int l = 0; l < g.n; ++l) s += ginv.at(p, l, k) * ric.r11.at(p, k, l);
    out[p] = s.real();
  }
  return out;
}

Eigen::VectorXcd canonical_laplacian(const MatrixField& g, const StructureCoefficients& sc,
                                     const DerivationBackend& bk, const Eigen::VectorXcd& phi) {
  require_match(g, sc, bk);
  const int n = g.n;
  const MatrixField ginv = invert_metric(g);
  std::vector<Eigen::VectorXcd> dbar_phi(n);
  for (int q = 0; q < n; ++q) dbar_phi[q] = bk.dbar(q, phi);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.points);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXcd term = bk.ddbar(i, j, phi);
      for (int q = 0; q < n; ++q) term -= sc.CmixBar[q](i, j) * dbar_phi[q];
      for (std::int64_t p = 0; p < g.points; ++p) out[p] += ginv.at(p, j, i) * term[p];
    }
  }
  return out;
}

Eigen::VectorXd laplace_compare(const MatrixField& g, const StructureCoefficients& sc,
                                const DerivationBackend& bk, const Eigen::VectorXd& phi) {
  require_match(g, sc, bk);
  const int n = g.n;
  const Eigen::VectorXcd phic = phi.cast<Complex>();
  const Eigen::VectorXd lap_g = bk.laplace_beltrami(g, phi);
  const Eigen::VectorXcd lap_c = canonical_laplacian(g, sc, bk, phic);

  const ChristoffelField gamma = chern_christoffels(g, sc, bk);
  const MatrixField ginv = invert_metric(g);
  std::vector<Eigen::VectorXcd> dbar_phi(n);
  for (int q = 0; q < n; ++q) dbar_phi[q] = bk.dbar(q, phic);

  Eigen::VectorXd out(g.points);
  for (std::int64_t pt = 0; pt < g.points; ++pt) {
    Complex tau = 0.0;
    for (int p = 0; p < n; ++p) {
      Complex tsum = 0.0;  // T^j_{pj}
      for (int j = 0; j < n; ++j) {
        tsum += gamma.at(pt, j, p, j) - gamma.at(pt, j, j, p) - sc.C[j](p, j);
      }
      for (int q = 0; q < n; ++q) tau += tsum * ginv.at(pt, q, p) * dbar_phi[q][pt];
    }
    out[pt] = lap_g[pt] - 2.0 * lap_c[pt].real() - 2.0 * tau.real();
  }
  return out;
}

double DiffRicResidual::sup() const {
  return std::max(v20.sup_abs(), std::max(v11.sup_abs(), v02.sup_abs()));
}

DiffRicResidual diffric_check(const MatrixField& g_tilde, const MatrixField& g,
                              const StructureCoefficients& sc, const DerivationBackend& bk) {
  require_match(g, sc, bk);
  if (g_tilde.n != g.n || g_tilde.points != g.points) {
    throw std::invalid_argument("diffric_check: metric shape mismatch");
  }
  const int n = g.n;
  const std::int64_t pts = g.points;
  const RicciField ric_t = ricci_traces(g_tilde, sc, bk);
  const RicciField ric_g = ricci_traces(g, sc, bk);

  // Log volume ratio differentiated directly as a scalar field.
  const Eigen::VectorXd det_t = g_tilde.determinant_real();
  const Eigen::VectorXd det_g = g.determinant_real();
  if (det_t.minCoeff() <= 0.0 || det_g.minCoeff() <= 0.0) {
    throw std::invalid_argument("diffric_check: metrics must be positive");
  }
  Eigen::VectorXcd phi(pts);
  for (std::int64_t p = 0; p < pts; ++p) phi[p] = std::log(det_t[p]) - std::log(det_g[p]);

  std::vector<Eigen::VectorXcd> d_phi(n), dbar_phi(n);
  for (int k = 0; k < n; ++k) {
    d_phi[k] = bk.d(k, phi);
    dbar_phi[k] = bk.dbar(k, phi);
  }

  DiffRicResidual res;
  res.v20 = MatrixField(n, pts);
  res.v11 = MatrixField(n, pts);
  res.v02 = MatrixField(n, pts);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXcd djd11 = bk.ddbar(i, j, phi);
      for (int q = 0; q < n; ++q) djd11 -= sc.CmixBar[q](i, j) * dbar_phi[q];
      for (std::int64_t p = 0; p < pts; ++p) {
        Complex djd20 = 0.0, djd02 = 0.0;
        for (int q = 0; q < n; ++q) {
          djd20 += 2.0 * kI * std::conj(sc.Nbar[q](i, j)) * dbar_phi[q][p];
          djd02 -= 2.0 * kI * sc.Nbar[q](i, j) * d_phi[q][p];
        }
        res.v20.at(p, i, j) =
            kI * (ric_t.r20.at(p, i, j) - ric_g.r20.at(p, i, j)) + 0.5 * djd20;
        res.v11.at(p, i, j) =
            kI * (ric_t.r11.at(p, i, j) - ric_g.r11.at(p, i, j)) + kI * djd11[p];
        res.v02.at(p, i, j) =
            kI * (ric_t.r02.at(p, i, j) - ric_g.r02.at(p, i, j)) + 0.5 * djd02;
      }
    }
  }
  return res;
}

MatrixField metric_from_invariant(const LieAlgebraModel& m, const ComplexFrame& fr) {
  const Eigen::MatrixXcd omega = m.omega0.cast<Complex>();
  Eigen::MatrixXcd g = -kI * (fr.vectors.transpose() * omega * fr.vectors.conjugate());
  g = 0.5 * (g + g.adjoint()).eval();
  return MatrixField::constant(g, 1);
}

InvariantRicci invariant_cric(const LieAlgebraModel& m) {
  const ComplexFrame fr = build_complex_frame(m.J);
  const StructureCoefficients sc = extract_structure_coefficients(m, fr);
  const MatrixField g = metric_from_invariant(m, fr);
  ConstantBackend bk(fr.n());
  const RicciField ric = ricci_traces(g, sc, bk);
  const RealFormField form = chern_ricci_form(ric, fr);

  InvariantRicci out;
  out.ric = form.fiber();
  out.cric = project_11(out.ric, m.J);
  out.scalar = scalar_curvature(g, ric)[0];
  return out;
}

}  // namespace chernflow
