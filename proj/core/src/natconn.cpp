#include "apm/natconn.hpp"

#include <array>
#include <cmath>

#include "apm/apclass.hpp"
#include "apm/errors.hpp"

namespace apm {

namespace {

Tensor lower_last(const Tensor& t, const MetricPair& g) {
  return compose_P(t, g.g(), t.degree() - 1);
}

Tensor raise_last(const Tensor& t, const MetricPair& g) {
  return compose_P(t, g.inverse(), t.degree() - 1);
}

double g_norm(const Tensor& t, const MetricPair& g) {
  return std::sqrt(std::abs(norm_sq(t, g.inverse())));
}

void require_w3(const Tensor& f, const Eigen::MatrixXd& p, const MetricPair& g, double w3_tol) {
  (void)p;
  const double sigma = g_norm(cyclic_sum3(f), g);
  const double scale = std::max(1.0, g_norm(f, g));
  if (!(sigma <= w3_tol * scale))
    throw ValidationError(ErrorCode::NotW3,
                          "cyclic sum of F has norm " + std::to_string(sigma));
}

}  // namespace

Tensor phi_direct(const FrameManifold& m) {
  const Tensor diff = m.nabla_assoc().gamma() - m.nabla().gamma();
  return lower_last(diff, m.metric());
}

Tensor phi_from_F(const Tensor& f, const Eigen::MatrixXd& p) {
  return 0.5 * (-1.0 * substitute(f, p, "Pz,x,y") + substitute(f, p, "x,y,Pz") +
                substitute(f, p, "y,Pz,x"));
}

Tensor f_from_phi(const Tensor& phi, const Eigen::MatrixXd& p) {
  return substitute(phi, p, "x,y,Pz") + substitute(phi, p, "x,z,Py");
}

void require_torsion_like(const Tensor& t, double tol) {
  if (t.degree() != 3)
    throw ValidationError(ErrorCode::NotTorsionLike, "torsion tensor must have degree 3");
  static constexpr std::array<int, 3> swap01{1, 0, 2};
  const double defect = frobenius_norm(t + permute(t, swap01));
  const double scale = std::max(1.0, frobenius_norm(t));
  if (!(defect <= tol * scale))
    throw ValidationError(ErrorCode::NotTorsionLike,
                          "antisymmetry defect " + std::to_string(defect));
}

TorsionDecomposition project_torsion(const Tensor& t, const Eigen::MatrixXd& p,
                                     const MetricPair& g) {
  require_torsion_like(t);
  const auto s = [&](const char* args) { return substitute(t, p, args); };

  Tensor p1 = 0.125 * (2.0 * t - s("y,z,x") - s("z,x,y") - s("Pz,x,Py") + s("Py,z,Px") +
                       s("z,Px,Py") - 2.0 * s("Px,Py,z") + s("Py,Pz,x") + s("Pz,Px,y") -
                       s("y,Pz,Px"));
  Tensor p2 = 0.125 * (2.0 * t + s("y,z,x") + s("z,x,y") + s("Pz,x,Py") - s("Py,z,Px") -
                       s("z,Px,Py") - 2.0 * s("Px,Py,z") - s("Py,Pz,x") - s("Pz,Px,y") +
                       s("y,Pz,Px"));
  Tensor p3 = 0.25 * (t + s("Px,Py,z") - s("Px,y,Pz") - s("x,Py,Pz"));
  Tensor p4 = 0.25 * (t + s("Px,Py,z") + s("Px,y,Pz") + s("x,Py,Pz"));

  TorsionDecomposition d{std::move(p1), std::move(p2), std::move(p3), std::move(p4), 0.0};
  d.residual = g_norm(t - (d.p1 + d.p2 + d.p3 + d.p4), g);
  return d;
}

NaturalDefects is_natural(const Connection& conn, const FrameManifold& m) {
  if (conn.dim() != m.dim()) throw std::invalid_argument("is_natural: dimension mismatch");
  NaturalDefects d;
  const Tensor nabla_g = covariant_derivative(conn, m.metric().as_tensor());
  const Tensor nabla_assoc = covariant_derivative(conn, m.metric_assoc().as_tensor());
  d.nabla_g = g_norm(nabla_g, m.metric());
  // g((nabla'_x P)y, z) = (nabla' g~)(x,y,z) - (nabla' g)(x,Py,z), exact for
  // arbitrary (not necessarily metric) connections
  d.nabla_P = g_norm(nabla_assoc - compose_P(nabla_g, m.P(), 1), m.metric());

  const Tensor q = lower_last(conn.gamma() - m.nabla().gamma(), m.metric());
  const Tensor f = compute_F(m);
  d.eq_f_from_q =
      g_norm(f - (substitute(q, m.P(), "x,y,Pz") - substitute(q, m.P(), "x,Py,z")), m.metric());
  static constexpr std::array<int, 3> swap12{0, 2, 1};
  d.eq_q_antisym = g_norm(q + permute(q, swap12), m.metric());
  return d;
}

CanonicalDefects is_canonical(const Tensor& t, const Eigen::MatrixXd& p, const MetricPair& g) {
  require_torsion_like(t);
  CanonicalDefects d;
  d.quarter_identity = g_norm(
      t + substitute(t, p, "y,z,x") + substitute(t, p, "Px,y,Pz") + substitute(t, p, "y,Pz,Px"),
      g);
  TorsionDecomposition dec = project_torsion(t, p, g);
  d.p2_norm = g_norm(dec.p2, g);
  d.p4_norm = g_norm(dec.p4, g);
  return d;
}

ConnectionPair canonical_connection(const FrameManifold& m) {
  const Tensor phi = phi_direct(m);
  const Tensor q = 0.25 * (phi - 2.0 * substitute(phi, m.P(), "z,x,y") -
                           substitute(phi, m.P(), "x,Py,Pz"));
  const Tensor gamma_prime = m.nabla().gamma() + raise_last(q, m.metric());
  Connection nabla_prime = Connection::from_coefficients(gamma_prime);

  static constexpr std::array<int, 3> swap01{1, 0, 2};
  const Tensor torsion_up = gamma_prime - permute(gamma_prime, swap01) - m.brackets().tensor();
  Tensor t = lower_last(torsion_up, m.metric());
  return ConnectionPair{m.nabla(), std::move(nabla_prime), q, std::move(t)};
}

Tensor torsion_from_phi(const Tensor& phi, const Eigen::MatrixXd& p) {
  // third term carries a minus; the printed plus fails against the
  // antisymmetrized deformation of the existence formula
  return 0.25 * (substitute(phi, p, "y,z,x") - substitute(phi, p, "z,x,y") -
                 substitute(phi, p, "y,Pz,Px") + substitute(phi, p, "Pz,x,Py"));
}

Tensor torsion_from_F(const Tensor& f, const Eigen::MatrixXd& p, const MetricPair& g,
                      double w3_tol) {
  require_w3(f, p, g, w3_tol);
  return -0.5 * (substitute(f, p, "x,Py,z") + substitute(f, p, "Px,y,z"));
}

Tensor q_from_F(const Tensor& f, const Eigen::MatrixXd& p, const MetricPair& g, double w3_tol) {
  require_w3(f, p, g, w3_tol);
  return -0.25 * (substitute(f, p, "y,Px,z") - substitute(f, p, "Py,x,z") +
                  2.0 * substitute(f, p, "x,Py,z"));
}

Tensor hayden_q_from_T(const Tensor& t) {
  require_torsion_like(t);
  static constexpr std::array<int, 3> yzx{1, 2, 0};
  static constexpr std::array<int, 3> zxy{2, 0, 1};
  return 0.5 * (t - permute(t, yzx) + permute(t, zxy));
}

}  // namespace apm
