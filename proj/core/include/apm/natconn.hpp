#pragma once

#include <Eigen/Dense>

#include "apm/frame.hpp"
#include "apm/tensor.hpp"

namespace apm {

/// Orthogonal components of a torsion-type 3-tensor under the four invariant
/// subspaces of the torsion space, plus the reconstruction residual.
struct TorsionDecomposition {
  Tensor p1;
  Tensor p2;
  Tensor p3;
  Tensor p4;
  double residual = 0.0;  // || T - (p1+p2+p3+p4) ||
};

/// Levi-Civita connection, canonical connection, and the lowered deformation
/// and torsion tensors tying them together: nabla' = nabla + Q, T = torsion.
struct ConnectionPair {
  Connection nabla;
  Connection nabla_prime;
  Tensor Q;
  Tensor T;
};

/// Defect norms for the natural-connection conditions of a connection.
/// Natural means nabla' P = nabla' g = 0, equivalently the pair of
/// deformation-tensor conditions recorded below.
struct NaturalDefects {
  double nabla_g = 0.0;
  double nabla_P = 0.0;
  double eq_f_from_q = 0.0;   // F(x,y,z) = Q(x,y,Pz) - Q(x,Py,z)
  double eq_q_antisym = 0.0;  // Q(x,y,z) = -Q(x,z,y)
  bool natural(double tol) const { return nabla_g <= tol && nabla_P <= tol; }
};

/// Defects of the canonical-torsion condition, in both equivalent forms.
struct CanonicalDefects {
  double quarter_identity = 0.0;  // T(x,y,z)+T(y,z,x)+T(Px,y,Pz)+T(y,Pz,Px)
  double p2_norm = 0.0;
  double p4_norm = 0.0;
  bool canonical(double tol) const { return quarter_identity <= tol; }
};

/// Phi(x,y,z) = g(nabla~_x y - nabla_x y, z), from the Levi-Civita
/// connections of the associated metric and of g.
Tensor phi_direct(const FrameManifold& m);

/// Phi from F: Phi(x,y,z) = 1/2 { -F(Pz,x,y) + F(x,y,Pz) + F(y,Pz,x) }.
Tensor phi_from_F(const Tensor& f, const Eigen::MatrixXd& p);

/// F from Phi: F(x,y,z) = Phi(x,y,Pz) + Phi(x,z,Py).
Tensor f_from_phi(const Tensor& phi, const Eigen::MatrixXd& p);

/// Throws NotTorsionLike unless t is degree 3 and antisymmetric in its first
/// two slots within tol (scale-aware).
void require_torsion_like(const Tensor& t, double tol = 1e-10);

/// The four projector components of a torsion-like tensor, by the printed
/// projector formulas.
TorsionDecomposition project_torsion(const Tensor& t, const Eigen::MatrixXd& p,
                                     const MetricPair& g);

/// Natural-connection defects of `conn` on m.
NaturalDefects is_natural(const Connection& conn, const FrameManifold& m);

/// Canonical-condition defects of a torsion-like tensor.
CanonicalDefects is_canonical(const Tensor& t, const Eigen::MatrixXd& p, const MetricPair& g);

/// Builds the canonical connection by the general existence formula
///   g(nabla'_x y, z) = g(nabla_x y, z) + 1/4 { Phi(x,y,z) - 2 Phi(z,x,y) - Phi(x,Py,Pz) },
/// together with its deformation and torsion tensors.
ConnectionPair canonical_connection(const FrameManifold& m);

/// Torsion of the canonical connection from Phi:
///   T(x,y,z) = 1/4 { Phi(y,z,x) - Phi(z,x,y) + Phi(y,Pz,Px) + Phi(Pz,x,Py) }.
Tensor torsion_from_phi(const Tensor& phi, const Eigen::MatrixXd& p);

/// W3-only route: T(x,y,z) = -1/2 { F(x,Py,z) + F(Px,y,z) }.
/// Throws NotW3 when the cyclic sum of F is not negligible.
Tensor torsion_from_F(const Tensor& f, const Eigen::MatrixXd& p, const MetricPair& g,
                      double w3_tol);

/// W3-only route: Q(x,y,z) = -1/4 { F(y,Px,z) - F(Py,x,z) + 2 F(x,Py,z) }.
Tensor q_from_F(const Tensor& f, const Eigen::MatrixXd& p, const MetricPair& g, double w3_tol);

/// Hayden reconstruction of the deformation tensor of a metric connection
/// from its torsion: Q(x,y,z) = 1/2 { T(x,y,z) - T(y,z,x) + T(z,x,y) }.
Tensor hayden_q_from_T(const Tensor& t);

}  // namespace apm
