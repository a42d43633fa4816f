#pragma once

#include "apm/frame.hpp"
#include "apm/natconn.hpp"
#include "apm/tensor.hpp"

namespace apm {

/// Curvature data of both connections plus the scalar invariants.
/// rho(y,z) = g^{ij} R(e_i,y,z,e_j); tau = g^{ks} rho(e_k,e_s);
/// tau* = g^{ij} rho*(e_i,e_j) with rho*(y,z) = g^{ij} R(e_i,y,z,Pe_j);
/// tau** = g^{ij} g^{ks} R(e_i,e_k,Pe_s,Pe_j).
struct CurvatureSummary {
  Tensor R;
  Tensor R_prime;
  Tensor rho;
  Tensor rho_prime;
  double tau = 0.0;
  double tau_prime = 0.0;
  double tau_star = 0.0;
  double tau_star_star = 0.0;
  double norm_nabla_P_sq = 0.0;
};

struct CurvatureLikeDefects {
  double antisym_01 = 0.0;
  double antisym_23 = 0.0;
  double bianchi = 0.0;
  bool curvature_like(double tol) const {
    return antisym_01 <= tol && antisym_23 <= tol && bianchi <= tol;
  }
};

struct PTensorDefects {
  CurvatureLikeDefects base;
  double p_invariance = 0.0;  // || L(x,y,Pz,Pw) - L(x,y,z,w) ||
  bool p_tensor(double tol) const { return base.curvature_like(tol) && p_invariance <= tol; }
};

/// Parallel-torsion diagnostics for the canonical connection of a W3
/// manifold. The three parallelism norms vanish simultaneously or not at
/// all; the remaining defects are the parallel-torsion identities,
/// meaningful when torsion_parallel is set.
struct ParallelTorsionReport {
  double norm_nabla_prime_T = 0.0;
  double norm_nabla_prime_Q = 0.0;
  double norm_nabla_prime_F = 0.0;
  double norm_T = 0.0;
  bool torsion_parallel = false;
  double r_prime_via_65_defect = 0.0;
  double ricci_via_68_defect = 0.0;
  double q_contraction_610_defect = 0.0;  // | ||Q||^2 - 1/4 ||nabla P||^2 |
  double contraction_611_defect = 0.0;    // | <F(P.,.,.),T^t> - 1/2 ||nabla P||^2 |
  double tau_relation_quarter = 0.0;      // | tau' - tau - 1/4 ||nabla P||^2 |
  double nabla_P_sq = 0.0;
};

CurvatureSummary curvature_summary(const FrameManifold& m);

/// R' from R by the deformation identity
///   R'(x,y,z,w) = R(x,y,z,w) + (nabla_x Q)(y,z,w) - (nabla_y Q)(x,z,w)
///                 - g(Q(x,w),Q(y,z)) + g(Q(y,w),Q(x,z)).
Tensor rprime_deformation(const FrameManifold& m);

CurvatureLikeDefects is_curvature_like(const Tensor& l);

PTensorDefects is_p_tensor(const Tensor& l, const Eigen::MatrixXd& p);

/// Norm of the first-Bianchi obstruction of the canonical connection,
///   cyc_{x,y,z} { (nabla'_x T)(y,z,w) + T(T(x,y),z,w) },
/// which vanishes iff R' is a Riemannian P-tensor. Throws NotW3.
double bianchi_defect_prime(const FrameManifold& m, double w3_tol);

/// Max over basis quadruples of
///   g((nabla_x P)Pz + (nabla_{Px} P)z, (nabla_{Py} P)w - (nabla_y P)Pw),
/// which must vanish whenever R' is a Riemannian P-tensor. Throws NotW3.
double thm52_pairing(const FrameManifold& m, double w3_tol);

ParallelTorsionReport parallel_torsion_analysis(const FrameManifold& m, double w3_tol,
                                                double parallel_tol = 1e-10);

}  // namespace apm
