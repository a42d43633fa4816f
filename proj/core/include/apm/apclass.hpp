#pragma once

#include <string>

#include "apm/frame.hpp"
#include "apm/tensor.hpp"

namespace apm {

enum class ClassLabel { W0, W3_strict, OUTSIDE_SCOPE };

const char* to_string(ClassLabel label);

/// Norms of the classifying tensors and the resulting class decision. Only
/// W0 (F = 0) and W3 (cyclic sum of F = 0) are decidable here; everything
/// else is reported as OUTSIDE_SCOPE rather than guessed.
struct ClassificationReport {
  double norm_F = 0.0;
  double norm_cyclic_F = 0.0;
  double norm_N = 0.0;
  double norm_N_star = 0.0;
  double norm_nabla_P_sq = 0.0;
  ClassLabel class_label = ClassLabel::OUTSIDE_SCOPE;
  double tolerance_used = 0.0;
  /// Cross-check: the W3 condition and N* = 0 must agree.
  bool n_star_consistent = true;
};

/// Fundamental tensor F(x,y,z) = g((nabla_x P)y, z) for the Levi-Civita
/// connection of g. Satisfies F(x,y,z) = F(x,z,y) = -F(x,Py,Pz) and
/// F(x,y,Pz) = -F(x,Py,z) on every valid manifold.
Tensor compute_F(const FrameManifold& m);

/// Nijenhuis tensor, lowered: N(x,y,z) = g(N(x,y), z) with
///   N(x,y) = (nabla_x P)Py + (nabla_{Px} P)y - (nabla_y P)Px - (nabla_{Py} P)x,
/// equal to [Px,Py] + [x,y] - P[Px,y] - P[x,Py]. Antisymmetric in (x,y).
Tensor nijenhuis(const FrameManifold& m);

/// Lowered N from a precomputed F (avoids recomputing the connection).
Tensor nijenhuis_from_F(const Tensor& f, const Eigen::MatrixXd& p);

/// Associated tensor, lowered: N*(x,y,z) with
///   N*(x,y) = (nabla_x P)Py + (nabla_{Px} P)y + (nabla_y P)Px + (nabla_{Py} P)x.
/// Symmetric in (x,y); vanishes exactly on the W3 class.
Tensor n_star(const FrameManifold& m);

Tensor n_star_from_F(const Tensor& f, const Eigen::MatrixXd& p);

/// Square norm of nabla P: g^{ij} g^{ks} g((nabla_{e_i}P)e_k, (nabla_{e_j}P)e_s).
double square_norm_nabla_P(const FrameManifold& m);

/// Classifies m with a scale-aware tolerance: tests on F-derived tensors use
/// tol * max(1, ||F||) since the class conditions are homogeneous in F.
ClassificationReport classify(const FrameManifold& m, double tol);

/// True when the report's label is W0 or W3_strict (the cyclic sum of F
/// vanishes), so the W3-only identities apply.
bool is_w3_class(const ClassificationReport& report);

}  // namespace apm
