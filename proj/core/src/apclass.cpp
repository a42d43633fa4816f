#include "apm/apclass.hpp"

#include <array>
#include <cmath>

namespace apm {

namespace {
constexpr std::array<int, 3> kSwap01{1, 0, 2};
}

const char* to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::W0: return "W0";
    case ClassLabel::W3_strict: return "W3_strict";
    case ClassLabel::OUTSIDE_SCOPE: return "OUTSIDE_SCOPE";
  }
  return "?";
}

Tensor compute_F(const FrameManifold& m) { return nabla_P(m, m.nabla()); }

Tensor nijenhuis_from_F(const Tensor& f, const Eigen::MatrixXd& p) {
  // N(x,y,z) = F(x,Py,z) + F(Px,y,z) - F(y,Px,z) - F(Py,x,z)
  const Tensor fp1 = compose_P(f, p, 1);
  const Tensor fp0 = compose_P(f, p, 0);
  return fp1 + fp0 - permute(fp1, kSwap01) - permute(fp0, kSwap01);
}

Tensor n_star_from_F(const Tensor& f, const Eigen::MatrixXd& p) {
  // N*(x,y,z) = F(x,Py,z) + F(Px,y,z) + F(y,Px,z) + F(Py,x,z)
  const Tensor fp1 = compose_P(f, p, 1);
  const Tensor fp0 = compose_P(f, p, 0);
  return fp1 + fp0 + permute(fp1, kSwap01) + permute(fp0, kSwap01);
}

Tensor nijenhuis(const FrameManifold& m) { return nijenhuis_from_F(compute_F(m), m.P()); }

Tensor n_star(const FrameManifold& m) { return n_star_from_F(compute_F(m), m.P()); }

double square_norm_nabla_P(const FrameManifold& m) {
  return norm_sq(compute_F(m), m.metric().inverse());
}

ClassificationReport classify(const FrameManifold& m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tolerance must be positive");
  const Tensor f = compute_F(m);
  const Eigen::MatrixXd& ginv = m.metric().inverse();

  ClassificationReport r;
  r.tolerance_used = tol;
  r.norm_F = std::sqrt(std::abs(norm_sq(f, ginv)));
  r.norm_cyclic_F = std::sqrt(std::abs(norm_sq(cyclic_sum3(f), ginv)));
  r.norm_N = std::sqrt(std::abs(norm_sq(nijenhuis_from_F(f, m.P()), ginv)));
  r.norm_N_star = std::sqrt(std::abs(norm_sq(n_star_from_F(f, m.P()), ginv)));
  r.norm_nabla_P_sq = norm_sq(f, ginv);

  const double scale = std::max(1.0, r.norm_F);
  if (r.norm_F <= tol) {
    r.class_label = ClassLabel::W0;
  } else if (r.norm_cyclic_F <= tol * scale) {
    r.class_label = ClassLabel::W3_strict;
  } else {
    r.class_label = ClassLabel::OUTSIDE_SCOPE;
  }

  // sigma F = 0 and N* = 0 characterize the same class
  const bool sigma_small = r.norm_cyclic_F <= tol * scale;
  const bool n_star_small = r.norm_N_star <= 4.0 * m.dim() * tol * scale;
  r.n_star_consistent = (sigma_small == n_star_small);
  return r;
}

bool is_w3_class(const ClassificationReport& report) {
  return report.class_label == ClassLabel::W0 || report.class_label == ClassLabel::W3_strict;
}

}  // namespace apm
