#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "apm/tensor.hpp"

namespace apm {

/// One sparse bracket entry: [e_i, e_j] gains `value * e_k`. Only i < j
/// entries are stored; the antisymmetric partner is implied.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

/// Structure constants C^k_ij of a Lie algebra, stored as C(i,j,k) with the
/// value slot last: [e_i, e_j] = C(i,j,k) e_k.
class StructureConstants {
 public:
  /// From sparse i<j entries; the antisymmetric partners are filled in, so
  /// antisymmetry holds exactly as stored. Checks the Jacobi identity.
  static StructureConstants from_entries(int dim, const std::vector<BracketEntry>& entries);

  /// From a dense C(i,j,k) array; antisymmetry must hold exactly as given.
  static StructureConstants from_tensor(Tensor c);

  int dim() const { return c_.dim(); }
  const Tensor& tensor() const { return c_; }
  double operator()(int i, int j, int k) const { return c_(i, j, k); }

  bool is_zero() const { return c_.max_abs() == 0.0; }

  /// Max-norm of the Jacobi cyclic sum; validation requires <= 1e-12.
  static double jacobi_defect(const Tensor& c);

 private:
  explicit StructureConstants(Tensor c) : c_(std::move(c)) {}
  Tensor c_;
};

/// Connection coefficients: nabla_{e_i} e_j = gamma(i,j,k) e_k. Plain data;
/// may come from the Koszul formula or be injected directly in tests.
class Connection {
 public:
  static Connection from_coefficients(Tensor gamma);

  int dim() const { return gamma_.dim(); }
  const Tensor& gamma() const { return gamma_; }
  double operator()(int i, int j, int k) const { return gamma_(i, j, k); }

  /// Lowered coefficients gamma(i,j,m) g(m,k) as a degree-3 tensor.
  Tensor lowered(const MetricPair& g) const;

 private:
  explicit Connection(Tensor gamma) : gamma_(std::move(gamma)) {}
  Tensor gamma_;
};

/// Levi-Civita connection of a constant metric over an invariant frame, via
/// the Koszul formula reduced to bracket terms:
///   2 g(nabla_{e_i} e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j).
Connection levi_civita(const StructureConstants& c, const MetricPair& metric);

/// Covariant derivative of an invariant (0,d) tensor: the scalar-derivative
/// term vanishes, leaving
///   (nabla t)(e_i; e_{j1},..,e_{jd}) = -sum_s gamma(i, j_s, m) t(.., e_m, ..).
Tensor covariant_derivative(const Connection& conn, const Tensor& t);

/// Curvature (0,4) tensor R(e_i,e_j,e_k,e_l) = g(R(e_i,e_j)e_k, e_l) with
/// R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_{[x,y]} z.
Tensor curvature(const Connection& conn, const StructureConstants& c, const MetricPair& g);

/// A validated Riemannian almost product manifold modeled as a Lie-algebra
/// invariant frame: P^2 = id, g(Px,Py) = g(x,y), tr P = 0, plus Lie-algebra
/// invariants on the brackets. Immutable after validation; the Levi-Civita
/// connections of g and of the associated metric are cached eagerly.
class FrameManifold {
 public:
  /// Validates all invariants and builds the caches. Throws ValidationError
  /// with the violated invariant's name.
  static FrameManifold validate(int dim, const std::vector<BracketEntry>& brackets,
                                const Eigen::MatrixXd& metric, const Eigen::MatrixXd& P,
                                std::string name = {});

  static FrameManifold validate(StructureConstants c, const Eigen::MatrixXd& metric,
                                const Eigen::MatrixXd& P, std::string name = {});

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const StructureConstants& brackets() const { return c_; }
  const MetricPair& metric() const { return g_; }
  const MetricPair& metric_assoc() const { return g_assoc_; }
  const Eigen::MatrixXd& P() const { return p_; }

  /// Levi-Civita connection of g.
  const Connection& nabla() const { return nabla_; }
  /// Levi-Civita connection of the associated metric g~.
  const Connection& nabla_assoc() const { return nabla_assoc_; }

 private:
  FrameManifold(int dim, StructureConstants c, MetricPair g, Eigen::MatrixXd p,
                MetricPair g_assoc, Connection nabla, Connection nabla_assoc, std::string name)
      : dim_(dim),
        c_(std::move(c)),
        g_(std::move(g)),
        p_(std::move(p)),
        g_assoc_(std::move(g_assoc)),
        nabla_(std::move(nabla)),
        nabla_assoc_(std::move(nabla_assoc)),
        name_(std::move(name)) {}

  int dim_;
  StructureConstants c_;
  MetricPair g_;
  Eigen::MatrixXd p_;
  MetricPair g_assoc_;
  Connection nabla_;
  Connection nabla_assoc_;
  std::string name_;
};

/// Degree-3 tensor G(i,j,k) = g((nabla_{e_i} P) e_j, e_k) for a g-metric
/// connection, computed as the covariant derivative of the lowered P (which
/// is exactly the associated metric).
Tensor nabla_P(const FrameManifold& m, const Connection& conn);

}  // namespace apm
