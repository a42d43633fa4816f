#include "apm/frame.hpp"

#include <cmath>
#include <utility>

#include "apm/errors.hpp"

namespace apm {

namespace {
constexpr double kStructuralTol = 1e-12;
}

StructureConstants StructureConstants::from_entries(int dim,
                                                    const std::vector<BracketEntry>& entries) {
  if (dim < 2) throw ValidationError(ErrorCode::InvalidDimension, "dimension must be >= 2");
  Tensor c(3, dim);
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim)
      throw ValidationError(ErrorCode::InvalidDimension, "bracket index out of range");
    if (e.i >= e.j)
      throw ValidationError(ErrorCode::BracketNotAntisymmetric,
                            "sparse bracket entries must have i < j");
    c(e.i, e.j, e.k) += e.value;
    c(e.j, e.i, e.k) -= e.value;
  }
  return from_tensor(std::move(c));
}

StructureConstants StructureConstants::from_tensor(Tensor c) {
  if (c.degree() != 3)
    throw ValidationError(ErrorCode::InvalidDimension, "structure constants must have degree 3");
  const int n = c.dim();
  if (!c.all_finite())
    throw ValidationError(ErrorCode::BracketNotAntisymmetric, "non-finite bracket value");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (c(i, j, k) != -c(j, i, k))
          throw ValidationError(ErrorCode::BracketNotAntisymmetric,
                                "C^k_ij != -C^k_ji at (" + std::to_string(i) + "," +
                                    std::to_string(j) + "," + std::to_string(k) + ")");
  const double jac = jacobi_defect(c);
  if (!(jac <= kStructuralTol))
    throw ValidationError(ErrorCode::JacobiViolated,
                          "Jacobi cyclic sum has max residual " + std::to_string(jac));
  return StructureConstants(std::move(c));
}

double StructureConstants::jacobi_defect(const Tensor& c) {
  const int n = c.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m)
            acc += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          worst = std::max(worst, std::abs(acc));
        }
  return worst;
}

Connection Connection::from_coefficients(Tensor gamma) {
  if (gamma.degree() != 3)
    throw std::invalid_argument("Connection: coefficients must have degree 3");
  if (!gamma.all_finite()) throw std::invalid_argument("Connection: non-finite coefficient");
  return Connection(std::move(gamma));
}

Tensor Connection::lowered(const MetricPair& g) const {
  const int n = dim();
  Tensor low(3, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += gamma_(i, j, m) * g.g()(m, k);
        low(i, j, k) = acc;
      }
  return low;
}

Connection levi_civita(const StructureConstants& c, const MetricPair& metric) {
  const int n = c.dim();
  if (metric.dim() != n) throw std::invalid_argument("levi_civita: dimension mismatch");
  // Cg(i,j,k) = g([e_i,e_j], e_k)
  Tensor cg(3, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += c(i, j, m) * metric.g()(m, k);
        cg(i, j, k) = acc;
      }
  Tensor gamma(3, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
          const double low = 0.5 * (cg(i, j, m) - cg(j, m, i) + cg(m, i, j));
          acc += low * metric.inverse()(m, k);
        }
        gamma(i, j, k) = acc;
      }
  return Connection::from_coefficients(std::move(gamma));
}

Tensor covariant_derivative(const Connection& conn, const Tensor& t) {
  const int n = t.dim();
  if (conn.dim() != n) throw std::invalid_argument("covariant_derivative: dimension mismatch");
  const int d = t.degree();
  if (d < 1) throw std::invalid_argument("covariant_derivative: tensor degree must be >= 1");
  Tensor out(d + 1, n);
  std::vector<int> idx(static_cast<std::size_t>(d));
  std::vector<int> sub(static_cast<std::size_t>(d));
  const std::size_t count = t.size();
  for (int i = 0; i < n; ++i) {
    for (std::size_t flat = 0; flat < count; ++flat) {
      std::size_t rest = flat;
      for (int s = d - 1; s >= 0; --s) {
        idx[static_cast<std::size_t>(s)] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
      }
      double acc = 0.0;
      for (int s = 0; s < d; ++s) {
        sub = idx;
        for (int m = 0; m < n; ++m) {
          sub[static_cast<std::size_t>(s)] = m;
          acc -= conn(i, idx[static_cast<std::size_t>(s)], m) * t.at(sub);
        }
      }
      out.flat(static_cast<std::size_t>(i) * count + flat) = acc;
    }
  }
  return out;
}

Tensor curvature(const Connection& conn, const StructureConstants& c, const MetricPair& g) {
  const int n = conn.dim();
  if (c.dim() != n || g.dim() != n) throw std::invalid_argument("curvature: dimension mismatch");
  Tensor r(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double up = 0.0;
          for (int m = 0; m < n; ++m)
            up += conn(j, k, m) * conn(i, m, l) - conn(i, k, m) * conn(j, m, l) -
                  c(i, j, m) * conn(m, k, l);
          r(i, j, k, l) = up;
        }
  // lower the value slot with g
  Tensor low(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) acc += r(i, j, k, l) * g.g()(l, s);
          low(i, j, k, s) = acc;
        }
  return low;
}

FrameManifold FrameManifold::validate(int dim, const std::vector<BracketEntry>& brackets,
                                      const Eigen::MatrixXd& metric, const Eigen::MatrixXd& P,
                                      std::string name) {
  return validate(StructureConstants::from_entries(dim, brackets), metric, P, std::move(name));
}

FrameManifold FrameManifold::validate(StructureConstants c, const Eigen::MatrixXd& metric,
                                      const Eigen::MatrixXd& P, std::string name) {
  const int n = c.dim();
  if (n < 2) throw ValidationError(ErrorCode::InvalidDimension, "dimension must be >= 2");
  if (metric.rows() != n || metric.cols() != n)
    throw ValidationError(ErrorCode::InvalidDimension, "metric dimension mismatch");
  if (P.rows() != n || P.cols() != n)
    throw ValidationError(ErrorCode::InvalidDimension, "product structure dimension mismatch");

  MetricPair g = MetricPair::positive_definite(metric);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const double p_sq = (P * P - id).cwiseAbs().maxCoeff();
  if (!(p_sq <= kStructuralTol))
    throw ValidationError(ErrorCode::PSquareNotIdentity,
                          "max |P^2 - I| = " + std::to_string(p_sq));
  const double compat = (P.transpose() * metric * P - metric).cwiseAbs().maxCoeff();
  if (!(compat <= kStructuralTol))
    throw ValidationError(ErrorCode::PNotCompatible,
                          "max |P^T g P - g| = " + std::to_string(compat));
  const double tr = std::abs(P.trace());
  if (!(tr <= kStructuralTol))
    throw ValidationError(ErrorCode::TraceNonZero, "|tr P| = " + std::to_string(tr));

  // g~_ij = g_ik P^k_j; symmetric because P is g-compatible and involutive.
  Eigen::MatrixXd assoc = metric * P;
  assoc = 0.5 * (assoc + Eigen::MatrixXd(assoc.transpose()));
  MetricPair g_assoc = MetricPair::indefinite(assoc);

  Connection nabla = levi_civita(c, g);
  Connection nabla_assoc = levi_civita(c, g_assoc);
  return FrameManifold(n, std::move(c), std::move(g), P, std::move(g_assoc), std::move(nabla),
                       std::move(nabla_assoc), std::move(name));
}

Tensor nabla_P(const FrameManifold& m, const Connection& conn) {
  // lowered P equals the associated metric; for g-metric connections this is
  // exactly g((nabla_{e_i} P) e_j, e_k)
  return covariant_derivative(conn, m.metric_assoc().as_tensor());
}

}  // namespace apm
