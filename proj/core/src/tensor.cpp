#include "apm/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "apm/errors.hpp"

namespace apm {

namespace {

std::size_t pow_size(int dim, int degree) {
  std::size_t s = 1;
  for (int i = 0; i < degree; ++i) s *= static_cast<std::size_t>(dim);
  return s;
}

// Odometer over all multi-indices of the given shape.
template <typename Fn>
void for_each_index(int degree, int dim, Fn&& fn) {
  std::array<int, 16> idx{};
  if (degree == 0) {
    fn(std::span<const int>(idx.data(), 0));
    return;
  }
  for (;;) {
    fn(std::span<const int>(idx.data(), static_cast<std::size_t>(degree)));
    int s = degree - 1;
    while (s >= 0 && ++idx[s] == dim) idx[s--] = 0;
    if (s < 0) return;
  }
}

}  // namespace

Tensor::Tensor(int degree, int dim) : degree_(degree), dim_(dim) {
  if (degree < 0) throw std::invalid_argument("Tensor: negative degree");
  if (dim < 1) throw std::invalid_argument("Tensor: dim must be >= 1");
  if (degree > 16) throw std::invalid_argument("Tensor: degree too large");
  c_.assign(pow_size(dim, degree), 0.0);
}

Tensor Tensor::from_components(int degree, int dim, std::vector<double> components) {
  Tensor t(degree, dim);
  if (components.size() != t.size())
    throw std::invalid_argument("Tensor: component count does not match dim^degree");
  t.c_ = std::move(components);
  return t;
}

std::size_t Tensor::offset_span(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != degree_)
    throw std::invalid_argument("Tensor: index arity mismatch");
  std::size_t o = 0;
  for (int v : idx) {
    if (v < 0 || v >= dim_) throw std::out_of_range("Tensor: index out of range");
    o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(v);
  }
  return o;
}

double Tensor::scalar() const {
  if (degree_ != 0) throw std::invalid_argument("Tensor::scalar: degree is not 0");
  return c_[0];
}

bool Tensor::all_finite() const {
  for (double v : c_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  if (o.degree_ != degree_ || o.dim_ != dim_)
    throw std::invalid_argument("Tensor: shape mismatch in +=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  if (o.degree_ != degree_ || o.dim_ != dim_)
    throw std::invalid_argument("Tensor: shape mismatch in -=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double s, Tensor t) { return t *= s; }

MetricPair MetricPair::positive_definite(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols() || g.rows() < 1)
    throw ValidationError(ErrorCode::InvalidDimension, "metric is not square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError(ErrorCode::NotSymmetric, "metric matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError(ErrorCode::NotPositiveDefinite,
                          "metric has a non-positive eigenvalue");
  Eigen::MatrixXd inv = g.inverse();
  double defect = (g * inv - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-12))
    throw ValidationError(ErrorCode::NotPositiveDefinite, "metric inversion residual too large");
  return MetricPair(g, std::move(inv));
}

MetricPair MetricPair::indefinite(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols() || g.rows() < 1)
    throw ValidationError(ErrorCode::InvalidDimension, "metric is not square");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw ValidationError(ErrorCode::NotSymmetric, "associated metric is not symmetric");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible())
    throw ValidationError(ErrorCode::AssociatedMetricSingular, "metric is singular");
  Eigen::MatrixXd inv = lu.inverse();
  double defect = (g * inv - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-10))
    throw ValidationError(ErrorCode::AssociatedMetricSingular,
                          "metric inversion residual too large");
  return MetricPair(g, std::move(inv));
}

Tensor MetricPair::as_tensor() const { return tensor_from_matrix(g_); }

Tensor contract(const Tensor& t, const Eigen::MatrixXd& g_inv, int slot_a, int slot_b) {
  const int d = t.degree();
  const int n = t.dim();
  if (!(0 <= slot_a && slot_a < slot_b && slot_b < d))
    throw std::invalid_argument("contract: need 0 <= slot_a < slot_b < degree");
  if (g_inv.rows() != n || g_inv.cols() != n)
    throw std::invalid_argument("contract: inverse-metric dimension mismatch");
  Tensor out(d - 2, n);
  std::array<int, 16> full{};
  std::size_t pos = 0;
  for_each_index(d - 2, n, [&](std::span<const int> idx) {
    // scatter the reduced index around the two contracted slots
    int k = 0;
    for (int s = 0; s < d; ++s) {
      if (s == slot_a || s == slot_b) continue;
      full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(k++)];
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      full[static_cast<std::size_t>(slot_a)] = i;
      for (int j = 0; j < n; ++j) {
        full[static_cast<std::size_t>(slot_b)] = j;
        acc += g_inv(i, j) * t.at(std::span<const int>(full.data(), static_cast<std::size_t>(d)));
      }
    }
    out.flat(pos++) = acc;
  });
  return out;
}

Tensor compose_P(const Tensor& t, const Eigen::MatrixXd& P, int slot) {
  const int d = t.degree();
  const int n = t.dim();
  if (slot < 0 || slot >= d) throw std::invalid_argument("compose_P: slot out of range");
  if (P.rows() != n || P.cols() != n)
    throw std::invalid_argument("compose_P: matrix dimension mismatch");
  Tensor out(d, n);
  std::array<int, 16> full{};
  std::size_t pos = 0;
  for_each_index(d, n, [&](std::span<const int> idx) {
    for (int s = 0; s < d; ++s) full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(s)];
    const int a = idx[static_cast<std::size_t>(slot)];
    double acc = 0.0;
    for (int b = 0; b < n; ++b) {
      full[static_cast<std::size_t>(slot)] = b;
      acc += P(b, a) * t.at(std::span<const int>(full.data(), static_cast<std::size_t>(d)));
    }
    out.flat(pos++) = acc;
  });
  return out;
}

Tensor permute(const Tensor& t, std::span<const int> perm) {
  const int d = t.degree();
  if (static_cast<int>(perm.size()) != d) throw std::invalid_argument("permute: arity mismatch");
  Tensor out(d, t.dim());
  std::array<int, 16> src{};
  std::size_t pos = 0;
  for_each_index(d, t.dim(), [&](std::span<const int> idx) {
    for (int s = 0; s < d; ++s)
      src[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
    out.flat(pos++) = t.at(std::span<const int>(src.data(), static_cast<std::size_t>(d)));
  });
  return out;
}

Tensor cyclic_sum3(const Tensor& t) {
  if (t.degree() != 3) throw std::invalid_argument("cyclic_sum3: degree must be 3");
  static constexpr std::array<int, 3> yzx{1, 2, 0};
  static constexpr std::array<int, 3> zxy{2, 0, 1};
  return t + permute(t, yzx) + permute(t, zxy);
}

Tensor substitute(const Tensor& t, const Eigen::MatrixXd& P, std::string_view args) {
  const int d = t.degree();
  std::array<int, 16> perm{};
  std::array<bool, 16> with_p{};
  int count = 0;
  std::size_t pos = 0;
  while (pos < args.size()) {
    if (count >= d) throw std::invalid_argument("substitute: too many arguments");
    bool p = false;
    if (args[pos] == 'P') {
      p = true;
      ++pos;
    }
    if (pos >= args.size()) throw std::invalid_argument("substitute: dangling P");
    const char c = args[pos++];
    int letter;
    switch (c) {
      case 'x': letter = 0; break;
      case 'y': letter = 1; break;
      case 'z': letter = 2; break;
      case 'w': letter = 3; break;
      default: throw std::invalid_argument("substitute: bad slot letter");
    }
    if (letter >= d) throw std::invalid_argument("substitute: letter beyond degree");
    perm[static_cast<std::size_t>(count)] = letter;
    with_p[static_cast<std::size_t>(count)] = p;
    ++count;
    if (pos < args.size()) {
      if (args[pos] != ',') throw std::invalid_argument("substitute: expected comma");
      ++pos;
    }
  }
  if (count != d) throw std::invalid_argument("substitute: argument count != degree");
  unsigned seen = 0;
  for (int s = 0; s < d; ++s) seen |= 1u << static_cast<unsigned>(perm[static_cast<std::size_t>(s)]);
  if (seen != (1u << static_cast<unsigned>(d)) - 1u)
    throw std::invalid_argument("substitute: arguments must be a permutation of the slots");

  Tensor r = t;
  for (int s = 0; s < d; ++s)
    if (with_p[static_cast<std::size_t>(s)]) r = compose_P(r, P, s);
  // S(x_0,..,x_{d-1}) = r(x_{perm[0]}, .., x_{perm[d-1]})
  return permute(r, std::span<const int>(perm.data(), static_cast<std::size_t>(d)));
}

double inner(const Tensor& t, const Tensor& u, const Eigen::MatrixXd& g_inv) {
  if (t.degree() != u.degree() || t.dim() != u.dim())
    throw std::invalid_argument("inner: shape mismatch");
  if (g_inv.rows() != t.dim() || g_inv.cols() != t.dim())
    throw std::invalid_argument("inner: inverse-metric dimension mismatch");
  Tensor raised = u;
  for (int s = 0; s < u.degree(); ++s) raised = compose_P(raised, g_inv, s);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t.flat(i) * raised.flat(i);
  return acc;
}

double norm_sq(const Tensor& t, const Eigen::MatrixXd& g_inv) { return inner(t, t, g_inv); }

double frobenius_norm(const Tensor& t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t.flat(i) * t.flat(i);
  return std::sqrt(acc);
}

Tensor tensor_from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("tensor_from_matrix: not square");
  const int n = static_cast<int>(m.rows());
  Tensor t(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = m(i, j);
  return t;
}

Eigen::MatrixXd matrix_from_tensor(const Tensor& t) {
  if (t.degree() != 2) throw std::invalid_argument("matrix_from_tensor: degree must be 2");
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
  return m;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::PSquareNotIdentity: return "PSquareNotIdentity";
    case ErrorCode::PNotCompatible: return "PNotCompatible";
    case ErrorCode::TraceNonZero: return "TraceNonZero";
    case ErrorCode::BracketNotAntisymmetric: return "BracketNotAntisymmetric";
    case ErrorCode::JacobiViolated: return "JacobiViolated";
    case ErrorCode::AssociatedMetricSingular: return "AssociatedMetricSingular";
    case ErrorCode::NotTorsionLike: return "NotTorsionLike";
    case ErrorCode::NotW3: return "NotW3";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace apm
