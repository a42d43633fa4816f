#pragma once

#include <Eigen/Dense>
#include <array>
#include <concepts>
#include <span>
#include <string_view>
#include <vector>

namespace apm {

/// Dense real tensor with `degree` covariant slots over an n-dimensional
/// frame, stored row-major (last index fastest). The slot order matches the
/// argument order of the formula the tensor realizes. Degree 0 is allowed and
/// holds a single scalar (the result of a full contraction).
///
/// Values are immutable by convention once a tensor leaves its builder: all
/// operations below are pure and return fresh tensors.
class Tensor {
 public:
  Tensor(int degree, int dim);
  static Tensor from_components(int degree, int dim, std::vector<double> components);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  std::size_t size() const { return c_.size(); }

  std::span<const double> components() const { return c_; }

  double flat(std::size_t i) const { return c_[i]; }
  double& flat(std::size_t i) { return c_[i]; }

  template <std::convertible_to<int>... I>
  double operator()(I... idx) const {
    return c_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }
  template <std::convertible_to<int>... I>
  double& operator()(I... idx) {
    return c_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }

  double at(std::span<const int> idx) const { return c_[offset_span(idx)]; }
  double& at(std::span<const int> idx) { return c_[offset_span(idx)]; }

  /// Scalar value of a degree-0 tensor.
  double scalar() const;

  bool all_finite() const;
  double max_abs() const;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(double s);

 private:
  template <std::size_t N>
  std::size_t offset(const std::array<int, N>& idx) const {
    std::size_t o = 0;
    for (int v : idx) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(v);
    return o;
  }
  std::size_t offset_span(std::span<const int> idx) const;

  int degree_;
  int dim_;
  std::vector<double> c_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor t);

/// Symmetric metric together with its cached inverse.
class MetricPair {
 public:
  /// Builds a positive definite metric; rejects asymmetric or non-SPD input.
  static MetricPair positive_definite(const Eigen::MatrixXd& g);
  /// Builds a merely invertible symmetric metric (used for the associated
  /// metric, which has split signature).
  static MetricPair indefinite(const Eigen::MatrixXd& g);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& g() const { return g_; }
  const Eigen::MatrixXd& inverse() const { return g_inv_; }

  /// Metric as a degree-2 tensor (for covariant differentiation).
  Tensor as_tensor() const;

 private:
  MetricPair(Eigen::MatrixXd g, Eigen::MatrixXd g_inv)
      : g_(std::move(g)), g_inv_(std::move(g_inv)) {}

  Eigen::MatrixXd g_;
  Eigen::MatrixXd g_inv_;
};

/// Contracts slots (slot_a, slot_b) of t with the inverse metric:
/// result[...] = sum_{i,j} g^{ij} t[.. i .. j ..]. Degree drops by two.
Tensor contract(const Tensor& t, const Eigen::MatrixXd& g_inv, int slot_a, int slot_b);

/// Substitutes P into one argument slot: result(.., x, ..) = t(.., Px, ..),
/// i.e. result[.. a ..] = sum_b P(b,a) t[.. b ..].
Tensor compose_P(const Tensor& t, const Eigen::MatrixXd& P, int slot);

/// Reorders slots: result[i_0,..] = t[i_{perm[0]}, i_{perm[1]}, ..], so that
/// result(x_0,..,x_{d-1}) = t(x_{perm[0]}, .., x_{perm[d-1]}).
Tensor permute(const Tensor& t, std::span<const int> perm);

/// Cyclic sum over the three slots of a degree-3 tensor:
/// result(x,y,z) = t(x,y,z) + t(y,z,x) + t(z,x,y).
Tensor cyclic_sum3(const Tensor& t);

/// Builds S(x,y,z[,w]) = t(args...) from a comma-separated argument pattern
/// such as "y,Pz,Px": each argument is one of x,y,z,w (a permutation of the
/// slots), optionally premultiplied by P. Lets formulas be transcribed
/// verbatim, e.g. substitute(T, P, "Pz,x,Py") for T(Pz,x,Py).
Tensor substitute(const Tensor& t, const Eigen::MatrixXd& P, std::string_view args);

/// Full scalar pairing sum g^{ii'} ... g^{kk'} t[i..k] u[i'..k'].
double inner(const Tensor& t, const Tensor& u, const Eigen::MatrixXd& g_inv);

/// Square norm of t: inner(t, t); non-negative for positive definite g.
double norm_sq(const Tensor& t, const Eigen::MatrixXd& g_inv);

/// sqrt(|norm_sq|); the metric-independent Frobenius norm when g_inv is I.
double frobenius_norm(const Tensor& t);

Tensor tensor_from_matrix(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_tensor(const Tensor& t);

}  // namespace apm
