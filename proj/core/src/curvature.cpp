#include "apm/curvature.hpp"

#include <array>
#include <cmath>

#include "apm/apclass.hpp"
#include "apm/errors.hpp"

namespace apm {

namespace {

constexpr std::array<int, 4> kSwap01_4{1, 0, 2, 3};

double g_norm(const Tensor& t, const MetricPair& g) {
  return std::sqrt(std::abs(norm_sq(t, g.inverse())));
}

void require_w3(const FrameManifold& m, double w3_tol) {
  const Tensor f = compute_F(m);
  const double sigma = g_norm(cyclic_sum3(f), m.metric());
  const double scale = std::max(1.0, g_norm(f, m.metric()));
  if (!(sigma <= w3_tol * scale))
    throw ValidationError(ErrorCode::NotW3, "cyclic sum of F has norm " + std::to_string(sigma));
}

// S[x,y,z,w] = sum_{c,d} A(a_x, a_y, c) g^{cd} B(b_x, b_y, d) for the four
// pairing patterns used below. `amap`/`bmap` pick which of (x,y,z,w) feed
// the two visible slots of A and B.
Tensor pair_g(const Tensor& a, const Tensor& b, const MetricPair& g, std::array<int, 2> amap,
              std::array<int, 2> bmap) {
  const int n = a.dim();
  Tensor out(4, n);
  std::array<int, 4> v{};
  for (v[0] = 0; v[0] < n; ++v[0])
    for (v[1] = 0; v[1] < n; ++v[1])
      for (v[2] = 0; v[2] < n; ++v[2])
        for (v[3] = 0; v[3] < n; ++v[3]) {
          double acc = 0.0;
          for (int c = 0; c < n; ++c) {
            double bc = 0.0;
            for (int d = 0; d < n; ++d)
              bc += g.inverse()(c, d) *
                    b(v[static_cast<std::size_t>(bmap[0])], v[static_cast<std::size_t>(bmap[1])], d);
            acc += a(v[static_cast<std::size_t>(amap[0])], v[static_cast<std::size_t>(amap[1])], c) * bc;
          }
          out(v[0], v[1], v[2], v[3]) = acc;
        }
  return out;
}

}  // namespace

CurvatureSummary curvature_summary(const FrameManifold& m) {
  const ConnectionPair pair = canonical_connection(m);
  const Eigen::MatrixXd& ginv = m.metric().inverse();

  Tensor r = curvature(m.nabla(), m.brackets(), m.metric());
  Tensor r_prime = curvature(pair.nabla_prime, m.brackets(), m.metric());
  Tensor rho = contract(r, ginv, 0, 3);
  Tensor rho_prime = contract(r_prime, ginv, 0, 3);

  CurvatureSummary s{r, r_prime, rho, rho_prime};
  s.tau = contract(rho, ginv, 0, 1).scalar();
  s.tau_prime = contract(rho_prime, ginv, 0, 1).scalar();

  const Tensor rho_star = contract(compose_P(r, m.P(), 3), ginv, 0, 3);
  s.tau_star = contract(rho_star, ginv, 0, 1).scalar();
  const Tensor r_pp = compose_P(compose_P(r, m.P(), 2), m.P(), 3);
  s.tau_star_star = contract(contract(r_pp, ginv, 0, 3), ginv, 0, 1).scalar();

  s.norm_nabla_P_sq = square_norm_nabla_P(m);
  return s;
}

Tensor rprime_deformation(const FrameManifold& m) {
  const ConnectionPair pair = canonical_connection(m);
  const Tensor r = curvature(m.nabla(), m.brackets(), m.metric());
  const Tensor nabla_q = covariant_derivative(m.nabla(), pair.Q);
  // g(Q(x,w),Q(y,z)) and its (x<->y) mirror
  const Tensor qq = pair_g(pair.Q, pair.Q, m.metric(), {0, 3}, {1, 2});
  return r + nabla_q - permute(nabla_q, kSwap01_4) - qq + permute(qq, kSwap01_4);
}

CurvatureLikeDefects is_curvature_like(const Tensor& l) {
  if (l.degree() != 4) throw std::invalid_argument("is_curvature_like: degree must be 4");
  CurvatureLikeDefects d;
  static constexpr std::array<int, 4> swap23{0, 1, 3, 2};
  static constexpr std::array<int, 4> yzx{1, 2, 0, 3};
  static constexpr std::array<int, 4> zxy{2, 0, 1, 3};
  d.antisym_01 = frobenius_norm(l + permute(l, kSwap01_4));
  d.antisym_23 = frobenius_norm(l + permute(l, swap23));
  d.bianchi = frobenius_norm(l + permute(l, yzx) + permute(l, zxy));
  return d;
}

PTensorDefects is_p_tensor(const Tensor& l, const Eigen::MatrixXd& p) {
  PTensorDefects d;
  d.base = is_curvature_like(l);
  d.p_invariance = frobenius_norm(compose_P(compose_P(l, p, 2), p, 3) - l);
  return d;
}

double bianchi_defect_prime(const FrameManifold& m, double w3_tol) {
  require_w3(m, w3_tol);
  const ConnectionPair pair = canonical_connection(m);
  const Tensor nabla_t = covariant_derivative(pair.nabla_prime, pair.T);
  // T(T(x,y),z,w) = T(x,y,c) g^{cd} T(d-slot; z,w)
  const int n = m.dim();
  Tensor tt(4, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          double acc = 0.0;
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              acc += pair.T(x, y, c) * m.metric().inverse()(c, d) * pair.T(d, z, w);
          tt(x, y, z, w) = acc;
        }
  const Tensor a = nabla_t + tt;
  static constexpr std::array<int, 4> yzx{1, 2, 0, 3};
  static constexpr std::array<int, 4> zxy{2, 0, 1, 3};
  return g_norm(a + permute(a, yzx) + permute(a, zxy), m.metric());
}

double thm52_pairing(const FrameManifold& m, double w3_tol) {
  require_w3(m, w3_tol);
  const Tensor f = compute_F(m);
  const Tensor a = compose_P(f, m.P(), 1) + compose_P(f, m.P(), 0);  // (nab_x P)Pz + (nab_Px P)z
  const Tensor b = compose_P(f, m.P(), 0) - compose_P(f, m.P(), 1);  // (nab_Py P)w - (nab_y P)Pw
  const int n = m.dim();
  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        for (int w = 0; w < n; ++w) {
          double acc = 0.0;
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              acc += a(x, z, c) * m.metric().inverse()(c, d) * b(y, w, d);
          worst = std::max(worst, std::abs(acc));
        }
  return worst;
}

ParallelTorsionReport parallel_torsion_analysis(const FrameManifold& m, double w3_tol,
                                                double parallel_tol) {
  require_w3(m, w3_tol);
  const ConnectionPair pair = canonical_connection(m);
  const Tensor f = compute_F(m);
  const MetricPair& g = m.metric();
  const Eigen::MatrixXd& ginv = g.inverse();

  ParallelTorsionReport r;
  r.norm_nabla_prime_T = g_norm(covariant_derivative(pair.nabla_prime, pair.T), g);
  r.norm_nabla_prime_Q = g_norm(covariant_derivative(pair.nabla_prime, pair.Q), g);
  r.norm_nabla_prime_F = g_norm(covariant_derivative(pair.nabla_prime, f), g);
  r.norm_T = g_norm(pair.T, g);
  r.torsion_parallel = r.norm_nabla_prime_T <= parallel_tol * std::max(1.0, r.norm_T);
  r.nabla_P_sq = norm_sq(f, ginv);

  const Tensor r_lc = curvature(m.nabla(), m.brackets(), g);
  const Tensor r_prime = curvature(pair.nabla_prime, m.brackets(), g);

  // parallel-torsion curvature formula: R' = R + g(Q(y,z),Q(x,w)) - g(Q(x,z),Q(y,w))
  //            + g(Q(z,w),T(x,y)) - g((nabla_{Pw}P)z, T(x,y))
  const Tensor qq1 = pair_g(pair.Q, pair.Q, g, {1, 2}, {0, 3});
  const Tensor qq2 = pair_g(pair.Q, pair.Q, g, {0, 2}, {1, 3});
  const Tensor qt = pair_g(pair.Q, pair.T, g, {2, 3}, {0, 1});
  const Tensor fp0 = compose_P(f, m.P(), 0);  // F(Pa,b,c) = g((nabla_{Pa}P)b, .)
  const Tensor ft = pair_g(fp0, pair.T, g, {3, 2}, {0, 1});
  r.r_prime_via_65_defect = g_norm(r_prime - (r_lc + qq1 - qq2 + qt - ft), g);

  // contracted form: rho' = rho - g^{ij} g(Q(e_j,z),Q(e_i,y)) + g^{ij} g((nabla_{Pz}P)e_j, T(e_i,y))
  const int n = m.dim();
  Tensor rho = contract(r_lc, ginv, 0, 3);
  Tensor rho_prime = contract(r_prime, ginv, 0, 3);
  Tensor rhs(2, n);
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double acc = rho(y, z);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double qq = 0.0, ft2 = 0.0;
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              qq += pair.Q(j, z, c) * ginv(c, d) * pair.Q(i, y, d);
              ft2 += fp0(z, j, c) * ginv(c, d) * pair.T(i, y, d);
            }
          acc += ginv(i, j) * (ft2 - qq);
        }
      rhs(y, z) = acc;
    }
  r.ricci_via_68_defect = g_norm(rho_prime - rhs, g);

  // quarter-norm contraction of Q and the half-norm torsion contraction
  r.q_contraction_610_defect = std::abs(norm_sq(pair.Q, ginv) - 0.25 * r.nabla_P_sq);
  static constexpr std::array<int, 3> swap01{1, 0, 2};
  const double lhs611 = inner(fp0, permute(pair.T, swap01), ginv);
  r.contraction_611_defect = std::abs(lhs611 - 0.5 * r.nabla_P_sq);

  const double tau = contract(rho, ginv, 0, 1).scalar();
  const double tau_prime = contract(rho_prime, ginv, 0, 1).scalar();
  r.tau_relation_quarter = std::abs(tau_prime - tau - 0.25 * r.nabla_P_sq);
  return r;
}

}  // namespace apm
