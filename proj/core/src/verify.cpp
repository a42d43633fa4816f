#include "apm/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "apm/curvature.hpp"
#include "apm/errors.hpp"
#include "apm/natconn.hpp"

namespace apm {

namespace {

constexpr double kTolExact = 1e-12;    // plain algebraic identities
constexpr double kTolInverse = 1e-10;  // identities routed through a matrix inversion
constexpr double kTolScalar = 1e-9;    // scalar-curvature relations, relative
constexpr double kIndicator = 0.5;     // boolean agreement rows score 0 or 1
constexpr double kNonzeroMargin = 1e-6;

constexpr std::array<int, 3> kSwap01{1, 0, 2};
constexpr std::array<int, 3> kSwap12{0, 2, 1};
constexpr std::array<int, 4> kSwap01_4{1, 0, 2, 3};

/// Everything the checks consume, computed once per manifold.
struct Ctx {
  const FrameManifold& m;
  double tol;
  ClassificationReport cls;
  Tensor F;
  Tensor sigma_F;
  Tensor N;
  Tensor Nstar;
  Tensor Phi;
  ConnectionPair pair;
  TorsionDecomposition dec;
  NaturalDefects natural;
  CanonicalDefects canonical;
  CurvatureSummary curv;
  ParallelTorsionReport pt;
  double bianchi_prime_expr = 0.0;  // norm of the torsion first-Bianchi obstruction
  double thm52 = 0.0;
  double swapped_nabla_P = 0.0;  // g^{ij} g^{ks} g((nab_{e_i}P)e_k, (nab_{e_s}P)e_j)
  bool w3 = false;
  bool strict_w3 = false;
  bool r_prime_p_tensor = false;

  double gnorm(const Tensor& t) const {
    return std::sqrt(std::abs(norm_sq(t, m.metric().inverse())));
  }
};

Ctx build_context(const FrameManifold& m, double tol) {
  Ctx c{m,
        tol,
        classify(m, tol),
        compute_F(m),
        Tensor(3, m.dim()),
        Tensor(3, m.dim()),
        Tensor(3, m.dim()),
        Tensor(3, m.dim()),
        canonical_connection(m),
        TorsionDecomposition{Tensor(3, m.dim()), Tensor(3, m.dim()), Tensor(3, m.dim()),
                             Tensor(3, m.dim()), 0.0},
        NaturalDefects{},
        CanonicalDefects{},
        CurvatureSummary{Tensor(4, m.dim()), Tensor(4, m.dim()), Tensor(2, m.dim()),
                         Tensor(2, m.dim())},
        ParallelTorsionReport{}};
  c.sigma_F = cyclic_sum3(c.F);
  c.N = nijenhuis_from_F(c.F, m.P());
  c.Nstar = n_star_from_F(c.F, m.P());
  c.Phi = phi_direct(m);
  c.dec = project_torsion(c.pair.T, m.P(), m.metric());
  c.natural = is_natural(c.pair.nabla_prime, m);
  c.canonical = is_canonical(c.pair.T, m.P(), m.metric());
  c.curv = curvature_summary(m);
  c.w3 = is_w3_class(c.cls);
  c.strict_w3 = c.cls.class_label == ClassLabel::W3_strict;
  if (c.w3) {
    c.pt = parallel_torsion_analysis(m, tol);
    c.bianchi_prime_expr = bianchi_defect_prime(m, tol);
    c.thm52 = thm52_pairing(m, tol);
    c.r_prime_p_tensor =
        c.bianchi_prime_expr <= kTolInverse * std::max(1.0, c.gnorm(c.curv.R_prime));
  }
  c.swapped_nabla_P = inner(c.F, permute(c.F, kSwap01), m.metric().inverse());
  return c;
}

struct CheckEval {
  double defect = 0.0;
  double scale = 1.0;
  std::optional<CheckStatus> forced;

  CheckEval() = default;
  explicit CheckEval(double d, double s = 1.0) : defect(d), scale(s) {}
};

struct CheckDef {
  const char* id;
  CheckGate gate;
  double tol;
  const char* description;
  std::function<CheckEval(const Ctx&)> fn;
};

double indicator(bool agree) { return agree ? 0.0 : 1.0; }

const std::vector<CheckDef>& defs() {
  static const std::vector<CheckDef> v = [] {
    std::vector<CheckDef> d;
    const auto add = [&d](const char* id, CheckGate gate, double tol, const char* desc,
                          std::function<CheckEval(const Ctx&)> fn) {
      d.push_back({id, gate, tol, desc, std::move(fn)});
    };
    const auto sub = [](const Ctx& c, const Tensor& t, const char* args) {
      return substitute(t, c.m.P(), args);
    };

    // --- fundamental tensor symmetries ---
    add("f-sym-last-two", CheckGate::Always, kTolExact, "F(x,y,z) = F(x,z,y)",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.F - permute(c.F, kSwap12))}; });
    add("f-anti-p-pair", CheckGate::Always, kTolExact, "F(x,y,z) = -F(x,Py,Pz)",
        [sub](const Ctx& c) { return CheckEval{c.gnorm(c.F + sub(c, c.F, "x,Py,Pz"))}; });
    add("f-p-shift", CheckGate::Always, kTolExact, "F(x,y,Pz) = -F(x,Py,z)",
        [sub](const Ctx& c) {
          return CheckEval{c.gnorm(sub(c, c.F, "x,y,Pz") + sub(c, c.F, "x,Py,z"))};
        });
    add("nijenhuis-antisym", CheckGate::Always, kTolExact, "N(x,y) = -N(y,x)",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.N + permute(c.N, kSwap01))}; });
    add("nstar-sym", CheckGate::Always, kTolExact, "N*(x,y) = N*(y,x)",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.Nstar - permute(c.Nstar, kSwap01))}; });
    add("sigma-nstar-equiv", CheckGate::Always, kIndicator,
        "sigma F = 0 iff N* = 0 (scale-aware thresholds)", [](const Ctx& c) {
          const double scale = std::max(1.0, c.cls.norm_F);
          const bool sigma_small = c.cls.norm_cyclic_F <= c.tol * scale;
          const bool nstar_small = c.cls.norm_N_star <= 4.0 * c.m.dim() * c.tol * scale;
          return CheckEval{indicator(sigma_small == nstar_small)};
        });
    add("nabla-p-norm-nonneg", CheckGate::Always, kTolExact, "||nabla P||^2 >= 0",
        [](const Ctx& c) { return CheckEval{std::max(0.0, -c.cls.norm_nabla_P_sq)}; });

    // --- Levi-Civita invariants ---
    add("lc-metric-compatible", CheckGate::Always, kTolExact, "nabla g = 0", [](const Ctx& c) {
      return CheckEval{c.gnorm(covariant_derivative(c.m.nabla(), c.m.metric().as_tensor()))};
    });
    add("lc-torsion-free", CheckGate::Always, kTolExact, "Gamma^k_ij - Gamma^k_ji = C^k_ij",
        [](const Ctx& c) {
          const Tensor g = c.m.nabla().gamma();
          return CheckEval{frobenius_norm(g - permute(g, kSwap01) - c.m.brackets().tensor())};
        });
    add("r-antisym-01", CheckGate::Always, kTolExact, "R(x,y,z,w) = -R(y,x,z,w)",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.curv.R + permute(c.curv.R, kSwap01_4))}; });
    add("r-antisym-23", CheckGate::Always, kTolExact, "R(x,y,z,w) = -R(x,y,w,z)",
        [](const Ctx& c) {
          static constexpr std::array<int, 4> swap23{0, 1, 3, 2};
          return CheckEval{c.gnorm(c.curv.R + permute(c.curv.R, swap23))};
        });
    add("r-first-bianchi", CheckGate::Always, kTolInverse, "cyc R(x,y,z,w) = 0 for Levi-Civita",
        [](const Ctx& c) { return CheckEval{is_curvature_like(c.curv.R).bianchi}; });
    add("r-pair-symmetry", CheckGate::Always, kTolInverse, "R(x,y,z,w) = R(z,w,x,y)",
        [](const Ctx& c) {
          static constexpr std::array<int, 4> zwxy{2, 3, 0, 1};
          return CheckEval{c.gnorm(c.curv.R - permute(c.curv.R, zwxy))};
        });

    // --- natural / canonical connection ---
    add("natural-nabla-g", CheckGate::Always, kTolExact, "canonical connection has nabla' g = 0",
        [](const Ctx& c) { return CheckEval{c.natural.nabla_g}; });
    add("natural-nabla-p", CheckGate::Always, kTolExact, "canonical connection has nabla' P = 0",
        [](const Ctx& c) { return CheckEval{c.natural.nabla_P}; });
    add("natural-f-from-q", CheckGate::Always, kTolInverse, "F(x,y,z) = Q(x,y,Pz) - Q(x,Py,z)",
        [](const Ctx& c) { return CheckEval{c.natural.eq_f_from_q}; });
    add("natural-q-antisym", CheckGate::Always, kTolInverse, "Q(x,y,z) = -Q(x,z,y)",
        [](const Ctx& c) { return CheckEval{c.natural.eq_q_antisym}; });
    add("torsion-from-q", CheckGate::Always, kTolExact, "T(x,y) = Q(x,y) - Q(y,x)", [](const Ctx& c) {
      return CheckEval{c.gnorm(c.pair.T - (c.pair.Q - permute(c.pair.Q, kSwap01)))};
    });
    add("torsion-antisym", CheckGate::Always, kTolExact, "T(x,y) = -T(y,x)",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.pair.T + permute(c.pair.T, kSwap01))}; });
    add("canonical-quarter-identity", CheckGate::Always, kTolInverse,
        "T(x,y,z) + T(y,z,x) + T(Px,y,Pz) + T(y,Pz,Px) = 0",
        [](const Ctx& c) { return CheckEval{c.canonical.quarter_identity}; });
    add("canonical-p2-zero", CheckGate::Always, kTolInverse, "p2(T) = 0 for the canonical torsion",
        [](const Ctx& c) { return CheckEval{c.canonical.p2_norm}; });
    add("canonical-p4-zero", CheckGate::Always, kTolInverse, "p4(T) = 0 for the canonical torsion",
        [](const Ctx& c) { return CheckEval{c.canonical.p4_norm}; });

    // --- torsion projectors ---
    add("proj-reconstruct", CheckGate::Always, kTolInverse, "p1+p2+p3+p4 = T",
        [](const Ctx& c) { return CheckEval{c.dec.residual}; });
    add("proj-orthogonal", CheckGate::Always, kTolInverse, "<p_i, p_j> = 0 for i != j",
        [](const Ctx& c) {
          const Eigen::MatrixXd& gi = c.m.metric().inverse();
          const Tensor* ps[4] = {&c.dec.p1, &c.dec.p2, &c.dec.p3, &c.dec.p4};
          double worst = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
              worst = std::max(worst, std::abs(inner(*ps[a], *ps[b], gi)));
          return CheckEval{worst};
        });
    add("proj-idempotent", CheckGate::Always, kTolInverse, "re-projecting p_i reproduces p_i",
        [](const Ctx& c) {
          const Tensor* ps[4] = {&c.dec.p1, &c.dec.p2, &c.dec.p3, &c.dec.p4};
          double worst = 0.0;
          for (int a = 0; a < 4; ++a) {
            TorsionDecomposition again = project_torsion(*ps[a], c.m.P(), c.m.metric());
            const Tensor* qs[4] = {&again.p1, &again.p2, &again.p3, &again.p4};
            for (int b = 0; b < 4; ++b) {
              const Tensor diff = (a == b) ? (*qs[b] - *ps[a]) : *qs[b];
              worst = std::max(worst, c.gnorm(diff));
            }
          }
          return CheckEval{worst};
        });
    add("proj-antisym", CheckGate::Always, kTolExact, "each p_i is antisymmetric in (x,y)",
        [](const Ctx& c) {
          const Tensor* ps[4] = {&c.dec.p1, &c.dec.p2, &c.dec.p3, &c.dec.p4};
          double worst = 0.0;
          for (int a = 0; a < 4; ++a)
            worst = std::max(worst, c.gnorm(*ps[a] + permute(*ps[a], kSwap01)));
          return CheckEval{worst};
        });

    // --- Phi and Theorem 3.1 ---
    add("phi-from-f", CheckGate::Always, kTolInverse,
        "Phi(x,y,z) = 1/2 {-F(Pz,x,y) + F(x,y,Pz) + F(y,Pz,x)}", [](const Ctx& c) {
          return CheckEval{c.gnorm(c.Phi - phi_from_F(c.F, c.m.P()))};
        });
    add("f-from-phi", CheckGate::Always, kTolInverse, "F(x,y,z) = Phi(x,y,Pz) + Phi(x,z,Py)",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.F - f_from_phi(c.Phi, c.m.P()))}; });
    add("p3-from-nijenhuis", CheckGate::Always, kTolInverse, "4 p3(x,y,z) = -g(N(x,y),z)",
        [](const Ctx& c) { return CheckEval{c.gnorm(4.0 * c.dec.p3 + c.N)}; });
    add("p3-from-phi", CheckGate::Always, kTolInverse,
        "4 p3(x,y,z) = -2 {Phi(z,Px,Py) + Phi(z,x,y)}", [sub](const Ctx& c) {
          const Tensor rhs =
              -2.0 * (sub(c, c.Phi, "z,Px,Py") + sub(c, c.Phi, "z,x,y"));
          return CheckEval{c.gnorm(4.0 * c.dec.p3 - rhs)};
        });
    add("p1-from-phi", CheckGate::Always, kTolInverse, "4 p1 equals its Phi expression",
        [sub](const Ctx& c) {
          const Tensor rhs = -1.0 * c.Phi + sub(c, c.Phi, "y,z,x") - sub(c, c.Phi, "x,Py,Pz") -
                             sub(c, c.Phi, "y,Pz,Px") + 2.0 * sub(c, c.Phi, "z,Px,Py");
          return CheckEval{c.gnorm(4.0 * c.dec.p1 - rhs)};
        });
    add("torsion-from-phi", CheckGate::Always, kTolInverse, "T agrees with its Phi formula",
        [](const Ctx& c) {
          return CheckEval{c.gnorm(c.pair.T - torsion_from_phi(c.Phi, c.m.P()))};
        });

    // --- curvature deformation (universal) ---
    add("rprime-deformation", CheckGate::Always, kTolInverse, "R' equals the deformation formula",
        [](const Ctx& c) {
          return CheckEval{c.gnorm(c.curv.R_prime - rprime_deformation(c.m))};
        });
    add("rprime-antisym", CheckGate::Always, kTolInverse, "R' has both curvature antisymmetries",
        [](const Ctx& c) {
          const CurvatureLikeDefects d = is_curvature_like(c.curv.R_prime);
          return CheckEval{std::max(d.antisym_01, d.antisym_23)};
        });
    add("rprime-p-invariant", CheckGate::Always, kTolInverse, "R'(x,y,Pz,Pw) = R'(x,y,z,w)",
        [](const Ctx& c) {
          return CheckEval{is_p_tensor(c.curv.R_prime, c.m.P()).p_invariance};
        });
    add("rprime-bianchi-route", CheckGate::Always, kTolInverse,
        "cyc R' equals cyc {(nabla'_x T)(y,z,w) + T(T(x,y),z,w)}", [](const Ctx& c) {
          const Tensor nabla_t = covariant_derivative(c.pair.nabla_prime, c.pair.T);
          const int n = c.m.dim();
          Tensor tt(4, n);
          for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
              for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w) {
                  double acc = 0.0;
                  for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                      acc += c.pair.T(x, y, a) * c.m.metric().inverse()(a, b) * c.pair.T(b, z, w);
                  tt(x, y, z, w) = acc;
                }
          static constexpr std::array<int, 4> yzx{1, 2, 0, 3};
          static constexpr std::array<int, 4> zxy{2, 0, 1, 3};
          const Tensor lhs_cyc = [&] {
            const Tensor a = nabla_t + tt;
            return a + permute(a, yzx) + permute(a, zxy);
          }();
          const Tensor r_cyc =
              c.curv.R_prime + permute(c.curv.R_prime, yzx) + permute(c.curv.R_prime, zxy);
          return CheckEval{c.gnorm(r_cyc - lhs_cyc)};
        });
    add("hayden-q", CheckGate::Always, kTolInverse, "Hayden formula reproduces Q",
        [](const Ctx& c) { return CheckEval{c.gnorm(hayden_q_from_T(c.pair.T) - c.pair.Q)}; });
    add("parallel-simultaneity", CheckGate::Always, kIndicator,
        "nabla' T, nabla' Q, nabla' F vanish simultaneously or not at all", [](const Ctx& c) {
          const double scale = kTolInverse * std::max(1.0, c.gnorm(c.pair.T));
          Tensor f = compute_F(c.m);
          const bool t0 = c.gnorm(covariant_derivative(c.pair.nabla_prime, c.pair.T)) <= scale;
          const bool q0 = c.gnorm(covariant_derivative(c.pair.nabla_prime, c.pair.Q)) <= scale;
          const bool f0 = c.gnorm(covariant_derivative(c.pair.nabla_prime, f)) <= scale;
          return CheckEval{indicator(t0 == q0 && q0 == f0)};
        });

    // --- W3-only identities ---
    add("nabla-p-swap-contraction", CheckGate::W3, kTolScalar,
        "||nabla P||^2 = -2 g^{ij}g^{ks} g((nab_i P)e_k,(nab_s P)e_j)", [](const Ctx& c) {
          return CheckEval{std::abs(c.cls.norm_nabla_P_sq + 2.0 * c.swapped_nabla_P),
                           std::max(1.0, c.cls.norm_nabla_P_sq)};
        });
    add("nabla-p-tau-relation", CheckGate::W3, kTolScalar, "||nabla P||^2 = 2 (tau - tau**)",
        [](const Ctx& c) {
          return CheckEval{
              std::abs(c.cls.norm_nabla_P_sq - 2.0 * (c.curv.tau - c.curv.tau_star_star)),
              std::max(1.0, c.cls.norm_nabla_P_sq)};
        });
    add("w3-phi-two-term", CheckGate::W3, kTolInverse, "Phi(x,y,z) = -F(x,Py,z) - F(y,Px,z)",
        [sub](const Ctx& c) {
          const Tensor rhs = -1.0 * sub(c, c.F, "x,Py,z") - sub(c, c.F, "y,Px,z");
          return CheckEval{c.gnorm(c.Phi - rhs)};
        });
    add("w3-phi-compact", CheckGate::W3, kTolInverse, "Phi(x,y,z) = -F(Pz,x,y)", [sub](const Ctx& c) {
      return CheckEval{c.gnorm(c.Phi + sub(c, c.F, "Pz,x,y"))};
    });
    add("w3-p1-zero", CheckGate::W3, kTolInverse, "p1 = 0 for the canonical torsion",
        [](const Ctx& c) { return CheckEval{c.gnorm(c.dec.p1)}; });
    add("canonical-route-agreement", CheckGate::W3, kTolInverse,
        "existence formula and the W3 route give the same Q", [](const Ctx& c) {
          return CheckEval{
              c.gnorm(c.pair.Q - q_from_F(c.F, c.m.P(), c.m.metric(), c.tol))};
        });
    add("w3-torsion-p-commute", CheckGate::W3, kTolInverse, "T(Px,y) = -P T(x,y)", [sub](const Ctx& c) {
      // lowered: T(Px,y,z) = -T(x,y,Pz)
      return CheckEval{c.gnorm(sub(c, c.pair.T, "Px,y,z") + sub(c, c.pair.T, "x,y,Pz"))};
    });
    add("w3-torsion-p-swap", CheckGate::W3, kTolInverse, "T(Px,y,z) = T(x,Py,z)", [sub](const Ctx& c) {
      return CheckEval{c.gnorm(sub(c, c.pair.T, "Px,y,z") - sub(c, c.pair.T, "x,Py,z"))};
    });
    add("w3-torsion-p-flip", CheckGate::W3, kTolInverse, "T(x,Py,z) = -T(x,y,Pz)",
        [sub](const Ctx& c) {
          return CheckEval{c.gnorm(sub(c, c.pair.T, "x,Py,z") + sub(c, c.pair.T, "x,y,Pz"))};
        });
    add("w3-torsion-is-p3", CheckGate::W3, kTolInverse, "T = p3", [](const Ctx& c) {
      return CheckEval{c.gnorm(c.pair.T - c.dec.p3)};
    });
    add("w3-torsion-from-f", CheckGate::W3, kTolInverse, "T(x,y,z) = -1/2 {F(x,Py,z) + F(Px,y,z)}",
        [](const Ctx& c) {
          return CheckEval{
              c.gnorm(c.pair.T - torsion_from_F(c.F, c.m.P(), c.m.metric(), c.tol))};
        });
    add("w3-f-from-torsion", CheckGate::W3, kTolInverse, "F(x,y,z) = T(x,z,Py) - T(x,Py,z)",
        [sub](const Ctx& c) {
          const Tensor rhs = sub(c, c.pair.T, "x,z,Py") - sub(c, c.pair.T, "x,Py,z");
          return CheckEval{c.gnorm(c.F - rhs)};
        });
    add("w3-q-antisym-relation", CheckGate::W3, kTolInverse, "Q(x,y,z) = -Q(y,x,z) - F(Pz,x,y)",
        [sub](const Ctx& c) {
          return CheckEval{c.gnorm(c.pair.Q + permute(c.pair.Q, kSwap01) + sub(c, c.F, "Pz,x,y"))};
        });
    add("q-trace-zero", CheckGate::W3, kTolInverse, "g^{ij} Q(e_i,e_j,z) = 0", [](const Ctx& c) {
      return CheckEval{c.gnorm(contract(c.pair.Q, c.m.metric().inverse(), 0, 1))};
    });
    add("nabla-q-trace-zero", CheckGate::W3, kTolInverse, "g^{ij} (nabla_x Q)(e_i,e_j,z) = 0",
        [](const Ctx& c) {
          const Tensor nq = covariant_derivative(c.m.nabla(), c.pair.Q);
          return CheckEval{c.gnorm(contract(nq, c.m.metric().inverse(), 1, 2))};
        });
    add("ricci-deformation", CheckGate::W3, kTolInverse, "rho' follows the contracted deformation formula",
        [](const Ctx& c) {
          const int n = c.m.dim();
          const Eigen::MatrixXd& gi = c.m.metric().inverse();
          const Tensor nq = covariant_derivative(c.m.nabla(), c.pair.Q);
          Tensor rhs(2, n);
          for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
              double acc = c.curv.rho(y, z);
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                  acc += gi(i, j) * nq(i, y, z, j);
                  double qq = 0.0;
                  for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                      qq += c.pair.Q(y, j, a) * gi(a, b) * c.pair.Q(i, z, b);
                  acc += gi(i, j) * qq;
                }
              rhs(y, z) = acc;
            }
          return CheckEval{c.gnorm(c.curv.rho_prime - rhs)};
        });
    add("tau-q-contraction", CheckGate::W3, kTolScalar,
        "tau' = tau + g^{ij}g^{ks} g(Q(e_k,e_j),Q(e_i,e_s))", [](const Ctx& c) {
          const double qq = inner(c.pair.Q, permute(c.pair.Q, kSwap01), c.m.metric().inverse());
          return CheckEval{std::abs(c.curv.tau_prime - c.curv.tau - qq),
                           std::max(1.0, std::abs(c.curv.tau))};
        });
    add("q-contraction-eighth-norm", CheckGate::W3, kTolScalar, "that contraction equals 1/8 ||nabla P||^2",
        [](const Ctx& c) {
          const double qq = inner(c.pair.Q, permute(c.pair.Q, kSwap01), c.m.metric().inverse());
          return CheckEval{std::abs(qq - 0.125 * c.cls.norm_nabla_P_sq),
                           std::max(1.0, c.cls.norm_nabla_P_sq)};
        });
    add("tau-eighth-norm", CheckGate::W3, kTolScalar, "tau' = tau + 1/8 ||nabla P||^2",
        [](const Ctx& c) {
          return CheckEval{
              std::abs(c.curv.tau_prime - c.curv.tau - 0.125 * c.cls.norm_nabla_P_sq),
              std::max(1.0, std::abs(c.curv.tau))};
        });
    add("tau-equal-iff-w0", CheckGate::W3, kIndicator,
        "tau' = tau iff the manifold is a Riemannian P-manifold", [](const Ctx& c) {
          const bool taus_equal = std::abs(c.curv.tau_prime - c.curv.tau) <=
                                  kTolScalar * std::max(1.0, std::abs(c.curv.tau));
          const bool w0 = c.cls.norm_nabla_P_sq <= kTolScalar;
          return CheckEval{indicator(taus_equal == w0)};
        });
    add("torsion-contraction-half-norm", CheckGate::W3, kTolScalar,
        "g^{ij}g^{ks} g((nab_{Pe_s}P)e_j, T(e_i,e_k)) = 1/2 ||nabla P||^2", [](const Ctx& c) {
          return CheckEval{c.pt.contraction_611_defect, std::max(1.0, c.cls.norm_nabla_P_sq)};
        });

    // --- strict W3 (non-degenerate) facts ---
    add("w3-p3-nonzero", CheckGate::StrictW3, kIndicator, "p3 != 0 on strict W3",
        [](const Ctx& c) {
          return CheckEval{indicator(c.gnorm(c.dec.p3) > kNonzeroMargin)};
        });
    add("w3-torsion-nonparallel", CheckGate::StrictW3, kIndicator,
        "strict W3 forces non-parallel canonical torsion", [](const Ctx& c) {
          CheckEval e{indicator(c.pt.norm_nabla_prime_T > kNonzeroMargin * c.pt.norm_T)};
          if (c.pt.norm_T < 1e-8) e.forced = CheckStatus::Warn;
          return e;
        });
    add("r-not-p-tensor", CheckGate::StrictW3, kIndicator,
        "R is not a Riemannian P-tensor on strict W3", [](const Ctx& c) {
          const double defect = is_p_tensor(c.curv.R, c.m.P()).p_invariance;
          return CheckEval{indicator(defect > kNonzeroMargin * std::max(1.0, c.gnorm(c.curv.R)))};
        });

    // --- parallel-torsion consequences ---
    add("parallel-curvature-formula", CheckGate::ParallelT, kTolInverse, "R' follows the parallel-torsion formula",
        [](const Ctx& c) { return CheckEval{c.pt.r_prime_via_65_defect}; });
    add("parallel-ricci-formula", CheckGate::ParallelT, kTolInverse, "rho' follows the parallel-torsion formula",
        [](const Ctx& c) { return CheckEval{c.pt.ricci_via_68_defect}; });
    add("parallel-q-norm-quarter", CheckGate::ParallelT, kTolScalar, "||Q||^2 = 1/4 ||nabla P||^2",
        [](const Ctx& c) {
          return CheckEval{c.pt.q_contraction_610_defect, std::max(1.0, c.pt.nabla_P_sq)};
        });
    add("parallel-tau-quarter", CheckGate::ParallelT, kTolScalar, "tau' = tau + 1/4 ||nabla P||^2",
        [](const Ctx& c) {
          return CheckEval{c.pt.tau_relation_quarter, std::max(1.0, std::abs(c.curv.tau))};
        });
    add("parallel-forces-w0", CheckGate::ParallelT, kTolScalar,
        "parallel torsion on W3 forces ||nabla P||^2 = 0",
        [](const Ctx& c) { return CheckEval{c.pt.nabla_P_sq}; });

    // --- P-tensor hypothesis ---
    add("p-tensor-pairing", CheckGate::PTensorPrime, 1e-8,
        "P-tensor curvature implies the nabla-P pairing vanishes",
        [](const Ctx& c) { return CheckEval{c.thm52}; });
    return d;
  }();
  return v;
}

bool gate_met(CheckGate gate, const Ctx& c) {
  switch (gate) {
    case CheckGate::Always: return true;
    case CheckGate::W3: return c.w3;
    case CheckGate::StrictW3: return c.strict_w3;
    case CheckGate::ParallelT: return c.w3 && c.pt.torsion_parallel;
    case CheckGate::PTensorPrime: return c.w3 && c.r_prime_p_tensor;
  }
  return false;
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Warn: return "WARN";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> info = [] {
    std::vector<CheckInfo> v;
    for (const auto& d : defs()) v.push_back({d.id, d.gate, d.tol, d.description});
    return v;
  }();
  return info;
}

bool VerificationReport::any_fail() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return true;
  return false;
}

VerificationReport run_verification(const FrameManifold& m, double tol) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  Ctx ctx = build_context(m, tol);
  const auto t1 = clock::now();

  VerificationReport r;
  r.manifold = m.name();
  r.classification = ctx.cls;
  r.tau = ctx.curv.tau;
  r.tau_prime = ctx.curv.tau_prime;
  r.tau_star = ctx.curv.tau_star;
  r.tau_star_star = ctx.curv.tau_star_star;
  r.norm_nabla_P_sq = ctx.cls.norm_nabla_P_sq;

  for (const auto& d : defs()) {
    CheckResult cr;
    cr.id = d.id;
    cr.tol = d.tol;
    if (!gate_met(d.gate, ctx)) {
      cr.defect = 0.0;
      cr.status = CheckStatus::Skipped;
    } else {
      const CheckEval e = d.fn(ctx);
      cr.defect = e.defect;
      cr.tol = d.tol * e.scale;
      if (e.forced) {
        cr.status = *e.forced;
      } else {
        cr.status = (e.defect <= cr.tol) ? CheckStatus::Pass : CheckStatus::Fail;
      }
    }
    r.checks.push_back(std::move(cr));
  }
  const auto t2 = clock::now();
  r.timings.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.timings.checks_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return r;
}

std::string report_to_json(const VerificationReport& r, bool include_timing) {
  nlohmann::json j;
  j["manifold"] = r.manifold;
  j["classification"] = {
      {"class_label", to_string(r.classification.class_label)},
      {"n_star_consistent", r.classification.n_star_consistent},
      {"norm_F", r.classification.norm_F},
      {"norm_N", r.classification.norm_N},
      {"norm_N_star", r.classification.norm_N_star},
      {"norm_cyclic_F", r.classification.norm_cyclic_F},
      {"norm_nabla_P_sq", r.classification.norm_nabla_P_sq},
      {"tolerance_used", r.classification.tolerance_used},
  };
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"defect", c.defect},
                      {"id", c.id},
                      {"status", to_string(c.status)},
                      {"tol", c.tol}});
  }
  j["checks"] = std::move(checks);
  j["scalars"] = {
      {"norm_nabla_P_sq", r.norm_nabla_P_sq}, {"tau", r.tau},
      {"tau_prime", r.tau_prime},             {"tau_star", r.tau_star},
      {"tau_star_star", r.tau_star_star},
  };
  j["status"] = r.any_fail() ? "FAIL" : "PASS";
  if (include_timing)
    j["timing_ms"] = {{"build", r.timings.build_ms}, {"checks", r.timings.checks_ms}};
  return j.dump(2) + "\n";
}

std::string report_to_text(const VerificationReport& r, bool include_timing) {
  std::ostringstream os;
  char buf[192];
  os << "manifold: " << (r.manifold.empty() ? "(unnamed)" : r.manifold) << "\n";
  os << "class:    " << to_string(r.classification.class_label) << "  (|F|=";
  std::snprintf(buf, sizeof(buf), "%.3e", r.classification.norm_F);
  os << buf << ", |sigma F|=";
  std::snprintf(buf, sizeof(buf), "%.3e", r.classification.norm_cyclic_F);
  os << buf << ", |N*|=";
  std::snprintf(buf, sizeof(buf), "%.3e", r.classification.norm_N_star);
  os << buf << ")\n";
  std::snprintf(buf, sizeof(buf),
                "scalars:  tau=%.12g tau'=%.12g tau*=%.12g tau**=%.12g |nabla P|^2=%.12g\n",
                r.tau, r.tau_prime, r.tau_star, r.tau_star_star, r.norm_nabla_P_sq);
  os << buf;
  for (const auto& c : r.checks) {
    std::snprintf(buf, sizeof(buf), "%-8s", to_string(c.status));
    os << buf << c.id;
    for (std::size_t k = c.id.size(); k < 24; ++k) os << ' ';
    std::snprintf(buf, sizeof(buf), " defect=%.3e tol=%.3e\n", c.defect, c.tol);
    os << buf;
  }
  if (include_timing) {
    std::snprintf(buf, sizeof(buf), "timing:   build=%.2fms checks=%.2fms\n",
                  r.timings.build_ms, r.timings.checks_ms);
    os << buf;
  }
  os << "overall:  " << (r.any_fail() ? "FAIL" : "PASS") << "\n";
  return os.str();
}

}  // namespace apm
