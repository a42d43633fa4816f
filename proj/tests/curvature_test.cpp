#include <doctest.h>

#include <array>

#include "apm/apclass.hpp"
#include "apm/curvature.hpp"
#include "apm/errors.hpp"
#include "apm/search.hpp"
#include "support.hpp"

using namespace apm;
using test::e0;
using test::gnorm;
using test::w3_catalog;

namespace {

/// Invariant frame with a single central bracket [e0,e1] = e3 and the
/// grading-aligned product structure. Strict W3, and the canonical
/// connection is identically zero in this frame, so its torsion is exactly
/// parallel while nabla P is not zero.
FrameManifold parallel_torsion_w3() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(4, 4);
  p(2, 2) = p(3, 3) = -1.0;
  return FrameManifold::validate(4, {{0, 1, 3, 1.0}}, Eigen::MatrixXd::Identity(4, 4), p,
                                 "parallel-torsion-w3");
}

}  // namespace

TEST_CASE("curvature_summary on E0 is identically zero") {
  const CurvatureSummary s = curvature_summary(e0());
  CHECK(s.R.max_abs() == 0.0);
  CHECK(s.R_prime.max_abs() == 0.0);
  CHECK(s.tau == 0.0);
  CHECK(s.tau_prime == 0.0);
  CHECK(s.tau_star == 0.0);
  CHECK(s.tau_star_star == 0.0);
  CHECK(s.norm_nabla_P_sq == 0.0);
}

TEST_CASE("scalar curvature relations on W3 fixtures") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const FrameManifold m = w3_catalog(seed);
    const CurvatureSummary s = curvature_summary(m);
    CHECK(std::abs(s.tau_prime - s.tau - 0.125 * s.norm_nabla_P_sq) <=
          1e-9 * std::max(1.0, std::abs(s.tau)));
    CHECK(std::abs(s.norm_nabla_P_sq - 2.0 * (s.tau - s.tau_star_star)) <=
          1e-9 * std::max(1.0, s.norm_nabla_P_sq));
  }
}

TEST_CASE("rho is the (0,3)-contraction of R") {
  const FrameManifold m = w3_catalog(1);
  const CurvatureSummary s = curvature_summary(m);
  const Tensor rho = contract(s.R, m.metric().inverse(), 0, 3);
  CHECK(gnorm(rho - s.rho, m) <= 1e-14);
  // direct quadruple-loop oracle
  const int n = m.dim();
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += m.metric().inverse()(i, j) * s.R(i, y, z, j);
      CHECK(s.rho(y, z) == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("rprime_deformation agrees with the direct R' everywhere") {
  CHECK(rprime_deformation(e0()).max_abs() == 0.0);
  for (std::uint64_t seed : {0, 5}) {
    for (const FrameManifold& m : {w3_catalog(seed), random_valid_manifold(4, seed)}) {
      const CurvatureSummary s = curvature_summary(m);
      CHECK(gnorm(rprime_deformation(m) - s.R_prime, m) <= 1e-10);
    }
  }
}

TEST_CASE("Ricci and scalar contractions of the deformation identity on W3") {
  for (std::uint64_t seed : {0, 3}) {
    const FrameManifold m = w3_catalog(seed);
    const CurvatureSummary s = curvature_summary(m);
    const ConnectionPair pair = canonical_connection(m);
    const Eigen::MatrixXd& gi = m.metric().inverse();
    const int n = m.dim();
    const Tensor nq = covariant_derivative(m.nabla(), pair.Q);
    // rho'(y,z) = rho(y,z) + g^{ij} (nabla_i Q)(y,z,e_j) + g^{ij} g(Q(y,e_j),Q(e_i,z))
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        double acc = s.rho(y, z);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            acc += gi(i, j) * nq(i, y, z, j);
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                acc += gi(i, j) * pair.Q(y, j, a) * gi(a, b) * pair.Q(i, z, b);
          }
        CHECK(s.rho_prime(y, z) == doctest::Approx(acc).epsilon(1e-10));
      }
    // tau' = tau + <Q, Q^T> and that contraction equals 1/8 ||nabla P||^2
    static constexpr std::array<int, 3> swap01{1, 0, 2};
    const double qq = inner(pair.Q, permute(pair.Q, swap01), gi);
    CHECK(std::abs(s.tau_prime - s.tau - qq) <= 1e-9 * std::max(1.0, std::abs(s.tau)));
    CHECK(std::abs(qq - 0.125 * s.norm_nabla_P_sq) <= 1e-9 * std::max(1.0, s.norm_nabla_P_sq));
    // trace identities of Q and nabla Q
    CHECK(gnorm(contract(pair.Q, gi, 0, 1), m) <= 1e-10);
    CHECK(gnorm(contract(covariant_derivative(m.nabla(), pair.Q), gi, 1, 2), m) <= 1e-10);
  }
}

TEST_CASE("is_curvature_like and is_p_tensor classify the canonical tensors") {
  const FrameManifold m = test::load_fixture("w3x.json");
  const CurvatureSummary s = curvature_summary(m);

  const CurvatureLikeDefects r_ok = is_curvature_like(s.R);
  CHECK(r_ok.curvature_like(1e-10));

  const CurvatureLikeDefects rp = is_curvature_like(s.R_prime);
  CHECK(rp.antisym_01 <= 1e-10);
  CHECK(rp.antisym_23 <= 1e-10);
  CHECK(rp.bianchi > 1e-3);  // generic strict-W3: R' fails the first Bianchi identity

  const PTensorDefects pd = is_p_tensor(s.R_prime, m.P());
  CHECK(pd.p_invariance <= 1e-10);
  CHECK_FALSE(pd.p_tensor(1e-10));  // blocked only by the Bianchi defect

  CHECK(is_p_tensor(Tensor(4, 4), m.P()).p_tensor(0.0));
  CHECK_THROWS_AS(is_curvature_like(Tensor(3, 4)), std::invalid_argument);
}

TEST_CASE("bianchi_defect_prime equals the first-Bianchi defect of R' (Lemma 5.1)") {
  CHECK(bianchi_defect_prime(e0(), 1e-9) == 0.0);
  for (std::uint64_t seed : {0, 2}) {
    const FrameManifold m = w3_catalog(seed);
    const double expr = bianchi_defect_prime(m, 1e-9);
    const CurvatureSummary s = curvature_summary(m);
    static constexpr std::array<int, 4> yzx{1, 2, 0, 3};
    static constexpr std::array<int, 4> zxy{2, 0, 1, 3};
    const double cyc = gnorm(s.R_prime + permute(s.R_prime, yzx) + permute(s.R_prime, zxy), m);
    CHECK(std::abs(expr - cyc) <= 1e-10 * std::max(1.0, cyc));
  }
  CHECK_THROWS_AS(bianchi_defect_prime(random_valid_manifold(4, 9), 1e-9), ValidationError);
}

TEST_CASE("the first-Bianchi obstruction scales continuously in the bracket scale") {
  // family (a*C, g, P): evaluate at a in {1/2, 1, 2}
  std::vector<double> defects;
  for (double a : {0.5, 1.0, 2.0}) {
    std::vector<BracketEntry> entries{{0, 1, 2, a}, {1, 2, 0, a}, {0, 2, 1, -a}};
    RngStream rng(0);
    const Eigen::MatrixXd p = random_product_structure(4, rng);
    const FrameManifold m =
        FrameManifold::validate(4, entries, Eigen::MatrixXd::Identity(4, 4), p);
    defects.push_back(bianchi_defect_prime(m, 1e-9));
  }
  CHECK(defects[0] > 0.0);
  // cubic scaling in the bracket strength (Gamma ~ a, so T T ~ a^2, nabla T ~ a^2, cyc ~ a... )
  CHECK(defects[1] > defects[0]);
  CHECK(defects[2] > defects[1]);
  // continuity sanity: ratios stay bounded
  CHECK(defects[2] / defects[0] < 100.0);
}

TEST_CASE("thm52_pairing is conditional: zero whenever R' is a P-tensor") {
  CHECK(thm52_pairing(e0(), 1e-9) == 0.0);
  CHECK(thm52_pairing(test::w0_curved(), 1e-9) <= 1e-12);  // nabla P = 0 makes it exact
  const FrameManifold m = w3_catalog(0);
  // hypothesis unmet here: value is reported, no assertion beyond finiteness
  const double v = thm52_pairing(m, 1e-9);
  CHECK(v >= 0.0);
  CHECK(std::isfinite(v));
  CHECK_THROWS_AS(thm52_pairing(random_valid_manifold(4, 21), 1e-9), ValidationError);
}

TEST_CASE("parallel_torsion_analysis on E0 and the curved W0 product") {
  for (const FrameManifold& m : {e0(), test::w0_curved()}) {
    const ParallelTorsionReport r = parallel_torsion_analysis(m, 1e-9);
    CHECK(r.norm_nabla_prime_T <= 1e-12);
    CHECK(r.norm_nabla_prime_Q <= 1e-12);
    CHECK(r.norm_nabla_prime_F <= 1e-12);
    CHECK(r.torsion_parallel);
    CHECK(r.nabla_P_sq <= 1e-12);
    CHECK(r.r_prime_via_65_defect <= 1e-10);
    CHECK(r.ricci_via_68_defect <= 1e-10);
    CHECK(r.q_contraction_610_defect <= 1e-10);
    CHECK(r.tau_relation_quarter <= 1e-9);
  }
}

TEST_CASE("strict-W3 catalog fixtures have decisively non-parallel torsion") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const FrameManifold m = w3_catalog(seed);
    const ParallelTorsionReport r = parallel_torsion_analysis(m, 1e-9);
    CHECK(r.norm_nabla_prime_T > 1e-6 * r.norm_T);
    CHECK_FALSE(r.torsion_parallel);
    // the three parallelism norms vanish simultaneously or not at all
    const bool t0 = r.norm_nabla_prime_T <= 1e-10 * std::max(1.0, r.norm_T);
    const bool q0 = r.norm_nabla_prime_Q <= 1e-10 * std::max(1.0, r.norm_T);
    const bool f0 = r.norm_nabla_prime_F <= 1e-10 * std::max(1.0, r.norm_T);
    CHECK(t0 == q0);
    CHECK(q0 == f0);
  }
  CHECK_THROWS_AS(parallel_torsion_analysis(random_valid_manifold(4, 33), 1e-9),
                  ValidationError);
}

TEST_CASE("strict-W3 frame with exactly parallel canonical torsion") {
  // This example pins down behavior the W3 theory does not anticipate: the
  // canonical connection vanishes identically in the frame, so T is parallel
  // while nabla P is not zero. tau' - tau matches the 1/8-norm relation, and
  // the quarter-norm variant fails; the report must say exactly that.
  const FrameManifold m = parallel_torsion_w3();
  const ClassificationReport cls = classify(m, 1e-9);
  CHECK(cls.class_label == ClassLabel::W3_strict);
  CHECK(cls.norm_nabla_P_sq == doctest::Approx(4.0));

  const ConnectionPair pair = canonical_connection(m);
  CHECK(pair.nabla_prime.gamma().max_abs() <= 1e-15);
  CHECK(gnorm(pair.T, m) == doctest::Approx(std::sqrt(2.0)));

  const ParallelTorsionReport r = parallel_torsion_analysis(m, 1e-9);
  CHECK(r.torsion_parallel);
  CHECK(r.norm_nabla_prime_T == 0.0);
  CHECK(r.norm_nabla_prime_Q == 0.0);
  CHECK(r.norm_nabla_prime_F == 0.0);
  // the flat-connection curvature identities of the parallel case hold
  CHECK(r.r_prime_via_65_defect <= 1e-10);
  CHECK(r.ricci_via_68_defect <= 1e-10);
  CHECK(r.contraction_611_defect <= 1e-9);
  // but the quarter-norm contraction does not: ||Q||^2 = 3/8 ||nabla P||^2 here
  CHECK(r.q_contraction_610_defect == doctest::Approx(0.5));
  CHECK(r.tau_relation_quarter == doctest::Approx(0.5));

  const CurvatureSummary s = curvature_summary(m);
  CHECK(s.tau_prime == doctest::Approx(0.0));
  CHECK(s.tau == doctest::Approx(-0.5));
  // the eighth-norm relation still holds
  CHECK(std::abs(s.tau_prime - s.tau - 0.125 * s.norm_nabla_P_sq) <= 1e-12);
}
