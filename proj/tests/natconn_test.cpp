#include <doctest.h>

#include <array>
#include <random>

#include "apm/apclass.hpp"
#include "apm/errors.hpp"
#include "apm/natconn.hpp"
#include "apm/search.hpp"
#include "support.hpp"

using namespace apm;
using test::e0;
using test::gnorm;
using test::w3_catalog;

namespace {

constexpr std::array<int, 3> kSwap01{1, 0, 2};

Tensor random_torsion_like(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Tensor t(3, dim);
  for (std::size_t i = 0; i < t.size(); ++i) t.flat(i) = dist(rng);
  Tensor anti = t - permute(t, kSwap01);
  return anti;
}

}  // namespace

TEST_CASE("phi_direct vanishes on E0 and matches both F-relations on W3 manifolds") {
  CHECK(phi_direct(e0()).max_abs() == 0.0);
  for (std::uint64_t seed : {0, 3}) {
    const FrameManifold m = w3_catalog(seed);
    const Tensor phi = phi_direct(m);
    const Tensor f = compute_F(m);
    CHECK(gnorm(phi - phi_from_F(f, m.P()), m) <= 1e-10);
    // Phi(x,y,z) = -F(Pz,x,y) on W3
    CHECK(gnorm(phi + substitute(f, m.P(), "Pz,x,y"), m) <= 1e-10);
    // Phi(x,y,z) = -F(x,Py,z) - F(y,Px,z) on W3
    const Tensor rhs = -1.0 * substitute(f, m.P(), "x,Py,z") - substitute(f, m.P(), "y,Px,z");
    CHECK(gnorm(phi - rhs, m) <= 1e-10);
  }
}

TEST_CASE("phi_from_F and f_from_phi are mutually inverse on symmetrized data") {
  CHECK(phi_from_F(Tensor(3, 4), Eigen::MatrixXd::Identity(4, 4)).max_abs() == 0.0);
  CHECK(f_from_phi(Tensor(3, 4), Eigen::MatrixXd::Identity(4, 4)).max_abs() == 0.0);
  for (std::uint64_t seed : {1, 5}) {
    // random valid manifolds provide generic F with the fundamental symmetries
    const FrameManifold m = random_valid_manifold(4, seed);
    const Tensor f = compute_F(m);
    CHECK(gnorm(f_from_phi(phi_from_F(f, m.P()), m.P()) - f, m) <= 1e-12);
    const Tensor phi = phi_direct(m);
    CHECK(gnorm(f_from_phi(phi, m.P()) - f, m) <= 1e-10);
  }
}

TEST_CASE("f_from_phi is linear") {
  std::mt19937 rng(17);
  std::normal_distribution<double> dist;
  Tensor a(3, 4), b(3, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.flat(i) = dist(rng);
    b.flat(i) = dist(rng);
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(4, 4);
  p(2, 2) = p(3, 3) = -1.0;
  const Tensor lhs = f_from_phi(2.0 * a + (-0.5) * b, p);
  const Tensor rhs = 2.0 * f_from_phi(a, p) + (-0.5) * f_from_phi(b, p);
  CHECK((lhs - rhs).max_abs() <= 1e-12);
}

TEST_CASE("project_torsion: zero input, idempotency, orthogonality, reconstruction") {
  const FrameManifold m = w3_catalog(0);
  const TorsionDecomposition z = project_torsion(Tensor(3, 4), m.P(), m.metric());
  CHECK(z.p1.max_abs() == 0.0);
  CHECK(z.p4.max_abs() == 0.0);
  CHECK(z.residual == 0.0);

  for (unsigned seed = 0; seed < 20; ++seed) {
    const Tensor t = random_torsion_like(4, seed);
    const TorsionDecomposition d = project_torsion(t, m.P(), m.metric());
    CHECK(d.residual <= 1e-10);
    const Tensor* ps[4] = {&d.p1, &d.p2, &d.p3, &d.p4};
    for (int a = 0; a < 4; ++a) {
      CHECK(gnorm(*ps[a] + permute(*ps[a], kSwap01), m) <= 1e-12);
      const TorsionDecomposition again = project_torsion(*ps[a], m.P(), m.metric());
      const Tensor* qs[4] = {&again.p1, &again.p2, &again.p3, &again.p4};
      for (int b = 0; b < 4; ++b) {
        if (a == b) {
          CHECK(gnorm(*qs[b] - *ps[a], m) <= 1e-10);
        } else {
          CHECK(gnorm(*qs[b], m) <= 1e-10);
        }
      }
      for (int b = a + 1; b < 4; ++b)
        CHECK(std::abs(inner(*ps[a], *ps[b], m.metric().inverse())) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(project_torsion(Tensor(2, 4), m.P(), m.metric()), ValidationError);
  Tensor not_anti(3, 4);
  not_anti(0, 0, 1) = 1.0;
  CHECK_THROWS_AS(project_torsion(not_anti, m.P(), m.metric()), ValidationError);
}

TEST_CASE("is_natural: Levi-Civita is natural only where nabla P = 0") {
  const FrameManifold flat = e0();
  CHECK(is_natural(flat.nabla(), flat).natural(1e-12));

  const FrameManifold m = w3_catalog(1);
  const NaturalDefects lc = is_natural(m.nabla(), m);
  CHECK_FALSE(lc.natural(1e-12));
  CHECK(lc.nabla_P > 1e-3);
  CHECK(lc.nabla_g <= 1e-12);

  const ConnectionPair pair = canonical_connection(m);
  const NaturalDefects cd = is_natural(pair.nabla_prime, m);
  CHECK(cd.nabla_g <= 1e-12);
  CHECK(cd.nabla_P <= 1e-12);
  CHECK(cd.eq_f_from_q <= 1e-10);
  CHECK(cd.eq_q_antisym <= 1e-10);
  // the two characterizations agree
  CHECK(cd.natural(1e-10) == (cd.eq_f_from_q <= 1e-10 && cd.eq_q_antisym <= 1e-10));
}

TEST_CASE("is_canonical: the quarter identity and p2 = p4 = 0 agree") {
  const FrameManifold m = w3_catalog(2);
  CHECK(is_canonical(Tensor(3, 4), m.P(), m.metric()).canonical(1e-12));

  const ConnectionPair pair = canonical_connection(m);
  const CanonicalDefects good = is_canonical(pair.T, m.P(), m.metric());
  CHECK(good.quarter_identity <= 1e-10);
  CHECK(good.p2_norm <= 1e-10);
  CHECK(good.p4_norm <= 1e-10);

  // inject a pure p2 component: both criteria must flag it together
  for (unsigned seed = 0; seed < 8; ++seed) {
    const Tensor t = random_torsion_like(4, 100 + seed);
    const TorsionDecomposition d = project_torsion(t, m.P(), m.metric());
    if (gnorm(d.p2, m) < 1e-6) continue;
    const CanonicalDefects bad = is_canonical(pair.T + d.p2, m.P(), m.metric());
    CHECK(bad.quarter_identity > 1e-6);
    CHECK(bad.p2_norm > 1e-6);
  }
}

TEST_CASE("canonical_connection on E0 degenerates to the Levi-Civita connection") {
  const ConnectionPair pair = canonical_connection(e0());
  CHECK(pair.Q.max_abs() == 0.0);
  CHECK(pair.T.max_abs() == 0.0);
  CHECK((pair.nabla_prime.gamma() - pair.nabla.gamma()).max_abs() == 0.0);
}

TEST_CASE("canonical torsion satisfies the W3 commutation properties") {
  for (std::uint64_t seed : {0, 4}) {
    const FrameManifold m = w3_catalog(seed);
    const ConnectionPair pair = canonical_connection(m);
    const Tensor& t = pair.T;
    // T(Px,y) = -P T(x,y), lowered: T(Px,y,z) = -T(x,y,Pz)
    CHECK(gnorm(substitute(t, m.P(), "Px,y,z") + substitute(t, m.P(), "x,y,Pz"), m) <= 1e-10);
    CHECK(gnorm(substitute(t, m.P(), "Px,y,z") - substitute(t, m.P(), "x,Py,z"), m) <= 1e-10);
    CHECK(gnorm(t + permute(t, kSwap01), m) <= 1e-12);
    // T = Q(x,y) - Q(y,x)
    CHECK(gnorm(t - (pair.Q - permute(pair.Q, kSwap01)), m) <= 1e-12);
  }
}

TEST_CASE("torsion_from_phi reproduces the canonical torsion everywhere") {
  for (std::uint64_t seed : {2, 6}) {
    for (const FrameManifold& m : {w3_catalog(seed), random_valid_manifold(4, seed)}) {
      const ConnectionPair pair = canonical_connection(m);
      CHECK(gnorm(torsion_from_phi(phi_direct(m), m.P()) - pair.T, m) <= 1e-10);
    }
  }
  CHECK(torsion_from_phi(Tensor(3, 4), Eigen::MatrixXd::Identity(4, 4)).max_abs() == 0.0);
}

TEST_CASE("torsion_from_phi output is antisymmetric for Phi with the W3 structure") {
  for (std::uint64_t seed : {0, 9}) {
    const FrameManifold m = w3_catalog(seed);
    const Tensor t = torsion_from_phi(phi_direct(m), m.P());
    CHECK(gnorm(t + permute(t, kSwap01), m) <= 1e-12);
  }
}

TEST_CASE("torsion_from_F and q_from_F: W3 routes agree and invert") {
  const FrameManifold m = test::load_fixture("w3x.json");
  const Tensor f = compute_F(m);
  const ConnectionPair pair = canonical_connection(m);

  const Tensor t = torsion_from_F(f, m.P(), m.metric(), 1e-9);
  CHECK(gnorm(t - pair.T, m) <= 1e-10);
  // inverse relation: F(x,y,z) = T(x,z,Py) - T(x,Py,z)
  const Tensor back = substitute(t, m.P(), "x,z,Py") - substitute(t, m.P(), "x,Py,z");
  CHECK(gnorm(f - back, m) <= 1e-10);

  const Tensor q = q_from_F(f, m.P(), m.metric(), 1e-9);
  CHECK(gnorm(q - pair.Q, m) <= 1e-10);
  // Q(x,y,z) = -Q(y,x,z) - F(Pz,x,y)
  CHECK(gnorm(q + permute(q, kSwap01) + substitute(f, m.P(), "Pz,x,y"), m) <= 1e-10);
  // trace identity
  CHECK(gnorm(contract(q, m.metric().inverse(), 0, 1), m) <= 1e-10);

  CHECK(torsion_from_F(Tensor(3, 4), m.P(), m.metric(), 1e-9).max_abs() == 0.0);

  // non-W3 F must be rejected
  const FrameManifold bad = random_valid_manifold(4, 77);
  const Tensor f_bad = compute_F(bad);
  CHECK_THROWS_AS(torsion_from_F(f_bad, bad.P(), bad.metric(), 1e-9), ValidationError);
  CHECK_THROWS_AS(q_from_F(f_bad, bad.P(), bad.metric(), 1e-9), ValidationError);
}

TEST_CASE("hayden_q_from_T reconstructs Q and is antisymmetric in the last slots") {
  CHECK(hayden_q_from_T(Tensor(3, 4)).max_abs() == 0.0);
  for (std::uint64_t seed : {1, 3}) {
    for (const FrameManifold& m : {w3_catalog(seed), random_valid_manifold(6, seed)}) {
      const ConnectionPair pair = canonical_connection(m);
      CHECK(gnorm(hayden_q_from_T(pair.T) - pair.Q, m) <= 1e-10);
    }
  }
  static constexpr std::array<int, 3> swap12{0, 2, 1};
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Tensor t = random_torsion_like(4, 500 + seed);
    const Tensor q = hayden_q_from_T(t);
    CHECK((q + permute(q, swap12)).max_abs() <= 1e-12);
  }
  Tensor not_anti(3, 4);
  not_anti(1, 1, 0) = 2.0;
  CHECK_THROWS_AS(hayden_q_from_T(not_anti), ValidationError);
}

TEST_CASE("Theorem 3.1 relations hold for the canonical torsion on generic manifolds") {
  for (std::uint64_t seed : {5, 11}) {
    const FrameManifold m = random_valid_manifold(4, seed);
    const ConnectionPair pair = canonical_connection(m);
    const TorsionDecomposition d = project_torsion(pair.T, m.P(), m.metric());
    const Tensor phi = phi_direct(m);
    const Tensor n = nijenhuis(m);
    CHECK(gnorm(4.0 * d.p3 + n, m) <= 1e-10);
    const Tensor rhs38 =
        -2.0 * (substitute(phi, m.P(), "z,Px,Py") + substitute(phi, m.P(), "z,x,y"));
    CHECK(gnorm(4.0 * d.p3 - rhs38, m) <= 1e-10);
    const Tensor rhs39 = -1.0 * phi + substitute(phi, m.P(), "y,z,x") -
                         substitute(phi, m.P(), "x,Py,Pz") - substitute(phi, m.P(), "y,Pz,Px") +
                         2.0 * substitute(phi, m.P(), "z,Px,Py");
    CHECK(gnorm(4.0 * d.p1 - rhs39, m) <= 1e-10);
  }
}

TEST_CASE("Theorem 3.3: p1 vanishes and p3 does not on strict-W3 manifolds") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const FrameManifold m = w3_catalog(seed);
    const ConnectionPair pair = canonical_connection(m);
    const TorsionDecomposition d = project_torsion(pair.T, m.P(), m.metric());
    CHECK(gnorm(d.p1, m) <= 1e-10);
    CHECK(gnorm(d.p3, m) > 1e-6);
    CHECK(gnorm(pair.T - d.p3, m) <= 1e-10);
  }
}
