#pragma once

#include <Eigen/Dense>
#include <string>

#include "apm/frame.hpp"
#include "apm/manifold_io.hpp"
#include "apm/search.hpp"

namespace apm::test {

inline FrameManifold e0() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(4, 4);
  p(2, 2) = p(3, 3) = -1.0;
  return FrameManifold::validate(4, {}, Eigen::MatrixXd::Identity(4, 4), p, "E0");
}

/// su(2) + R with identity metric and a seeded random compatible P; the
/// bracket form g([x,y],z) is totally antisymmetric, which forces the cyclic
/// sum of F to vanish, so generic P gives a strict W3 manifold.
inline FrameManifold w3_catalog(std::uint64_t seed = 0) { return random_w3_manifold(4, seed); }

/// Bi-invariant product of two su(2) blocks with block-aligned P: a curved
/// manifold with nabla P = 0 (class W0).
inline FrameManifold w0_curved() {
  std::vector<BracketEntry> entries;
  for (int b = 0; b < 2; ++b) {
    const int o = 3 * b;
    entries.push_back({o, o + 1, o + 2, 1.0});
    entries.push_back({o + 1, o + 2, o, 1.0});
    entries.push_back({o, o + 2, o + 1, -1.0});
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(6, 6);
  for (int i = 3; i < 6; ++i) p(i, i) = -1.0;
  return FrameManifold::validate(6, entries, Eigen::MatrixXd::Identity(6, 6), p, "W0-curved");
}

inline std::string fixture_path(const std::string& file) {
  return std::string(APM_FIXTURE_DIR) + "/" + file;
}

inline FrameManifold load_fixture(const std::string& file) {
  return build_manifold(read_manifold_spec(fixture_path(file)));
}

inline double gnorm(const Tensor& t, const FrameManifold& m) {
  return std::sqrt(std::abs(norm_sq(t, m.metric().inverse())));
}

}  // namespace apm::test
