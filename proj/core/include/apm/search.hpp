#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apm/frame.hpp"
#include "apm/manifold_io.hpp"

namespace apm {

enum class SearchFamily { TwoStepNilpotent, UserCatalog };

const char* to_string(SearchFamily f);

struct SearchConfig {
  int dim = 4;
  SearchFamily family = SearchFamily::TwoStepNilpotent;
  std::uint64_t seed = 0;
  int max_candidates = 8;
  double tolerance = 1e-9;
};

/// Outcome of a search run. `fixtures` hold validated strict-W3 manifolds
/// with provenance; when empty, `no_solution` is set and `message` explains
/// why (e.g. the null-space dimensions found for each nilpotent split).
struct SearchResult {
  std::vector<ManifoldSpec> fixtures;
  bool no_solution = false;
  std::string message;
};

/// Deterministic random stream (engine-defined bit stream plus our own
/// Box-Muller), so fixture bytes do not depend on the standard library's
/// distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  double uniform();   // [0, 1)
  double gaussian();  // standard normal
  std::uint64_t bits();

 private:
  std::uint64_t state_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random orthogonal-conjugated product structure P = O diag(I,-I) O^T.
Eigen::MatrixXd random_product_structure(int dim, RngStream& rng);

/// Searches for strict-W3 fixtures.
///  - two-step-nilpotent: fixes g = I and a seeded random P, then solves for
///    the null space of the linear map (structure constants) -> cyclic sum
///    of F over each V x V -> Z split, sampling null vectors as candidates.
///  - user-catalog: draws from algebras whose bracket form g([x,y],z) is
///    totally antisymmetric (su(2) blocks plus an abelian factor), for which
///    the cyclic sum of F vanishes identically.
/// Every emitted fixture is re-validated and classified W3_strict.
SearchResult search_w3(const SearchConfig& config);

/// One catalog draw as a validated manifold (test helper; same construction
/// the catalog family uses).
FrameManifold random_w3_manifold(int dim, std::uint64_t seed);

/// Random valid manifold that is generically not W3: two-step-nilpotent
/// brackets, random SPD metric, compatible random P.
FrameManifold random_valid_manifold(int dim, std::uint64_t seed);

}  // namespace apm
