#pragma once

#include <string>
#include <vector>

#include "apm/apclass.hpp"
#include "apm/frame.hpp"

namespace apm {

enum class CheckStatus { Pass, Fail, Warn, Skipped };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string id;
  double defect = 0.0;
  double tol = 0.0;
  CheckStatus status = CheckStatus::Skipped;
};

/// Hypotheses under which a check is meaningful. Checks whose gate is not
/// met are reported SKIPPED, never silently dropped.
enum class CheckGate {
  Always,        // any valid manifold
  W3,            // cyclic sum of F vanishes (class W0 or W3_strict)
  StrictW3,      // class W3_strict (F != 0)
  ParallelT,     // W3 and the canonical torsion is parallel
  PTensorPrime,  // W3 and R' is a Riemannian P-tensor (Bianchi defect small)
};

struct CheckInfo {
  std::string id;
  CheckGate gate;
  double tol;
  std::string description;
};

/// Static list of every registered identity (for the completeness test and
/// report rendering). Order is the report order.
const std::vector<CheckInfo>& check_registry();

struct PhaseTimings {
  double build_ms = 0.0;
  double checks_ms = 0.0;
};

struct VerificationReport {
  std::string manifold;
  ClassificationReport classification;
  std::vector<CheckResult> checks;
  double tau = 0.0;
  double tau_prime = 0.0;
  double tau_star = 0.0;
  double tau_star_star = 0.0;
  double norm_nabla_P_sq = 0.0;
  PhaseTimings timings;

  bool any_fail() const;
};

/// Runs every registered check against m. `tol` is the classification
/// tolerance (scale-aware; see apclass::classify).
VerificationReport run_verification(const FrameManifold& m, double tol);

/// Key-sorted, shortest-round-trip-float JSON; byte-deterministic for a
/// given input and tolerance. Timing is excluded unless requested (it is
/// the one nondeterministic field).
std::string report_to_json(const VerificationReport& r, bool include_timing = false);

std::string report_to_text(const VerificationReport& r, bool include_timing = false);

}  // namespace apm
