#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "apm/frame.hpp"

namespace apm {

/// On-disk manifold description. Structure constants are stored sparsely as
/// [i, j, k, value] rows with 0-based indices and i < j; the antisymmetric
/// partners are implied.
struct ManifoldSpec {
  int dimension = 0;
  std::vector<BracketEntry> structure_constants;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd product_structure;
  std::string name;
  std::string provenance;
};

/// Throws ValidationError(ParseError) on malformed JSON or schema violations.
ManifoldSpec parse_manifold_spec(const std::string& json_text);
ManifoldSpec read_manifold_spec(const std::filesystem::path& path);

/// Serializes with sorted keys and 17-significant-digit floats so identical
/// specs produce identical bytes.
std::string manifold_spec_to_json(const ManifoldSpec& spec);
void write_manifold_spec(const std::filesystem::path& path, const ManifoldSpec& spec);

/// Validates the description into a FrameManifold (throws ValidationError).
FrameManifold build_manifold(const ManifoldSpec& spec);

/// Extracts a spec from validated data (used by the fixture search).
ManifoldSpec spec_from_parts(int dim, const StructureConstants& c, const Eigen::MatrixXd& g,
                             const Eigen::MatrixXd& p, std::string name, std::string provenance);

}  // namespace apm
