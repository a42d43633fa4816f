#include "apm/manifold_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apm/errors.hpp"

namespace apm {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::MatrixXd parse_matrix(const json& j, int dim, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ValidationError(ErrorCode::ParseError, std::string(key) + " must be a dim x dim array");
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ValidationError(ErrorCode::ParseError, std::string(key) + " row has wrong length");
    for (int c = 0; c < dim; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw ValidationError(ErrorCode::ParseError, std::string(key) + " entry is not a number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

void emit_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  os << "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) os << ",";
    os << "[";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << ",";
      os << fmt17(m(r, c));
    }
    os << "]";
  }
  os << "]";
}

}  // namespace

ManifoldSpec parse_manifold_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw ValidationError(ErrorCode::ParseError, "top level must be an object");

  ManifoldSpec spec;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw ValidationError(ErrorCode::ParseError, "missing integer field 'dimension'");
  spec.dimension = j["dimension"].get<int>();
  if (spec.dimension < 1 || spec.dimension > 16)
    throw ValidationError(ErrorCode::ParseError, "dimension out of supported range");

  if (!j.contains("metric") || !j.contains("product_structure"))
    throw ValidationError(ErrorCode::ParseError, "missing 'metric' or 'product_structure'");
  spec.metric = parse_matrix(j["metric"], spec.dimension, "metric");
  spec.product_structure = parse_matrix(j["product_structure"], spec.dimension, "product_structure");

  if (j.contains("structure_constants")) {
    const json& sc = j["structure_constants"];
    if (!sc.is_array())
      throw ValidationError(ErrorCode::ParseError, "structure_constants must be an array");
    for (const json& e : sc) {
      if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number_integer() || !e[3].is_number())
        throw ValidationError(ErrorCode::ParseError,
                              "structure_constants entries must be [i,j,k,value]");
      spec.structure_constants.push_back(
          {e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
    }
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ValidationError(ErrorCode::ParseError, "name must be a string");
    spec.name = j["name"].get<std::string>();
  }
  if (j.contains("provenance")) {
    if (!j["provenance"].is_string())
      throw ValidationError(ErrorCode::ParseError, "provenance must be a string");
    spec.provenance = j["provenance"].get<std::string>();
  }
  return spec;
}

ManifoldSpec read_manifold_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifold_spec(ss.str());
}

std::string manifold_spec_to_json(const ManifoldSpec& spec) {
  // keys in sorted order; floats at 17 significant digits
  std::ostringstream os;
  os << "{\n";
  os << "  \"dimension\": " << spec.dimension << ",\n";
  os << "  \"metric\": ";
  emit_matrix(os, spec.metric);
  os << ",\n";
  os << "  \"name\": " << json(spec.name).dump() << ",\n";
  os << "  \"product_structure\": ";
  emit_matrix(os, spec.product_structure);
  os << ",\n";
  os << "  \"provenance\": " << json(spec.provenance).dump() << ",\n";
  os << "  \"structure_constants\": [";
  for (std::size_t i = 0; i < spec.structure_constants.size(); ++i) {
    const auto& e = spec.structure_constants[i];
    if (i) os << ",";
    os << "\n    [" << e.i << "," << e.j << "," << e.k << "," << fmt17(e.value) << "]";
  }
  if (!spec.structure_constants.empty()) os << "\n  ";
  os << "]\n";
  os << "}\n";
  return os.str();
}

void write_manifold_spec(const std::filesystem::path& path, const ManifoldSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(ErrorCode::ParseError, "cannot write " + path.string());
  out << manifold_spec_to_json(spec);
}

FrameManifold build_manifold(const ManifoldSpec& spec) {
  return FrameManifold::validate(spec.dimension, spec.structure_constants, spec.metric,
                                 spec.product_structure, spec.name);
}

ManifoldSpec spec_from_parts(int dim, const StructureConstants& c, const Eigen::MatrixXd& g,
                             const Eigen::MatrixXd& p, std::string name, std::string provenance) {
  ManifoldSpec spec;
  spec.dimension = dim;
  spec.metric = g;
  spec.product_structure = p;
  spec.name = std::move(name);
  spec.provenance = std::move(provenance);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (c(i, j, k) != 0.0) spec.structure_constants.push_back({i, j, k, c(i, j, k)});
  return spec;
}

}  // namespace apm
