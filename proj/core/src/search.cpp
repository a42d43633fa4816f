#include "apm/search.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "apm/apclass.hpp"
#include "apm/errors.hpp"
#include "apm/natconn.hpp"
#include "apm/verify.hpp"

namespace apm {

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

const char* to_string(SearchFamily f) {
  switch (f) {
    case SearchFamily::TwoStepNilpotent: return "nilpotent2";
    case SearchFamily::UserCatalog: return "catalog";
  }
  return "?";
}

// xoshiro256++, seeded by splitmix64; fixed algorithm so the stream is
// identical across standard libraries.
RngStream::RngStream(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    s = z ^ (z >> 31);
  }
}

std::uint64_t RngStream::bits() {
  const auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

double RngStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Eigen::MatrixXd random_product_structure(int dim, RngStream& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  Eigen::VectorXd d(dim);
  for (int i = 0; i < dim; ++i) d(i) = (i < dim / 2) ? 1.0 : -1.0;
  Eigen::MatrixXd p = q * d.asDiagonal() * q.transpose();
  // symmetrize away the last rounding bits so validation sees g~ symmetric
  return 0.5 * (p + Eigen::MatrixXd(p.transpose()));
}

namespace {

struct NilpotentParam {
  int a, b, z;
};

Tensor nilpotent_tensor(int dim, const std::vector<NilpotentParam>& params,
                        const Eigen::VectorXd& coeff) {
  Tensor c(3, dim);
  for (std::size_t t = 0; t < params.size(); ++t) {
    const auto& p = params[t];
    c(p.a, p.b, p.z) += coeff(static_cast<Eigen::Index>(t));
    c(p.b, p.a, p.z) -= coeff(static_cast<Eigen::Index>(t));
  }
  return c;
}

// cyclic sum of F for the manifold (C, g = I, P); C need not be validated.
Tensor sigma_f_of(const Tensor& c_tensor, const Eigen::MatrixXd& p) {
  const int n = c_tensor.dim();
  const MetricPair g = MetricPair::positive_definite(Eigen::MatrixXd::Identity(n, n));
  StructureConstants c = StructureConstants::from_tensor(c_tensor);
  const Connection nabla = levi_civita(c, g);
  Eigen::MatrixXd assoc = Eigen::MatrixXd::Identity(n, n) * p;
  assoc = 0.5 * (assoc + Eigen::MatrixXd(assoc.transpose()));
  const Tensor f = covariant_derivative(nabla, tensor_from_matrix(assoc));
  return cyclic_sum3(f);
}

std::string provenance_string(const SearchConfig& cfg, int candidate, double norm_f,
                              double sigma_f, const std::string& extra) {
  std::ostringstream os;
  os << "search-w3 family=" << to_string(cfg.family) << " dim=" << cfg.dim
     << " seed=" << cfg.seed << " candidate=" << candidate << " norm_f=" << fmt3(norm_f)
     << " residual_sigma_f=" << fmt3(sigma_f);
  if (!extra.empty()) os << " " << extra;
  return os.str();
}

void try_emit(const SearchConfig& cfg, SearchResult& out, const Tensor& c_tensor,
              const Eigen::MatrixXd& g, const Eigen::MatrixXd& p, const std::string& extra) {
  FrameManifold m = FrameManifold::validate(StructureConstants::from_tensor(c_tensor), g, p);
  const ClassificationReport cls = classify(m, cfg.tolerance);
  if (cls.class_label != ClassLabel::W3_strict) return;
  if (cls.norm_F <= 1e3 * cfg.tolerance) return;
  // every emitted fixture must re-verify with zero FAILs
  if (run_verification(m, cfg.tolerance).any_fail()) return;
  const int index = static_cast<int>(out.fixtures.size());
  std::ostringstream name;
  name << "W3-" << to_string(cfg.family) << "-d" << cfg.dim << "-s" << cfg.seed << "-c" << index;
  out.fixtures.push_back(spec_from_parts(
      cfg.dim, m.brackets(), g, p, name.str(),
      provenance_string(cfg, index, cls.norm_F, cls.norm_cyclic_F, extra)));
}

void search_nilpotent(const SearchConfig& cfg, RngStream& rng, SearchResult& out) {
  const int n = cfg.dim;
  const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd p = random_product_structure(n, rng);
  std::ostringstream log;
  log << "nilpotent2 null-space dims per split:";

  for (int v = n - 1; v >= 2; --v) {
    std::vector<NilpotentParam> params;
    for (int a = 0; a < v; ++a)
      for (int b = a + 1; b < v; ++b)
        for (int z = v; z < n; ++z) params.push_back({a, b, z});
    if (params.empty()) continue;

    const Eigen::Index rows = static_cast<Eigen::Index>(n) * n * n;
    Eigen::MatrixXd l(rows, static_cast<Eigen::Index>(params.size()));
    for (std::size_t t = 0; t < params.size(); ++t) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.size()));
      e(static_cast<Eigen::Index>(t)) = 1.0;
      const Tensor sf = sigma_f_of(nilpotent_tensor(n, params, e), p);
      for (Eigen::Index r = 0; r < rows; ++r)
        l(r, static_cast<Eigen::Index>(t)) = sf.flat(static_cast<std::size_t>(r));
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(l, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int null_dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= cutoff) ++null_dim;
    log << " v=" << v << ":" << null_dim;

    if (null_dim == 0) continue;
    const Eigen::MatrixXd null_basis =
        svd.matrixV().rightCols(static_cast<Eigen::Index>(null_dim));
    for (int attempt = 0;
         attempt < 4 * cfg.max_candidates &&
         static_cast<int>(out.fixtures.size()) < cfg.max_candidates;
         ++attempt) {
      Eigen::VectorXd w(null_dim);
      for (int i = 0; i < null_dim; ++i) w(i) = rng.gaussian();
      if (w.norm() == 0.0) continue;
      Eigen::VectorXd coeff = null_basis * (w / w.norm());
      try_emit(cfg, out, nilpotent_tensor(n, params, coeff), g, p,
               "split_v=" + std::to_string(v));
    }
  }
  if (out.fixtures.empty()) {
    out.no_solution = true;
    out.message = "NoSolutionFound: no strict-W3 candidate in the two-step-nilpotent family (" +
                  log.str() + ")";
  }
}

void search_catalog(const SearchConfig& cfg, RngStream& rng, SearchResult& out) {
  const int n = cfg.dim;
  const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  const int max_blocks = n / 3;

  for (int attempt = 0; attempt < 8 * cfg.max_candidates &&
                        static_cast<int>(out.fixtures.size()) < cfg.max_candidates;
       ++attempt) {
    const int blocks = max_blocks > 0 ? 1 + attempt % max_blocks : 0;
    Tensor c(3, n);
    std::ostringstream extra;
    extra << "blocks=" << blocks;
    for (int b = 0; b < blocks; ++b) {
      const double lam = 0.5 + 1.5 * rng.uniform();
      const int o = 3 * b;
      const int idx[3][3] = {{o, o + 1, o + 2}, {o + 1, o + 2, o}, {o + 2, o, o + 1}};
      for (const auto& t : idx) {
        c(t[0], t[1], t[2]) = lam;
        c(t[1], t[0], t[2]) = -lam;
      }
    }
    const Eigen::MatrixXd p = random_product_structure(n, rng);
    try_emit(cfg, out, c, g, p, extra.str());
  }
  if (out.fixtures.empty()) {
    out.no_solution = true;
    out.message = "NoSolutionFound: catalog family produced no strict-W3 candidate";
  }
}

}  // namespace

SearchResult search_w3(const SearchConfig& config) {
  if (config.dim < 4 || config.dim % 2 != 0)
    throw ValidationError(ErrorCode::InvalidDimension,
                          "search requires an even dimension >= 4");
  if (config.max_candidates < 1)
    throw ValidationError(ErrorCode::InvalidDimension, "max_candidates must be >= 1");
  if (!(config.tolerance > 0.0))
    throw ValidationError(ErrorCode::InvalidDimension, "tolerance must be positive");

  RngStream rng(config.seed);
  SearchResult out;
  if (config.family == SearchFamily::TwoStepNilpotent) {
    search_nilpotent(config, rng, out);
  } else {
    search_catalog(config, rng, out);
  }
  return out;
}

FrameManifold random_w3_manifold(int dim, std::uint64_t seed) {
  if (dim < 4 || dim % 2 != 0) throw std::invalid_argument("random_w3_manifold: bad dimension");
  RngStream rng(seed);
  const int blocks = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(std::max(1, dim / 3)));
  Tensor c(3, dim);
  for (int b = 0; b < blocks; ++b) {
    const double lam = 0.5 + 1.5 * rng.uniform();
    const int o = 3 * b;
    const int idx[3][3] = {{o, o + 1, o + 2}, {o + 1, o + 2, o}, {o + 2, o, o + 1}};
    for (const auto& t : idx) {
      c(t[0], t[1], t[2]) = lam;
      c(t[1], t[0], t[2]) = -lam;
    }
  }
  const Eigen::MatrixXd p = random_product_structure(dim, rng);
  return FrameManifold::validate(StructureConstants::from_tensor(c),
                                 Eigen::MatrixXd::Identity(dim, dim), p,
                                 "random-w3-d" + std::to_string(dim) + "-s" + std::to_string(seed));
}

FrameManifold random_valid_manifold(int dim, std::uint64_t seed) {
  if (dim < 4 || dim % 2 != 0)
    throw std::invalid_argument("random_valid_manifold: bad dimension");
  RngStream rng(seed);
  const int v = dim - 1;
  Tensor c(3, dim);
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b)
      for (int z = v; z < dim; ++z) {
        const double val = rng.gaussian();
        c(a, b, z) = val;
        c(b, a, z) = -val;
      }
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.gaussian();
  Eigen::MatrixXd g = a * a.transpose() + dim * Eigen::MatrixXd::Identity(dim, dim);
  g = 0.5 * (g + Eigen::MatrixXd(g.transpose()));

  // P = S^{-1} P' S with g = S^T S makes P' orthogonal-conjugation transportable
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  const Eigen::MatrixXd s = llt.matrixU();  // g = s^T s
  const Eigen::MatrixXd p_orth = random_product_structure(dim, rng);
  Eigen::MatrixXd p = s.inverse() * p_orth * s;
  return FrameManifold::validate(
      StructureConstants::from_tensor(c), g, p,
      "random-valid-d" + std::to_string(dim) + "-s" + std::to_string(seed));
}

}  // namespace apm
