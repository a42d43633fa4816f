#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "apm/errors.hpp"
#include "apm/manifold_io.hpp"
#include "apm/search.hpp"
#include "apm/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

double default_tolerance() {
  if (const char* env = std::getenv("APM_DEFAULT_TOL")) {
    try {
      const double v = std::stod(env);
      if (v > 0.0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring invalid APM_DEFAULT_TOL\n";
  }
  return 1e-9;
}

int classify_exit(const apm::ValidationError& e) {
  return e.code() == apm::ErrorCode::ParseError ? kExitIo : kExitValidation;
}

int cmd_validate(const std::string& path) {
  try {
    const apm::ManifoldSpec spec = apm::read_manifold_spec(path);
    const apm::FrameManifold m = apm::build_manifold(spec);
    std::cout << "valid: " << (m.name().empty() ? path : m.name()) << " (dim " << m.dim()
              << ")\n";
    return kExitPass;
  } catch (const apm::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return classify_exit(e);
  }
}

int cmd_verify(const std::string& path, double tol, const std::string& format,
               bool with_timing) {
  try {
    const apm::ManifoldSpec spec = apm::read_manifold_spec(path);
    const apm::FrameManifold m = apm::build_manifold(spec);
    const apm::VerificationReport report = apm::run_verification(m, tol);
    if (format == "json") {
      std::cout << apm::report_to_json(report, with_timing);
    } else {
      std::cout << apm::report_to_text(report, with_timing);
    }
    return report.any_fail() ? kExitCheckFail : kExitPass;
  } catch (const apm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exit(e);
  }
}

int cmd_search(int dim, std::uint64_t seed, const std::string& family_name,
               const std::string& out_dir, int max_candidates, double tol) {
  apm::SearchConfig cfg;
  cfg.dim = dim;
  cfg.seed = seed;
  cfg.max_candidates = max_candidates;
  cfg.tolerance = tol;
  if (family_name == "nilpotent2") {
    cfg.family = apm::SearchFamily::TwoStepNilpotent;
  } else if (family_name == "catalog") {
    cfg.family = apm::SearchFamily::UserCatalog;
  } else {
    std::cerr << "error: unknown family '" << family_name << "' (nilpotent2|catalog)\n";
    return kExitValidation;
  }
  try {
    const apm::SearchResult result = apm::search_w3(cfg);
    if (result.no_solution) {
      std::cout << result.message << "\n";
      return kExitPass;
    }
    fs::create_directories(out_dir);
    for (const auto& spec : result.fixtures) {
      const fs::path file = fs::path(out_dir) / (spec.name + ".json");
      apm::write_manifold_spec(file, spec);
      std::cout << "wrote " << file.string() << "\n";
    }
    return kExitPass;
  } catch (const apm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exit(e);
  }
}

int cmd_report(const std::string& dir, double tol, const std::string& format) {
  std::vector<fs::path> files;
  try {
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "warning: no .json manifolds in " << dir << "\n";
    return kExitPass;
  }

  struct Entry {
    std::string file;
    std::string error;
    apm::VerificationReport report;
    bool ok = false;
  };
  // file pipelines are independent and share only immutable inputs
  std::vector<std::future<Entry>> futures;
  futures.reserve(files.size());
  for (const auto& f : files) {
    futures.push_back(std::async(std::launch::async, [f, tol]() {
      Entry e;
      e.file = f.filename().string();
      try {
        const apm::FrameManifold m = apm::build_manifold(apm::read_manifold_spec(f));
        e.report = apm::run_verification(m, tol);
        e.ok = true;
      } catch (const apm::ValidationError& err) {
        e.error = err.what();
      }
      return e;
    }));
  }

  int fails = 0, passes = 0, errors = 0;
  std::string json_out = "[";
  bool first = true;
  for (auto& fut : futures) {
    Entry e = fut.get();
    if (!e.ok) {
      ++errors;
      if (format == "json") {
        if (!first) json_out += ",";
        first = false;
        json_out += "{\"error\":\"" + e.error + "\",\"file\":\"" + e.file + "\"}";
      } else {
        std::cout << e.file << ": ERROR " << e.error << "\n";
      }
      continue;
    }
    const bool fail = e.report.any_fail();
    fail ? ++fails : ++passes;
    if (format == "json") {
      if (!first) json_out += ",";
      first = false;
      std::string one = apm::report_to_json(e.report);
      if (!one.empty() && one.back() == '\n') one.pop_back();
      json_out += one;
    } else {
      std::cout << e.file << ": " << (fail ? "FAIL" : "PASS") << " (class "
                << apm::to_string(e.report.classification.class_label) << ")\n";
    }
  }
  if (format == "json") {
    std::cout << json_out << "]\n";
  } else {
    std::cout << "summary: " << passes << " pass, " << fails << " fail, " << errors
              << " error\n";
  }
  if (errors) return kExitValidation;
  return fails ? kExitCheckFail : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost-product manifold laboratory"};
  app.require_subcommand(1);
  const double tol_default = default_tolerance();

  std::string path;
  double tol = tol_default;
  std::string format = "text";
  bool with_timing = false;

  auto* validate = app.add_subcommand("validate", "validate a manifold spec file");
  validate->add_option("file", path)->required();

  auto* verify = app.add_subcommand("verify", "run every identity check against a manifold");
  verify->add_option("file", path)->required();
  verify->add_option("--tol", tol, "classification tolerance");
  verify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  verify->add_flag("--timing", with_timing, "include (nondeterministic) phase timings");

  int dim = 4;
  std::uint64_t seed = 0;
  std::string family = "nilpotent2";
  std::string out_dir;
  int max_candidates = 8;
  auto* search = app.add_subcommand("search-w3", "search for strict-W3 fixtures");
  search->add_option("--dim", dim)->required();
  search->add_option("--seed", seed);
  search->add_option("--family", family);
  search->add_option("--out", out_dir)->required();
  search->add_option("--max-candidates", max_candidates);
  search->add_option("--tol", tol);

  std::string dir;
  auto* report = app.add_subcommand("report", "verify every manifold in a directory");
  report->add_option("dir", dir)->required();
  report->add_option("--tol", tol);
  report->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return cmd_validate(path);
  if (verify->parsed()) return cmd_verify(path, tol, format, with_timing);
  if (search->parsed()) return cmd_search(dim, seed, family, out_dir, max_candidates, tol);
  if (report->parsed()) return cmd_report(dir, tol, format);
  return kExitIo;
}
