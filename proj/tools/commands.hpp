#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "liesym/eqcatalog.hpp"

namespace liesym::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kPass = 0, kFail = 1, kConfig = 2, kUnreliable = 3 };

/// Invalid flags or unreadable inputs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 200;
  double tol = 1e-8;
  bool tol_given = false;  // an explicit --tol also tightens the realization check
  double rank_tol = 1e-8;
  double gap_floor = 1e6;
  std::string library = "polynomial";
  int degree = 0;  // 0: row defaults for verify, 3 for find-symmetries
  std::string format = "text";
  std::string out;
  std::vector<std::string> domain;  // "var lo hi" entries for find-symmetries

  void validate() const;
  [[nodiscard]] eq::HarnessConfig harness() const;
  [[nodiscard]] Json to_json() const;
};

/// LIESYM_CATALOG_DIR when set, otherwise the catalog shipped with the build.
[[nodiscard]] std::string catalog_root();

struct Catalogs {
  std::string root;
  lie::AlgebraCatalog algebras;
  std::vector<vf::Realization> realizations;
  std::vector<eq::ClassificationRow> rows;
};

/// Throws ConfigError when any catalog fails to load.
[[nodiscard]] Catalogs load_catalogs(const std::string& root);

struct Outcome {
  Json report;
  std::string text;
  int exit = kPass;
};

[[nodiscard]] Outcome cmd_verify(const Catalogs& cat, const std::string& scope, const RunConfig& cfg);
[[nodiscard]] Outcome cmd_find_symmetries(const std::string& f, const std::string& g, const RunConfig& cfg);
[[nodiscard]] Outcome cmd_info(const Catalogs& cat, const std::string& name);

}  // namespace liesym::cli
