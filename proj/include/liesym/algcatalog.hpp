#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/liealg.hpp"
#include "liesym/textformat.hpp"

namespace liesym::lie {

/// An abstract algebra as written in a catalog file, before parameters are
/// bound. Coefficients are parameter expressions.
struct AlgebraEntry {
  struct Term {
    int k = 0;  // 0-based
    Expr coeff;
  };
  struct Bracket {
    int i = 0;
    int j = 0;
    std::vector<Term> terms;
  };
  struct RadicalRef {
    std::string name;
    std::map<std::string, Expr> params;  // radical parameter -> expression in this entry's params
    std::vector<int> basis;              // radical e_m sits at basis[m] (0-based)
  };

  std::string name;
  std::string provenance;  // appendix1 | appendix2 | body
  int dim = 0;
  std::vector<std::string> param_order;
  Bindings defaults;
  ParseContext context;
  std::vector<Constraint> constraints;
  std::vector<Bracket> brackets;
  std::optional<std::string> levi;
  std::optional<RadicalRef> radical;
  std::vector<std::string> notes;
  std::optional<std::string> quote;
  // Errata overlays only.
  std::optional<std::string> reason;
  std::vector<std::array<int, 3>> failing;  // 0-based
  std::string source;
};

[[nodiscard]] AlgebraEntry parse_algebra(const text::Record& record);

class UnknownName : public std::runtime_error {
 public:
  UnknownName(const std::string& name, std::vector<std::string> suggestions);
  [[nodiscard]] const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::vector<std::string> suggestions_;
};

/// Nearest names by edit distance (case-insensitive), best first.
[[nodiscard]] std::vector<std::string> nearest_names(const std::string& query, const std::vector<std::string>& names,
                                                     std::size_t limit = 3);

struct ParameterCertificate {
  bool applicable = false;          // every coefficient polynomial in the parameters
  std::map<std::string, int> degree_bound;  // per-parameter degree of the Jacobi polynomials
  std::size_t grid_points = 0;
  bool jacobi_identity = false;     // Jacobi vanishes on the whole grid
};

class AlgebraCatalog {
 public:
  /// Reads <root>/liealg/{appendix1,appendix2,body} and <root>/errata.
  static AlgebraCatalog load(const std::filesystem::path& root);

  [[nodiscard]] const std::vector<AlgebraEntry>& entries() const { return entries_; }
  [[nodiscard]] const AlgebraEntry& entry(const std::string& name) const;
  [[nodiscard]] const AlgebraEntry* find(const std::string& name) const;
  [[nodiscard]] const AlgebraEntry* overlay(const std::string& name) const;
  [[nodiscard]] std::vector<std::string> names() const;

  /// Constants of `entry` at `bindings` (missing names fall back to the
  /// defaults). `corrected` applies the errata overlay when one exists.
  [[nodiscard]] StructureConstants instantiate(const AlgebraEntry& entry, const Bindings& bindings = {},
                                               bool corrected = true) const;
  [[nodiscard]] StructureConstants instantiate(const std::string& name, const Bindings& bindings = {},
                                               bool corrected = true) const;

  /// Assembles an Appendix-2 style semidirect sum by name.
  [[nodiscard]] StructureConstants semidirect_from_table(const std::string& name) const;

  /// Direct sum of whitespace-separated references such as
  /// "A_{3.7}[q=k] A_1"; argument values are parameter expressions
  /// evaluated under `outer`.
  [[nodiscard]] StructureConstants resolve_target(const std::string& spec, const Bindings& outer = {},
                                                  const ParseContext& ctx = {}) const;

  /// Up to `count` distinct bindings satisfying the entry's constraints,
  /// starting with its defaults.
  [[nodiscard]] std::vector<Bindings> test_bindings(const AlgebraEntry& entry, std::size_t count = 3) const;

  /// Verifies Jacobi as a polynomial identity on a tensor grid with
  /// (degree + 1) values per parameter.
  [[nodiscard]] ParameterCertificate certify_parameters(const AlgebraEntry& entry, bool corrected = true) const;

 private:
  std::vector<AlgebraEntry> entries_;
  std::vector<AlgebraEntry> overlays_;
  [[nodiscard]] std::map<std::string, int> coefficient_degrees(const AlgebraEntry& entry, bool corrected,
                                                               bool& polynomial) const;
};

/// Outcome of checking one catalog entry: Jacobi at the test bindings, the
/// polynomial-identity certificate, the errata workflow and, for Levi
/// extensions, the decomposition predicate with S = {e_1, e_2, e_3}.
struct AlgebraVerdict {
  std::string name;
  std::string provenance;
  int dim = 0;
  std::vector<Bindings> bindings;
  bool as_printed_ok = false;
  bool errata = false;
  std::string errata_origin;                // entry whose overlay applies
  std::vector<std::array<int, 3>> raw_failing;  // at the default binding, 0-based
  bool declared_triple_reproduced = true;
  bool corrected_ok = false;
  ParameterCertificate certificate;
  std::optional<bool> levi;
  bool solvable = false;
  bool nilpotent = false;
  bool semisimple = false;
  bool pass = false;
  std::string detail;
};

[[nodiscard]] AlgebraVerdict verify_entry(const AlgebraCatalog& catalog, const AlgebraEntry& entry);
[[nodiscard]] std::vector<AlgebraVerdict> verify_catalog(const AlgebraCatalog& catalog);

}  // namespace liesym::lie
