#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liesym/algcatalog.hpp"
#include "liesym/detsys.hpp"
#include "liesym/vecfield.hpp"

namespace liesym::eq {

/// `unbounded`: the algebra outgrows every trial space; the estimate must
/// exceed the printed maximal dimension.
enum class ClaimKind { invariant_only, maximal, unbounded };

/// Trial space for the dimension estimate, or the reason none applies.
struct AnsatzChoice {
  bool representable = true;
  std::string library = "polynomial";
  int degree = 3;
  std::vector<Expr> extra_time;
  std::vector<Expr> extra_space;
  std::string reason;  // set when not representable

  [[nodiscard]] ds::AnsatzBasis build(int degree_override = 0) const;
};

struct ClassificationRow {
  std::string id;
  std::string group;  // tally bucket, e.g. "3-solvable"
  ds::EquationSpec equation;
  std::string realization_label;
  vf::Realization realization;  // re-read with the row's parameter values
  ClaimKind claim = ClaimKind::maximal;
  int claimed_dim = 0;
  // A printed claim the harness disproves; the row then passes only if the
  // printed claim fails and the corrected one holds.
  std::string erratum;
  ClaimKind corrected_claim = ClaimKind::maximal;
  int corrected_dim = 0;
  std::vector<lie::Constraint> constraints;
  lie::Bindings parameters;
  std::map<std::string, std::string> slot_bindings;
  std::string specializes;  // id of the row with generic bindings, if any
  bool expect_invariance_failure = false;
  AnsatzChoice ansatz;
  std::string anchor;
  std::string quote;
  std::vector<std::string> notes;
  std::string source;
};

/// Default generic bindings for arbitrary functions of one argument.
[[nodiscard]] const std::map<std::string, std::string>& generic_bindings();

/// One row file. `overrides` re-binds parameters declared by the row or its
/// realization.
[[nodiscard]] ClassificationRow parse_row(const std::string& path, const lie::AlgebraCatalog& algebras,
                                          const std::vector<vf::Realization>& realizations,
                                          const std::map<std::string, Number>& overrides = {});

/// Every row under <root>/equations, sorted by file path. Errors carry the
/// file and line.
[[nodiscard]] std::vector<ClassificationRow> load_catalog(const std::string& root, const lie::AlgebraCatalog& algebras,
                                                          const std::vector<vf::Realization>& realizations);

[[nodiscard]] const ClassificationRow& find_row(const std::vector<ClassificationRow>& rows, const std::string& id);

struct HarnessConfig {
  double tol = 1e-8;
  double realization_tol = 1e-9;
  std::size_t samples = 200;
  std::uint64_t seed = 42;
  bool estimate = true;
  int degree_override = 0;  // 0 keeps each row's ansatz degree
  ds::EstimateOptions estimator;
};

struct RowVerdict {
  std::string id;
  std::string group;
  bool constraints_ok = true;
  bool structure_ok = true;
  bool realization_ok = true;
  bool invariance_ok = true;
  double invariance_residual = 0.0;
  std::optional<Point> witness;
  std::optional<int> dimension;
  double gap_ratio = 0.0;
  std::string estimate_verdict;  // "skipped: ...", "basis-unrepresentable: ...", estimator verdict
  std::string erratum;           // copied from the row when present
  bool erratum_reproduced = false;
  bool pass = false;
  std::string failure;  // failing sub-check
};

[[nodiscard]] RowVerdict verify_row(const ClassificationRow& row, const HarnessConfig& cfg);

struct Tally {
  std::string group;
  int found = 0;
  int expected = 0;
};

struct HarnessVerdict {
  std::vector<RowVerdict> rows;
  int passed = 0;
  int failed = 0;
  std::vector<Tally> tallies;
  std::vector<std::string> discrepancies;
  [[nodiscard]] bool ok() const { return failed == 0; }
};

/// Verifies rows in parallel and folds the results ordered by row id.
[[nodiscard]] HarnessVerdict verify_catalog(const std::vector<ClassificationRow>& rows, const HarnessConfig& cfg);

/// Counts rows per group against <root>/tally.txt: "expect <group> <n>" per
/// group and "summary <dim> <n>" per dimension. Every mismatch, and every
/// dimension without a summary count, becomes a discrepancy.
void tally(const std::vector<ClassificationRow>& rows, const std::string& root, HarnessVerdict& out);

struct Reduction {
  std::string id;
  std::string source_row;
  std::map<std::string, Number> overrides;  // parameter values on the source row
  vf::PointTransformation transform;
  std::vector<vf::VectorField> extra;  // generators beyond the source realization
  Expr target_F, target_G;
  std::string quote;
  std::vector<std::string> notes;
  std::string source;
};

struct ReductionResult {
  std::string id;
  bool source_ok = false;       // every generator leaves the source invariant
  bool target_form_ok = false;  // transformed equation matches the stored target
  bool target_ok = false;       // pushed-forward generators leave the target invariant
  double max_residual = 0.0;
  bool pass = false;
  std::string detail;
};

/// Every reduction under <root>/reductions.
[[nodiscard]] std::vector<Reduction> load_reductions(const std::string& root);

/// Source and target invariance are checked at cfg.tol, the stored target
/// against the transformed equation at 1e-9 relative.
[[nodiscard]] ReductionResult verify_reduction(const Reduction& red, const ClassificationRow& source,
                                               const HarnessConfig& cfg);

/// The stored reductions, each applied to its re-bound source row, plus the
/// identity transformation on every row.
[[nodiscard]] std::vector<ReductionResult> special_case_transforms(const std::string& root,
                                                                   const lie::AlgebraCatalog& algebras,
                                                                   const std::vector<vf::Realization>& realizations,
                                                                   const std::vector<ClassificationRow>& rows,
                                                                   const HarnessConfig& cfg);


}  // namespace liesym::eq
