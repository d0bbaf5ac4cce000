#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "liesym/eqcatalog.hpp"
#include "liesym/textformat.hpp"

namespace liesym::eq {

namespace {

constexpr double kSpanTol = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

RowVerdict run_checks(const ClassificationRow& row, const HarnessConfig& cfg) {
  RowVerdict v;
  v.id = row.id;
  v.group = row.group;
  v.erratum = row.erratum;
  auto fail = [&](const std::string& why) {
    if (v.failure.empty()) v.failure = why;
  };

  for (const auto& c : row.constraints)
    if (!c.holds(row.parameters)) {
      v.constraints_ok = false;
      fail("constraint '" + c.text() + "' violated");
    }

  const lie::StructureReport sr = lie::check_structure(row.realization.target);
  if (!sr.ok()) {
    v.structure_ok = false;
    fail("target algebra of " + row.realization_label + " fails the Jacobi identity");
  }

  SampleDomain dom = row.equation.domain;
  dom.count = cfg.samples;
  dom.seed = cfg.seed;
  const std::vector<Point> points = dom.draw();
  row.equation.check_nondegenerate(points);

  const vf::RealizationReport rr = vf::verify_realization(row.realization, points, cfg.realization_tol);
  if (!rr.ok) {
    v.realization_ok = false;
    fail("realization " + row.realization_label + " does not close on its target");
  }

  const ds::InvarianceReport ir = ds::check_invariance(row.equation, row.realization.fields, points, cfg.tol);
  v.invariance_residual = ir.max_residual;
  v.witness = ir.witness;
  if (row.expect_invariance_failure) {
    v.invariance_ok = !ir.ok;
    if (ir.ok) fail("expected a non-vanishing invariance residual, got " + fmt(ir.max_residual));
  } else {
    v.invariance_ok = ir.ok;
    if (!ir.ok)
      fail("generator " + std::to_string(*ir.failing_generator + 1) + " violates determining equation " +
           std::to_string(ir.failing_equation) + " (residual " + fmt(ir.max_residual) + ")");
  }

  if (row.claim != ClaimKind::maximal) {
    v.estimate_verdict = "skipped: invariance claim only";
  } else if (!cfg.estimate) {
    v.estimate_verdict = "skipped: estimation disabled";
  } else if (!row.ansatz.representable) {
    v.estimate_verdict = "basis-unrepresentable: " + row.ansatz.reason;
  } else {
    const ds::AnsatzBasis basis = row.ansatz.build(cfg.degree_override);
    const ds::NullspaceReport rep = ds::estimate_symmetry_dimension(row.equation, basis, cfg.estimator);
    v.dimension = rep.dimension;
    v.gap_ratio = rep.gap_ratio;
    v.estimate_verdict = rep.verdict;
    if (!rep.reliable) {
      fail(rep.verdict);
    } else if (!rep.recheck_ok) {
      fail(rep.verdict);
    } else if (rep.linear) {
      fail("estimator reports a linear equation");
    } else if (!row.erratum.empty()) {
      // The printed claim must fail before the corrected one is checked.
      v.erratum_reproduced = rep.dimension != row.claimed_dim;
      if (!v.erratum_reproduced)
        fail("erratum not reproduced: estimated dimension matches the printed " + std::to_string(row.claimed_dim));
      else if (row.corrected_claim == ClaimKind::unbounded && rep.dimension <= row.claimed_dim)
        fail("estimated dimension " + std::to_string(rep.dimension) + " does not exceed the printed " +
             std::to_string(row.claimed_dim));
      else if (row.corrected_claim == ClaimKind::maximal && rep.dimension != row.corrected_dim)
        fail("estimated dimension " + std::to_string(rep.dimension) + " differs from the corrected " +
             std::to_string(row.corrected_dim));
    } else if (rep.dimension != row.claimed_dim) {
      fail("estimated dimension " + std::to_string(rep.dimension) + " differs from the claimed " +
           std::to_string(row.claimed_dim));
    }
    if (v.failure.empty()) {
      const std::vector<Point> probe = row.equation.domain.draw();
      for (std::size_t k = 0; k < row.realization.fields.size(); ++k)
        if (ds::span_residual(rep.generators, row.realization.fields[k], probe) > kSpanTol) {
          fail("realization generator " + std::to_string(k + 1) + " lies outside the recovered span");
          break;
        }
    }
  }
  return v;
}

int leading_dimension(const std::string& group) {
  std::size_t n = 0;
  while (n < group.size() && std::isdigit(static_cast<unsigned char>(group[n]))) ++n;
  return n == 0 ? 0 : std::stoi(group.substr(0, n));
}

}  // namespace

RowVerdict verify_row(const ClassificationRow& row, const HarnessConfig& cfg) {
  RowVerdict v;
  try {
    v = run_checks(row, cfg);
  } catch (const std::exception& e) {
    v.id = row.id;
    v.group = row.group;
    v.failure = e.what();
  }
  v.pass = v.failure.empty();
  return v;
}

HarnessVerdict verify_catalog(const std::vector<ClassificationRow>& rows, const HarnessConfig& cfg) {
  HarnessVerdict out;
  out.rows.resize(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) out.rows[i] = verify_row(rows[i], cfg);
  };
  const std::size_t n = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const RowVerdict& a, const RowVerdict& b) { return a.id < b.id; });
  for (const auto& v : out.rows) (v.pass ? out.passed : out.failed)++;
  return out;
}

void tally(const std::vector<ClassificationRow>& rows, const std::string& root, HarnessVerdict& out) {
  const text::Record r = text::read_record(std::filesystem::path(root) / "tally.txt");
  std::map<int, int> summary;
  for (const auto& l : r.lines) {
    const auto tok = text::split_tokens(l.value);
    if (l.key == "expect") {
      if (tok.size() != 2) r.fail("expect needs '<group> <count>'", l.number);
      out.tallies.push_back({tok[0], 0, std::stoi(tok[1])});
    } else if (l.key == "summary") {
      if (tok.size() != 2) r.fail("summary needs '<dimension> <count>'", l.number);
      summary[std::stoi(tok[0])] = std::stoi(tok[1]);
    }
  }
  std::map<int, int> per_dim;
  for (auto& t : out.tallies) {
    t.found = static_cast<int>(
        std::count_if(rows.begin(), rows.end(), [&](const ClassificationRow& row) { return row.group == t.group; }));
    per_dim[leading_dimension(t.group)] += t.found;
    if (t.found != t.expected)
      out.discrepancies.push_back("group " + t.group + ": " + std::to_string(t.found) + " rows, enumeration lists " +
                                  std::to_string(t.expected));
  }
  for (const auto& [dim, found] : per_dim) {
    const auto it = summary.find(dim);
    if (it == summary.end())
      out.discrepancies.push_back("dimension " + std::to_string(dim) + ": " + std::to_string(found) +
                                  " equations, the summary count is missing");
    else if (it->second != found)
      out.discrepancies.push_back("dimension " + std::to_string(dim) + ": " + std::to_string(found) +
                                  " equations, the summary states " + std::to_string(it->second));
  }
}

ReductionResult verify_reduction(const Reduction& red, const ClassificationRow& source, const HarnessConfig& cfg) {
  ReductionResult res;
  res.id = red.id;
  try {
    std::vector<vf::VectorField> fields = source.realization.fields;
    fields.insert(fields.end(), red.extra.begin(), red.extra.end());

    SampleDomain dom = source.equation.domain;
    dom.count = cfg.samples;
    dom.seed = cfg.seed;
    const ds::InvarianceReport src = ds::check_invariance(source.equation, fields, dom, cfg.tol);
    res.source_ok = src.ok;
    res.max_residual = src.max_residual;

    ds::EquationSpec target = ds::transform_equation(source.equation, red.transform);
    target.domain.count = cfg.samples;
    target.domain.seed = cfg.seed;
    const std::vector<Point> points = target.domain.draw();
    const ZeroTest zf = is_zero(target.F - red.target_F, points, 1e-9);
    const ZeroTest zg = is_zero(target.G - red.target_G, points, 1e-9);
    res.target_form_ok = zf.zero && zg.zero;

    const ds::EquationSpec stored{target.label, red.target_F, red.target_G, target.domain};
    std::vector<vf::VectorField> pushed;
    for (const auto& q : fields) pushed.push_back(vf::pushforward(q, red.transform));
    const ds::InvarianceReport tgt = ds::check_invariance(stored, pushed, points, cfg.tol);
    res.target_ok = tgt.ok;
    res.max_residual = std::max(res.max_residual, tgt.max_residual);

    if (!res.source_ok) res.detail = "generators do not leave the source equation invariant";
    else if (!zf.zero) res.detail = "transformed F differs from the stored target (residual " + fmt(zf.max_residual) + ")";
    else if (!zg.zero) res.detail = "transformed G differs from the stored target (residual " + fmt(zg.max_residual) + ")";
    else if (!res.target_ok) res.detail = "pushed-forward generators do not leave the target invariant";
    else res.detail = std::to_string(fields.size()) + " generators carried to the target";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  res.pass = res.source_ok && res.target_form_ok && res.target_ok;
  return res;
}

std::vector<ReductionResult> special_case_transforms(const std::string& root, const lie::AlgebraCatalog& algebras,
                                                     const std::vector<vf::Realization>& realizations,
                                                     const std::vector<ClassificationRow>& rows,
                                                     const HarnessConfig& cfg) {
  std::vector<ReductionResult> out;
  for (const Reduction& red : load_reductions(root)) {
    const ClassificationRow& base = find_row(rows, red.source_row);
    const ClassificationRow source =
        red.overrides.empty() ? base : parse_row(base.source, algebras, realizations, red.overrides);
    out.push_back(verify_reduction(red, source, cfg));
  }
  for (const ClassificationRow& row : rows) {
    if (row.expect_invariance_failure) continue;
    Reduction id;
    id.id = "identity/" + row.id;
    id.source_row = row.id;
    id.transform = vf::PointTransformation::identity();
    id.target_F = row.equation.F;
    id.target_G = row.equation.G;
    out.push_back(verify_reduction(id, row, cfg));
  }
  return out;
}

}  // namespace liesym::eq
