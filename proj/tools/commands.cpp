#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace liesym::cli {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Json triple(const std::array<int, 3>& t) { return Json::array({t[0] + 1, t[1] + 1, t[2] + 1}); }

Json bindings_json(const lie::Bindings& b) {
  Json out = Json::object();
  for (const auto& [k, v] : b) out[k] = v.get_str();
  return out;
}

// Every erratum the catalogs declare, whatever the scope.
Json errata_list(const Catalogs& cat) {
  Json out = Json::array();
  for (const auto& e : cat.algebras.entries())
    if (const auto* o = cat.algebras.overlay(e.name)) {
      Json failing = Json::array();
      for (const auto& t : o->failing) failing.push_back(triple(t));
      out.push_back({{"kind", "algebra"}, {"name", e.name}, {"reason", o->reason.value_or("")}, {"failing", failing}});
    }
  for (const auto& r : cat.rows)
    if (!r.erratum.empty()) out.push_back({{"kind", "equation"}, {"name", r.id}, {"reason", r.erratum}});
  return out;
}

Json verify_liealg(const Catalogs& cat, bool& pass, std::ostringstream& text) {
  const auto verdicts = lie::verify_catalog(cat.algebras);
  Json entries = Json::array();
  std::map<std::string, int> per_source;
  int passed = 0;
  for (const auto& v : verdicts) {
    Json e{{"name", v.name}, {"provenance", v.provenance}, {"dim", v.dim},
           {"bindings", v.bindings.size()}, {"pass", v.pass}};
    if (v.errata) {
      Json raw = Json::array();
      for (const auto& t : v.raw_failing) raw.push_back(triple(t));
      e["errata"] = {{"origin", v.errata_origin},
                     {"raw_failing", raw},
                     {"declared_triple_reproduced", v.declared_triple_reproduced},
                     {"corrected_ok", v.corrected_ok}};
    }
    if (!v.detail.empty()) e["detail"] = v.detail;
    entries.push_back(std::move(e));
    ++per_source[v.provenance];
    if (v.pass) ++passed;
    else text << "  FAIL algebra " << v.name << ": " << v.detail << "\n";
  }
  const int failed = static_cast<int>(verdicts.size()) - passed;
  pass = pass && failed == 0;
  text << "liealg: " << passed << "/" << verdicts.size() << " entries pass";
  for (const auto& [k, n] : per_source) text << ", " << k << " " << n;
  text << "\n";
  return {{"checked", verdicts.size()}, {"passed", passed}, {"failed", failed}, {"by_source", per_source},
          {"entries", entries}};
}

Json verify_realizations(const Catalogs& cat, const RunConfig& cfg, bool& pass, std::ostringstream& text) {
  const eq::HarnessConfig h = cfg.harness();
  Json entries = Json::array();
  int passed = 0;
  for (const auto& r : cat.realizations) {
    Json e{{"label", r.label}, {"target", r.target_spec}, {"dim", r.target.dim()}};
    bool ok = false;
    try {
      SampleDomain dom = r.domain;
      dom.count = cfg.samples;
      dom.seed = cfg.seed;
      const auto rep = vf::verify_realization(r, dom, h.realization_tol);
      ok = rep.ok;
      e["max_residual"] = rep.max_residual;
      e["points"] = rep.points;
      if (rep.failing_pair) e["failing_pair"] = Json::array({rep.failing_pair->first + 1, rep.failing_pair->second + 1});
    } catch (const std::exception& ex) {
      e["detail"] = ex.what();
    }
    e["pass"] = ok;
    if (ok) ++passed;
    else text << "  FAIL realization " << r.label << "\n";
    entries.push_back(std::move(e));
  }
  const int failed = static_cast<int>(cat.realizations.size()) - passed;
  pass = pass && failed == 0;
  text << "realizations: " << passed << "/" << cat.realizations.size() << " pass (tol " << sci(h.realization_tol)
       << ", " << cfg.samples << " points)\n";
  return {{"checked", cat.realizations.size()}, {"passed", passed}, {"failed", failed}, {"entries", entries}};
}

Json verify_equations(const Catalogs& cat, const RunConfig& cfg, bool& pass, std::ostringstream& text) {
  const eq::HarnessConfig h = cfg.harness();
  eq::HarnessVerdict hv = eq::verify_catalog(cat.rows, h);
  eq::tally(cat.rows, cat.root, hv);

  Json rows = Json::array();
  for (const auto& v : hv.rows) {
    Json e{{"id", v.id},
           {"group", v.group},
           {"pass", v.pass},
           {"constraints_ok", v.constraints_ok},
           {"structure_ok", v.structure_ok},
           {"realization_ok", v.realization_ok},
           {"invariance_ok", v.invariance_ok},
           {"invariance_residual", v.invariance_residual}};
    if (v.dimension) {
      e["dimension"] = *v.dimension;
      e["gap_ratio"] = v.gap_ratio;
    }
    e["estimate"] = v.estimate_verdict;
    if (!v.erratum.empty()) e["erratum"] = {{"text", v.erratum}, {"reproduced", v.erratum_reproduced}};
    if (!v.failure.empty()) {
      e["failure"] = v.failure;
      if (v.witness) e["witness"] = Json::array({(*v.witness)[0], (*v.witness)[1], (*v.witness)[2], (*v.witness)[3]});
      text << "  FAIL row " << v.id << ": " << v.failure << "\n";
    }
    rows.push_back(std::move(e));
  }

  Json tallies = Json::array();
  for (const auto& t : hv.tallies) tallies.push_back({{"group", t.group}, {"found", t.found}, {"expected", t.expected}});

  const auto reductions = eq::special_case_transforms(cat.root, cat.algebras, cat.realizations, cat.rows, h);
  Json stored = Json::array();
  int identity_checked = 0, identity_passed = 0, stored_passed = 0, reductions_failed = 0;
  for (const auto& r : reductions) {
    if (!r.pass) {
      ++reductions_failed;
      text << "  FAIL reduction " << r.id << ": " << r.detail << "\n";
    }
    if (r.id.rfind("identity/", 0) == 0) {
      ++identity_checked;
      if (r.pass) ++identity_passed;
      continue;
    }
    if (r.pass) ++stored_passed;
    stored.push_back({{"id", r.id},
                      {"pass", r.pass},
                      {"source_ok", r.source_ok},
                      {"target_form_ok", r.target_form_ok},
                      {"target_ok", r.target_ok},
                      {"max_residual", r.max_residual},
                      {"detail", r.detail}});
  }

  pass = pass && hv.ok() && reductions_failed == 0;
  text << "equations: " << hv.passed << "/" << hv.rows.size() << " rows pass (tol " << sci(h.tol) << ")\n";
  for (const auto& t : hv.tallies)
    text << "  group " << t.group << ": " << t.found << " rows (" << t.expected << " enumerated)\n";
  text << "reductions: " << stored_passed << "/" << stored.size() << " stored pass, identity " << identity_passed
       << "/" << identity_checked << "\n";
  for (const auto& d : hv.discrepancies) text << "discrepancy: " << d << "\n";

  return {{"checked", hv.rows.size()},
          {"passed", hv.passed},
          {"failed", hv.failed},
          {"rows", rows},
          {"tallies", tallies},
          {"discrepancies", hv.discrepancies},
          {"reductions", stored},
          {"identity", {{"checked", identity_checked}, {"passed", identity_passed}}}};
}

Json header(const std::string& command) { return {{"schema", "1"}, {"command", command}}; }

Var coordinate(const std::string& name) {
  if (name == "t") return Var::t;
  if (name == "x") return Var::x;
  if (name == "u") return Var::u;
  if (name == "ux") return Var::ux;
  throw ConfigError("unknown coordinate '" + name + "' in --domain");
}

std::string profile_word(const lie::AlgebraProfile& p) {
  if (p.nilpotent) return "nilpotent";
  if (p.solvable) return "solvable";
  if (p.semisimple) return "semisimple";
  return "neither solvable nor semisimple";
}

Json algebra_info(const Catalogs& cat, const lie::AlgebraEntry& e, std::ostringstream& text) {
  const lie::StructureConstants sc = cat.algebras.instantiate(e);
  const lie::AlgebraProfile p = lie::profile(sc);
  Json j{{"kind", "algebra"}, {"name", e.name}, {"provenance", e.provenance}, {"dim", e.dim}};
  if (!e.defaults.empty()) j["parameters"] = bindings_json(e.defaults);
  j["brackets"] = sc.describe();
  j["class"] = profile_word(p);
  j["derived_series"] = p.derived_series;
  j["lower_central_series"] = p.lower_central_series;
  Json constraints = Json::array();
  for (const auto& c : e.constraints) constraints.push_back(c.text());
  if (!constraints.empty()) j["constraints"] = constraints;
  if (e.quote) j["quote"] = *e.quote;
  if (const auto* o = cat.algebras.overlay(e.name)) j["erratum"] = o->reason.value_or("overlay applied");

  text << "algebra " << e.name << " (" << e.provenance << ", dimension " << e.dim << ")\n";
  if (!e.defaults.empty()) {
    text << "  parameters:";
    for (const auto& [k, v] : e.defaults) text << " " << k << "=" << v.get_str();
    text << "\n";
  }
  for (const auto& b : j["brackets"]) text << "  " << b.get<std::string>() << "\n";
  if (sc.describe().empty()) text << "  abelian\n";
  text << "  " << j["class"].get<std::string>() << "\n";
  if (j.contains("erratum")) text << "  erratum: " << j["erratum"].get<std::string>() << "\n";
  if (e.quote) text << "  quote: " << *e.quote << "\n";
  return j;
}

Json realization_info(const vf::Realization& r, std::ostringstream& text) {
  Json gens = Json::array();
  for (const auto& f : r.fields) gens.push_back(f.to_string());
  Json j{{"kind", "realization"}, {"label", r.label}, {"target", r.target_spec}, {"generators", gens}};
  if (!r.anchor.empty()) j["anchor"] = r.anchor;
  if (!r.quote.empty()) j["quote"] = r.quote;
  if (!r.notes.empty()) j["notes"] = r.notes;
  text << "realization " << r.label;
  if (!r.anchor.empty()) text << " " << r.anchor;
  text << " of " << r.target_spec << "\n";
  for (std::size_t k = 0; k < r.fields.size(); ++k) text << "  e_" << k + 1 << " = " << r.fields[k].to_string() << "\n";
  for (const auto& n : r.notes) text << "  note: " << n << "\n";
  if (!r.quote.empty()) text << "  quote: " << r.quote << "\n";
  return j;
}

std::string claim_text(const eq::ClassificationRow& r) {
  if (r.expect_invariance_failure) return "must fail invariance";
  if (r.claim == eq::ClaimKind::invariant_only) return "invariant";
  return "maximal, dimension " + std::to_string(r.claimed_dim);
}

Json row_info(const eq::ClassificationRow& r, std::ostringstream& text) {
  Json j{{"kind", "equation"},          {"id", r.id},
         {"group", r.group},            {"realization", r.realization_label},
         {"F", r.equation.F.to_string()}, {"G", r.equation.G.to_string()},
         {"claim", claim_text(r)}};
  if (!r.parameters.empty()) j["parameters"] = bindings_json(r.parameters);
  if (!r.slot_bindings.empty()) j["slot_bindings"] = r.slot_bindings;
  Json constraints = Json::array();
  for (const auto& c : r.constraints) constraints.push_back(c.text());
  if (!constraints.empty()) j["constraints"] = constraints;
  if (!r.specializes.empty()) j["specializes"] = r.specializes;
  if (!r.erratum.empty()) j["erratum"] = r.erratum;
  if (!r.anchor.empty()) j["anchor"] = r.anchor;
  j["quote"] = r.quote;
  if (!r.notes.empty()) j["notes"] = r.notes;

  text << "equation " << r.id;
  if (!r.anchor.empty()) text << " " << r.anchor;
  text << " [" << r.group << "]\n";
  text << "  u_t = F u_xx + G with\n  F = " << r.equation.F.to_string() << "\n  G = " << r.equation.G.to_string()
       << "\n";
  for (const auto& [k, v] : r.parameters) text << "  " << k << " = " << v.get_str() << "\n";
  for (const auto& [k, v] : r.slot_bindings) text << "  " << k << "(s) = " << v << "\n";
  text << "  realization " << r.realization_label << ", claim: " << claim_text(r) << "\n";
  for (const auto& c : r.constraints) text << "  constraint: " << c.text() << "\n";
  if (!r.erratum.empty()) text << "  erratum: " << r.erratum << "\n";
  for (const auto& n : r.notes) text << "  note: " << n << "\n";
  text << "  quote: " << r.quote << "\n";
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (!(tol > 0) || !(rank_tol > 0) || !(gap_floor > 0)) throw ConfigError("tolerances must be positive");
  if (samples < 50) throw ConfigError("--samples must be at least 50");
  if (degree < 0) throw ConfigError("--degree must be non-negative");
  const auto& names = ds::basis_names();
  if (std::find(names.begin(), names.end(), library) == names.end())
    throw ConfigError("unknown --library '" + library + "'");
  if (format != "json" && format != "text") throw ConfigError("--format must be json or text");
}

eq::HarnessConfig RunConfig::harness() const {
  eq::HarnessConfig h;
  h.tol = tol;
  if (tol_given) h.realization_tol = tol;
  h.samples = samples;
  h.seed = seed;
  h.degree_override = degree;
  h.estimator.rank_tol = rank_tol;
  h.estimator.gap_floor = gap_floor;
  return h;
}

Json RunConfig::to_json() const {
  const eq::HarnessConfig h = harness();
  return {{"seed", seed},         {"samples", samples},         {"tol", h.tol},
          {"realization_tol", h.realization_tol}, {"rank_tol", rank_tol}, {"gap_floor", gap_floor},
          {"library", library},   {"degree", degree}};
}

std::string catalog_root() {
  if (const char* env = std::getenv("LIESYM_CATALOG_DIR"); env && *env) return env;
  return LIESYM_DEFAULT_CATALOG_DIR;
}

Catalogs load_catalogs(const std::string& root) {
  if (!std::filesystem::is_directory(root)) throw ConfigError("catalog directory '" + root + "' not found");
  try {
    Catalogs c{root, lie::AlgebraCatalog::load(root), {}, {}};
    c.realizations = vf::load_realizations(root, c.algebras);
    c.rows = eq::load_catalog(root, c.algebras, c.realizations);
    return c;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("catalog: ") + e.what());
  }
}

Outcome cmd_verify(const Catalogs& cat, const std::string& scope, const RunConfig& cfg) {
  if (scope != "liealg" && scope != "realizations" && scope != "equations" && scope != "all")
    throw ConfigError("--scope must be liealg, realizations, equations or all");
  Outcome out;
  out.report = header("verify");
  out.report["scope"] = scope;
  out.report["config"] = cfg.to_json();
  out.report["errata"] = errata_list(cat);

  std::ostringstream text;
  bool pass = true;
  if (scope == "liealg" || scope == "all") out.report["liealg"] = verify_liealg(cat, pass, text);
  if (scope == "realizations" || scope == "all") out.report["realizations"] = verify_realizations(cat, cfg, pass, text);
  if (scope == "equations" || scope == "all") out.report["equations"] = verify_equations(cat, cfg, pass, text);
  out.report["pass"] = pass;

  for (const auto& e : out.report["errata"]) {
    text << "erratum (" << e["kind"].get<std::string>() << ") " << e["name"].get<std::string>() << ": "
         << e["reason"].get<std::string>();
    if (e.contains("failing") && !e["failing"].empty()) text << " [Jacobi fails at " << e["failing"].dump() << "]";
    text << "\n";
  }
  text << (pass ? "PASS" : "FAIL") << "\n";
  out.text = text.str();
  out.exit = pass ? kPass : kFail;
  return out;
}

Outcome cmd_find_symmetries(const std::string& f, const std::string& g, const RunConfig& cfg) {
  ds::EquationSpec eq;
  eq.label = "u_t = (" + f + ") u_xx + (" + g + ")";
  try {
    eq.F = parse(f);
    eq.G = parse(g);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  for (const char* name : {"t", "x", "u", "ux"}) eq.domain.set(coordinate(name), 0.5, 2.0);
  for (const auto& d : cfg.domain) {
    std::istringstream is(d);
    std::string var;
    double lo = 0, hi = 0;
    if (!(is >> var >> lo >> hi) || !(lo < hi)) throw ConfigError("--domain expects 'var lo hi', got '" + d + "'");
    eq.domain.set(coordinate(var), lo, hi);
  }
  eq.domain.seed = cfg.seed;
  eq.domain.count = cfg.samples;

  ds::NullspaceReport rep;
  try {
    eq.check_nondegenerate(eq.domain.draw());
    const ds::AnsatzBasis basis = ds::basis_by_name(cfg.library, cfg.degree > 0 ? cfg.degree : 3);
    ds::EstimateOptions opt;
    opt.rank_tol = cfg.rank_tol;
    opt.gap_floor = cfg.gap_floor;
    rep = ds::estimate_symmetry_dimension(eq, basis, opt);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  Outcome out;
  out.report = header("find-symmetries");
  out.report["F"] = f;
  out.report["G"] = g;
  out.report["config"] = cfg.to_json();
  Json gens = Json::array();
  for (const auto& q : rep.generators) gens.push_back(q.to_string());
  out.report["basis"] = rep.basis;
  out.report["unknowns"] = rep.unknowns;
  out.report["points"] = rep.points;
  out.report["dimension"] = rep.dimension;
  out.report["gap_ratio"] = rep.gap_ratio;
  out.report["reliable"] = rep.reliable;
  out.report["recheck_ok"] = rep.recheck_ok;
  out.report["linear"] = rep.linear;
  out.report["verdict"] = rep.verdict;
  // The singular values on either side of the numerical rank.
  const std::size_t n = rep.singular_values.size();
  const std::size_t rank = n >= static_cast<std::size_t>(rep.dimension) ? n - rep.dimension : 0;
  const std::size_t lo = rank >= 3 ? rank - 3 : 0;
  out.report["singular_values_near_gap"] =
      std::vector<double>(rep.singular_values.begin() + static_cast<std::ptrdiff_t>(lo),
                          rep.singular_values.begin() + static_cast<std::ptrdiff_t>(std::min(n, rank + 3)));
  out.report["generators"] = gens;

  std::ostringstream text;
  text << eq.label << "\n";
  text << "basis " << rep.basis << ": " << rep.unknowns << " unknowns, " << rep.points << " points\n";
  text << "dimension " << rep.dimension << ", gap ratio " << sci(rep.gap_ratio) << "\n";
  text << rep.verdict << "\n";
  for (std::size_t k = 0; k < rep.generators.size(); ++k)
    text << "  X_" << k + 1 << " = " << rep.generators[k].to_string() << "\n";
  out.text = text.str();
  out.exit = rep.reliable && rep.recheck_ok ? kPass : kUnreliable;
  return out;
}

Outcome cmd_info(const Catalogs& cat, const std::string& name) {
  Outcome out;
  out.report = header("info");
  out.report["name"] = name;
  Json matches = Json::array();
  std::ostringstream text;

  if (const auto* e = cat.algebras.find(name)) matches.push_back(algebra_info(cat, *e, text));
  for (const auto& r : cat.realizations)
    if (r.label == name || r.anchor == name) matches.push_back(realization_info(r, text));
  for (const auto& r : cat.rows)
    if (r.id == name || r.anchor == name) matches.push_back(row_info(r, text));

  if (matches.empty()) {
    std::vector<std::string> names = cat.algebras.names();
    for (const auto& r : cat.realizations) {
      names.push_back(r.label);
      if (!r.anchor.empty()) names.push_back(r.anchor);
    }
    for (const auto& r : cat.rows) {
      names.push_back(r.id);
      if (!r.anchor.empty()) names.push_back(r.anchor);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    const auto near = lie::nearest_names(name, names);
    out.report["error"] = "unknown name";
    out.report["suggestions"] = near;
    text << "unknown name '" << name << "'";
    if (!near.empty()) {
      text << "; did you mean";
      for (std::size_t k = 0; k < near.size(); ++k) text << (k ? ", " : " ") << near[k];
      text << "?";
    }
    text << "\n";
    out.exit = kFail;
  }
  out.report["matches"] = matches;
  out.text = text.str();
  return out;
}

}  // namespace liesym::cli
