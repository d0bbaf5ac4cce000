#include <algorithm>
#include <filesystem>
#include <set>

#include "liesym/eqcatalog.hpp"
#include "liesym/textformat.hpp"

namespace liesym::eq {

namespace {

Var coordinate(const std::string& name, const text::Record& r, int line) {
  if (name == "t") return Var::t;
  if (name == "x") return Var::x;
  if (name == "u") return Var::u;
  if (name == "ux") return Var::ux;
  r.fail("unknown coordinate '" + name + "'", line);
}

double constant_value(const std::string& s, const ParseContext& ctx) {
  return eval(parse(s, ctx), make_point(0, 0, 0, 0));
}

std::vector<std::filesystem::path> text_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

AnsatzChoice read_ansatz(const text::Record& r, const ParseContext& ctx) {
  AnsatzChoice a;
  for (const auto& l : r.lines) {
    if (l.key == "ansatz") {
      const auto tok = text::split_tokens(l.value);
      if (tok.empty()) r.fail("ansatz needs a library name", l.number);
      if (tok[0] == "none") {
        a.representable = false;
        const auto pos = l.value.find("none");
        a.reason = text::trim(l.value.substr(pos + 4));
        if (a.reason.empty()) r.fail("'ansatz none' needs a reason", l.number);
        continue;
      }
      const auto& names = ds::basis_names();
      if (std::find(names.begin(), names.end(), tok[0]) == names.end())
        r.fail("unknown ansatz library '" + tok[0] + "'", l.number);
      a.library = tok[0];
      if (tok.size() > 1) a.degree = std::stoi(tok[1]);
    } else if (l.key == "ansatz-time") {
      a.extra_time.push_back(parse(l.value, ctx));
    } else if (l.key == "ansatz-space") {
      a.extra_space.push_back(parse(l.value, ctx));
    }
  }
  return a;
}

}  // namespace

const std::map<std::string, std::string>& generic_bindings() {
  static const std::map<std::string, std::string> b{{"Ftilde", "2+sin(s)"}, {"Gtilde", "1+exp(s/3)"}};
  return b;
}

ds::AnsatzBasis AnsatzChoice::build(int degree_override) const {
  if (!representable) throw std::logic_error("no ansatz: " + reason);
  ds::AnsatzBasis b = ds::basis_by_name(library, degree_override > 0 ? degree_override : degree);
  for (const Expr& e : extra_time) b.time.push_back(e);
  for (const Expr& e : extra_space) b.space.push_back(e);
  if (!extra_time.empty() || !extra_space.empty()) b.name += "+extra";
  return b;
}

ClassificationRow parse_row(const std::string& path, const lie::AlgebraCatalog& algebras,
                            const std::vector<vf::Realization>& realizations,
                            const std::map<std::string, Number>& overrides) {
  const text::Record r = text::read_record(path);
  ClassificationRow row;
  row.source = path;
  row.id = r.require("id");
  row.group = r.require("group");
  row.realization_label = r.require("realization");
  row.anchor = r.get("anchor").value_or("");
  row.quote = r.joined("quote");
  row.notes = r.all("note");
  row.specializes = r.get("specializes").value_or("");

  const vf::Realization* base = nullptr;
  try {
    base = &vf::find_realization(realizations, row.realization_label);
  } catch (const std::out_of_range&) {
    r.fail("unknown realization '" + row.realization_label + "'");
  }

  // Row-level parameter values first, then caller overrides on top.
  std::map<std::string, Number> values;
  for (const auto& l : r.lines) {
    if (l.key != "param") continue;
    ParseContext scratch;
    try {
      scratch.declare("param " + l.value);
    } catch (const std::exception& e) {
      r.fail(e.what(), l.number);
    }
    for (const auto& [k, v] : scratch.params) values[k] = v;
  }
  for (const auto& [k, v] : overrides) values[k] = v;

  std::map<std::string, Number> realization_values;
  for (const auto& [k, v] : values)
    if (base->context.params.count(k)) realization_values[k] = v;
  row.realization = vf::parse_realization(base->source, algebras, realization_values);

  ParseContext ctx = row.realization.context;
  std::set<std::string> declared;
  for (const auto& [k, v] : ctx.params) declared.insert(k);
  for (const auto& l : r.lines) {
    if (l.key != "param" && l.key != "slot" && l.key != "bind" && l.key != "let") continue;
    try {
      ctx.declare(l.key + " " + l.value);
      if (l.key == "param")
        for (auto& [k, v] : ctx.params) {
          declared.insert(k);
          if (overrides.count(k)) v = overrides.at(k);
        }
      if (l.key == "bind") {
        const auto eq = l.value.find('=');
        row.slot_bindings[text::trim(l.value.substr(0, eq))] = text::trim(l.value.substr(eq + 1));
      }
    } catch (const std::exception& e) {
      r.fail(e.what(), l.number);
    }
  }
  for (const auto& [k, v] : overrides)
    if (!declared.count(k)) r.fail("override of undeclared parameter '" + k + "'");

  for (auto& [name, binding] : ctx.slots) {
    if (binding) continue;
    const auto it = generic_bindings().find(name);
    if (it == generic_bindings().end()) r.fail("slot '" + name + "' has no binding");
    ctx.declare("bind " + name + " = " + it->second);
    row.slot_bindings[name] = it->second;
  }

  for (const auto& [k, v] : ctx.params)
    if (v.exact()) row.parameters[k] = lie::to_rational(v);

  row.equation.label = row.id;
  row.equation.domain = row.realization.domain;
  for (const auto& l : r.lines) {
    try {
      if (l.key == "F") {
        row.equation.F = parse(l.value, ctx);
      } else if (l.key == "G") {
        row.equation.G = parse(l.value, ctx);
      } else if (l.key == "domain") {
        const auto tok = text::split_tokens(l.value);
        if (tok.size() != 3) r.fail("domain line needs 'var lo hi'", l.number);
        row.equation.domain.set(coordinate(tok[0], r, l.number), constant_value(tok[1], ctx),
                                constant_value(tok[2], ctx));
      } else if (l.key == "guard") {
        row.equation.domain.guards.push_back(parse(l.value, ctx));
      } else if (l.key == "samples") {
        row.equation.domain.count = static_cast<std::size_t>(std::stoul(l.value));
      } else if (l.key == "constraint") {
        row.constraints.emplace_back(l.value, ctx);
      } else if (l.key == "claim") {
        const auto tok = text::split_tokens(l.value);
        if (tok.size() == 2 && tok[0] == "maximal") {
          row.claim = ClaimKind::maximal;
          row.claimed_dim = std::stoi(tok[1]);
        } else if (tok.size() == 1 && tok[0] == "invariant") {
          row.claim = ClaimKind::invariant_only;
        } else {
          r.fail("claim must be 'maximal <d>' or 'invariant'", l.number);
        }
      } else if (l.key == "erratum") {
        row.erratum = l.value;
      } else if (l.key == "corrected-claim") {
        const auto tok = text::split_tokens(l.value);
        if (tok.size() == 1 && tok[0] == "unbounded") {
          row.corrected_claim = ClaimKind::unbounded;
        } else if (tok.size() == 2 && tok[0] == "maximal") {
          row.corrected_claim = ClaimKind::maximal;
          row.corrected_dim = std::stoi(tok[1]);
        } else {
          r.fail("corrected-claim must be 'maximal <d>' or 'unbounded'", l.number);
        }
      } else if (l.key == "expect") {
        if (l.value != "invariance-failure") r.fail("unknown expectation '" + l.value + "'", l.number);
        row.expect_invariance_failure = true;
        row.claim = ClaimKind::invariant_only;
      }
    } catch (const text::FormatError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(e.what(), l.number);
    }
  }
  if (!r.get("F") || !r.get("G")) r.fail("row needs F and G lines");
  if (!r.get("claim") && !row.expect_invariance_failure) r.fail("row needs a claim line");
  if (!row.erratum.empty() && (!r.get("corrected-claim") || row.claim != ClaimKind::maximal))
    r.fail("an erratum needs a printed maximal claim and a corrected-claim line");
  if (row.claim == ClaimKind::maximal && row.claimed_dim < row.realization.target.dim())
    r.fail("claimed maximal dimension is below the realization dimension");
  try {
    row.ansatz = read_ansatz(r, ctx);
  } catch (const text::FormatError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  for (const Expr* e : {&row.equation.F, &row.equation.G}) {
    const auto open = unbound_slots(*e);
    if (!open.empty()) r.fail("unbound slot '" + open.front() + "'");
  }
  return row;
}

std::vector<ClassificationRow> load_catalog(const std::string& root, const lie::AlgebraCatalog& algebras,
                                            const std::vector<vf::Realization>& realizations) {
  std::vector<ClassificationRow> out;
  std::set<std::string> ids;
  for (const auto& f : text_files(std::filesystem::path(root) / "equations")) {
    out.push_back(parse_row(f.string(), algebras, realizations));
    if (!ids.insert(out.back().id).second)
      throw text::FormatError(f.string() + ": duplicate row id '" + out.back().id + "'");
  }
  for (const auto& row : out)
    if (!row.specializes.empty() && !ids.count(row.specializes))
      throw text::FormatError(row.source + ": specializes unknown row '" + row.specializes + "'");
  return out;
}

const ClassificationRow& find_row(const std::vector<ClassificationRow>& rows, const std::string& id) {
  for (const auto& r : rows)
    if (r.id == id) return r;
  for (const auto& r : rows)
    if (!r.anchor.empty() && r.anchor == id) return r;
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.id);
  throw lie::UnknownName(id, lie::nearest_names(id, names));
}

std::vector<Reduction> load_reductions(const std::string& root) {
  std::vector<Reduction> out;
  for (const auto& f : text_files(std::filesystem::path(root) / "reductions")) {
    const text::Record r = text::read_record(f);
    Reduction red;
    red.source = f.string();
    red.id = r.require("id");
    red.source_row = r.require("source");
    red.quote = r.joined("quote");
    red.notes = r.all("note");
    try {
      ParseContext ctx;
      for (const auto& l : r.lines)
        if (l.key == "override") {
          ParseContext scratch;
          scratch.declare("param " + l.value);
          for (const auto& [k, v] : scratch.params) red.overrides[k] = v;
        }
      const auto inv = text::split_top(r.require("inverse"), '|');
      if (inv.size() != 3) r.fail("inverse needs 't | x | u'");
      red.transform = vf::PointTransformation(parse(r.require("T"), ctx), parse(r.require("X"), ctx),
                                              parse(r.require("U"), ctx),
                                              std::array<Expr, 3>{parse(inv[0], ctx), parse(inv[1], ctx),
                                                                  parse(inv[2], ctx)},
                                              red.id);
      for (const auto& l : r.lines)
        if (l.key == "extra") {
          const auto parts = text::split_top(l.value, '|');
          if (parts.size() != 3) r.fail("extra generator needs 'a | b | c'", l.number);
          red.extra.emplace_back(parse(parts[0], ctx), parse(parts[1], ctx), parse(parts[2], ctx));
        }
      red.target_F = parse(r.require("target-F"), ctx);
      red.target_G = parse(r.require("target-G"), ctx);
    } catch (const text::FormatError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(e.what());
    }
    out.push_back(std::move(red));
  }
  return out;
}

}  // namespace liesym::eq
