#include <algorithm>
#include <filesystem>

#include "liesym/algcatalog.hpp"
#include "liesym/textformat.hpp"
#include "liesym/vecfield.hpp"

namespace liesym::vf {

namespace {

Var coordinate(const std::string& name, const text::Record& r, int line) {
  if (name == "t") return Var::t;
  if (name == "x") return Var::x;
  if (name == "u") return Var::u;
  if (name == "ux") return Var::ux;
  r.fail("unknown coordinate '" + name + "'", line);
}

double real_value(const std::string& s, const ParseContext& ctx, const text::Record& r, int line) {
  try {
    return eval(parse(s, ctx), make_point(0, 0, 0, 0));
  } catch (const std::exception& e) {
    r.fail("bad bound '" + s + "': " + e.what(), line);
  }
}

}  // namespace

Realization parse_realization(const std::string& path, const lie::AlgebraCatalog& algebras,
                              const std::map<std::string, Number>& overrides) {
  const text::Record r = text::read_record(path);
  Realization out;
  out.source = path;
  out.label = r.require("label");
  out.target_spec = r.require("target");

  for (const auto& l : r.lines) {
    if (l.key != "param" && l.key != "slot" && l.key != "let") continue;
    try {
      out.context.declare(l.key + " " + l.value);
    } catch (const std::exception& e) {
      r.fail(e.what(), l.number);
    }
  }

  for (const auto& [name, value] : overrides) {
    if (!out.context.params.count(name)) r.fail("override of undeclared parameter '" + name + "'");
    out.context.params[name] = value;
  }

  lie::Bindings outer;
  for (const auto& [name, value] : out.context.params)
    if (value.exact()) outer[name] = lie::to_rational(value);
  try {
    out.target = algebras.resolve_target(out.target_spec, outer, out.context);
  } catch (const std::exception& e) {
    r.fail(std::string("target: ") + e.what());
  }

  for (const auto& l : r.lines) {
    try {
      if (l.key == "e") {
        const auto parts = text::split_top(l.value, '|');
        if (parts.size() != 3) r.fail("generator needs 'a | b | c'", l.number);
        out.fields.emplace_back(parse(parts[0], out.context), parse(parts[1], out.context),
                                parse(parts[2], out.context));
      } else if (l.key == "domain") {
        const auto tok = text::split_tokens(l.value);
        if (tok.size() != 3) r.fail("domain line needs 'var lo hi'", l.number);
        out.domain.set(coordinate(tok[0], r, l.number), real_value(tok[1], out.context, r, l.number),
                       real_value(tok[2], out.context, r, l.number));
      } else if (l.key == "guard") {
        out.domain.guards.push_back(parse(l.value, out.context));
      } else if (l.key == "samples") {
        out.domain.count = static_cast<std::size_t>(std::stoul(l.value));
      } else if (l.key == "note") {
        out.notes.push_back(l.value);
      }
    } catch (const text::FormatError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(e.what(), l.number);
    }
  }
  out.quote = r.joined("quote");
  out.anchor = r.get("anchor").value_or("");
  if (static_cast<int>(out.fields.size()) != out.target.dim())
    r.fail(std::to_string(out.fields.size()) + " generators for a " + std::to_string(out.target.dim()) +
           "-dimensional target");
  return out;
}

std::vector<Realization> load_realizations(const std::string& root, const lie::AlgebraCatalog& algebras) {
  std::vector<std::filesystem::path> files;
  const std::filesystem::path dir = std::filesystem::path(root) / "realizations";
  if (std::filesystem::is_directory(dir))
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Realization> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(parse_realization(f.string(), algebras));
  return out;
}

}  // namespace liesym::vf
