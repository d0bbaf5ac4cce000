#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"

using namespace liesym::cli;

namespace {

void emit(const Outcome& out, const RunConfig& cfg) {
  const std::string body = cfg.format == "json" ? out.report.dump(2) + "\n" : out.text;
  if (cfg.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + cfg.out + "'");
  file << body;
  if (!file) throw ConfigError("write to '" + cfg.out + "' failed");
  // The summary, errata included, stays on the terminal.
  std::cout << out.text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie symmetry catalog for u_t = F(t,x,u,u_x) u_xx + G(t,x,u,u_x)"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "sampling seed");
    sub->add_option("--samples", cfg.samples, "sample points per check (>= 50)");
    sub->add_option("--tol", cfg.tol, "relative tolerance of zero tests")->each([&](const std::string&) {
      cfg.tol_given = true;
    });
    sub->add_option("--rank-tol", cfg.rank_tol, "relative singular-value threshold");
    sub->add_option("--degree", cfg.degree, "ansatz degree");
    sub->add_option("--library", cfg.library, "ansatz library: polynomial, laurent, trigonometric, exponential");
    sub->add_option("--format", cfg.format, "json or text");
    sub->add_option("--out", cfg.out, "write the report to this file");
  };

  std::string scope = "all";
  CLI::App* verify = app.add_subcommand("verify", "verify catalog entries");
  verify->add_option("scope_arg", scope, "liealg, realizations, equations or all");
  verify->add_option("--scope", scope, "liealg, realizations, equations or all");
  add_common(verify);

  std::string f_text, g_text;
  CLI::App* find = app.add_subcommand("find-symmetries", "estimate the point symmetry algebra of one equation");
  find->add_option("--F", f_text, "F(t,x,u,ux)")->required();
  find->add_option("--G", g_text, "G(t,x,u,ux)")->required();
  find->add_option("--domain", cfg.domain, "sampling box entry 'var lo hi' (default [0.5,2] for each)");
  add_common(find);

  std::string name;
  CLI::App* info = app.add_subcommand("info", "show a catalog entry by name or anchor");
  info->add_option("name", name, "algebra, realization or equation name")->required();
  info->add_option("--format", cfg.format, "json or text");
  info->add_option("--out", cfg.out, "write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    cfg.validate();
    Outcome out;
    if (*verify) {
      out = cmd_verify(load_catalogs(catalog_root()), scope, cfg);
    } else if (*find) {
      out = cmd_find_symmetries(f_text, g_text, cfg);
    } else {
      out = cmd_info(load_catalogs(catalog_root()), name);
      if (out.exit != kPass) {
        if (!cfg.out.empty() || cfg.format == "json") emit(out, cfg);
        else std::cerr << out.text;
        return out.exit;
      }
    }
    emit(out, cfg);
    return out.exit;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}
