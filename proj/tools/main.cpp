#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using stieltjes::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Stieltjes and inverse Stieltjes family toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  double tol = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--dim-m", cfg.dim_m, "dimension of M");
    sub->add_option("--dim-k", cfg.dim_k, "dimension of K");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--grid", cfg.grid, "lambda grid: arcs:N | left:N | points:re,im;...");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
  };
  auto with_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance, "instance or gen bundle JSON")->required();
    sub->add_option("--member", cfg.member, "bundle member: system or construction");
  };

  auto* gen = app.add_subcommand("gen", "write a seeded system and construction");
  common(gen);
  auto* eval = app.add_subcommand("eval", "evaluate a family on a lambda grid");
  common(eval);
  with_instance(eval);
  auto* check = app.add_subcommand("check", "run a verification suite");
  common(check);
  with_instance(check);
  check->add_option("suite", cfg.suite, "rs | sector | kernel | equiv")
      ->required()
      ->check(CLI::IsMember({"rs", "sector", "kernel", "equiv"}));
  auto* rep = app.add_subcommand("rep", "integral representation of a construction");
  common(rep);
  with_instance(rep);
  auto* limits = app.add_subcommand("limits", "strong resolvent limits at -0 and -inf");
  common(limits);
  with_instance(limits);
  auto* all = app.add_subcommand("verify-all", "run every suite on seeded instances");
  common(all);
  all->add_option("--count", cfg.count, "number of seeded instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : stieltjes::cli::kExitInput;
  }
  for (CLI::App* sub : app.get_subcommands())
    if (sub->count("--tol")) cfg.tol = tol;

  const std::string name = app.get_subcommands().front()->get_name();
  const auto out = stieltjes::cli::run_command(name, cfg);
  if (cfg.out.empty()) {
    std::cout << out.text;
  } else {
    try {
      stieltjes::write_text_file(cfg.out, out.text);
    } catch (const stieltjes::Error& e) {
      std::cerr << e.what() << "\n";
      return stieltjes::cli::kExitInput;
    }
  }
  return out.exit_code;
}
