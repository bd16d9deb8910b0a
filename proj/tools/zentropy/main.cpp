#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using zentropy::cli::Invocation;

  CLI::App app{"zentropy: entropic potential of events, from grid-worlds to sensor streams"};
  app.require_subcommand(1);

  Invocation inv;
  std::string config, input, out;
  std::uint64_t seed = 0;

  auto add_run_options = [&](CLI::App* sub, bool with_input) {
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory (ZENTROPY_OUT overrides)");
    sub->add_option("--seed", seed, "global seed, overrides the config value");
    if (with_input) sub->add_option("--input", input, "newline-delimited values; stdin when omitted or '-'");
  };

  add_run_options(app.add_subcommand("gridworld", "per-state, per-action Z table for a grid-world"), false);
  add_run_options(app.add_subcommand("train", "Q-learning with entropic-potential reward shaping"), false);
  add_run_options(app.add_subcommand("bayes", "rank Bernoulli queries by expected Z, attribute observed data"), false);
  add_run_options(app.add_subcommand("anomaly", "score a sensor stream and flag Z spikes"), true);
  auto* report = app.add_subcommand("report", "print the attribution table of a finished run");
  report->add_option("run_dir", out, "run directory");
  report->add_option("--out", out, "run directory (ZENTROPY_OUT overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zentropy::cli::kExitConfig;
  }

  inv.subcommand = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  if (!config.empty()) inv.config = config;
  if (!input.empty()) inv.input = input;
  if (!out.empty()) inv.out = out;
  if (sub->get_option_no_throw("--seed") && sub->count("--seed")) inv.seed = seed;
  return zentropy::cli::run(inv, std::cout, std::cerr);
}
