#include "qsense/commands.hpp"
#include "qsense/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Bayesian frequency estimation studies and ion-trap pulse compilation", "qsense"};
  app.set_version_flag("--version", qsense::kVersion);
  app.require_subcommand(1);

  qsense::CommandArgs args;
  std::string config;
  std::string out = ".";
  unsigned seed = 0;
  int threads = 0;

  for (const auto& name : qsense::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed for restart schedules (overrides [run] seed)");
    sub->add_option("--threads", threads, "worker threads, 0 for hardware concurrency")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qsense::kExitOk : qsense::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  args.command = sub->get_name();
  if (!config.empty()) args.config = config;
  args.out_dir = out;
  if (sub->count("--seed")) args.seed = seed;
  if (sub->count("--threads")) args.threads = threads;
  return qsense::run_command(args, std::cout, std::cerr);
}
