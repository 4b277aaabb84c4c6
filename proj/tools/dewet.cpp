#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dewet/config.hpp"
#include "dewet/execute.hpp"

namespace {

void add_exec_flags(CLI::App* cmd, dewet::ExecOptions& opts) {
  cmd->add_option("--output-dir", opts.output_root,
                  "root directory for run outputs (default: $DEWET_OUTPUT_ROOT or cwd)");
  cmd->add_option("--snapshot-every", opts.snapshot_every,
                  "emit solution snapshots every T time units")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--parallel", opts.parallel, "number of concurrent runs in a sweep")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", opts.quiet, "suppress per-run progress lines");
}

int inspect_dir(const std::string& dir) {
  bool any = false;
  for (const char* name : {"manifest.txt", "summary.txt"}) {
    std::ifstream in(dir + "/" + name);
    if (!in) continue;
    any = true;
    std::printf("== %s ==\n", name);
    std::cout << in.rdbuf() << "\n";
  }
  std::ifstream series(dir + "/series.csv");
  if (series) {
    any = true;
    std::string line, header, last;
    if (std::getline(series, header)) {
      while (std::getline(series, line))
        if (!line.empty()) last = line;
    }
    std::printf("== series.csv (last row) ==\n%s\n%s\n", header.c_str(), last.c_str());
  }
  if (!any) {
    std::fprintf(stderr, "error: '%s' does not look like a run directory\n", dir.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin film dewetting simulator"};
  app.set_version_flag("--version", dewet::version());
  app.require_subcommand(1);

  std::string config_path;
  std::string inspect_path;
  dewet::ExecOptions opts;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a single simulation");
  run_cmd->add_option("config", config_path, "INI configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  add_exec_flags(run_cmd, opts);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "execute a parameter sweep");
  sweep_cmd->add_option("config", config_path, "INI configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  add_exec_flags(sweep_cmd, opts);

  CLI::App* inspect_cmd = app.add_subcommand("inspect", "print run directory contents");
  inspect_cmd->add_option("run_dir", inspect_path, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (inspect_cmd->parsed()) return inspect_dir(inspect_path);

  dewet::RunConfig config;
  try {
    config = dewet::load_config(config_path);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }

  if (run_cmd->parsed() && config.sweep.active()) {
    std::fprintf(stderr, "error: config defines sweep axes; use 'dewet sweep'\n");
    return 1;
  }
  if (sweep_cmd->parsed() && !config.sweep.active()) {
    std::fprintf(stderr, "error: config defines no sweep axes; use 'dewet run'\n");
    return 1;
  }
  return dewet::execute(config, opts);
}
