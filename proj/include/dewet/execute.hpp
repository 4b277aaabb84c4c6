#pragma once

#include <string>

#include "dewet/config.hpp"

namespace dewet {

std::string version();

struct ExecOptions {
  // Root for relative output directories; empty falls back to the
  // DEWET_OUTPUT_ROOT environment variable, then the working directory.
  std::string output_root;
  double snapshot_every = 0.0;  // when > 0, add snapshots at this interval
  int parallel = 1;             // worker threads across sweep runs
  bool quiet = false;
};

// Expands sweeps, runs every configuration, writes series.csv,
// events.log, snapshots, summary.txt, and a re-executable manifest per
// run directory.  Returns 0 when every run completes.
int execute(const RunConfig& config, const ExecOptions& opts = {});

}  // namespace dewet
