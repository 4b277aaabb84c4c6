#include "dewet/execute.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "dewet/diagnostics.hpp"
#include "dewet/io.hpp"
#include "dewet/profiles.hpp"
#include "dewet/solver2d.hpp"
#include "dewet/solver3d.hpp"

namespace dewet {

namespace fs = std::filesystem;

std::string version() { return "0.1.0"; }

namespace {

std::string resolve_dir(const ExecOptions& opts, const std::string& run_dir) {
  if (!run_dir.empty() && run_dir.front() == '/') return run_dir;
  std::string root = opts.output_root;
  if (root.empty()) {
    const char* env = std::getenv("DEWET_OUTPUT_ROOT");
    root = env ? env : ".";
  }
  return root + "/" + run_dir;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void write_manifest(const std::string& dir, const RunConfig& cfg, const std::string& status) {
  write_text(dir + "/manifest.txt", "# version: " + version() + "\n# status: " + status +
                                        "\n\n" + serialize_config(cfg));
}

std::string csv_row(const Sample& s) {
  std::string row = format_g17(s.t) + "," + format_g17(s.mass) + "," + format_g17(s.energy) +
                    "," + format_g17(s.h_min) + "," + std::to_string(s.agglomerates) + "," +
                    format_g17(s.x_c);
  return row + "\n";
}

void write_3d_snapshot_files(const Film3d& state, const std::string& stem) {
  write_snapshot(state, stem + ".vtk");
  write_snapshot_xyz(state, stem + ".xyz");
  write_section(midline_section(state), stem + "_mid.txt");
  if (state.mesh.nx == state.mesh.ny)
    write_section(diagonal_section(state), stem + "_diag.txt");
}

struct RunOutputs {
  std::ofstream series;
  std::ofstream events;
  std::string dir;
};

template <class StateT>
RunHooks<StateT> make_hooks(RunOutputs& out) {
  RunHooks<StateT> hooks;
  hooks.on_sample = [&out](const StateT&, const Sample& s) {
    out.series << csv_row(s);
    out.series.flush();
  };
  hooks.on_event = [&out](const Event& ev) {
    out.events << format_g17(ev.t) << "\t" << ev.step << "\t" << ev.kind << "\t" << ev.detail
               << "\n";
    out.events.flush();
  };
  hooks.on_snapshot = [&out](const StateT& state, const std::string& label) {
    if constexpr (std::is_same_v<StateT, Film2d>)
      write_snapshot(state, out.dir + "/snapshot_t" + label + ".txt");
    else
      write_3d_snapshot_files(state, out.dir + "/snapshot_t" + label);
  };
  return hooks;
}

std::string summary_text(const RunRecord& rec, double final_t, const std::string& status) {
  std::string s;
  s += "status = " + status + "\n";
  s += "final_t = " + format_g17(final_t) + "\n";
  s += "steps = " + std::to_string(rec.steps_taken) + "\n";
  if (!rec.samples.empty()) {
    const Sample& last = rec.samples.back();
    s += "mass = " + format_g17(last.mass) + "\n";
    s += "energy = " + format_g17(last.energy) + "\n";
    s += "h_min = " + format_g17(last.h_min) + "\n";
    s += "agglomerates = " + std::to_string(last.agglomerates) + "\n";
    s += "x_c = " + format_g17(last.x_c) + "\n";
  }
  s += "max_rel_mass_drift = " + format_g17(rec.max_rel_mass_drift) + "\n";
  s += "max_rel_energy_increase = " + format_g17(rec.max_rel_energy_increase) + "\n";
  const auto t_c = first_shedding_time(rec);
  s += "first_shedding_time = " + (t_c ? format_g17(*t_c) : std::string("none")) + "\n";
  s += "reached_stationary = " + std::string(rec.reached_stationary ? "true" : "false") + "\n";
  s += "events = " + std::to_string(rec.events.size()) + "\n";
  return s;
}

bool run_one(RunConfig cfg, const ExecOptions& opts) {
  const std::string dir = resolve_dir(opts, cfg.output_dir);
  fs::create_directories(dir);

  if (opts.snapshot_every > 0.0) {
    for (double t = 0.0; t <= cfg.sim.t_end + 1e-12; t += opts.snapshot_every)
      cfg.sim.snapshot_times.push_back(t);
    std::sort(cfg.sim.snapshot_times.begin(), cfg.sim.snapshot_times.end());
    cfg.sim.snapshot_times.erase(
        std::unique(cfg.sim.snapshot_times.begin(), cfg.sim.snapshot_times.end()),
        cfg.sim.snapshot_times.end());
  }

  write_manifest(dir, cfg, "running");
  RunOutputs out;
  out.dir = dir;
  out.series.open(dir + "/series.csv");
  out.events.open(dir + "/events.log");
  out.series << "t,mass,energy,h_min,agglomerates,x_c\n";

  const WettingParams p = wetting_params(cfg);
  RunRecord rec;
  double final_t = 0.0;
  std::string status = "completed";
  try {
    if (cfg.dimension == 2) {
      IntervalMesh mesh = build_interval_mesh(cfg.a, cfg.b, cfg.nx);
      Vector h;
      if (cfg.profile.kind == ProfileSpec::Kind::Flat)
        h = flat_profile(cfg.profile.thickness, mesh);
      else
        h = stepped_profile(cfg.profile, mesh);
      Film2d state = make_state(std::move(mesh), std::move(h));
      rec = run(state, p, cfg.sim, cfg.diag, make_hooks<Film2d>(out));
      final_t = state.t;
      write_snapshot(state, dir + "/final.txt");
    } else {
      TriMesh mesh = build_rect_tri_mesh(cfg.a, cfg.b, cfg.c, cfg.d, cfg.nx, cfg.ny);
      Vector h;
      if (cfg.profile.kind == ProfileSpec::Kind::Flat)
        h = flat_profile(cfg.profile.thickness, mesh);
      else
        h = island_3d(cfg.profile, mesh);
      Film3d state = make_state(std::move(mesh), std::move(h));
      rec = run3d(state, p, cfg.sim, cfg.diag, make_hooks<Film3d>(out));
      final_t = state.t;
      write_3d_snapshot_files(state, dir + "/final");
    }
    if (!rec.failure.empty()) status = "failed: " + rec.failure;
  } catch (const std::exception& ex) {
    status = std::string("failed: ") + ex.what();
  }

  write_text(dir + "/summary.txt", summary_text(rec, final_t, status));
  write_manifest(dir, cfg, status);
  if (status != "completed") write_text(dir + "/FAILED", status + "\n");
  return status == "completed";
}

}  // namespace

int execute(const RunConfig& config, const ExecOptions& opts) {
  std::vector<RunConfig> runs;
  try {
    runs = expand_sweep(config);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  {
    RunConfig check = config;
    check.sweep = {};
    try {
      for (const std::string& w : resolve(check)) std::fprintf(stderr, "warning: %s\n", w.c_str());
    } catch (const std::exception&) {
      // Per-run resolution above already succeeded; axis values replace
      // whatever made the base config incomplete.
    }
  }

  std::atomic<size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex print_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      const bool ok = run_one(runs[i], opts);
      if (!ok) failures.fetch_add(1);
      if (!opts.quiet) {
        std::lock_guard<std::mutex> lock(print_mutex);
        std::fprintf(stderr, "%s: %s\n", runs[i].output_dir.c_str(),
                     ok ? "completed" : "FAILED");
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(opts.parallel, static_cast<int>(runs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return failures.load() == 0 ? 0 : 1;
}

}  // namespace dewet
