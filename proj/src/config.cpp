#include "dewet/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dewet/io.hpp"

namespace dewet {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config: line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') fail(line, "expected a number, got '" + v + "'");
  return x;
}

double to_double_or_auto(const std::string& v, int line) {
  if (v == "auto") return std::nan("");
  return to_double(v, line);
}

int to_int(const std::string& v, int line) {
  const double x = to_double(v, line);
  const int i = static_cast<int>(x);
  if (x != i) fail(line, "expected an integer, got '" + v + "'");
  return i;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, line));
  }
  return out;
}

const std::map<std::string, ProfileSpec::Kind> kKinds = {
    {"stepped", ProfileSpec::Kind::Stepped},
    {"semi-infinite", ProfileSpec::Kind::SemiInfinite},
    {"cuboid", ProfileSpec::Kind::Cuboid},
    {"square-ring", ProfileSpec::Kind::SquareRing},
    {"cross", ProfileSpec::Kind::Cross},
    {"flat", ProfileSpec::Kind::Flat}};

std::string kind_name(ProfileSpec::Kind k) {
  for (const auto& [name, kind] : kKinds)
    if (kind == k) return name;
  return "stepped";
}

std::string weak_form_name(WeakForm w) {
  return w == WeakForm::Paper ? "paper" : "consistent";
}

std::string backend_name(SolverBackend b) {
  switch (b) {
    case SolverBackend::BandedLu: return "banded_lu";
    case SolverBackend::SparseLu: return "sparse_lu";
    case SolverBackend::BiCgStab: return "bicgstab";
    default: return "auto";
  }
}

std::string auto_or(double v) { return std::isnan(v) ? "auto" : format_g17(v); }

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_g17(v[i]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool has_a = false, has_b = false, has_c = false, has_d = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> known = {"model",  "wetting", "profile",
                                                  "domain", "time",    "solver",
                                                  "run",    "diagnostics", "output", "sweep"};
      if (!known.count(section)) fail(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key outside any section");
    if (!seen.insert(section + "." + key).second)
      fail(line, "duplicate key '" + key + "' in [" + section + "]");

    if (section == "model") {
      if (key == "dimension") {
        if (value == "2d") cfg.dimension = 2;
        else if (value == "3d") cfg.dimension = 3;
        else fail(line, "dimension must be 2d or 3d");
      } else fail(line, "unknown key '" + key + "' in [model]");
    } else if (section == "wetting") {
      if (key == "sigma") cfg.sigma = to_double(value, line);
      else if (key == "epsilon") cfg.epsilon = to_double(value, line);
      else if (key == "h_bar") cfg.h_bar = to_double_or_auto(value, line);
      else fail(line, "unknown key '" + key + "' in [wetting]");
    } else if (section == "profile") {
      if (key == "kind") {
        const auto it = kKinds.find(value);
        if (it == kKinds.end()) fail(line, "unknown profile kind '" + value + "'");
        cfg.profile.kind = it->second;
      } else if (key == "x1") cfg.profile.x1 = to_double(value, line);
      else if (key == "x2") cfg.profile.x2 = to_double(value, line);
      else if (key == "width_x") cfg.profile.width_x = to_double(value, line);
      else if (key == "width_y") cfg.profile.width_y = to_double(value, line);
      else if (key == "outer_width") cfg.profile.outer_width = to_double(value, line);
      else if (key == "inner_width") cfg.profile.inner_width = to_double(value, line);
      else if (key == "limb_length") cfg.profile.limb_length = to_double(value, line);
      else if (key == "center_x") cfg.profile.center_x = to_double(value, line);
      else if (key == "center_y") cfg.profile.center_y = to_double(value, line);
      else if (key == "thickness") cfg.profile.thickness = to_double(value, line);
      else if (key == "floor_thickness") cfg.profile.floor_thickness = to_double(value, line);
      else fail(line, "unknown key '" + key + "' in [profile]");
    } else if (section == "domain") {
      if (key == "a") { cfg.a = to_double(value, line); has_a = true; }
      else if (key == "b") { cfg.b = to_double(value, line); has_b = true; }
      else if (key == "c") { cfg.c = to_double(value, line); has_c = true; }
      else if (key == "d") { cfg.d = to_double(value, line); has_d = true; }
      else if (key == "dx") cfg.dx = to_double_or_auto(value, line);
      else if (key == "nx") cfg.nx = to_int(value, line);
      else if (key == "ny") cfg.ny = to_int(value, line);
      else fail(line, "unknown key '" + key + "' in [domain]");
    } else if (section == "time") {
      if (key == "tau") cfg.sim.tau = to_double(value, line);
      else if (key == "t_end") cfg.sim.t_end = to_double(value, line);
      else if (key == "weak_form") {
        if (value == "paper") cfg.sim.weak_form = WeakForm::Paper;
        else if (value == "consistent") cfg.sim.weak_form = WeakForm::Consistent;
        else fail(line, "weak_form must be paper or consistent");
      } else fail(line, "unknown key '" + key + "' in [time]");
    } else if (section == "solver") {
      if (key == "rtol") cfg.sim.solver_rtol = to_double(value, line);
      else if (key == "max_iterations") cfg.sim.solver_max_iterations = to_int(value, line);
      else if (key == "backend") {
        if (value == "auto") cfg.sim.backend = SolverBackend::Auto;
        else if (value == "banded_lu") cfg.sim.backend = SolverBackend::BandedLu;
        else if (value == "sparse_lu") cfg.sim.backend = SolverBackend::SparseLu;
        else if (value == "bicgstab") cfg.sim.backend = SolverBackend::BiCgStab;
        else fail(line, "unknown backend '" + value + "'");
      } else fail(line, "unknown key '" + key + "' in [solver]");
    } else if (section == "run") {
      if (key == "semi_infinite") cfg.sim.semi_infinite = to_bool(value, line);
      else if (key == "extension_trigger") cfg.sim.extension_trigger = to_double(value, line);
      else if (key == "extension_unit") cfg.sim.extension_unit = to_double(value, line);
      else if (key == "snapshot_times") cfg.sim.snapshot_times = to_list(value, line);
      else if (key == "unphysical_floor") cfg.sim.unphysical_floor = to_double_or_auto(value, line);
      else if (key == "continue_on_unphysical") cfg.sim.continue_on_unphysical = to_bool(value, line);
      else if (key == "retry_energy_increase") cfg.sim.retry_energy_increase = to_bool(value, line);
      else if (key == "retry_threshold") cfg.sim.retry_threshold = to_double(value, line);
      else if (key == "retry_max_halvings") cfg.sim.retry_max_halvings = to_int(value, line);
      else if (key == "stationary_tol") cfg.sim.stationary_tol = to_double(value, line);
      else fail(line, "unknown key '" + key + "' in [run]");
    } else if (section == "diagnostics") {
      if (key == "cadence") cfg.diag.cadence = to_double(value, line);
      else if (key == "agglomerate_threshold") cfg.diag.agglomerate_threshold = to_double(value, line);
      else if (key == "shedding_threshold") cfg.diag.shedding_threshold = to_double_or_auto(value, line);
      else if (key == "track_contact") cfg.diag.track_contact = to_bool(value, line);
      else if (key == "contact_h_c") cfg.diag.contact_h_c = to_double(value, line);
      else if (key == "contact_alpha") cfg.diag.contact_alpha = to_double(value, line);
      else if (key == "stop_on_shedding") cfg.diag.stop_on_shedding = to_bool(value, line);
      else if (key == "min_right_of_peak") cfg.diag.min_right_of_peak = to_bool(value, line);
      else if (key == "min_window") {
        if (value == "auto") {
          cfg.min_window_auto = true;
          cfg.diag.min_window.reset();
        } else {
          const auto v = to_list(value, line);
          if (v.size() != 2 && v.size() != 4)
            fail(line, "min_window needs 2 (1D) or 4 (2D) numbers, or auto");
          cfg.min_window_auto = false;
          std::array<double, 4> w{v[0], v[1], -1e308, 1e308};
          if (v.size() == 4) w = {v[0], v[1], v[2], v[3]};
          cfg.diag.min_window = w;
        }
      } else fail(line, "unknown key '" + key + "' in [diagnostics]");
    } else if (section == "output") {
      if (key == "directory") cfg.output_dir = value;
      else fail(line, "unknown key '" + key + "' in [output]");
    } else if (section == "sweep") {
      if (key == "epsilon") cfg.sweep.epsilon = to_list(value, line);
      else if (key == "theta") cfg.sweep.theta = to_list(value, line);
      else if (key == "length") cfg.sweep.length = to_list(value, line);
      else fail(line, "unknown key '" + key + "' in [sweep]");
    }
  }
  if (has_a != has_b || (cfg.dimension == 3 && (has_c != has_d || has_a != has_c)))
    throw std::runtime_error("config: domain bounds must be given together");
  cfg.has_domain = has_a && has_b;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n";
  out << "dimension = " << (cfg.dimension == 3 ? "3d" : "2d") << "\n\n";
  out << "[wetting]\n";
  out << "sigma = " << format_g17(cfg.sigma) << "\n";
  out << "epsilon = " << format_g17(cfg.epsilon) << "\n";
  out << "h_bar = " << auto_or(cfg.h_bar) << "\n\n";
  out << "[profile]\n";
  out << "kind = " << kind_name(cfg.profile.kind) << "\n";
  out << "x1 = " << format_g17(cfg.profile.x1) << "\n";
  out << "x2 = " << format_g17(cfg.profile.x2) << "\n";
  out << "width_x = " << format_g17(cfg.profile.width_x) << "\n";
  out << "width_y = " << format_g17(cfg.profile.width_y) << "\n";
  out << "outer_width = " << format_g17(cfg.profile.outer_width) << "\n";
  out << "inner_width = " << format_g17(cfg.profile.inner_width) << "\n";
  out << "limb_length = " << format_g17(cfg.profile.limb_length) << "\n";
  out << "center_x = " << format_g17(cfg.profile.center_x) << "\n";
  out << "center_y = " << format_g17(cfg.profile.center_y) << "\n";
  out << "thickness = " << format_g17(cfg.profile.thickness) << "\n";
  out << "floor_thickness = " << format_g17(cfg.profile.floor_thickness) << "\n\n";
  out << "[domain]\n";
  if (cfg.has_domain) {
    out << "a = " << format_g17(cfg.a) << "\n";
    out << "b = " << format_g17(cfg.b) << "\n";
    if (cfg.dimension == 3) {
      out << "c = " << format_g17(cfg.c) << "\n";
      out << "d = " << format_g17(cfg.d) << "\n";
    }
  }
  out << "dx = " << auto_or(cfg.dx) << "\n";
  if (cfg.dimension == 3) {
    out << "nx = " << cfg.nx << "\n";
    out << "ny = " << cfg.ny << "\n";
  }
  out << "\n[time]\n";
  out << "tau = " << format_g17(cfg.sim.tau) << "\n";
  out << "t_end = " << format_g17(cfg.sim.t_end) << "\n";
  out << "weak_form = " << weak_form_name(cfg.sim.weak_form) << "\n\n";
  out << "[solver]\n";
  out << "rtol = " << format_g17(cfg.sim.solver_rtol) << "\n";
  out << "backend = " << backend_name(cfg.sim.backend) << "\n";
  out << "max_iterations = " << cfg.sim.solver_max_iterations << "\n\n";
  out << "[run]\n";
  out << "semi_infinite = " << (cfg.sim.semi_infinite ? "true" : "false") << "\n";
  out << "extension_trigger = " << format_g17(cfg.sim.extension_trigger) << "\n";
  out << "extension_unit = " << format_g17(cfg.sim.extension_unit) << "\n";
  out << "snapshot_times = " << list_text(cfg.sim.snapshot_times) << "\n";
  out << "unphysical_floor = " << auto_or(cfg.sim.unphysical_floor) << "\n";
  out << "continue_on_unphysical = " << (cfg.sim.continue_on_unphysical ? "true" : "false") << "\n";
  out << "retry_energy_increase = " << (cfg.sim.retry_energy_increase ? "true" : "false") << "\n";
  out << "retry_threshold = " << format_g17(cfg.sim.retry_threshold) << "\n";
  out << "retry_max_halvings = " << cfg.sim.retry_max_halvings << "\n";
  out << "stationary_tol = " << format_g17(cfg.sim.stationary_tol) << "\n\n";
  out << "[diagnostics]\n";
  out << "cadence = " << format_g17(cfg.diag.cadence) << "\n";
  out << "agglomerate_threshold = " << format_g17(cfg.diag.agglomerate_threshold) << "\n";
  out << "shedding_threshold = " << auto_or(cfg.diag.shedding_threshold) << "\n";
  out << "track_contact = " << (cfg.diag.track_contact ? "true" : "false") << "\n";
  out << "contact_h_c = " << format_g17(cfg.diag.contact_h_c) << "\n";
  out << "contact_alpha = " << format_g17(cfg.diag.contact_alpha) << "\n";
  out << "stop_on_shedding = " << (cfg.diag.stop_on_shedding ? "true" : "false") << "\n";
  out << "min_right_of_peak = " << (cfg.diag.min_right_of_peak ? "true" : "false") << "\n";
  out << "min_window = ";
  if (cfg.min_window_auto || !cfg.diag.min_window) {
    out << "auto\n";
  } else {
    const auto& w = *cfg.diag.min_window;
    if (cfg.dimension == 2 && w[2] <= -1e308 && w[3] >= 1e308)
      out << list_text({w[0], w[1]}) << "\n";
    else
      out << list_text({w[0], w[1], w[2], w[3]}) << "\n";
  }
  out << "\n[output]\n";
  out << "directory = " << cfg.output_dir << "\n";
  if (cfg.sweep.active()) {
    out << "\n[sweep]\n";
    if (!cfg.sweep.epsilon.empty()) out << "epsilon = " << list_text(cfg.sweep.epsilon) << "\n";
    if (!cfg.sweep.theta.empty()) out << "theta = " << list_text(cfg.sweep.theta) << "\n";
    if (!cfg.sweep.length.empty()) out << "length = " << list_text(cfg.sweep.length) << "\n";
  }
  return out.str();
}

WettingParams wetting_params(const RunConfig& cfg) {
  if (std::isnan(cfg.h_bar)) return {cfg.sigma, cfg.epsilon};
  return {cfg.sigma, cfg.epsilon, cfg.h_bar};
}

std::vector<std::string> resolve(RunConfig& cfg) {
  std::vector<std::string> warnings;
  if (cfg.dimension != 2 && cfg.dimension != 3)
    throw std::runtime_error("config: dimension must be 2 or 3");

  const WettingParams p = wetting_params(cfg);  // validates the triple
  if (p.h_bar > 10.0 * p.epsilon)
    warnings.push_back("h_bar exceeds 10*epsilon; the surrogate region is unusually wide");

  ProfileSpec& prof = cfg.profile;
  const bool is_3d_shape = prof.kind == ProfileSpec::Kind::Cuboid ||
                           prof.kind == ProfileSpec::Kind::SquareRing ||
                           prof.kind == ProfileSpec::Kind::Cross;
  if (cfg.dimension == 2 && is_3d_shape)
    throw std::runtime_error("config: 3D island profile with dimension = 2d");
  if (cfg.dimension == 3 && !is_3d_shape && prof.kind != ProfileSpec::Kind::Flat)
    throw std::runtime_error("config: profile kind requires dimension = 2d");

  if (prof.kind == ProfileSpec::Kind::SemiInfinite) {
    prof.x2 = prof.x1 + 1e5;
    if (!cfg.sim.semi_infinite) {
      cfg.sim.semi_infinite = true;
      warnings.push_back("semi-infinite profile: enabling the domain-extension mode");
    }
  }
  if ((prof.kind == ProfileSpec::Kind::Stepped) && !(prof.x1 < prof.x2))
    throw std::runtime_error("config: stepped profile needs x1 < x2");

  // Domain defaults: stepped islands get a 20-unit margin; the
  // semi-infinite window starts 20 units each side of the front.
  if (!cfg.has_domain) {
    if (cfg.dimension != 2)
      throw std::runtime_error("config: 3D runs need explicit domain bounds");
    if (prof.kind == ProfileSpec::Kind::Stepped) {
      cfg.a = prof.x1 - 20.0;
      cfg.b = prof.x2 + 20.0;
    } else if (prof.kind == ProfileSpec::Kind::SemiInfinite) {
      cfg.a = prof.x1 - 20.0;
      cfg.b = prof.x1 + 20.0;
    } else {
      throw std::runtime_error("config: this profile needs explicit domain bounds");
    }
    cfg.has_domain = true;
  }
  if (!(cfg.b > cfg.a)) throw std::runtime_error("config: need b > a");
  if (cfg.dimension == 3 && !(cfg.d > cfg.c)) throw std::runtime_error("config: need d > c");

  if (std::isnan(cfg.dx) && cfg.nx <= 0) cfg.dx = p.epsilon;
  if (cfg.dimension == 2) {
    if (cfg.nx <= 0)
      cfg.nx = std::max(1, static_cast<int>(std::lround((cfg.b - cfg.a) / cfg.dx)));
  } else {
    if (cfg.nx <= 0) {
      cfg.nx = std::max(1, static_cast<int>(std::lround((cfg.b - cfg.a) / cfg.dx)));
      cfg.ny = std::max(1, static_cast<int>(std::lround((cfg.d - cfg.c) / cfg.dx)));
    }
    if (cfg.ny <= 0) throw std::runtime_error("config: need ny > 0");
  }
  if (std::isnan(cfg.dx)) cfg.dx = (cfg.b - cfg.a) / cfg.nx;

  // Margin check: shapes should sit at least 5 units inside the box.
  if (prof.kind != ProfileSpec::Kind::Flat) {
    const ProfileExtent ext = profile_extent(prof);
    double margin = std::min(ext.x_lo - cfg.a,
                             prof.kind == ProfileSpec::Kind::SemiInfinite ? 1e308
                                                                          : cfg.b - ext.x_hi);
    if (cfg.dimension == 3)
      margin = std::min({margin, ext.y_lo - cfg.c, cfg.d - ext.y_hi});
    if (margin < 5.0)
      warnings.push_back("profile is within " + format_g17(margin) +
                         " length units of the domain boundary (margin below 5)");
  }

  validate(cfg.sim);
  if (!(cfg.diag.cadence > 0.0)) throw std::runtime_error("config: cadence must be positive");
  if (cfg.min_window_auto) {
    if (prof.kind == ProfileSpec::Kind::Flat) {
      cfg.diag.min_window.reset();
    } else {
      const ProfileExtent ext = profile_extent(prof);
      const double hi = prof.kind == ProfileSpec::Kind::SemiInfinite ? 1e308 : ext.x_hi;
      cfg.diag.min_window = std::array<double, 4>{ext.x_lo, hi, ext.y_lo, ext.y_hi};
    }
    // Retraction exposes the wetting layer behind the ridge; track the
    // valley ahead of it instead.
    if (prof.kind == ProfileSpec::Kind::SemiInfinite) cfg.diag.min_right_of_peak = true;
  }
  if (cfg.output_dir.empty()) throw std::runtime_error("config: output directory is empty");

  for (double e : cfg.sweep.epsilon)
    if (!(e > 0.0)) throw std::runtime_error("config: sweep epsilon values must be positive");
  for (double th : cfg.sweep.theta)
    if (!(th > 0.0) || !(th < 1.5707963267948966))
      throw std::runtime_error("config: sweep theta values must lie in (0, pi/2)");
  for (double L : cfg.sweep.length) {
    if (!(L > 0.0)) throw std::runtime_error("config: sweep lengths must be positive");
    if (prof.kind != ProfileSpec::Kind::Stepped)
      throw std::runtime_error("config: length sweep needs a stepped profile");
  }
  return warnings;
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
  std::vector<RunConfig> out;
  const auto one = [](const std::vector<double>& v) {
    return v.empty() ? std::vector<double>{std::nan("")} : v;
  };
  char tag[64];
  for (double e : one(cfg.sweep.epsilon))
    for (double th : one(cfg.sweep.theta))
      for (double L : one(cfg.sweep.length)) {
        RunConfig r = cfg;
        r.sweep = {};
        std::string name;
        if (!std::isnan(e)) {
          r.epsilon = e;
          std::snprintf(tag, sizeof tag, "eps_%g", e);
          name += tag;
        }
        if (!std::isnan(th)) {
          r.sigma = std::cos(th);
          std::snprintf(tag, sizeof tag, "%stheta_%g", name.empty() ? "" : "_", th);
          name += tag;
        }
        if (!std::isnan(L)) {
          r.profile.x1 = -0.5 * L;
          r.profile.x2 = 0.5 * L;
          std::snprintf(tag, sizeof tag, "%slen_%g", name.empty() ? "" : "_", L);
          name += tag;
        }
        if (!name.empty()) r.output_dir = cfg.output_dir + "/" + name;
        resolve(r);
        out.push_back(std::move(r));
      }
  return out;
}

}  // namespace dewet
