#pragma once

#include <string>
#include <vector>

#include "dewet/state.hpp"

namespace dewet {

// All numeric output uses 17 significant digits so identical runs are
// byte-identical and round-trips are lossless.
std::string format_g17(double v);

// 1D snapshot: two columns (x, h).
void write_snapshot(const Film2d& state, const std::string& path);

// Triangulated snapshot: legacy-VTK ASCII unstructured grid with h as
// point data.
void write_snapshot(const Film3d& state, const std::string& path);

// Plain three-column (x, y, h) dump of a triangulated state.
void write_snapshot_xyz(const Film3d& state, const std::string& path);

struct CrossSection {
  std::vector<double> s;
  std::vector<double> h;
};

// Section along the horizontal midline (s = x).
CrossSection midline_section(const Film3d& state);

// Section along the main diagonal of a square mesh (s = signed distance
// from the domain center); requires nx == ny.
CrossSection diagonal_section(const Film3d& state);

void write_section(const CrossSection& sec, const std::string& path);

// Reads a whitespace-separated numeric table, skipping '#' comments.
std::vector<std::vector<double>> read_table(const std::string& path);

}  // namespace dewet
