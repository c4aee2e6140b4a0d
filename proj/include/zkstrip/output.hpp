#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "zkstrip/decay.hpp"
#include "zkstrip/grid.hpp"
#include "zkstrip/trajectory.hpp"

namespace zk {

/// Shortest round-trip decimal.
std::string format_double(double v);

std::string csv_header(const std::vector<WeightSpec>& weights);
void write_csv(std::ostream& out, const Trajectory& traj);
std::string csv_string(const Trajectory& traj);

struct Snapshot {
  StripGrid grid;
  double time = 0.0;
  Field field;
};

/// "ZKSN", u32 version, u64 nx, u64 ny, f64 x_min, x_max, width, time, then
/// nx*ny f64 in row-major (i, j) order. Little-endian throughout.
void write_snapshot_binary(const std::string& path, const Field& u, double t);
Snapshot read_snapshot_binary(const std::string& path);
/// x, y, u rows.
void write_snapshot_csv(const std::string& path, const Field& u, double t);

using Report = std::vector<std::pair<std::string, std::string>>;
Report decay_report_entries(const DecayReport& r);
void write_report(const std::string& path, const Report& report);

}  // namespace zk
