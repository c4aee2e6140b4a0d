#pragma once

#include <string>
#include <vector>

#include "zkstrip/grid.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

/// Per-snapshot scalars. Residuals are NaN where the centered difference is
/// undefined (first and last snapshot) or when not computed.
struct DiagnosticRecord {
  double t = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double energy = 0.0;
  std::vector<double> weighted_l2;
  double residual_l2 = 0.0;
  std::vector<double> residual_weighted;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;  // empty when snapshots were not kept
  std::vector<DiagnosticRecord> records;
  std::vector<WeightSpec> weights;  // order of weighted_l2 entries
  bool failed = false;
  std::string failure;
  double failure_time = 0.0;
};

}  // namespace zk
