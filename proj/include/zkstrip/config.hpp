#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zkstrip/decay.hpp"
#include "zkstrip/error.hpp"
#include "zkstrip/evolution.hpp"
#include "zkstrip/grid.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

/// All validation failures of one document.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

enum class DampingPreset { none, constant, plateau_both, plateau_minus, plateau_plus };
enum class InitialPreset { gaussian, sech2, zero, random_modes };
enum class SnapshotFormat { binary, csv };

struct PhysicsSpec {
  double b = 0.0;
  double delta = 1e-3;
  double h_cutoff = 0.01;
  bool dealias = true;
  bool nonlinear = true;
  DampingPreset damping = DampingPreset::none;
  double level = 0.0;  // a of the plateau, or the constant value
  double R = 5.0;
  double seam_taper = 4.0;
  bool damp_a1 = true;
  bool damp_a2 = true;
  double a0 = 0.0;
  double sponge = 0.0;
  double sponge_width = 0.0;
};

struct InitialSpec {
  InitialPreset preset = InitialPreset::gaussian;
  double amplitude = 0.1;
  double center = 0.0;
  double width = 2.0;
  int y_mode = 1;
  int kmax = 8;
  int lmax = 4;
  std::uint64_t seed = 0;
};

struct ScenarioSpec {
  Scenario scenario;
  std::optional<double> check_beta;  // beta passed to verify_bound
  bool threshold_search = false;
  double threshold_lo = 1e-3;
  double threshold_hi = 1.0;
  int threshold_iterations = 6;
};

struct SweepSpec {
  std::vector<double> alphas{0.05, 0.1, 0.2};
  std::vector<double> widths;
};

struct OutputSpec {
  std::string dir = ".";
  std::string prefix = "zk";
  bool snapshots = false;
  SnapshotFormat snapshot_format = SnapshotFormat::binary;
  bool residuals = true;
};

struct RunSpec {
  StripGrid grid;
  PhysicsSpec physics;
  InitialSpec initial;
  SolverConfig solver;
  std::vector<WeightSpec> weights;
  std::optional<ScenarioSpec> scenario;
  SweepSpec sweep;
  OutputSpec output;
};

/// Flat key = value document; "[section]" headers prefix later keys with
/// "section.". '#' starts a comment. Numbers accept + - * / ( ) and pi.
/// Unknown keys, malformed values and violated invariants are all reported
/// together in one ConfigError.
RunSpec parse_config(const std::string& text);
RunSpec load_config(const std::string& path);

/// Arithmetic on decimal literals and pi, e.g. "2*pi", "pi/2", "-1e-3".
double parse_number(const std::string& text);

/// The key = value table of every accepted key with its default.
std::map<std::string, std::string> default_config_table();

/// Coefficients and initial data described by the physics and initial blocks.
Coefficients build_coefficients(const RunSpec& spec);
Field build_initial(const RunSpec& spec);

}  // namespace zk
