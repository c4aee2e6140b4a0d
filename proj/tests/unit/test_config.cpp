#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "zkstrip/app.hpp"
#include "zkstrip/config.hpp"
#include "zkstrip/diagnostics.hpp"
#include "zkstrip/output.hpp"

using namespace zk;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kGrid = R"(
[grid]
nx = 64
ny = 4
x_min = -10
x_max = 10
width = pi
)";

std::string doc(const std::string& extra) { return std::string(kGrid) + extra; }

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zkstrip_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("numbers accept arithmetic and pi") {
  CHECK(parse_number("1.5") == 1.5);
  CHECK(parse_number("-1e-3") == -1e-3);
  CHECK_THAT(parse_number("2*pi"), WithinRel(2.0 * kPi, 1e-15));
  CHECK_THAT(parse_number("pi/2"), WithinRel(kPi / 2.0, 1e-15));
  CHECK_THAT(parse_number("(1 + 2) * -3"), WithinAbs(-9.0, 1e-15));
  REQUIRE_THROWS_AS(parse_number("2*"), ValidationError);
  REQUIRE_THROWS_AS(parse_number("abc"), ValidationError);
  REQUIRE_THROWS_AS(parse_number("1/0"), ValidationError);
}

TEST_CASE("defaults") {
  const RunSpec s = parse_config(doc("[time]\nt_end = 1\n"));
  CHECK(s.solver.dt == 1e-3);
  CHECK(s.physics.delta == 1e-3);
  CHECK(s.grid.nx == 64);
  CHECK_THAT(s.grid.width, WithinRel(kPi, 1e-15));
  CHECK_FALSE(s.scenario);
  CHECK(s.output.residuals);
  const auto table = default_config_table();
  CHECK(table.at("time.dt") == "1e-3");
  CHECK(table.at("physics.delta") == "1e-3");
}

TEST_CASE("grid invariants surface as config errors") {
  std::string d = doc("[time]\nt_end = 1\n");
  d.replace(d.find("nx = 64"), 7, "nx = 101");
  REQUIRE_THROWS_WITH(parse_config(d), ContainsSubstring("grid.nx must be even"));
}

TEST_CASE("all problems are reported together") {
  try {
    parse_config(doc("[time]\ndt = -1\n[physics]\nbogus = 3\ndelta = -1\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string all = e.what();
    CHECK(e.errors().size() >= 3);
    CHECK_THAT(all, ContainsSubstring("physics.bogus"));
    CHECK_THAT(all, ContainsSubstring("time.t_end"));
    CHECK_THAT(all, ContainsSubstring("delta"));
  }
  REQUIRE_THROWS_WITH(parse_config("[grid]\nnx = 64\n"), ContainsSubstring("grid.ny"));
  REQUIRE_THROWS_WITH(parse_config(doc("[time]\nt_end = 1\nt_end = 2\n")), ContainsSubstring("duplicate"));
  REQUIRE_THROWS_AS(parse_config(doc("[time]\nt_end = 1\n[initial]\nwidth = x\n")), ConfigError);
}

TEST_CASE("infeasible C1 names its margin") {
  REQUIRE_THROWS_WITH(
      parse_config(doc("[time]\nt_end = 1\n[scenario]\nkind = C1\nbeta = 0.5\nbeta0 = 0.1\n")),
      ContainsSubstring("margin"));
  const RunSpec ok = parse_config(doc("[time]\nt_end = 1\n[scenario]\nkind = C1\nbeta = 0.5\n"));
  REQUIRE(ok.scenario);
  CHECK(ok.scenario->scenario.kind == ScenarioKind::C1_absorption);
  CHECK(ok.scenario->scenario.delta == ok.physics.delta);
}

TEST_CASE("coefficients and initial data from the physics block") {
  const RunSpec s = parse_config(doc(
      "[time]\nt_end = 1\n[physics]\ndamping = plateau_both\ndamping_level = 0.5\ndamping_R = 4\na0 = 0.1\n"
      "[initial]\npreset = sech2\namplitude = 0.7\n"));
  const Coefficients c = build_coefficients(s);
  CHECK(c.flag == StructureFlag::both_infinities);
  CHECK(c.a1.max_abs() == 0.5);
  CHECK(c.a0.values[0] == 0.1);
  CHECK_THAT(build_initial(s).max_abs(), WithinRel(0.7, 0.05));

  const RunSpec z = parse_config(doc("[time]\nt_end = 1\n[initial]\npreset = zero\n"));
  CHECK(build_initial(z).max_abs() == 0.0);
  REQUIRE_THROWS_AS(parse_config(doc("[time]\nt_end = 1\n[physics]\ndamping = constant\n")), ConfigError);
}

TEST_CASE("csv schema and round trip") {
  const RunSpec s = parse_config(doc(
      "[time]\nt_end = 0.05\ndt = 0.01\n[weights]\nlist = exp_plus:0.1, rho:0.2\n"));
  Probes p;
  p.weights = s.weights;
  Trajectory t = run(build_initial(s), std::nullopt, build_coefficients(s), s.solver, p);
  attach_residuals(t, build_coefficients(s), s.solver.h_cutoff, std::nullopt);
  const std::string csv = csv_string(t);
  const std::vector<std::string> lines = split(csv, '\n');
  REQUIRE(lines.size() == t.records.size() + 1);
  CHECK(lines[0] ==
        "t,l2,h1,energy,weighted_l2[exp_plus(0.1)],weighted_l2[rho(0.2)],residual_l2,"
        "residual_weighted[exp_plus(0.1)],residual_weighted[rho(0.2)]");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split(lines[k], ',');
    REQUIRE(cols.size() == 9);
    const DiagnosticRecord& r = t.records[k - 1];
    CHECK(std::stod(cols[0]) == r.t);
    CHECK(std::stod(cols[1]) == r.l2);
    CHECK(std::stod(cols[4]) == r.weighted_l2[0]);
  }
  CHECK_THAT(split(lines[1], ',')[6], ContainsSubstring("nan"));
  CHECK(csv == csv_string(t));
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  for (double v : {kPi, 1.0 / 3.0, 6.02214076e23, -2.5e-17}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("binary snapshot layout") {
  const fs::path dir = scratch_dir("snap");
  StripGrid g;
  g.x_min = -2.0;
  g.x_max = 2.0;
  g.nx = 4;
  g.width = 1.5;
  g.ny = 2;
  Field u(g);
  for (std::size_t n = 0; n < u.values.size(); ++n) u.values[n] = 0.25 * static_cast<double>(n) - 1.0;
  const fs::path file = dir / "a.zksn";
  write_snapshot_binary(file.string(), u, 0.75);

  const std::string bytes = slurp(file);
  REQUIRE(bytes.size() == 4 + 4 + 8 + 8 + 4 * 8 + 8 * 8);
  CHECK(bytes.substr(0, 4) == "ZKSN");
  auto u32_at = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(bytes[off + k]);
    return v;
  };
  auto u64_at = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(bytes[off + k]);
    return v;
  };
  auto f64_at = [&](std::size_t off) { return std::bit_cast<double>(u64_at(off)); };
  CHECK(u32_at(4) == 1);
  CHECK(u64_at(8) == 4);
  CHECK(u64_at(16) == 2);
  CHECK(f64_at(24) == -2.0);
  CHECK(f64_at(32) == 2.0);
  CHECK(f64_at(40) == 1.5);
  CHECK(f64_at(48) == 0.75);
  // Row-major: value (i=1, j=0) is the third stored double.
  CHECK(f64_at(56 + 2 * 8) == u(1, 0));

  const Snapshot s = read_snapshot_binary(file.string());
  CHECK(s.grid == g);
  CHECK(s.time == 0.75);
  CHECK(s.field.values == u.values);

  std::ofstream(dir / "bad.zksn", std::ios::binary) << "NOPE";
  REQUIRE_THROWS_AS(read_snapshot_binary((dir / "bad.zksn").string()), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("run command writes a deterministic CSV") {
  const fs::path dir = scratch_dir("run");
  RunSpec s = parse_config(doc("[time]\nt_end = 0.1\ndt = 0.01\n[output]\nprefix = r\nsnapshots = true\n"));
  s.output.dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_command(s, log) == kExitOk);
  const std::string first = slurp(dir / "r.csv");
  REQUIRE(run_command(s, log) == kExitOk);
  CHECK(first == slurp(dir / "r.csv"));
  CHECK(fs::exists(dir / "r_snap_00000.zksn"));
  CHECK(fs::exists(dir / "r_snap_00010.zksn"));

  CommandOptions o;
  o.snapshot_format = SnapshotFormat::csv;
  o.output_dir = (dir / "sub").string();
  apply_options(s, o);
  REQUIRE(run_command(s, log) == kExitOk);
  CHECK(fs::exists(dir / "sub" / "r_snap_00000.csv"));
  fs::remove_all(dir);
}

TEST_CASE("conservation preset keeps l2 flat") {
  const fs::path dir = scratch_dir("conservation");
  RunSpec s = load_config(std::string(ZK_SOURCE_DIR) + "/configs/conservation.cfg");
  s.output.dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_command(s, log) == kExitOk);
  const auto lines = split(slurp(dir / "conservation.csv"), '\n');
  double lo = 1e300, hi = 0.0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const double l2 = std::stod(split(lines[k], ',')[1]);
    lo = std::min(lo, l2);
    hi = std::max(hi, l2);
  }
  CHECK((hi - lo) / hi < 1e-6);
  fs::remove_all(dir);
}

TEST_CASE("zero data produces zero diagnostics") {
  const fs::path dir = scratch_dir("zero");
  RunSpec s = parse_config(doc("[time]\nt_end = 0.05\ndt = 0.01\n[initial]\npreset = zero\n"));
  s.output.dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_command(s, log) == kExitOk);
  const auto lines = split(slurp(dir / "zk.csv"), '\n');
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split(lines[k], ',');
    CHECK(cols[1] == "0");
    CHECK(cols[2] == "0");
    CHECK(cols[3] == "0");
  }
  fs::remove_all(dir);
}

TEST_CASE("scenario command reports the C1 bound") {
  const fs::path dir = scratch_dir("c1");
  RunSpec s = parse_config(doc("[time]\nt_end = 2\ndt = 0.01\nsnapshot_every = 10\n"
                               "[scenario]\nkind = C1\nbeta = 0.5\namplitude = 1e-3\ncheck_beta = 0.5\n"
                               "[output]\nprefix = c1\n"));
  s.output.dir = dir.string();
  std::ostringstream log;
  CHECK(scenario_command(s, log) == kExitOk);
  const std::string rep = slurp(dir / "c1_report.txt");
  CHECK_THAT(rep, ContainsSubstring("bound_holds = true"));
  CHECK_THAT(rep, ContainsSubstring("scenario = C1"));

  // A beta above the absorption level cannot be certified.
  s.scenario->check_beta = 0.9;
  CHECK(scenario_command(s, log) == kExitBound);
  CHECK_THAT(slurp(dir / "c1_report.txt"), ContainsSubstring("bound_holds = false"));
  fs::remove_all(dir);
}

TEST_CASE("blow-up exit code and failure report") {
  const fs::path dir = scratch_dir("blow");
  // A blow-up factor just above 1 turns the ordinary norm drift of a large,
  // steep pulse into a blow-up.
  RunSpec s = parse_config(doc("[time]\nt_end = 1\ndt = 0.01\n[physics]\ndelta = 0\n"
                               "[initial]\namplitude = 50\nwidth = 0.5\n"));
  s.output.dir = dir.string();
  s.solver.blowup_factor = 1.0000001;
  std::ostringstream log;
  CHECK(run_command(s, log) == kExitBlowup);
  CHECK_THAT(slurp(dir / "zk_failure.txt"), ContainsSubstring("failed = true"));
  fs::remove_all(dir);
}

TEST_CASE("self-check command passes") {
  std::ostringstream log;
  CHECK(check_command(log, false) == kExitOk);
  CHECK_THAT(log.str(), ContainsSubstring("8/8 checks passed"));
}
