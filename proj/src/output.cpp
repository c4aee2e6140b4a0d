#include "zkstrip/output.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "zkstrip/error.hpp"

namespace zk {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int n = 0; n < 8; ++n) b[n] = static_cast<char>((v >> (8 * n)) & 0xff);
  out.write(b.data(), 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int n = 0; n < 4; ++n) b[n] = static_cast<char>((v >> (8 * n)) & 0xff);
  out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw ValidationError("truncated snapshot");
  std::uint64_t v = 0;
  for (int n = 7; n >= 0; --n) v = (v << 8) | b[n];
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ValidationError("truncated snapshot");
  std::uint32_t v = 0;
  for (int n = 3; n >= 0; --n) v = (v << 8) | b[n];
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  return out;
}

constexpr char kMagic[4] = {'Z', 'K', 'S', 'N'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string csv_header(const std::vector<WeightSpec>& weights) {
  std::string h = "t,l2,h1,energy";
  for (const WeightSpec& w : weights) h += ",weighted_l2[" + w.name() + "]";
  h += ",residual_l2";
  for (const WeightSpec& w : weights) h += ",residual_weighted[" + w.name() + "]";
  return h;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << csv_header(traj.weights) << '\n';
  const std::size_t nw = traj.weights.size();
  for (const DiagnosticRecord& r : traj.records) {
    out << format_double(r.t) << ',' << format_double(r.l2) << ',' << format_double(r.h1) << ','
        << format_double(r.energy);
    for (std::size_t n = 0; n < nw; ++n)
      out << ',' << format_double(n < r.weighted_l2.size() ? r.weighted_l2[n] : NAN);
    out << ',' << format_double(r.residual_l2);
    for (std::size_t n = 0; n < nw; ++n)
      out << ',' << format_double(n < r.residual_weighted.size() ? r.residual_weighted[n] : NAN);
    out << '\n';
  }
}

std::string csv_string(const Trajectory& traj) {
  std::ostringstream s;
  write_csv(s, traj);
  return s.str();
}

void write_snapshot_binary(const std::string& path, const Field& u, double t) {
  std::ofstream out = open_out(path, true);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u64(out, static_cast<std::uint64_t>(u.grid.nx));
  put_u64(out, static_cast<std::uint64_t>(u.grid.ny));
  put_f64(out, u.grid.x_min);
  put_f64(out, u.grid.x_max);
  put_f64(out, u.grid.width);
  put_f64(out, t);
  for (double v : u.values) put_f64(out, v);
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

Snapshot read_snapshot_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("'" + path + "' is not a ZKSN snapshot");
  if (get_u32(in) != kVersion) throw UnsupportedError("unsupported snapshot version");
  Snapshot s;
  s.grid.nx = static_cast<std::size_t>(get_u64(in));
  s.grid.ny = static_cast<std::size_t>(get_u64(in));
  s.grid.x_min = get_f64(in);
  s.grid.x_max = get_f64(in);
  s.grid.width = get_f64(in);
  s.time = get_f64(in);
  s.grid.validate();
  s.field = Field(s.grid);
  for (double& v : s.field.values) v = get_f64(in);
  return s;
}

void write_snapshot_csv(const std::string& path, const Field& u, double t) {
  std::ofstream out = open_out(path, false);
  out << "# t=" << format_double(t) << '\n' << "x,y,u\n";
  const StripGrid& g = u.grid;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j)
      out << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ','
          << format_double(u(i, j)) << '\n';
}

Report decay_report_entries(const DecayReport& r) {
  return {
      {"bound_holds", r.bound_holds ? "true" : "false"},
      {"fitted_rate", format_double(r.fitted_rate)},
      {"fit_r2", format_double(r.fit_r2)},
      {"fit_valid", r.fit_valid ? "true" : "false"},
      {"beta", format_double(r.beta)},
      {"prefactor", format_double(r.prefactor_used)},
      {"bound_margin", format_double(r.bound_margin)},
      {"tolerance", format_double(r.tolerance)},
      {"observed_prefactor", format_double(r.observed_prefactor)},
      {"certified_rate", format_double(r.certified_rate)},
      {"discard_fraction", format_double(r.discard_fraction)},
  };
}

void write_report(const std::string& path, const Report& report) {
  std::ofstream out = open_out(path, false);
  for (const auto& [k, v] : report) out << k << " = " << v << '\n';
}

}  // namespace zk
