#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "mhdlab/grid.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

// Snapshot file layout (little endian):
//   magic "MHDSNAP1" | int32 n | int32 N | f64 L | f64 t | f64 delta |
//   2n coefficient arrays (u components then B components), each N^n
//   complex values stored as (re, im) f64 pairs in row-major lattice order.
namespace snapshot_detail {

inline constexpr char kMagic[8] = {'M', 'H', 'D', 'S', 'N', 'A', 'P', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("snapshot file truncated");
  return v;
}

}  // namespace snapshot_detail

inline void write_snapshot(const std::string& path, const MHDState& s,
                           const Grid& g) {
  namespace d = snapshot_detail;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot open snapshot file for writing: " + path);
  os.write(d::kMagic, sizeof(d::kMagic));
  d::put<std::int32_t>(os, g.dim);
  d::put<std::int32_t>(os, g.points);
  d::put<double>(os, g.length);
  d::put<double>(os, s.t);
  d::put<double>(os, s.delta);
  for (const SpectralVectorField* f : {&s.u, &s.B})
    for (int c = 0; c < g.dim; ++c)
      for (const Complex& z : f->component(c)) {
        d::put<double>(os, z.real());
        d::put<double>(os, z.imag());
      }
  if (!os) throw ConfigError("snapshot write failed: " + path);
}

// Reads a snapshot and rebuilds the matching grid.
inline MHDState read_snapshot(const std::string& path, Grid& g_out) {
  namespace d = snapshot_detail;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open snapshot file: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, d::kMagic, sizeof(magic)) != 0)
    throw ConfigError("not a MHDSNAP1 snapshot: " + path);
  const auto dim = d::get<std::int32_t>(is);
  const auto pts = d::get<std::int32_t>(is);
  const auto len = d::get<double>(is);
  g_out = build_grid(dim, pts, len);

  MHDState s;
  s.t = d::get<double>(is);
  s.delta = d::get<double>(is);
  s.u = SpectralVectorField(g_out.dim, g_out.size());
  s.B = SpectralVectorField(g_out.dim, g_out.size());
  for (SpectralVectorField* f : {&s.u, &s.B})
    for (int c = 0; c < g_out.dim; ++c)
      for (Complex& z : f->component(c)) {
        const double re = d::get<double>(is);
        const double im = d::get<double>(is);
        z = Complex(re, im);
      }
  return s;
}

}  // namespace mhdlab
