#include "anisopede/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot payload is defined little-endian");

namespace anisopede {

namespace {

constexpr const char* kMagic = "ANISOPEDE1";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::string expect_key(std::istream& in, const std::string& path, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) fail(path, "truncated header");
  const auto eq = line.find('=');
  if (eq == std::string::npos || line.substr(0, eq) != key)
    fail(path, "corrupted header, expected key '" + key + "' got '" + line + "'");
  return line.substr(eq + 1);
}

int parse_int(const std::string& path, const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(path, "bad integer in header: '" + s + "'");
  }
}

double parse_double(const std::string& path, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(path, "bad float in header: '" + s + "'");
  }
}

}  // namespace

void write_snapshot(const std::string& path, const RealField& f, const std::string& name,
                    double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << kMagic << '\n'
      << "nx=" << f.grid.nx << '\n'
      << "ny=" << f.grid.ny << '\n'
      << "nz=" << f.grid.nz << '\n'
      << "h=" << format_double(f.grid.h) << '\n'
      << "field=" << name << '\n'
      << "parity=" << to_string(f.parity) << '\n'
      << "time=" << format_double(time) << '\n';
  out.write(reinterpret_cast<const char*>(f.data.data()),
            std::streamsize(f.data.size() * sizeof(double)));
  if (!out) fail(path, "write failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != kMagic) fail(path, "bad magic line");
  const int nx = parse_int(path, expect_key(in, path, "nx"));
  const int ny = parse_int(path, expect_key(in, path, "ny"));
  const int nz = parse_int(path, expect_key(in, path, "nz"));
  const double h = parse_double(path, expect_key(in, path, "h"));
  Snapshot snap;
  snap.name = expect_key(in, path, "field");
  const Parity parity = parity_from_string(expect_key(in, path, "parity"));
  snap.time = parse_double(path, expect_key(in, path, "time"));

  Grid g;
  try {
    g = make_grid(nx, ny, nz, h);
  } catch (const std::exception& e) {
    fail(path, std::string("bad grid in header: ") + e.what());
  }
  snap.field = RealField(g, parity);
  in.read(reinterpret_cast<char*>(snap.field.data.data()),
          std::streamsize(snap.field.data.size() * sizeof(double)));
  if (std::size_t(in.gcount()) != snap.field.data.size() * sizeof(double))
    fail(path, "truncated payload");
  return snap;
}

}  // namespace anisopede
