#pragma once

#include "anisopede/grid.hpp"

#include <string>

namespace anisopede {

// Field snapshot file: the magic line "ANISOPEDE1", then newline-separated
// key=value header lines in fixed order (nx, ny, nz, h, field, parity,
// time), then raw little-endian 64-bit floats in x-fastest order. Floats in
// the header are printed with 17 significant digits so the round trip is
// value-exact; the payload round trip is bitwise.
struct Snapshot {
  RealField field;
  std::string name;
  double time = 0.0;
};

void write_snapshot(const std::string& path, const RealField& f, const std::string& name,
                    double time);

Snapshot read_snapshot(const std::string& path);

}  // namespace anisopede
