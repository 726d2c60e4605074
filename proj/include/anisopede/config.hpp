#pragma once

#include "anisopede/solver.hpp"

#include <cstdint>
#include <string>

namespace anisopede {

// A full simulate run read from a sectioned key=value file.
struct FileConfig {
  SolverConfig solver;
  std::string initial = "zero";  // builtin spec, or "snapshot" with paths set
  std::string v1_path, v2_path, T_path;
  std::string out_dir = "out";
  bool write_snapshots = false;
  std::uint64_t seed = 1;
  std::string raw;  // file text, echoed into the run manifest
};

// Format: blank lines and lines starting with '#' or ';' are ignored;
// sections in brackets; key = value pairs.
//   [grid]    nx ny nz h              (all required)
//   [physics] eps f0
//   [time]    dt t_end cfl            (cfl = "off" or a safety factor in (0,1])
//   [output]  cadence directory snapshots
//   [initial] builtin = name[,k=v..]  or  v1/v2/T = snapshot paths
//   [monitor] m q r qmax r0 delta0 stride
//   [run]     seed
// Unknown sections or keys are rejected with file:line, as are values out
// of range (eps < 0, m <= 2, nonpositive dt or cadence, ...).
FileConfig parse_config(const std::string& path);

}  // namespace anisopede
