#pragma once

#include "anisopede/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace anisopede {

// One snapshot file per field: dir/v1.snap, dir/v2.snap, dir/T.snap, all
// stamped with the state's time. The directory is created if missing.
void write_checkpoint(const std::string& dir, const State& s);

// Reads the three field snapshots back; grid shape must match `expected`
// and the three time stamps must agree.
State read_checkpoint(const std::string& dir, const Grid& expected);

struct SnapshotEntry {
  std::string field;
  std::string path;
  double time = 0.0;
};

struct RunManifest {
  std::string version = "anisopede 1.0.0";
  std::string status = "incomplete";  // complete | diverged | incomplete
  std::uint64_t seed = 1;
  std::string diagnostics;  // diagnostics CSV path
  std::vector<SnapshotEntry> snapshots;
  double final_time = 0.0;
  int steps = 0;
  std::string config_echo;  // verbatim config file text
};

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

}  // namespace anisopede
