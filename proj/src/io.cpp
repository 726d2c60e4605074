#include "anisopede/io.hpp"

#include "anisopede/snapshot.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace anisopede {

void write_checkpoint(const std::string& dir, const State& s) {
  std::filesystem::create_directories(dir);
  write_snapshot(dir + "/v1.snap", s.v1, "v1", s.time);
  write_snapshot(dir + "/v2.snap", s.v2, "v2", s.time);
  write_snapshot(dir + "/T.snap", s.T, "T", s.time);
}

State read_checkpoint(const std::string& dir, const Grid& expected) {
  Snapshot v1 = read_snapshot(dir + "/v1.snap");
  Snapshot v2 = read_snapshot(dir + "/v2.snap");
  Snapshot T = read_snapshot(dir + "/T.snap");
  for (const Snapshot* s : {&v1, &v2, &T})
    if (!s->field.grid.same_shape(expected))
      throw std::runtime_error(dir + ": checkpoint grid does not match the config grid");
  if (v1.time != v2.time || v1.time != T.time)
    throw std::runtime_error(dir + ": checkpoint fields carry different times");
  State out;
  out.time = v1.time;
  out.v1 = std::move(v1.field);
  out.v2 = std::move(v2.field);
  out.T = std::move(T.field);
  out.v1.parity = Parity::Even;
  out.v2.parity = Parity::Even;
  out.T.parity = Parity::Odd;
  return out;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json j;
  j["version"] = m.version;
  j["status"] = m.status;
  j["seed"] = m.seed;
  j["diagnostics"] = m.diagnostics;
  j["final_time"] = m.final_time;
  j["steps"] = m.steps;
  j["config"] = m.config_echo;
  j["snapshots"] = nlohmann::json::array();
  for (const SnapshotEntry& s : m.snapshots)
    j["snapshots"].push_back({{"field", s.field}, {"path", s.path}, {"time", s.time}});
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": bad manifest: " + e.what());
  }
  RunManifest m;
  try {
    m.version = j.at("version").get<std::string>();
    m.status = j.at("status").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.diagnostics = j.at("diagnostics").get<std::string>();
    m.final_time = j.at("final_time").get<double>();
    m.steps = j.at("steps").get<int>();
    m.config_echo = j.at("config").get<std::string>();
    for (const auto& s : j.at("snapshots"))
      m.snapshots.push_back({s.at("field").get<std::string>(),
                             s.at("path").get<std::string>(), s.at("time").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": bad manifest: " + e.what());
  }
  return m;
}

}  // namespace anisopede
