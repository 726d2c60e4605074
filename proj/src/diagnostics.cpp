#include "anisopede/diagnostics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anisopede {

namespace {

struct Column {
  const char* name;
  double DiagnosticsRecord::* member;
};

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      {"step", &DiagnosticsRecord::step},
      {"t", &DiagnosticsRecord::t},
      {"dt", &DiagnosticsRecord::dt},
      {"energy", &DiagnosticsRecord::energy},
      {"v_l2", &DiagnosticsRecord::v_l2},
      {"v_l6", &DiagnosticsRecord::v_l6},
      {"v_linf", &DiagnosticsRecord::v_linf},
      {"T_l2", &DiagnosticsRecord::T_l2},
      {"T_l6", &DiagnosticsRecord::T_l6},
      {"u_l2", &DiagnosticsRecord::u_l2},
      {"u_lm_m", &DiagnosticsRecord::u_lm_m},
      {"u_lq_q", &DiagnosticsRecord::u_lq_q},
      {"u_lr", &DiagnosticsRecord::u_lr},
      {"grad_h_v_l2", &DiagnosticsRecord::grad_h_v_l2},
      {"grad_h_u_l2", &DiagnosticsRecord::grad_h_u_l2},
      {"grad_h_T_l2", &DiagnosticsRecord::grad_h_T_l2},
      {"lap_h_v_l2", &DiagnosticsRecord::lap_h_v_l2},
      {"lap_h_T_l2", &DiagnosticsRecord::lap_h_T_l2},
      {"dz_T_l2", &DiagnosticsRecord::dz_T_l2},
      {"dz2_T_l2", &DiagnosticsRecord::dz2_T_l2},
      {"dz_u_l2", &DiagnosticsRecord::dz_u_l2},
      {"dz_grad_h_T_l2", &DiagnosticsRecord::dz_grad_h_T_l2},
      {"grad_v_l2", &DiagnosticsRecord::grad_v_l2},
      {"grad_T_l2", &DiagnosticsRecord::grad_T_l2},
      {"wlq_v", &DiagnosticsRecord::wlq_v},
      {"local_u_r0", &DiagnosticsRecord::local_u_r0},
      {"diss_q", &DiagnosticsRecord::diss_q},
      {"work_rate", &DiagnosticsRecord::work_rate},
      {"int_grad_h_v", &DiagnosticsRecord::int_grad_h_v},
      {"int_eps_dz_v", &DiagnosticsRecord::int_eps_dz_v},
      {"int_grad_h_T", &DiagnosticsRecord::int_grad_h_T},
      {"int_work", &DiagnosticsRecord::int_work},
      {"dt_v_l2", &DiagnosticsRecord::dt_v_l2},
      {"dt_T_l2", &DiagnosticsRecord::dt_T_l2},
      {"barotropic_res", &DiagnosticsRecord::barotropic_res},
      {"parity_res", &DiagnosticsRecord::parity_res},
      {"w_top_res", &DiagnosticsRecord::w_top_res},
      {"cfl", &DiagnosticsRecord::cfl},
  };
  return cols;
}

}  // namespace

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : columns()) v.emplace_back(c.name);
    return v;
  }();
  return names;
}

double get_column(const DiagnosticsRecord& r, std::size_t col) {
  return r.*(columns().at(col).member);
}

void set_column(DiagnosticsRecord& r, std::size_t col, double v) {
  r.*(columns().at(col).member) = v;
}

void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  const auto& cols = columns();
  for (std::size_t c = 0; c < cols.size(); ++c)
    out << (c ? "," : "") << cols[c].name;
  out << '\n';
  char buf[40];
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", get_column(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const auto& cols = columns();
  {
    std::stringstream header(line);
    std::string name;
    std::size_t c = 0;
    while (std::getline(header, name, ','))
      if (c >= cols.size() || name != cols[c++].name)
        throw std::runtime_error(path + ": unexpected column '" + name + "'");
    if (c != cols.size()) throw std::runtime_error(path + ": missing columns");
  }
  std::vector<DiagnosticsRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    DiagnosticsRecord r;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols.size())
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": extra column");
      try {
        std::size_t pos = 0;
        set_column(r, c, std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value '" +
                                 cell + "'");
      }
      ++c;
    }
    if (c != cols.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": short row");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace anisopede
