#pragma once

#include "anisopede/diagnostics.hpp"
#include "anisopede/solver.hpp"

#include <string>
#include <vector>

namespace anisopede {

// One evaluated point of a monitored inequality.
struct CheckPoint {
  double t = 0;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;  // lhs / rhs where rhs > 0
};

struct CheckReport {
  std::string id;
  std::vector<CheckPoint> points;
  double c_star = 0.0;        // max ratio over usable points
  int violations = 0;         // points whose ratio exceeds the check's cap
  double first_exceed = -1.0; // local-energy: first time over the cap, -1 if never
};

// A diagnostics series plus the parameters it was produced with. eps and
// the exponents cannot be recovered from the rows, so they travel along.
struct MonitorInput {
  std::vector<DiagnosticsRecord> rows;
  double eps = 0.0;
  MonitorParams params;
};

// Available checks; all are pure functions of the series.
//   growth-bound     running sup of ||v||_6^2 + ||T||_6^2 against 10x initial
//   weighted-growth  running sup of the sqrt(q)-weighted norm ladder, same cap
//   shear-lq         d/dt ||u||_q^q + q-dissipation vs (1+||v||_inf^2)(1+||u||_q^q)
//   hgrad-v          d/dt ||grad_h v||^2 + dissipation vs shear and temperature terms
//   hgrad-v-poly     same left side, right side polynomial in the energies
//   grad-T           d/dt ||grad T||^2 + dissipation vs polynomial right side
//   time-deriv       ||dt v||^2 + ||dt T||^2 vs polynomial right side
//   local-energy     localized shear energy against the absolute cap 8 delta0^2
// For the fitted checks the report's c_star is the empirical constant; for
// the capped checks (growth-*, local-energy) violations counts ratios > 1.
const std::vector<std::string>& monitor_check_ids();

CheckReport run_check(const MonitorInput& in, const std::string& id);

// CSV with one row per point (t, lhs, rhs, ratio), then footer lines
// C_star=, violations= and, when set, first_exceed=.
void write_check_report(const std::string& path, const CheckReport& rep);

}  // namespace anisopede
