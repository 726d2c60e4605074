#include "anisopede/monitors.hpp"

#include "anisopede/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace anisopede {

namespace {

double sq(double x) { return x * x; }

// Derivative of a sampled series by three-point differencing on the actual
// record times (handles mildly nonuniform spacing); one-sided at the ends.
std::vector<double> ddt(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) throw std::invalid_argument("monitor check: need at least two records");
  // derivative of the local quadratic through (i-1, i, i+1) at node x
  auto stencil = [&](std::size_t i, double x) {
    const double a = t[i - 1], b = t[i], c = t[i + 1];
    return y[i - 1] * (2 * x - b - c) / ((a - b) * (a - c)) +
           y[i] * (2 * x - a - c) / ((b - a) * (b - c)) +
           y[i + 1] * (2 * x - a - b) / ((c - a) * (c - b));
  };
  if (n == 2) {
    out[0] = out[1] = (y[1] - y[0]) / (t[1] - t[0]);
    return out;
  }
  out[0] = stencil(1, t[0]);
  out[n - 1] = stencil(n - 2, t[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = stencil(i, t[i]);
  return out;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs <= 0.0 ? 0.0 : kInf;
}

CheckReport finish(CheckReport rep) {
  for (const CheckPoint& p : rep.points) rep.c_star = std::max(rep.c_star, p.ratio);
  return rep;
}

// Running-sup of a column against a fixed multiple of its initial value.
CheckReport growth_check(const MonitorInput& in, const std::string& id,
                         const std::function<double(const DiagnosticsRecord&)>& col,
                         double factor) {
  CheckReport rep;
  rep.id = id;
  if (in.rows.empty()) throw std::invalid_argument("monitor check: empty series");
  const double init = col(in.rows.front());
  const double cap = factor * std::max(init, 1e-300);
  double sup = 0.0;
  for (const DiagnosticsRecord& r : in.rows) {
    sup = std::max(sup, col(r));
    CheckPoint p{r.t, sup, cap, safe_ratio(sup, cap)};
    if (p.ratio > 1.0) ++rep.violations;
    rep.points.push_back(p);
  }
  return finish(std::move(rep));
}

// Differential inequality d/dt L0 + D <= C * R evaluated pointwise; the
// derivative comes from the record series itself.
CheckReport diff_check(const MonitorInput& in, const std::string& id,
                       const std::function<double(const DiagnosticsRecord&)>& quantity,
                       const std::function<double(const DiagnosticsRecord&)>& dissipation,
                       const std::function<double(const DiagnosticsRecord&)>& rhs) {
  CheckReport rep;
  rep.id = id;
  std::vector<double> t, y;
  t.reserve(in.rows.size());
  for (const DiagnosticsRecord& r : in.rows) {
    t.push_back(r.t);
    y.push_back(quantity(r));
  }
  const std::vector<double> dy = ddt(t, y);
  for (std::size_t i = 0; i < in.rows.size(); ++i) {
    const DiagnosticsRecord& r = in.rows[i];
    const double lhs = dy[i] + dissipation(r);
    const double right = rhs(r);
    rep.points.push_back({r.t, lhs, right, safe_ratio(lhs, right)});
  }
  return finish(std::move(rep));
}

}  // namespace

const std::vector<std::string>& monitor_check_ids() {
  static const std::vector<std::string> ids = {
      "growth-bound", "weighted-growth", "shear-lq", "hgrad-v",
      "hgrad-v-poly", "grad-T",          "time-deriv", "local-energy"};
  return ids;
}

CheckReport run_check(const MonitorInput& in, const std::string& id) {
  if (in.rows.empty()) throw std::invalid_argument("monitor check: empty series");
  const double eps = in.eps;
  const MonitorParams& mp = in.params;

  if (id == "growth-bound")
    return growth_check(
        in, id, [](const DiagnosticsRecord& r) { return sq(r.v_l6) + sq(r.T_l6); }, 10.0);

  if (id == "weighted-growth")
    return growth_check(
        in, id, [](const DiagnosticsRecord& r) { return r.wlq_v; }, 10.0);

  if (id == "local-energy") {
    CheckReport rep;
    rep.id = id;
    const double cap = 8.0 * sq(mp.delta0);
    for (const DiagnosticsRecord& r : in.rows) {
      CheckPoint p{r.t, r.local_u_r0, cap, safe_ratio(r.local_u_r0, cap)};
      if (p.ratio > 1.0) {
        ++rep.violations;
        if (rep.first_exceed < 0.0) rep.first_exceed = r.t;
      }
      rep.points.push_back(p);
    }
    return finish(std::move(rep));
  }

  if (id == "shear-lq")
    return diff_check(
        in, id, [](const DiagnosticsRecord& r) { return r.u_lq_q; },
        [](const DiagnosticsRecord& r) { return r.diss_q; },
        [](const DiagnosticsRecord& r) {
          return (1.0 + sq(r.v_linf)) * (1.0 + r.u_lq_q);
        });

  auto hgrad_v_quantity = [](const DiagnosticsRecord& r) { return sq(r.grad_h_v_l2); };
  auto hgrad_v_dissipation = [eps](const DiagnosticsRecord& r) {
    return sq(r.lap_h_v_l2) + eps * sq(r.grad_h_u_l2);
  };

  if (id == "hgrad-v") {
    const double rexp = mp.r_exp;
    if (rexp <= 2.0) throw std::invalid_argument("monitor check: r exponent must be > 2");
    const double power = 4.0 * rexp / (rexp - 2.0);
    return diff_check(in, id, hgrad_v_quantity, hgrad_v_dissipation,
                      [power](const DiagnosticsRecord& r) {
                        return sq(r.v_linf) * sq(r.grad_h_v_l2) +
                               std::pow(r.u_lr, power) + sq(r.grad_h_T_l2) + 1.0;
                      });
  }

  if (id == "hgrad-v-poly")
    return diff_check(in, id, hgrad_v_quantity, hgrad_v_dissipation,
                      [](const DiagnosticsRecord& r) {
                        return sq(sq(r.v_l2) + sq(r.u_l2) + 1.0) *
                               (sq(r.grad_h_v_l2) + sq(r.grad_h_u_l2) + 1.0) *
                               sq(r.grad_h_v_l2);
                      });

  if (id == "grad-T")
    return diff_check(
        in, id, [](const DiagnosticsRecord& r) { return sq(r.grad_T_l2); },
        [eps](const DiagnosticsRecord& r) {
          return sq(r.lap_h_T_l2) + sq(r.dz_grad_h_T_l2) +
                 eps * (sq(r.dz_grad_h_T_l2) + sq(r.dz2_T_l2));
        },
        [](const DiagnosticsRecord& r) {
          return sq(sq(r.v_l2) + sq(r.grad_v_l2) + 1.0) *
                 (sq(r.grad_h_v_l2) + sq(r.lap_h_v_l2) + sq(r.grad_h_u_l2) + 1.0) *
                 (sq(r.grad_T_l2) + 1.0);
        });

  if (id == "time-deriv") {
    CheckReport rep;
    rep.id = id;
    for (std::size_t i = 1; i < in.rows.size(); ++i) {
      const DiagnosticsRecord& r = in.rows[i];
      const double lhs = sq(r.dt_v_l2) + sq(r.dt_T_l2);
      const double v_h1 = sq(r.v_l2) + sq(r.grad_v_l2);
      const double T_h1 = sq(r.T_l2) + sq(r.grad_T_l2);
      const double gv_h1 = sq(r.grad_h_v_l2) + sq(r.lap_h_v_l2) + sq(r.grad_h_u_l2);
      const double gT_h1 = sq(r.grad_h_T_l2) + sq(r.lap_h_T_l2) + sq(r.dz_grad_h_T_l2);
      const double rhs = sq(eps) * (sq(r.dz_u_l2) + sq(r.dz2_T_l2)) +
                         sq(v_h1 + T_h1 + 1.0) * (gv_h1 + gT_h1 + 1.0);
      rep.points.push_back({r.t, lhs, rhs, safe_ratio(lhs, rhs)});
    }
    return finish(std::move(rep));
  }

  throw std::invalid_argument("unknown monitor check: '" + id + "'");
}

void write_check_report(const std::string& path, const CheckReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "t,lhs,rhs,ratio\n";
  char buf[512];
  for (const CheckPoint& p : rep.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.t, p.lhs, p.rhs, p.ratio);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "C_star=%.17g\nviolations=%d\n", rep.c_star,
                rep.violations);
  out << buf;
  if (rep.first_exceed >= 0.0) {
    std::snprintf(buf, sizeof buf, "first_exceed=%.17g\n", rep.first_exceed);
    out << buf;
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace anisopede
