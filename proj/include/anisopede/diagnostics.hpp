#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace anisopede {

// One diagnostics sample. All norms are over the full box unless said
// otherwise; "u" is the vertical shear dz(v), "grad_h" the horizontal
// gradient, "lap_h" the horizontal Laplacian. Cumulative integrals are
// accumulated with the time-stepper's own quadrature weights.
struct DiagnosticsRecord {
  double step = 0;
  double t = 0;
  double dt = 0;
  double energy = 0;         // 0.5 * ||v||_2^2
  double v_l2 = 0;
  double v_l6 = 0;
  double v_linf = 0;
  double T_l2 = 0;
  double T_l6 = 0;
  double u_l2 = 0;
  double u_lm_m = 0;         // ||u||_m^m, m from the monitor settings
  double u_lq_q = 0;         // ||u||_q^q, q from the monitor settings
  double u_lr = 0;           // ||u||_r, r from the monitor settings
  double grad_h_v_l2 = 0;
  double grad_h_u_l2 = 0;
  double grad_h_T_l2 = 0;
  double lap_h_v_l2 = 0;
  double lap_h_T_l2 = 0;
  double dz_T_l2 = 0;
  double dz2_T_l2 = 0;
  double dz_u_l2 = 0;
  double dz_grad_h_T_l2 = 0;
  double grad_v_l2 = 0;      // full gradient, both components
  double grad_T_l2 = 0;
  double wlq_v = 0;          // sup over q in [2, qmax] of ||v||_q / sqrt(q)
  double local_u_r0 = 0;     // max disk-local squared L2 of u at radius r0
  double diss_q = 0;         // integral |u|^(q-2) (|grad_h u|^2 + eps |dz u|^2)
  double work_rate = 0;      // integral p_hydro * div_h(v)
  double int_grad_h_v = 0;   // cumulative integral of ||grad_h v||_2^2
  double int_eps_dz_v = 0;   // cumulative integral of eps ||dz v||_2^2
  double int_grad_h_T = 0;   // cumulative integral of ||grad_h T||_2^2
  double int_work = 0;       // cumulative integral of work_rate
  double dt_v_l2 = 0;        // ||v_n - v_{n-1}||_2 / dt
  double dt_T_l2 = 0;
  double barotropic_res = 0; // max since the previous record, incl. this step
  double parity_res = 0;
  double w_top_res = 0;
  double cfl = 0;            // dt over the advective limit
};

// Column names in file order; one entry per DiagnosticsRecord member.
const std::vector<std::string>& diagnostics_columns();

double get_column(const DiagnosticsRecord& r, std::size_t col);
void set_column(DiagnosticsRecord& r, std::size_t col, double v);

// Comma-separated table with a header line; floats carry 17 significant
// digits so reading the file back reproduces the doubles exactly.
void write_diagnostics(const std::string& path, const std::vector<DiagnosticsRecord>& rows);
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path);

}  // namespace anisopede
