#pragma once

#include "anisopede/diagnostics.hpp"
#include "anisopede/grid.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anisopede {

struct PhysicsParams {
  double eps = 0.0;  // vertical dissipation coefficient, >= 0
  double f0 = 0.0;   // rotation rate
};

struct TimeParams {
  double dt = 1e-3;
  double t_end = 1.0;
  bool adaptive = false;      // when set, dt follows the advective limit
  double cfl_safety = 0.5;
};

struct MonitorParams {
  double m_exp = 4.0;     // exponent for the ||dz v||_m^m track, in (2, inf)
  double q_exp = 4.0;     // q for the q-norm dissipation track
  double r_exp = 4.0;     // r for the shear-norm track, > 2
  int qmax = 128;         // cap for the weighted q-norm ladder
  double r0 = 0.25;       // disk radius for the local energy track
  double delta0 = 1.0;    // smallness threshold for the local energy track
  int center_stride = 4;  // disk-center lattice stride
};

struct SolverConfig {
  Grid grid;
  PhysicsParams physics;
  TimeParams time;
  MonitorParams monitor;
  double cadence = 0.01;          // diagnostics sampling interval
  double blowup_threshold = 1e12;
};

// Prognostic fields. v1, v2 are Even in z, T is Odd.
struct State {
  double time = 0.0;
  RealField v1, v2, T;
};

State make_state(const Grid& g, double time = 0.0);

/// Built-in initial data, chosen by "name" or "name,key=value,...":
//   zero                      rest state
//   taylor,A=1                v = (A sin(2 pi y), 0), T = 0
//   tg2d,A=1                  z-independent divergence-free vortex array
//   smooth3d,A=0.5            fixed smooth 3D data with nonzero T
State builtin_initial(const Grid& g, const std::string& spec);

// Dealiasing, parity enforcement and barotropic projection, in that order.
// Applied to initial data; every stage of the time stepper ends with the
// equivalent spectral projections.
State preprocess(const State& s);

// Explicit tendency of the horizontal momentum equation,
//   -(v . grad_h) v - w dz(v) - f0 k x v - grad_h(p_s + p_hydro),
// where w is the diagnosed vertical velocity, p_hydro the hydrostatic
// pressure of T, p_s the surface pressure keeping the depth-mean flow
// divergence-free, and k x v = (-v2, v1). The linear dissipation terms are
// integrated exactly by the stepper and are not part of this tendency.
std::pair<RealField, RealField> rhs_momentum(const State& s, const PhysicsParams& p);

// Explicit tendency of the temperature equation,
//   -v . grad_h(T) - w (dz(T) + 1/h).
RealField rhs_temperature(const State& s, const PhysicsParams& p);

// One step of the third-order integrating-factor Runge-Kutta scheme
// (stage nodes 0, 1/2, 1; weights 1/6, 4/6, 1/6). The linear operator
// lap_h + eps dz^2 is integrated exactly per mode; all integrating factors
// have nonpositive exponents. Stages end with dealiasing, parity
// enforcement and barotropic projection.
State step(const State& s, double dt, const SolverConfig& cfg);

struct RunHooks {
  // Called at every diagnostics record, after the row is computed.
  std::function<void(const State&, const DiagnosticsRecord&)> on_record;
};

struct RunResult {
  State final_state;
  std::vector<DiagnosticsRecord> diagnostics;
  std::string status;  // "complete" or "diverged"
  int steps = 0;
  double blowup_time = 0.0;  // meaningful when status == "diverged"
};

// Integrates from the state's time to t_end. The initial state is
// preprocessed first. Diagnostics rows are appended at t0, then at every
// cadence boundary and at the final time; invariant residuals are tracked
// at every step. On blow-up (non-finite or oversized solution) the run
// stops cleanly with status "diverged".
RunResult run(const SolverConfig& cfg, const State& initial, const RunHooks& hooks = {});

struct SweepRow {
  double eps_high = 0.0;
  double eps_low = 0.0;
  double distance = 0.0;  // sup over record times of the H1 distance
};

// Runs the same initial data at every eps in the list and reports, for each
// consecutive pair, the sup-in-time H1 distance between the two
// trajectories (all components of v and T, full gradient).
std::vector<SweepRow> eps_sweep(const SolverConfig& base, const std::vector<double>& eps_list,
                                const State& initial);

// H1 distance between two states on one grid (used by eps_sweep).
double h1_distance(const State& a, const State& b);

// L2 norm of the residual of the evolution equation satisfied by the
// vertical shear u = dz(v), evaluated at the midpoint of two consecutive
// states by central differencing in time. Second-order small in dt along
// solver trajectories.
double dzv_residual(const State& prev, const State& next, double dt, const PhysicsParams& p);

}  // namespace anisopede
