#include "anisopede/solver.hpp"

#include "anisopede/norms.hpp"
#include "anisopede/operators.hpp"
#include "anisopede/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace anisopede {

namespace {

using Cplx = std::complex<double>;

struct SpecState {
  SpectralField v1, v2, T;
  double time = 0.0;
};

struct Tendency {
  SpectralField v1, v2, T;
};

// Per-stage scalars harvested while the tendency is assembled.
struct RhsAux {
  double v1max = 0, v2max = 0, wmax = 0;
  double w_bottom = 0;      // max |w| on the z = -h plane (0 by construction)
  double ps_zero_mode = 0;  // discarded zero mode of the pressure Poisson rhs
  double diss_h_v = 0;      // ||grad_h v||_2^2
  double diss_z_v = 0;      // ||dz v||_2^2
  double diss_h_T = 0;      // ||grad_h T||_2^2
  double work = 0;          // integral p_hydro * div_h v
};

// Coefficients of int_{-h}^z s dxi for a field whose z-mean vanishes; the
// z-mean slab of the input is ignored. The offset fixing the value 0 at
// z = -h lands on the output slab. The z-Nyquist mode integrates to a mode
// that vanishes at all collocation points and is dropped.
SpectralField z_antiderivative(const SpectralField& s) {
  const Grid& g = s.grid;
  SpectralField out(g);
  const std::size_t plane = std::size_t(g.nx / 2 + 1) * g.ny;
  for (int iz = 1; iz < g.nz; ++iz) {
    if (iz == g.nz / 2) continue;
    const Cplx inv(0.0, -1.0 / g.kz[iz]);  // 1 / (i kz)
    const double sign = (signed_index(iz, g.nz) % 2 == 0) ? 1.0 : -1.0;
    const Cplx* src = s.data.data() + plane * iz;
    Cplx* dst = out.data.data() + plane * iz;
    Cplx* slab = out.data.data();
    for (std::size_t n = 0; n < plane; ++n) {
      const Cplx a = inv * src[n];
      dst[n] = a;
      slab[n] -= sign * a;
    }
  }
  return out;
}

// Symmetrization in spectral space: pairs (jz, -jz) at fixed (kx, ky).
// Matches enforce_parity on the collocation values up to roundoff and is
// bitwise idempotent.
void spectral_parity(SpectralField& s) {
  if (s.parity == Parity::None) return;
  const Grid& g = s.grid;
  const std::size_t plane = std::size_t(g.nx / 2 + 1) * g.ny;
  const bool even = s.parity == Parity::Even;
  for (int iz = 0; iz <= g.nz / 2; ++iz) {
    const int izm = (g.nz - iz) % g.nz;
    Cplx* a = s.data.data() + plane * iz;
    Cplx* b = s.data.data() + plane * izm;
    if (iz == izm) {
      if (!even)
        for (std::size_t n = 0; n < plane; ++n) a[n] = 0.0;
      continue;
    }
    for (std::size_t n = 0; n < plane; ++n) {
      if (even) {
        const Cplx m = 0.5 * (a[n] + b[n]);
        a[n] = m;
        b[n] = m;
      } else {
        const Cplx d = 0.5 * (a[n] - b[n]);
        a[n] = d;
        b[n] = -d;
      }
    }
  }
}

// Leray projection of the z-mean modes: removes the gradient part of the
// depth-mean flow so its divergence vanishes mode by mode.
void spectral_barotropic(SpectralField& v1, SpectralField& v2) {
  const Grid& g = v1.grid;
  const int nxc = g.nx / 2 + 1;
  const int iz = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < nxc; ++ix) {
      if (ix == 0 && iy == 0) continue;
      const double kx = g.kx[ix], ky = g.ky[iy];
      const double k2 = kx * kx + ky * ky;
      const Cplx d = Cplx(0.0, kx) * v1.at(ix, iy, iz) + Cplx(0.0, ky) * v2.at(ix, iy, iz);
      v1.at(ix, iy, iz) += Cplx(0.0, kx) * d / k2;
      v2.at(ix, iy, iz) += Cplx(0.0, ky) * d / k2;
    }
  }
}

void project_fields(SpecState& s) {
  s.v1.parity = Parity::Even;
  s.v2.parity = Parity::Even;
  s.T.parity = Parity::Odd;
  dealias(s.v1);
  dealias(s.v2);
  dealias(s.T);
  spectral_parity(s.v1);
  spectral_parity(s.v2);
  spectral_parity(s.T);
  spectral_barotropic(s.v1, s.v2);
}

// One pass over the spectrum accumulating the quadratic functionals used by
// the diagnostics. Assumes dealiased input (Nyquist planes empty), so the
// raw wavenumber tables match the differentiation operators.
struct SpectralSums {
  double v_l2sq = 0, T_l2sq = 0;
  double gh_v = 0, gz_v = 0;       // ||grad_h v||^2, ||dz v||^2
  double gh_T = 0, gz_T = 0;
  double lap_v = 0, lap_T = 0;     // ||lap_h .||^2
  double ghz_v = 0, ghz_T = 0;     // ||grad_h dz .||^2
  double zz_v = 0, zz_T = 0;       // ||dz^2 .||^2
};

SpectralSums spectral_sums(const SpecState& s) {
  const Grid& g = s.v1.grid;
  SpectralSums out;
  const int nxc = g.nx / 2 + 1;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz) {
    const double kz2 = g.kz[iz] * g.kz[iz];
    for (int iy = 0; iy < g.ny; ++iy) {
      const double ky2 = g.ky[iy] * g.ky[iy];
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        const double w = (ix == 0 || ix == g.nx / 2) ? 1.0 : 2.0;
        const double kh2 = g.kx[ix] * g.kx[ix] + ky2;
        const double av = w * (std::norm(s.v1.data[idx]) + std::norm(s.v2.data[idx]));
        const double at = w * std::norm(s.T.data[idx]);
        out.v_l2sq += av;
        out.T_l2sq += at;
        out.gh_v += kh2 * av;
        out.gz_v += kz2 * av;
        out.gh_T += kh2 * at;
        out.gz_T += kz2 * at;
        out.lap_v += kh2 * kh2 * av;
        out.lap_T += kh2 * kh2 * at;
        out.ghz_v += kh2 * kz2 * av;
        out.ghz_T += kh2 * kz2 * at;
        out.zz_v += kz2 * kz2 * av;
        out.zz_T += kz2 * kz2 * at;
      }
    }
  }
  const double vol = g.volume();
  out.v_l2sq *= vol;
  out.T_l2sq *= vol;
  out.gh_v *= vol;
  out.gz_v *= vol;
  out.gh_T *= vol;
  out.gz_T *= vol;
  out.lap_v *= vol;
  out.lap_T *= vol;
  out.ghz_v *= vol;
  out.ghz_T *= vol;
  out.zz_v *= vol;
  out.zz_T *= vol;
  return out;
}

double spec_inner(const SpectralField& a, const SpectralField& b) {
  const Grid& g = a.grid;
  const int nxc = g.nx / 2 + 1;
  double sum = 0.0;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz)
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        const double w = (ix == 0 || ix == g.nx / 2) ? 1.0 : 2.0;
        sum += w * (a.data[idx] * std::conj(b.data[idx])).real();
      }
  return sum * g.volume();
}

// Explicit (nonlinear + rotation + pressure) tendency in spectral space.
Tendency rhs_spec(const SpecState& s, const Grid& g, const PhysicsParams& p, RhsAux* aux) {
  const SpectralField dx1 = deriv_x(s.v1), dy1 = deriv_y(s.v1), dz1 = deriv_z(s.v1);
  const SpectralField dx2 = deriv_x(s.v2), dy2 = deriv_y(s.v2), dz2 = deriv_z(s.v2);
  const SpectralField dxT = deriv_x(s.T), dyT = deriv_y(s.T), dzT = deriv_z(s.T);

  SpectralField divh = dx1;
  for (std::size_t n = 0; n < divh.size(); ++n) divh.data[n] += dy2.data[n];
  SpectralField what = z_antiderivative(divh);
  for (auto& c : what.data) c = -c;

  const RealField rv1 = inverse(s.v1), rv2 = inverse(s.v2), rw = inverse(what);
  const RealField rdx1 = inverse(dx1), rdy1 = inverse(dy1), rdz1 = inverse(dz1);
  const RealField rdx2 = inverse(dx2), rdy2 = inverse(dy2), rdz2 = inverse(dz2);
  const RealField rTx = inverse(dxT), rTy = inverse(dyT), rTz = inverse(dzT);

  RealField a1(g), a2(g), aT(g);
  for (std::size_t n = 0; n < a1.data.size(); ++n) {
    a1.data[n] = rv1.data[n] * rdx1.data[n] + rv2.data[n] * rdy1.data[n] +
                 rw.data[n] * rdz1.data[n];
    a2.data[n] = rv1.data[n] * rdx2.data[n] + rv2.data[n] * rdy2.data[n] +
                 rw.data[n] * rdz2.data[n];
    aT.data[n] = rv1.data[n] * rTx.data[n] + rv2.data[n] * rTy.data[n] +
                 rw.data[n] * rTz.data[n];
  }

  Tendency N{forward(a1), forward(a2), forward(aT)};

  // Hydrostatic pressure of T; T is odd so its z-mean slab is (roundoff)
  // zero and the antiderivative is purely spectral.
  SpectralField ph = z_antiderivative(s.T);
  for (auto& c : ph.data) c = -c;
  const SpectralField phx = deriv_x(ph), phy = deriv_y(ph);

  const double inv_h = 1.0 / g.h;
  for (std::size_t n = 0; n < N.v1.size(); ++n) {
    N.v1.data[n] = -N.v1.data[n] + p.f0 * s.v2.data[n] - phx.data[n];
    N.v2.data[n] = -N.v2.data[n] - p.f0 * s.v1.data[n] - phy.data[n];
    N.T.data[n] = -N.T.data[n] - inv_h * what.data[n];
  }
  N.v1.parity = Parity::Even;
  N.v2.parity = Parity::Even;
  N.T.parity = Parity::Odd;
  dealias(N.v1);
  dealias(N.v2);
  dealias(N.T);

  // Surface pressure: Leray projection of the z-mean tendency slab, which
  // keeps the depth-mean flow divergence free.
  const int nxc = g.nx / 2 + 1;
  double ps_zero = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < nxc; ++ix) {
      const double kx = g.kx[ix], ky = g.ky[iy];
      const Cplx rhs =
          Cplx(0.0, kx) * N.v1.at(ix, iy, 0) + Cplx(0.0, ky) * N.v2.at(ix, iy, 0);
      if (ix == 0 && iy == 0) {
        ps_zero = std::abs(rhs);
        continue;
      }
      const double k2 = kx * kx + ky * ky;
      N.v1.at(ix, iy, 0) += Cplx(0.0, kx) * rhs / k2;
      N.v2.at(ix, iy, 0) += Cplx(0.0, ky) * rhs / k2;
    }
  }

  if (aux) {
    aux->ps_zero_mode = ps_zero;
    for (std::size_t n = 0; n < rv1.data.size(); ++n) {
      aux->v1max = std::max(aux->v1max, std::abs(rv1.data[n]));
      aux->v2max = std::max(aux->v2max, std::abs(rv2.data[n]));
      aux->wmax = std::max(aux->wmax, std::abs(rw.data[n]));
    }
    const std::size_t plane = std::size_t(g.nx) * g.ny;
    for (std::size_t n = 0; n < plane; ++n)
      aux->w_bottom = std::max(aux->w_bottom, std::abs(rw.data[n]));
    const SpectralSums sums = spectral_sums(s);
    aux->diss_h_v = sums.gh_v;
    aux->diss_z_v = sums.gz_v;
    aux->diss_h_T = sums.gh_T;
    aux->work = spec_inner(ph, divh);
  }
  return N;
}

struct Carry {
  double int_grad_h_v = 0, int_eps_dz_v = 0, int_grad_h_T = 0, int_work = 0;
};

struct ResidualMax {
  double barotropic = 0, parity = 0, w_top = 0;
  void reset() { barotropic = parity = w_top = 0; }
};

struct StepInfo {
  double dt_used = 0;
  double cfl = 0;
  double w_bottom = 0;
};

class Engine {
 public:
  explicit Engine(const SolverConfig& cfg) : cfg_(cfg) {}

  SpecState to_spec(const State& st) const {
    SpecState s{forward(st.v1), forward(st.v2), forward(st.T), st.time};
    project_fields(s);
    return s;
  }

  State to_real(const SpecState& s) const {
    State st;
    st.time = s.time;
    st.v1 = inverse(s.v1);
    st.v2 = inverse(s.v2);
    st.T = inverse(s.T);
    return st;
  }

  // One integrating-factor Runge-Kutta step; exact per-mode integration of
  // -|k_H|^2 - eps kz^2 with stage nodes (0, 1/2, 1). All stages are
  // projected. Quadratic diagnostics are accumulated with the scheme's own
  // weights (1, 4, 1)/6 so cumulative integrals share the scheme's order.
  SpecState advance(const SpecState& s, double dt_request, Carry& carry, StepInfo& info) {
    RhsAux aux1;
    const Tendency N1 = rhs_spec(s, grid(), cfg_.physics, &aux1);

    double dt = dt_request;
    const double limit = advective_limit(aux1);
    if (cfg_.time.adaptive) dt = std::min(dt, cfg_.time.cfl_safety * limit);
    info.dt_used = dt;
    info.cfl = limit == kInf ? 0.0 : dt / limit;
    info.w_bottom = aux1.w_bottom;
    ensure_tables(dt);

    SpecState u2 = s;
    u2.time = s.time + 0.5 * dt;
    combine(u2, [&](std::size_t n, int f) {
      return half_[n] * (field(s, f)[n] + 0.5 * dt * field(N1, f)[n]);
    });
    project_fields(u2);
    RhsAux aux2;
    const Tendency N2 = rhs_spec(u2, grid(), cfg_.physics, &aux2);

    SpecState u3 = s;
    u3.time = s.time + dt;
    combine(u3, [&](std::size_t n, int f) {
      return full_[n] * field(s, f)[n] +
             dt * (-full_[n] * field(N1, f)[n] + 2.0 * half_[n] * field(N2, f)[n]);
    });
    project_fields(u3);
    RhsAux aux3;
    const Tendency N3 = rhs_spec(u3, grid(), cfg_.physics, &aux3);

    SpecState out = s;
    out.time = s.time + dt;
    combine(out, [&](std::size_t n, int f) {
      return full_[n] * field(s, f)[n] +
             (dt / 6.0) * (full_[n] * field(N1, f)[n] + 4.0 * half_[n] * field(N2, f)[n] +
                           field(N3, f)[n]);
    });
    project_fields(out);

    const double w1 = dt / 6.0, w2 = 4.0 * dt / 6.0, w3 = dt / 6.0;
    carry.int_grad_h_v += w1 * aux1.diss_h_v + w2 * aux2.diss_h_v + w3 * aux3.diss_h_v;
    carry.int_eps_dz_v +=
        cfg_.physics.eps * (w1 * aux1.diss_z_v + w2 * aux2.diss_z_v + w3 * aux3.diss_z_v);
    carry.int_grad_h_T += w1 * aux1.diss_h_T + w2 * aux2.diss_h_T + w3 * aux3.diss_h_T;
    carry.int_work += w1 * aux1.work + w2 * aux2.work + w3 * aux3.work;
    return out;
  }

  DiagnosticsRecord make_row(const SpecState& s, const SpecState& prev, int step_idx,
                             const Carry& carry, const ResidualMax& res,
                             const StepInfo& info) const {
    const Grid& g = grid();
    const MonitorParams& mon = cfg_.monitor;
    DiagnosticsRecord r;
    r.step = step_idx;
    r.t = s.time;
    r.dt = info.dt_used;
    r.cfl = info.cfl;

    const SpectralSums sums = spectral_sums(s);
    r.v_l2 = std::sqrt(sums.v_l2sq);
    r.energy = 0.5 * sums.v_l2sq;
    r.T_l2 = std::sqrt(sums.T_l2sq);
    r.u_l2 = std::sqrt(sums.gz_v);
    r.grad_h_v_l2 = std::sqrt(sums.gh_v);
    r.grad_h_u_l2 = std::sqrt(sums.ghz_v);
    r.grad_h_T_l2 = std::sqrt(sums.gh_T);
    r.lap_h_v_l2 = std::sqrt(sums.lap_v);
    r.lap_h_T_l2 = std::sqrt(sums.lap_T);
    r.dz_T_l2 = std::sqrt(sums.gz_T);
    r.dz2_T_l2 = std::sqrt(sums.zz_T);
    r.dz_u_l2 = std::sqrt(sums.zz_v);
    r.dz_grad_h_T_l2 = std::sqrt(sums.ghz_T);
    r.grad_v_l2 = std::sqrt(sums.gh_v + sums.gz_v);
    r.grad_T_l2 = std::sqrt(sums.gh_T + sums.gz_T);

    const RealField rv1 = inverse(s.v1), rv2 = inverse(s.v2), rT = inverse(s.T);
    const SpectralField u1s = deriv_z(s.v1), u2s = deriv_z(s.v2);
    const RealField ru1 = inverse(u1s), ru2 = inverse(u2s);

    const Magnitude mv(rv1, rv2);
    r.v_l6 = lq_norm(mv, 6.0);
    r.v_linf = lq_norm(mv, kInf);
    r.T_l6 = lq_norm(rT, 6.0);

    const Magnitude mu(ru1, ru2);
    r.u_lm_m = std::pow(lq_norm(mu, mon.m_exp), mon.m_exp);
    r.u_lq_q = std::pow(lq_norm(mu, mon.q_exp), mon.q_exp);
    r.u_lr = lq_norm(mu, mon.r_exp);
    r.wlq_v = weighted_lq_sup(mv, mon.qmax);
    r.local_u_r0 = local_energy_profile(mu, mon.r0, mon.center_stride);

    {
      const RealField gxu1 = inverse(deriv_x(u1s)), gyu1 = inverse(deriv_y(u1s));
      const RealField gxu2 = inverse(deriv_x(u2s)), gyu2 = inverse(deriv_y(u2s));
      const RealField gzu1 = inverse(deriv_z(u1s)), gzu2 = inverse(deriv_z(u2s));
      double sum = 0.0;
      const double q = mon.q_exp;
      for (std::size_t n = 0; n < rv1.data.size(); ++n) {
        const double m = std::hypot(ru1.data[n], ru2.data[n]);
        const double gh2 = gxu1.data[n] * gxu1.data[n] + gyu1.data[n] * gyu1.data[n] +
                           gxu2.data[n] * gxu2.data[n] + gyu2.data[n] * gyu2.data[n];
        const double gz2 = gzu1.data[n] * gzu1.data[n] + gzu2.data[n] * gzu2.data[n];
        sum += std::pow(m, q - 2.0) * (gh2 + cfg_.physics.eps * gz2);
      }
      r.diss_q = sum * g.cell_volume();
    }

    {
      SpectralField ph = z_antiderivative(s.T);
      for (auto& c : ph.data) c = -c;
      SpectralField divh = deriv_x(s.v1);
      const SpectralField dy2 = deriv_y(s.v2);
      for (std::size_t n = 0; n < divh.size(); ++n) divh.data[n] += dy2.data[n];
      r.work_rate = spec_inner(ph, divh);
    }

    r.int_grad_h_v = carry.int_grad_h_v;
    r.int_eps_dz_v = carry.int_eps_dz_v;
    r.int_grad_h_T = carry.int_grad_h_T;
    r.int_work = carry.int_work;

    if (info.dt_used > 0.0) {
      double dv = 0.0, dT = 0.0;
      const int nxc = g.nx / 2 + 1;
      std::size_t idx = 0;
      for (int iz = 0; iz < g.nz; ++iz)
        for (int iy = 0; iy < g.ny; ++iy)
          for (int ix = 0; ix < nxc; ++ix, ++idx) {
            const double w = (ix == 0 || ix == g.nx / 2) ? 1.0 : 2.0;
            dv += w * (std::norm(s.v1.data[idx] - prev.v1.data[idx]) +
                       std::norm(s.v2.data[idx] - prev.v2.data[idx]));
            dT += w * std::norm(s.T.data[idx] - prev.T.data[idx]);
          }
      r.dt_v_l2 = std::sqrt(dv * g.volume()) / info.dt_used;
      r.dt_T_l2 = std::sqrt(dT * g.volume()) / info.dt_used;
    }

    r.barotropic_res = res.barotropic;
    r.parity_res = res.parity;
    r.w_top_res = res.w_top;
    return r;
  }

  const Grid& grid() const { return cfg_.grid; }

 private:
  double advective_limit(const RhsAux& aux) const {
    const Grid& g = grid();
    double lim = kInf;
    if (aux.v1max > 0) lim = std::min(lim, (1.0 / g.nx) / aux.v1max);
    if (aux.v2max > 0) lim = std::min(lim, (1.0 / g.ny) / aux.v2max);
    if (aux.wmax > 0) lim = std::min(lim, (2.0 * g.h / g.nz) / aux.wmax);
    return lim;
  }

  void ensure_tables(double dt) {
    if (dt == tables_dt_) return;
    const Grid& g = grid();
    const std::size_t n = std::size_t(g.nx / 2 + 1) * g.ny * g.nz;
    full_.resize(n);
    half_.resize(n);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.nz; ++iz) {
      const double kz2 = g.kz[iz] * g.kz[iz];
      for (int iy = 0; iy < g.ny; ++iy) {
        const double ky2 = g.ky[iy] * g.ky[iy];
        for (int ix = 0; ix < g.nx / 2 + 1; ++ix, ++idx) {
          const double lam = -(g.kx[ix] * g.kx[ix] + ky2) - cfg_.physics.eps * kz2;
          full_[idx] = std::exp(dt * lam);
          half_[idx] = std::exp(0.5 * dt * lam);
        }
      }
    }
    tables_dt_ = dt;
  }

  static const std::vector<Cplx>& field(const SpecState& s, int f) {
    return f == 0 ? s.v1.data : (f == 1 ? s.v2.data : s.T.data);
  }
  static const std::vector<Cplx>& field(const Tendency& s, int f) {
    return f == 0 ? s.v1.data : (f == 1 ? s.v2.data : s.T.data);
  }

  template <typename F>
  void combine(SpecState& dst, F&& f) const {
    std::array<std::vector<Cplx>*, 3> out{&dst.v1.data, &dst.v2.data, &dst.T.data};
    for (int fi = 0; fi < 3; ++fi)
      for (std::size_t n = 0; n < out[fi]->size(); ++n) (*out[fi])[n] = f(n, fi);
  }

  SolverConfig cfg_;
  double tables_dt_ = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> full_, half_;
};

}  // namespace

State make_state(const Grid& g, double time) {
  State s;
  s.time = time;
  s.v1 = RealField(g, Parity::Even);
  s.v2 = RealField(g, Parity::Even);
  s.T = RealField(g, Parity::Odd);
  return s;
}

State builtin_initial(const Grid& g, const std::string& spec) {
  std::string name = spec;
  std::map<std::string, double> kv;
  if (const auto comma = spec.find(','); comma != std::string::npos) {
    name = spec.substr(0, comma);
    std::stringstream rest(spec.substr(comma + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("initial data: expected key=value, got '" + item + "'");
      try {
        std::size_t pos = 0;
        const double v = std::stod(item.substr(eq + 1), &pos);
        if (pos != item.size() - eq - 1) throw std::invalid_argument(item);
        kv[item.substr(0, eq)] = v;
      } catch (const std::exception&) {
        throw std::invalid_argument("initial data: bad value in '" + item + "'");
      }
    }
  }
  auto param = [&](const char* key, double dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  };

  State s = make_state(g);
  const double two_pi = 2.0 * M_PI;
  if (name == "zero") {
    return s;
  } else if (name == "taylor") {
    const double A = param("A", 1.0);
    s.v1 = sample(
        g, [&](double, double y, double) { return A * std::sin(two_pi * y); },
        Parity::Even);
    return s;
  } else if (name == "tg2d") {
    const double A = param("A", 1.0);
    s.v1 = sample(
        g,
        [&](double x, double y, double) {
          return A * std::sin(two_pi * x) * std::cos(two_pi * y);
        },
        Parity::Even);
    s.v2 = sample(
        g,
        [&](double x, double y, double) {
          return -A * std::cos(two_pi * x) * std::sin(two_pi * y);
        },
        Parity::Even);
    return s;
  } else if (name == "smooth3d") {
    const double A = param("A", 0.5);
    const double h = g.h;
    s.v1 = sample(
        g,
        [&](double x, double y, double z) {
          return A * (std::sin(two_pi * x) * std::cos(M_PI * z / h) +
                      0.5 * std::cos(two_pi * y) * std::cos(2.0 * M_PI * z / h) +
                      0.25 * std::sin(two_pi * (x + y)));
        },
        Parity::Even);
    s.v2 = sample(
        g,
        [&](double x, double y, double z) {
          return A * (0.6 * std::cos(two_pi * x) * std::cos(M_PI * z / h) +
                      0.4 * std::sin(two_pi * y) * std::cos(2.0 * M_PI * z / h) +
                      0.2 * std::cos(two_pi * (x - y)));
        },
        Parity::Even);
    s.T = sample(
        g,
        [&](double x, double y, double z) {
          return A * ((0.8 * std::sin(two_pi * x) + 0.3 * std::cos(two_pi * y)) *
                          std::sin(M_PI * z / h) +
                      0.2 * std::cos(two_pi * (x + y)) * std::sin(2.0 * M_PI * z / h));
        },
        Parity::Odd);
    return s;
  }
  throw std::invalid_argument("unknown initial data name: '" + name + "'");
}

State preprocess(const State& st) {
  Engine eng(SolverConfig{st.v1.grid, {}, {}, {}, 0.01, 1e12});
  SpecState s{forward(st.v1), forward(st.v2), forward(st.T), st.time};
  project_fields(s);
  State out = eng.to_real(s);
  return out;
}

std::pair<RealField, RealField> rhs_momentum(const State& st, const PhysicsParams& p) {
  SpecState s{forward(st.v1), forward(st.v2), forward(st.T), st.time};
  const Tendency N = rhs_spec(s, st.v1.grid, p, nullptr);
  return {inverse(N.v1), inverse(N.v2)};
}

RealField rhs_temperature(const State& st, const PhysicsParams& p) {
  SpecState s{forward(st.v1), forward(st.v2), forward(st.T), st.time};
  const Tendency N = rhs_spec(s, st.v1.grid, p, nullptr);
  return inverse(N.T);
}

State step(const State& st, double dt, const SolverConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  Engine eng(cfg);
  const SpecState s = eng.to_spec(st);
  Carry carry;
  StepInfo info;
  return eng.to_real(eng.advance(s, dt, carry, info));
}

RunResult run(const SolverConfig& cfg, const State& initial, const RunHooks& hooks) {
  if (!(cfg.time.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  if (!(cfg.cadence > 0.0)) throw std::invalid_argument("run: cadence must be positive");
  if (!(cfg.time.t_end >= initial.time))
    throw std::invalid_argument("run: t_end is before the initial time");

  Engine eng(cfg);
  SpecState s = eng.to_spec(initial);
  SpecState prev = s;

  RunResult result;
  Carry carry;
  ResidualMax res;
  StepInfo info;
  int step_idx = 0;

  auto track_residuals = [&](const State& rs) {
    res.parity = std::max({res.parity, parity_residual(rs.v1), parity_residual(rs.v2),
                           parity_residual(rs.T)});
    const double bt = barotropic_residual(rs.v1, rs.v2);
    res.barotropic = std::max(res.barotropic, bt);
    res.w_top = std::max({res.w_top, bt, info.w_bottom});
  };

  auto record = [&](const State& rs) {
    const DiagnosticsRecord row = eng.make_row(s, prev, step_idx, carry, res, info);
    result.diagnostics.push_back(row);
    if (hooks.on_record) hooks.on_record(rs, row);
    res.reset();
  };

  {
    const State rs = eng.to_real(s);
    track_residuals(rs);
    record(rs);
  }

  const double t_end = cfg.time.t_end;
  double next_record = initial.time + cfg.cadence;
  result.status = "complete";
  while (s.time < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    double dt_request = std::min(cfg.time.dt, t_end - s.time);
    prev = s;
    s = eng.advance(s, dt_request, carry, info);
    ++step_idx;

    const double l2 = std::sqrt(spectral_l2sq(s.v1) + spectral_l2sq(s.v2)) +
                      std::sqrt(spectral_l2sq(s.T));
    if (!std::isfinite(l2) || l2 > cfg.blowup_threshold) {
      result.status = "diverged";
      result.blowup_time = s.time;
      break;
    }

    const State rs = eng.to_real(s);
    track_residuals(rs);
    const bool at_end = s.time >= t_end - 0.25 * info.dt_used;
    if (at_end || s.time >= next_record - 0.25 * info.dt_used) {
      record(rs);
      while (next_record <= s.time + 0.25 * info.dt_used) next_record += cfg.cadence;
    }
  }
  result.steps = step_idx;
  result.final_state = eng.to_real(s);
  return result;
}

double h1_distance(const State& a, const State& b) {
  const Grid& g = a.v1.grid;
  if (!g.same_shape(b.v1.grid)) throw std::invalid_argument("h1_distance: grid mismatch");
  auto diff_spec = [&](const RealField& fa, const RealField& fb) {
    RealField d(g);
    for (std::size_t n = 0; n < d.data.size(); ++n) d.data[n] = fa.data[n] - fb.data[n];
    return forward(d);
  };
  const SpectralField d1 = diff_spec(a.v1, b.v1), d2 = diff_spec(a.v2, b.v2),
                      dT = diff_spec(a.T, b.T);
  double sum = 0.0;
  const int nxc = g.nx / 2 + 1;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz) {
    const double kz2 = g.kz[iz] * g.kz[iz];
    for (int iy = 0; iy < g.ny; ++iy) {
      const double ky2 = g.ky[iy] * g.ky[iy];
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        const double w = (ix == 0 || ix == g.nx / 2) ? 1.0 : 2.0;
        const double k2 = g.kx[ix] * g.kx[ix] + ky2 + kz2;
        sum += w * (1.0 + k2) *
               (std::norm(d1.data[idx]) + std::norm(d2.data[idx]) + std::norm(dT.data[idx]));
      }
    }
  }
  return std::sqrt(sum * g.volume());
}

std::vector<SweepRow> eps_sweep(const SolverConfig& base, const std::vector<double>& eps_list,
                                const State& initial) {
  if (eps_list.size() < 2)
    throw std::invalid_argument("eps_sweep: need at least two eps values");
  std::vector<SweepRow> rows;
  std::vector<State> prev_snaps;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    SolverConfig cfg = base;
    cfg.physics.eps = eps_list[i];
    std::vector<State> snaps;
    RunHooks hooks;
    hooks.on_record = [&](const State& st, const DiagnosticsRecord&) { snaps.push_back(st); };
    const RunResult res = run(cfg, initial, hooks);
    if (res.status != "complete")
      throw std::runtime_error("eps_sweep: run diverged at eps = " +
                               std::to_string(eps_list[i]));
    if (i > 0) {
      const std::size_t m = std::min(prev_snaps.size(), snaps.size());
      double dist = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        dist = std::max(dist, h1_distance(prev_snaps[j], snaps[j]));
      rows.push_back({eps_list[i - 1], eps_list[i], dist});
    }
    prev_snaps = std::move(snaps);
  }
  return rows;
}

double dzv_residual(const State& prev, const State& next, double dt, const PhysicsParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("dzv_residual: dt must be positive");
  const Grid& g = prev.v1.grid;
  if (!g.same_shape(next.v1.grid)) throw std::invalid_argument("dzv_residual: grid mismatch");

  auto mid_spec = [&](const RealField& fa, const RealField& fb) {
    SpectralField sa = forward(fa);
    const SpectralField sb = forward(fb);
    for (std::size_t n = 0; n < sa.size(); ++n)
      sa.data[n] = 0.5 * (sa.data[n] + sb.data[n]);
    return sa;
  };
  const SpectralField v1m = mid_spec(prev.v1, next.v1);
  const SpectralField v2m = mid_spec(prev.v2, next.v2);
  const SpectralField Tm = mid_spec(prev.T, next.T);
  const SpectralField u1m = deriv_z(v1m), u2m = deriv_z(v2m);

  SpectralField divh = deriv_x(v1m);
  {
    const SpectralField dy2 = deriv_y(v2m);
    for (std::size_t n = 0; n < divh.size(); ++n) divh.data[n] += dy2.data[n];
  }
  SpectralField what = z_antiderivative(divh);
  for (auto& c : what.data) c = -c;

  const RealField rv1 = inverse(v1m), rv2 = inverse(v2m), rw = inverse(what);
  const RealField ru1 = inverse(u1m), ru2 = inverse(u2m), rdiv = inverse(divh);
  const RealField rxu1 = inverse(deriv_x(u1m)), ryu1 = inverse(deriv_y(u1m)),
                  rzu1 = inverse(deriv_z(u1m));
  const RealField rxu2 = inverse(deriv_x(u2m)), ryu2 = inverse(deriv_y(u2m)),
                  rzu2 = inverse(deriv_z(u2m));
  const RealField rxv1 = inverse(deriv_x(v1m)), ryv1 = inverse(deriv_y(v1m));
  const RealField rxv2 = inverse(deriv_x(v2m)), ryv2 = inverse(deriv_y(v2m));

  RealField q1(g), q2(g);
  for (std::size_t n = 0; n < q1.data.size(); ++n) {
    q1.data[n] = rv1.data[n] * rxu1.data[n] + rv2.data[n] * ryu1.data[n] +
                 rw.data[n] * rzu1.data[n] + ru1.data[n] * rxv1.data[n] +
                 ru2.data[n] * ryv1.data[n] - rdiv.data[n] * ru1.data[n];
    q2.data[n] = rv1.data[n] * rxu2.data[n] + rv2.data[n] * ryu2.data[n] +
                 rw.data[n] * rzu2.data[n] + ru1.data[n] * rxv2.data[n] +
                 ru2.data[n] * ryv2.data[n] - rdiv.data[n] * ru2.data[n];
  }
  SpectralField Q1 = forward(q1), Q2 = forward(q2);
  dealias(Q1);
  dealias(Q2);

  const SpectralField u1p = deriv_z(forward(prev.v1)), u1n = deriv_z(forward(next.v1));
  const SpectralField u2p = deriv_z(forward(prev.v2)), u2n = deriv_z(forward(next.v2));
  const SpectralField Tx = deriv_x(Tm), Ty = deriv_y(Tm);

  SpectralField R1(g), R2(g);
  const int nxc = g.nx / 2 + 1;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz) {
    const double kz2 = g.kz[iz] * g.kz[iz];
    for (int iy = 0; iy < g.ny; ++iy) {
      const double ky2 = g.ky[iy] * g.ky[iy];
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        const double kh2 = g.kx[ix] * g.kx[ix] + ky2;
        const double visc = kh2 + p.eps * kz2;
        R1.data[idx] = (u1n.data[idx] - u1p.data[idx]) / dt + Q1.data[idx] +
                       visc * u1m.data[idx] - p.f0 * u2m.data[idx] - Tx.data[idx];
        R2.data[idx] = (u2n.data[idx] - u2p.data[idx]) / dt + Q2.data[idx] +
                       visc * u2m.data[idx] + p.f0 * u1m.data[idx] - Ty.data[idx];
      }
    }
  }
  return std::sqrt(spectral_l2sq(R1) + spectral_l2sq(R2));
}

}  // namespace anisopede
