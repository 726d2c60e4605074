#include "anisopede/gronwall.hpp"

#include "anisopede/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisopede {

double Poly::eval(double t) const {
  double v = 0.0;
  for (std::size_t i = coef.size(); i-- > 0;) v = v * t + coef[i];
  return v;
}

double Poly::integral(double t) const {
  double v = 0.0;
  for (std::size_t i = coef.size(); i-- > 0;) v = (v + coef[i] / double(i + 1)) * t;
  return v;
}

double Barrier::eval(double t, double A) const {
  const double s = std::sin(omega * t);
  return M_E + gamma * std::max(A, 0.0) * (1.0 + beta * s * s);
}

double gronwall_q(const GronwallInstance& inst, double t) {
  return std::exp(inst.K * t) *
         (std::log(inst.A0 + 1.0) + (2.0 * inst.K * inst.K + 1.0) * t +
          inst.f.integral(t));
}

double gronwall_bound(const GronwallInstance& inst, double t) {
  const double q = gronwall_q(inst, t);
  return std::exp(q) * (1.0 + 2.0 * q);
}

namespace {

struct Pair {
  double A, I;
};

// One RK4 step of (A, int B) with the clamp applied after the step.
Pair rk4_step(const GronwallInstance& inst, double t, Pair y, double dt, bool* clipped) {
  auto deriv = [&](double s, const Pair& u) {
    const double b = inst.B.eval(s, u.A);
    return Pair{inst.K * std::max(u.A, 0.0) * std::log(b) + inst.f.eval(s) - b, b};
  };
  const Pair k1 = deriv(t, y);
  const Pair k2 = deriv(t + 0.5 * dt, {y.A + 0.5 * dt * k1.A, y.I + 0.5 * dt * k1.I});
  const Pair k3 = deriv(t + 0.5 * dt, {y.A + 0.5 * dt * k2.A, y.I + 0.5 * dt * k2.I});
  const Pair k4 = deriv(t + dt, {y.A + dt * k3.A, y.I + dt * k3.I});
  Pair out{y.A + dt / 6.0 * (k1.A + 2.0 * k2.A + 2.0 * k3.A + k4.A),
           y.I + dt / 6.0 * (k1.I + 2.0 * k2.I + 2.0 * k3.I + k4.I)};
  if (out.A < 0.0) {
    out.A = 0.0;
    *clipped = true;
  }
  return out;
}

// Values of (A, int B) at the n_out + 1 output times with m steps per
// output interval.
std::vector<Pair> integrate(const GronwallInstance& inst, int n_out, int m,
                            bool* clipped) {
  std::vector<Pair> out;
  out.reserve(std::size_t(n_out) + 1);
  Pair y{inst.A0, 0.0};
  out.push_back(y);
  const double dT = inst.horizon / n_out;
  for (int j = 0; j < n_out; ++j) {
    const double t0 = j * dT;
    const double dt = dT / m;
    for (int s = 0; s < m; ++s) y = rk4_step(inst, t0 + s * dt, y, dt, clipped);
    out.push_back(y);
  }
  return out;
}

}  // namespace

GronwallCheck check_gronwall(const GronwallInstance& inst, int n_out, double tol) {
  if (n_out < 1) throw std::invalid_argument("check_gronwall: n_out < 1");
  if (!(inst.horizon > 0.0)) throw std::invalid_argument("check_gronwall: bad horizon");
  if (!(inst.K >= 1.0)) throw std::invalid_argument("check_gronwall: need K >= 1");
  if (inst.A0 < 0.0) throw std::invalid_argument("check_gronwall: need A0 >= 0");

  GronwallCheck rep;
  std::vector<Pair> coarse = integrate(inst, n_out, 4, &rep.clipped);
  for (int m = 8; m <= (1 << 20); m *= 2) {
    bool clipped = false;
    std::vector<Pair> fine = integrate(inst, n_out, m, &clipped);
    double err = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i)
      err = std::max({err, std::abs(fine[i].A - coarse[i].A),
                      std::abs(fine[i].I - coarse[i].I)});
    coarse = std::move(fine);
    rep.clipped = clipped;
    if (err < tol) {
      rep.converged = true;
      break;
    }
  }

  const double dT = inst.horizon / n_out;
  for (int j = 0; j <= n_out; ++j) {
    const double t = j * dT;
    const double bound = gronwall_bound(inst, t);
    const double val = coarse[std::size_t(j)].A + coarse[std::size_t(j)].I;
    rep.t.push_back(t);
    rep.A.push_back(coarse[std::size_t(j)].A);
    rep.intB.push_back(coarse[std::size_t(j)].I);
    rep.bound.push_back(bound);
    if (std::isfinite(bound)) {
      rep.max_ratio = std::max(rep.max_ratio, val / bound);
      if (val > bound) ++rep.violations;
    }
  }
  return rep;
}

GronwallInstance gronwall_instance(std::uint64_t seed, std::uint64_t index) {
  GronwallInstance inst;
  if (index == 0) {
    inst.K = 1.0;
    inst.A0 = M_E - 1.0;
    return inst;
  }
  Rng rng(mix_seed(seed, index));
  inst.K = 1.0 + 0.6 * rng.uniform();
  inst.A0 = 2.0 * rng.uniform();
  inst.B.gamma = 2.0 * rng.uniform();
  inst.B.beta = rng.uniform();
  inst.B.omega = 2.0 * M_PI * rng.uniform();
  const double a0 = rng.uniform(-1.0, 1.0);
  const double a1 = rng.uniform(-1.0, 1.0);
  const double a2 = rng.uniform(-1.0, 1.0);
  // f = e + (a0 + a1 t + a2 t^2)^2 expanded, so f >= e pointwise.
  inst.f.coef = {M_E + a0 * a0, 2.0 * a0 * a1, a1 * a1 + 2.0 * a0 * a2, 2.0 * a1 * a2,
                 a2 * a2};
  return inst;
}

}  // namespace anisopede
