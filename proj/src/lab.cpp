#include "anisopede/lab.hpp"

#include "anisopede/operators.hpp"
#include "anisopede/rng.hpp"
#include "anisopede/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace anisopede {

namespace {

using Cplx = std::complex<double>;

std::vector<Cplx> phase_table(int n, double span, double freq) {
  // span is the coordinate period (1 or 2h); freq the angular wavenumber.
  std::vector<Cplx> out(n);
  for (int i = 0; i < n; ++i) {
    const double arg = freq * span * double(i) / double(n);
    out[i] = Cplx(std::cos(arg), std::sin(arg));
  }
  return out;
}

void add_trig_modes(RealField& f, const SampleSpec& sp, Rng& rng) {
  const Grid& g = f.grid;
  const int cutoff = std::min({g.cutoff_x, g.cutoff_y, g.cutoff_z});
  if (sp.degree < 1 || sp.degree > cutoff)
    throw std::invalid_argument("sample_field: degree outside the dealiased band");
  struct Mode {
    int jx, jy, jz;
    double amp, phase;
  };
  std::vector<Mode> modes(std::size_t(std::max(1, sp.n_modes)));
  for (auto& m : modes) {
    m.jx = rng.uniform_int(-sp.degree, sp.degree);
    m.jy = rng.uniform_int(-sp.degree, sp.degree);
    if (sp.parity == Parity::Odd)
      m.jz = rng.uniform_int(1, sp.degree);
    else if (sp.parity == Parity::Even)
      m.jz = rng.uniform_int(0, sp.degree);
    else
      m.jz = rng.uniform_int(-sp.degree, sp.degree);
    m.amp = rng.uniform(sp.amp_lo, sp.amp_hi);
    m.phase = rng.uniform(0.0, 2.0 * M_PI);
  }
  for (const Mode& m : modes) {
    const auto ex = phase_table(g.nx, 1.0, 2.0 * M_PI * m.jx);
    const auto ey = phase_table(g.ny, 1.0, 2.0 * M_PI * m.jy);
    const Cplx rot(std::cos(m.phase), std::sin(m.phase));
    if (sp.parity == Parity::None) {
      std::vector<Cplx> ez(g.nz);
      for (int k = 0; k < g.nz; ++k) {
        const double arg = (M_PI * m.jz / g.h) * g.z(k);
        ez[k] = Cplx(std::cos(arg), std::sin(arg));
      }
      for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j) {
          const Cplx pyz = rot * ey[j] * ez[k];
          for (int i = 0; i < g.nx; ++i)
            f(i, j, k) += m.amp * (pyz * ex[i]).real();
        }
    } else {
      std::vector<double> zq(g.nz);
      for (int k = 0; k < g.nz; ++k) {
        const double arg = (M_PI * m.jz / g.h) * g.z(k);
        zq[k] = sp.parity == Parity::Even ? std::cos(arg) : std::sin(arg);
      }
      for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j) {
          const Cplx py = rot * ey[j];
          const double az = m.amp * zq[k];
          for (int i = 0; i < g.nx; ++i) f(i, j, k) += az * (py * ex[i]).real();
        }
    }
  }
}

double periodized_gauss(double d, double sigma, double period) {
  double sum = 0.0;
  for (int m = -2; m <= 2; ++m) {
    const double u = (d + m * period) / sigma;
    sum += std::exp(-0.5 * u * u);
  }
  return sum;
}

void add_gauss_bumps(RealField& f, const SampleSpec& sp, Rng& rng) {
  const Grid& g = f.grid;
  if (sp.width_lo < 2.0 / g.nx || sp.width_lo < 2.0 / g.ny ||
      sp.width_lo < 2.0 / g.nz)
    throw std::invalid_argument("sample_field: bump width under two grid cells");
  for (int b = 0; b < std::max(1, sp.bumps); ++b) {
    const double cx = rng.uniform(), cy = rng.uniform();
    const double cz = rng.uniform(-g.h, g.h);
    const double sx = rng.uniform(sp.width_lo, sp.width_hi);
    const double sy = rng.uniform(sp.width_lo, sp.width_hi);
    const double sz = 2.0 * g.h * rng.uniform(sp.width_lo, sp.width_hi);
    double amp = rng.uniform(sp.amp_lo, sp.amp_hi);
    if (rng.uniform() < 0.5) amp = -amp;
    std::vector<double> gx(g.nx), gy(g.ny), gz(g.nz);
    for (int i = 0; i < g.nx; ++i) gx[i] = periodized_gauss(g.x(i) - cx, sx, 1.0);
    for (int j = 0; j < g.ny; ++j) gy[j] = periodized_gauss(g.y(j) - cy, sy, 1.0);
    for (int k = 0; k < g.nz; ++k)
      gz[k] = periodized_gauss(g.z(k) - cz, sz, 2.0 * g.h);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j) {
        const double ayz = amp * gy[j] * gz[k];
        for (int i = 0; i < g.nx; ++i) f(i, j, k) += ayz * gx[i];
      }
  }
}

void add_boundary_layers(RealField& f, const SampleSpec& sp, Rng& rng) {
  const Grid& g = f.grid;
  for (int m = 0; m < 3; ++m) {
    const int jx = rng.uniform_int(-2, 2), jy = rng.uniform_int(-2, 2);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double zphase = rng.uniform(0.0, 2.0 * M_PI);
    const double sharp = sp.sharpness * (0.5 + rng.uniform());
    const double amp = rng.uniform(sp.amp_lo, sp.amp_hi);
    const auto ex = phase_table(g.nx, 1.0, 2.0 * M_PI * jx);
    const auto ey = phase_table(g.ny, 1.0, 2.0 * M_PI * jy);
    const Cplx rot(std::cos(phase), std::sin(phase));
    std::vector<double> tz(g.nz);
    for (int k = 0; k < g.nz; ++k)
      tz[k] = std::tanh(sharp * std::sin(M_PI * g.z(k) / g.h + zphase));
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j) {
        const Cplx py = rot * ey[j];
        const double az = amp * tz[k];
        for (int i = 0; i < g.nx; ++i) f(i, j, k) += az * (py * ex[i]).real();
      }
  }
}

RealField dx_of(const RealField& f) { return inverse(deriv_x(forward(f))); }
RealField dy_of(const RealField& f) { return inverse(deriv_y(forward(f))); }
RealField dz_of(const RealField& f) { return inverse(deriv_z(forward(f))); }

double grad_h_l2(const RealField& f, const std::optional<Disk>& region = {}) {
  const RealField fx = dx_of(f), fy = dy_of(f);
  return lq_norm(Magnitude(fx, fy), 2.0, region);
}

// Norm of g restricted to the cylinder above `region` (full box if empty).
double l2_on(const RealField& f, const std::optional<Disk>& region = {}) {
  return lq_norm(f, 2.0, region);
}

// Product of column integrals: int over the cross-section (or a disk) of
// colA(x,y) * colB(x,y), where colA = int |phi|^p dz and colB is either
// int |rho psi| dz or int |rho|^p dz.
double column_product(const RealField& phi, const RealField& rho,
                      const RealField* psi, double p,
                      const std::optional<Disk>& region) {
  const Grid& g = phi.grid;
  const double dz = 2.0 * g.h / g.nz;
  const double dA = 1.0 / (double(g.nx) * g.ny);
  double sum = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      if (region && !region->contains(g.x(i), y)) continue;
      double ca = 0.0, cb = 0.0;
      for (int k = 0; k < g.nz; ++k) {
        const double a = std::abs(phi(i, j, k));
        ca += p == 2.0 ? a * a : a;
        if (psi)
          cb += std::abs(rho(i, j, k) * (*psi)(i, j, k));
        else {
          const double b = std::abs(rho(i, j, k));
          cb += p == 2.0 ? b * b : b;
        }
      }
      sum += (ca * dz) * (cb * dz);
    }
  }
  return sum * dA;
}

double lambda_factor(double l2, double gh, double L) {
  return std::sqrt(l2) * std::sqrt(l2 / L + gh);
}

LhsRhs ladyzhenskaya_impl(const RealField& phi, const RealField& rho,
                          const RealField& psi, LadVariant variant, double L,
                          const std::optional<Disk>& region) {
  const Grid& g = phi.grid;
  if (!g.same_shape(rho.grid) || !g.same_shape(psi.grid))
    throw std::invalid_argument("check_ladyzhenskaya: grid mismatch");
  if (!(L > 0.0)) throw std::invalid_argument("check_ladyzhenskaya: L must be positive");
  LhsRhs out;
  const double h = g.h;
  switch (variant) {
    case LadVariant::MinForm: {
      out.lhs = column_product(phi, rho, &psi, 1.0, region);
      const double l2p = l2_on(phi, region), l2r = l2_on(rho, region),
                   l2s = l2_on(psi, region);
      const double gp = grad_h_l2(phi, region), gr = grad_h_l2(rho, region),
                   gs = grad_h_l2(psi, region);
      const double a = l2p * lambda_factor(l2r, gr, L) * lambda_factor(l2s, gs, L);
      const double b = lambda_factor(l2p, gp, L) * lambda_factor(l2r, gr, L) * l2s;
      out.rhs = std::sqrt(h) * std::min(a, b);
      break;
    }
    case LadVariant::L6Form: {
      out.lhs = column_product(phi, rho, &psi, 1.0, region);
      const double l6p = lq_norm(phi, 6.0, region);
      const double l2r = l2_on(rho, region), gr = grad_h_l2(rho, region);
      const double l2s = l2_on(psi, region);
      out.rhs = std::pow(h, 5.0 / 6.0) * l6p * std::pow(l2r, 2.0 / 3.0) *
                std::cbrt(l2r / L + gr) * l2s;
      break;
    }
    case LadVariant::SquareForm: {
      out.lhs = column_product(phi, rho, nullptr, 2.0, region);
      const double l2p = l2_on(phi, region), l2r = l2_on(rho, region);
      const double gp = grad_h_l2(phi, region), gr = grad_h_l2(rho, region);
      out.rhs = l2p * (l2p / L + gp) * l2r * (l2r / L + gr);
      break;
    }
  }
  return out;
}

}  // namespace

SampleFamily sample_family_from_string(const std::string& name) {
  if (name == "trig-poly") return SampleFamily::TrigPoly;
  if (name == "gaussian-bump") return SampleFamily::GaussianBump;
  if (name == "boundary-layer") return SampleFamily::BoundaryLayer;
  throw std::invalid_argument("unknown sample family: '" + name + "'");
}

RealField sample_field(const Grid& g, const SampleSpec& spec, std::uint64_t seed) {
  if (!(spec.amp_lo <= spec.amp_hi))
    throw std::invalid_argument("sample_field: bad amplitude range");
  Rng rng(seed);
  RealField f(g, spec.parity);
  switch (spec.family) {
    case SampleFamily::TrigPoly:
      add_trig_modes(f, spec, rng);
      break;
    case SampleFamily::GaussianBump:
      add_gauss_bumps(f, spec, rng);
      break;
    case SampleFamily::BoundaryLayer:
      add_boundary_layers(f, spec, rng);
      break;
  }
  if (spec.parity != Parity::None) f = enforce_parity(f);
  return f;
}

double LhsRhs::ratio() const {
  if (rhs > 0.0) return lhs / rhs;
  return lhs <= 0.0 ? 0.0 : kInf;
}

LhsRhs check_ladyzhenskaya(const RealField& phi, const RealField& rho,
                           const RealField& psi, LadVariant variant, double L) {
  return ladyzhenskaya_impl(phi, rho, psi, variant, L, {});
}

LhsRhs check_disk_ladyzhenskaya(const RealField& phi, const RealField& rho,
                                const RealField& psi, const Disk& disk,
                                LadVariant variant) {
  if (!(disk.r > 0.0) || disk.r > 0.5)
    throw std::invalid_argument("check_disk_ladyzhenskaya: radius outside (0, 1/2]");
  return ladyzhenskaya_impl(phi, rho, psi, variant, disk.r, disk);
}

LhsRhs check_sup_z_embedding(const RealField& f, SupZKind kind,
                             const std::optional<Disk>& disk, double L) {
  LhsRhs out;
  const double h = f.grid.h;
  switch (kind) {
    case SupZKind::L2: {
      const double l2 = l2_on(f);
      const double dz2 = lq_norm(dz_of(f), 2.0);
      out.lhs = sup_z_norm(f, 2.0);
      out.rhs = std::sqrt(l2) * std::sqrt(l2 / (2.0 * h) + 2.0 * dz2);
      break;
    }
    case SupZKind::L4: {
      const double l2 = l2_on(f);
      const double dz2 = lq_norm(dz_of(f), 2.0);
      const double gh = grad_h_l2(f);
      out.lhs = sup_z_norm(f, 4.0);
      out.rhs = std::sqrt(l2 / h + dz2) * std::sqrt(l2 / L + gh);
      break;
    }
    case SupZKind::L4Disk: {
      if (!disk) throw std::invalid_argument("check_sup_z_embedding: disk required");
      if (!(disk->r > 0.0) || disk->r > 0.5)
        throw std::invalid_argument("check_sup_z_embedding: radius outside (0, 1/2]");
      const double l2 = l2_on(f, disk);
      const double dz2 = lq_norm(dz_of(f), 2.0, disk);
      const double gh = grad_h_l2(f, disk);
      out.lhs = sup_z_norm(f, 4.0, disk);
      out.rhs = std::sqrt(l2 / disk->r + gh) * std::sqrt(l2 / h + dz2);
      break;
    }
  }
  return out;
}

LhsRhs check_log_sobolev(const RealField& f, const LogSobolevParams& prm) {
  const double ps[3] = {prm.p1, prm.p2, prm.p3};
  double hsum = 0.0;
  for (double p : ps) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("check_log_sobolev: exponents must lie in (1, inf)");
    hsum += 1.0 / p;
  }
  if (!(hsum < 1.0))
    throw std::invalid_argument("check_log_sobolev: need 1/p1 + 1/p2 + 1/p3 < 1");
  if (!(prm.lambda > 0.0)) throw std::invalid_argument("check_log_sobolev: lambda <= 0");
  if (prm.qmax < 2) throw std::invalid_argument("check_log_sobolev: qmax < 2");

  LhsRhs out;
  out.lhs = lq_norm(f, kInf);
  const double ladder = sup_lq_over_power(Magnitude(f), prm.lambda, prm.qmax);
  const RealField fx = dx_of(f), fy = dy_of(f), fz = dz_of(f);
  const RealField* ds[3] = {&fx, &fy, &fz};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += lq_norm(f, ps[i]) + lq_norm(*ds[i], ps[i]);
  out.rhs = std::max(1.0, ladder) * std::pow(std::log(sum + M_E), prm.lambda);
  return out;
}

FitResult fit_constant(const std::vector<double>& ratios, int bins) {
  if (ratios.empty()) throw std::invalid_argument("fit_constant: empty input");
  if (bins < 1) throw std::invalid_argument("fit_constant: bins < 1");
  FitResult out;
  std::vector<double> positive;
  for (double r : ratios) {
    if (!std::isfinite(r)) throw std::invalid_argument("fit_constant: non-finite ratio");
    out.c_star = std::max(out.c_star, r);
    if (r > 0.0) positive.push_back(r);
  }
  if (positive.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(positive.begin(), positive.end());
  const double lo = std::log(*lo_it), hi = std::log(*hi_it);
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  out.bin_edges.resize(std::size_t(bins) + 1);
  for (int b = 0; b <= bins; ++b) out.bin_edges[b] = std::exp(lo + b * width);
  out.counts.assign(std::size_t(bins), 0);
  for (double r : positive) {
    int b = int((std::log(r) - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++out.counts[std::size_t(b)];
  }
  return out;
}

LemmaId lemma_from_string(const std::string& id) {
  if (id == "lad-min") return LemmaId::LadMin;
  if (id == "lad-l6") return LemmaId::LadL6;
  if (id == "lad-sq") return LemmaId::LadSquare;
  if (id == "disk") return LemmaId::LadDisk;
  if (id == "sup-z-l2") return LemmaId::SupZL2;
  if (id == "sup-z-l4") return LemmaId::SupZL4;
  if (id == "sup-z-l4-disk") return LemmaId::SupZL4Disk;
  if (id == "log-sobolev") return LemmaId::LogSobolev;
  throw std::invalid_argument("unknown lemma id: '" + id + "'");
}

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::LadMin: return "lad-min";
    case LemmaId::LadL6: return "lad-l6";
    case LemmaId::LadSquare: return "lad-sq";
    case LemmaId::LadDisk: return "disk";
    case LemmaId::SupZL2: return "sup-z-l2";
    case LemmaId::SupZL4: return "sup-z-l4";
    case LemmaId::SupZL4Disk: return "sup-z-l4-disk";
    case LemmaId::LogSobolev: return "log-sobolev";
  }
  return "?";
}

namespace {

Disk draw_disk(Rng& rng) {
  Disk d;
  d.cx = rng.uniform();
  d.cy = rng.uniform();
  d.r = rng.uniform(0.15, 0.45);
  return d;
}

SampleRow one_sample(const Grid& g, LemmaId id, const EnsembleOptions& opt,
                     std::uint64_t index) {
  auto field = [&](std::uint64_t slot) {
    return sample_field(g, opt.spec, mix_seed(opt.seed, index, slot));
  };
  LhsRhs r;
  switch (id) {
    case LemmaId::LadMin:
      r = check_ladyzhenskaya(field(1), field(2), field(3), LadVariant::MinForm);
      break;
    case LemmaId::LadL6:
      r = check_ladyzhenskaya(field(1), field(2), field(3), LadVariant::L6Form);
      break;
    case LemmaId::LadSquare:
      r = check_ladyzhenskaya(field(1), field(2), field(3), LadVariant::SquareForm);
      break;
    case LemmaId::LadDisk: {
      Rng rng(mix_seed(opt.seed, index, 4));
      r = check_disk_ladyzhenskaya(field(1), field(2), field(3), draw_disk(rng),
                                   LadVariant::MinForm);
      break;
    }
    case LemmaId::SupZL2:
      r = check_sup_z_embedding(field(1), SupZKind::L2);
      break;
    case LemmaId::SupZL4:
      r = check_sup_z_embedding(field(1), SupZKind::L4);
      break;
    case LemmaId::SupZL4Disk: {
      Rng rng(mix_seed(opt.seed, index, 4));
      r = check_sup_z_embedding(field(1), SupZKind::L4Disk, draw_disk(rng));
      break;
    }
    case LemmaId::LogSobolev:
      r = check_log_sobolev(field(1), opt.logsob);
      break;
  }
  return {r.lhs, r.rhs, r.ratio()};
}

}  // namespace

EnsembleReport run_ensemble(const Grid& g, LemmaId id, const EnsembleOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("run_ensemble: samples < 1");
  EnsembleReport rep;
  rep.id = id;
  rep.rows.resize(std::size_t(opt.samples));

  const int want = opt.threads > 0 ? opt.threads : default_thread_count();
  const int nthreads = std::max(1, std::min(want, opt.samples));
  std::atomic<int> cursor{0};
  std::mutex err_mutex;
  std::string first_error;

  auto work = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= opt.samples) return;
      try {
        rep.rows[std::size_t(i)] = one_sample(g, id, opt, std::uint64_t(i));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
        return;
      }
    }
  };

  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw std::runtime_error(first_error);

  std::vector<double> ratios;
  ratios.reserve(rep.rows.size());
  for (const SampleRow& row : rep.rows) ratios.push_back(row.ratio);
  rep.fit = fit_constant(ratios);
  if (id == LemmaId::SupZL2)
    for (double r : ratios)
      if (r > 1.0) ++rep.violations;
  return rep;
}

void write_ensemble_report(const std::string& path, const EnsembleReport& rep) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "sample,lhs,rhs,ratio\n";
  char buf[256];
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const SampleRow& r = rep.rows[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, r.lhs, r.rhs, r.ratio);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "C_star=%.17g\n", rep.fit.c_star);
  out << buf;
  std::snprintf(buf, sizeof buf, "violations=%d\n", rep.violations);
  out << buf;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace anisopede
