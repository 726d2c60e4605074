#include "anisopede/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisopede {

bool Disk::contains(double x, double y) const {
  double dx = x - cx;
  dx -= std::round(dx);
  double dy = y - cy;
  dy -= std::round(dy);
  return dx * dx + dy * dy <= r * r;
}

namespace {

void require_same_grid(const RealField& a, const RealField& b) {
  if (!a.grid.same_shape(b.grid)) throw std::invalid_argument("fields on different grids");
}

// Columns (x,y) inside the region, as flat plane offsets; all columns if
// region is empty.
std::vector<std::size_t> region_columns(const Grid& g, const std::optional<Disk>& region) {
  std::vector<std::size_t> cols;
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  cols.reserve(plane);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!region || region->contains(g.x(i), g.y(j)))
        cols.push_back(std::size_t(i) + std::size_t(g.nx) * j);
  return cols;
}

}  // namespace

Magnitude::Magnitude(const RealField& a) : grid_(&a.grid), a_(&a) {}

Magnitude::Magnitude(const RealField& a, const RealField& b) : grid_(&a.grid), a_(&a), b_(&b) {
  require_same_grid(a, b);
}

Magnitude::Magnitude(const RealField& a, const RealField& b, const RealField& c)
    : grid_(&a.grid), a_(&a), b_(&b), c_(&c) {
  require_same_grid(a, b);
  require_same_grid(a, c);
}

double Magnitude::operator[](std::size_t n) const {
  if (!b_) return std::abs(a_->data[n]);
  const double x = a_->data[n], y = b_->data[n], z = c_ ? c_->data[n] : 0.0;
  return std::sqrt(x * x + y * y + z * z);
}

std::size_t Magnitude::size() const { return a_->data.size(); }

namespace {

// Direct power sum; adequate for moderate q.
double lq_direct(const Magnitude& f, double q, const std::vector<std::size_t>& cols,
                 std::size_t plane, int nz, double dv) {
  double sum = 0.0;
  for (int k = 0; k < nz; ++k)
    for (std::size_t c : cols) sum += std::pow(f[plane * k + c], q);
  return std::pow(sum * dv, 1.0 / q);
}

// Log-space power sum, exactly homogeneous under scaling of f.
double lq_logspace(const Magnitude& f, double q, const std::vector<std::size_t>& cols,
                   std::size_t plane, int nz, double dv) {
  double fmax = 0.0;
  for (int k = 0; k < nz; ++k)
    for (std::size_t c : cols) fmax = std::max(fmax, f[plane * k + c]);
  if (fmax == 0.0) return 0.0;
  double sum = 0.0;
  for (int k = 0; k < nz; ++k)
    for (std::size_t c : cols) {
      const double r = f[plane * k + c] / fmax;
      if (r > 0.0) sum += std::exp(q * std::log(r));
    }
  return fmax * std::exp((std::log(sum) + std::log(dv)) / q);
}

}  // namespace

double lq_norm(const Magnitude& f, double q, const std::optional<Disk>& region) {
  const Grid& g = f.grid();
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  const auto cols = region_columns(g, region);
  if (q == kInf) {
    double m = 0.0;
    for (int k = 0; k < g.nz; ++k)
      for (std::size_t c : cols) m = std::max(m, f[plane * k + c]);
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1 or infinity");
  const double dv = g.cell_volume();
  if (q <= 32.0) return lq_direct(f, q, cols, plane, g.nz, dv);
  return lq_logspace(f, q, cols, plane, g.nz, dv);
}

double lq_norm(const RealField& f, double q, const std::optional<Disk>& region) {
  return lq_norm(Magnitude(f), q, region);
}

double sup_z_norm(const Magnitude& f, double q, const std::optional<Disk>& region) {
  if (!(q >= 1.0)) throw std::invalid_argument("sup_z_norm: q must be >= 1");
  const Grid& g = f.grid();
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  const auto cols = region_columns(g, region);
  const double da = 1.0 / (double(g.nx) * g.ny);
  double best = 0.0;
  for (int k = 0; k < g.nz; ++k) {
    double sum = 0.0;
    for (std::size_t c : cols) sum += std::pow(f[plane * k + c], q);
    best = std::max(best, std::pow(sum * da, 1.0 / q));
  }
  return best;
}

double sup_z_norm(const RealField& f, double q, const std::optional<Disk>& region) {
  return sup_z_norm(Magnitude(f), q, region);
}

double local_energy_profile(const Magnitude& f, double r, int stride) {
  if (!(r > 0.0)) throw std::invalid_argument("local_energy_profile: r must be positive");
  if (stride < 1) throw std::invalid_argument("local_energy_profile: stride must be >= 1");
  const Grid& g = f.grid();
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  const double dv = g.cell_volume();
  // Column energies once, then disk sums per center.
  std::vector<double> column(plane, 0.0);
  for (int k = 0; k < g.nz; ++k)
    for (std::size_t c = 0; c < plane; ++c) {
      const double v = f[plane * k + c];
      column[c] += v * v;
    }
  double best = 0.0;
  for (int cj = 0; cj < g.ny; cj += stride) {
    for (int ci = 0; ci < g.nx; ci += stride) {
      const Disk disk{g.x(ci), g.y(cj), r};
      double sum = 0.0;
      std::size_t c = 0;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i, ++c)
          if (disk.contains(g.x(i), g.y(j))) sum += column[c];
      best = std::max(best, sum * dv);
    }
  }
  return best;
}

double sup_lq_over_power(const Magnitude& f, double lambda, int qmax) {
  if (qmax < 2) throw std::invalid_argument("sup_lq_over_power: qmax must be >= 2");
  const std::size_t n = f.size();
  double fmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) fmax = std::max(fmax, f[i]);
  if (fmax == 0.0) return 0.0;
  const double dv = f.grid().cell_volume();
  // Running powers of f/fmax: one multiply per point per q keeps the whole
  // ladder of norms cheap and immune to overflow.
  std::vector<double> ratio(n), power(n);
  for (std::size_t i = 0; i < n; ++i) {
    ratio[i] = f[i] / fmax;
    power[i] = ratio[i] * ratio[i];
  }
  double best = 0.0;
  for (int q = 2; q <= qmax; ++q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += power[i];
    const double norm = fmax * std::exp((std::log(sum) + std::log(dv)) / q);
    best = std::max(best, norm / std::pow(double(q), lambda));
    if (q < qmax)
      for (std::size_t i = 0; i < n; ++i) power[i] *= ratio[i];
  }
  return best;
}

double weighted_lq_sup(const Magnitude& f, int qmax) {
  return sup_lq_over_power(f, 0.5, qmax);
}

double spectral_l2sq(const SpectralField& s) {
  const Grid& g = s.grid;
  const int nxc = s.nxc();
  double sum = 0.0;
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz)
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        const double w = (ix == 0 || ix == g.nx / 2) ? 1.0 : 2.0;
        sum += w * std::norm(s.data[idx]);
      }
  return sum * g.volume();
}

}  // namespace anisopede
