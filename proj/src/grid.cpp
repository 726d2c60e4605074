#include "anisopede/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anisopede {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    default: return "none";
  }
}

Parity parity_from_string(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  if (s == "none") return Parity::None;
  throw std::invalid_argument("unknown parity tag: " + s);
}

Grid make_grid(int nx, int ny, int nz, double h) {
  auto check = [](int n, const char* name) {
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument(std::string(name) + " must be even and >= 4, got " +
                                  std::to_string(n));
  };
  check(nx, "nx");
  check(ny, "ny");
  check(nz, "nz");
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("h must be positive and finite, got " + std::to_string(h));

  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.h = h;
  g.kx.resize(nx);
  g.ky.resize(ny);
  g.kz.resize(nz);
  const double two_pi = 2.0 * M_PI;
  for (int i = 0; i < nx; ++i) g.kx[i] = two_pi * signed_index(i, nx);
  for (int j = 0; j < ny; ++j) g.ky[j] = two_pi * signed_index(j, ny);
  for (int k = 0; k < nz; ++k) g.kz[k] = (M_PI / h) * signed_index(k, nz);
  g.cutoff_x = (nx - 1) / 3;
  g.cutoff_y = (ny - 1) / 3;
  g.cutoff_z = (nz - 1) / 3;
  return g;
}

std::complex<double> SpectralField::coeff(int jx, int jy, int jz) const {
  const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
  if (jx < -nx / 2 || jx >= nx / 2 || jy < -ny / 2 || jy >= ny / 2 || jz < -nz / 2 ||
      jz >= nz / 2)
    throw std::out_of_range("mode index outside spectrum");
  if (jx >= 0) return at(jx, wrap_index(jy, ny), wrap_index(jz, nz));
  // Conjugate half: c(-k) = conj(c(k)). jx = -nx/2 is stored directly.
  if (jx == -nx / 2) return at(nx / 2, wrap_index(jy, ny), wrap_index(jz, nz));
  return std::conj(at(-jx, wrap_index(-jy, ny), wrap_index(-jz, nz)));
}

RealField sample(const Grid& g, const std::function<double(double, double, double)>& f,
                 Parity declared) {
  RealField out(g, declared);
  std::size_t idx = 0;
  for (int k = 0; k < g.nz; ++k) {
    const double z = g.z(k);
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.y(j);
      for (int i = 0; i < g.nx; ++i, ++idx) {
        const double v = f(g.x(i), y, z);
        if (!std::isfinite(v))
          throw std::runtime_error("sample: initializer returned a non-finite value");
        out.data[idx] = v;
      }
    }
  }
  return out;
}

RealField enforce_parity(RealField f) {
  if (f.parity == Parity::None) return f;
  const Grid& g = f.grid;
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  const bool even = f.parity == Parity::Even;
  for (int k = 0; k <= g.nz / 2; ++k) {
    const int km = (g.nz - k) % g.nz;
    double* a = f.data.data() + plane * k;
    double* b = f.data.data() + plane * km;
    if (k == km) {
      if (!even)
        for (std::size_t n = 0; n < plane; ++n) a[n] = 0.0;
      continue;
    }
    for (std::size_t n = 0; n < plane; ++n) {
      if (even) {
        const double m = 0.5 * (a[n] + b[n]);
        a[n] = m;
        b[n] = m;
      } else {
        const double d = 0.5 * (a[n] - b[n]);
        a[n] = d;
        b[n] = -d;
      }
    }
  }
  return f;
}

double parity_residual(const RealField& f) {
  if (f.parity == Parity::None) return 0.0;
  const Grid& g = f.grid;
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  const double sign = f.parity == Parity::Even ? 1.0 : -1.0;
  double res = 0.0;
  for (int k = 0; k <= g.nz / 2; ++k) {
    const int km = (g.nz - k) % g.nz;
    const double* a = f.data.data() + plane * k;
    const double* b = f.data.data() + plane * km;
    for (std::size_t n = 0; n < plane; ++n) res = std::max(res, std::abs(a[n] - sign * b[n]));
  }
  return res;
}

}  // namespace anisopede
