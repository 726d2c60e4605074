#include "anisopede/operators.hpp"

#include "anisopede/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace anisopede {

namespace {

Parity flip(Parity p) {
  if (p == Parity::Even) return Parity::Odd;
  if (p == Parity::Odd) return Parity::Even;
  return Parity::None;
}

using Cplx = std::complex<double>;

template <typename F>
SpectralField map_modes(const SpectralField& s, Parity parity, F&& f) {
  SpectralField out(s.grid, parity);
  const Grid& g = s.grid;
  const int nxc = s.nxc();
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz)
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < nxc; ++ix, ++idx) out.data[idx] = f(ix, iy, iz, s.data[idx]);
  return out;
}

}  // namespace

SpectralField deriv_x(const SpectralField& s) {
  const Grid& g = s.grid;
  return map_modes(s, s.parity, [&](int ix, int, int, Cplx c) {
    if (ix == g.nx / 2) return Cplx(0.0);
    return Cplx(0.0, g.kx[ix]) * c;
  });
}

SpectralField deriv_y(const SpectralField& s) {
  const Grid& g = s.grid;
  return map_modes(s, s.parity, [&](int, int iy, int, Cplx c) {
    if (iy == g.ny / 2) return Cplx(0.0);
    return Cplx(0.0, g.ky[iy]) * c;
  });
}

SpectralField deriv_z(const SpectralField& s) {
  const Grid& g = s.grid;
  return map_modes(s, flip(s.parity), [&](int, int, int iz, Cplx c) {
    if (iz == g.nz / 2) return Cplx(0.0);
    return Cplx(0.0, g.kz[iz]) * c;
  });
}

SpectralField laplacian_h(const SpectralField& s) {
  const Grid& g = s.grid;
  return map_modes(s, s.parity, [&](int ix, int iy, int, Cplx c) {
    return -(g.kx[ix] * g.kx[ix] + g.ky[iy] * g.ky[iy]) * c;
  });
}

std::pair<RealField, RealField> grad_h(const RealField& f) {
  SpectralField s = forward(f);
  return {inverse(deriv_x(s)), inverse(deriv_y(s))};
}

RealField laplacian_h(const RealField& f) { return inverse(laplacian_h(forward(f))); }

RealField deriv_z(const RealField& f) { return inverse(deriv_z(forward(f))); }

RealField integral_from_bottom(const RealField& f) {
  const Grid& g = f.grid;
  SpectralField s = forward(f);
  // Periodic part: divide each nonzero z-mode by i*kz. The z-mean mode and
  // the z-Nyquist mode are set aside (the former integrates to a linear
  // term, the latter integrates to a mode vanishing at all collocation
  // points).
  SpectralField p(g);
  const int nxc = s.nxc();
  for (int iz = 0; iz < g.nz; ++iz) {
    if (iz == 0 || iz == g.nz / 2) continue;
    const Cplx inv_ik = 1.0 / Cplx(0.0, g.kz[iz]);
    for (int iy = 0; iy < g.ny; ++iy)
      for (int ix = 0; ix < nxc; ++ix) p.at(ix, iy, iz) = inv_ik * s.at(ix, iy, iz);
  }
  RealField periodic = inverse(p);

  // Column z-means feed the linear (z + h) term.
  RealField out(g, Parity::None);
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  std::vector<double> mean(plane, 0.0);
  for (int k = 0; k < g.nz; ++k)
    for (std::size_t n = 0; n < plane; ++n) mean[n] += f.data[plane * k + n];
  for (std::size_t n = 0; n < plane; ++n) mean[n] /= g.nz;

  for (int k = 0; k < g.nz; ++k) {
    const double zh = g.z(k) + g.h;
    for (std::size_t n = 0; n < plane; ++n)
      out.data[plane * k + n] =
          periodic.data[plane * k + n] - periodic.data[n] + mean[n] * zh;
  }
  return out;
}

namespace {

RealField div_h(const RealField& v1, const RealField& v2) {
  if (!v1.grid.same_shape(v2.grid))
    throw std::invalid_argument("velocity components on different grids");
  SpectralField d = deriv_x(forward(v1));
  const SpectralField dy = deriv_y(forward(v2));
  for (std::size_t n = 0; n < d.data.size(); ++n) d.data[n] += dy.data[n];
  d.parity = v1.parity;
  return inverse(d);
}

}  // namespace

RealField diagnose_w(const RealField& v1, const RealField& v2) {
  RealField w = integral_from_bottom(div_h(v1, v2));
  for (double& v : w.data) v = -v;
  w.parity = Parity::Odd;
  return w;
}

PlaneField w_top(const RealField& v1, const RealField& v2) {
  // w(+h) = -(integral over the full depth) = -2h * column mean of div_h v.
  const RealField div = div_h(v1, v2);
  const Grid& g = v1.grid;
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  PlaneField top(g.nx, g.ny);
  for (int k = 0; k < g.nz; ++k)
    for (std::size_t n = 0; n < plane; ++n) top.data[n] += div.data[plane * k + n];
  const double scale = -2.0 * g.h / g.nz;
  for (std::size_t n = 0; n < plane; ++n) top.data[n] *= scale;
  return top;
}

double barotropic_residual(const RealField& v1, const RealField& v2) {
  const PlaneField top = w_top(v1, v2);
  double res = 0.0;
  for (double v : top.data) res = std::max(res, std::abs(v));
  return res;
}

std::pair<RealField, RealField> barotropic_project(const RealField& v1, const RealField& v2) {
  if (!v1.grid.same_shape(v2.grid))
    throw std::invalid_argument("velocity components on different grids");
  const Grid& g = v1.grid;
  SpectralField s1 = forward(v1);
  SpectralField s2 = forward(v2);
  // The correction is z-independent, so only the z-mean modes change.
  const int iz = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < s1.nxc(); ++ix) {
      if (ix == 0 && iy == 0) continue;
      const double kx = g.kx[ix], ky = g.ky[iy];
      const double k2 = kx * kx + ky * ky;
      const Cplx d = Cplx(0.0, kx) * s1.at(ix, iy, iz) + Cplx(0.0, ky) * s2.at(ix, iy, iz);
      s1.at(ix, iy, iz) += Cplx(0.0, kx) * d / k2;
      s2.at(ix, iy, iz) += Cplx(0.0, ky) * d / k2;
    }
  }
  return {inverse(s1), inverse(s2)};
}

RealField hydrostatic_pressure(const RealField& T) {
  RealField p = integral_from_bottom(T);
  for (double& v : p.data) v = -v;
  p.parity = Parity::None;
  return p;
}

SurfacePressure solve_surface_pressure(const RealField& f1x, const RealField& f1y) {
  if (!f1x.grid.same_shape(f1y.grid))
    throw std::invalid_argument("force components on different grids");
  const Grid& g = f1x.grid;
  const SpectralField sx = forward(f1x);
  const SpectralField sy = forward(f1y);
  // Depth mean picks out the z-mean modes; the Poisson solve divides by
  // -|k_H|^2. Solved on the z-mean slab and brought back by one inverse
  // transform of a z-independent spectral field.
  SpectralField ps(g);
  double zero_mode = 0.0;
  const int iz = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < sx.nxc(); ++ix) {
      const double kx = g.kx[ix], ky = g.ky[iy];
      const Cplx rhs = Cplx(0.0, kx) * sx.at(ix, iy, iz) + Cplx(0.0, ky) * sy.at(ix, iy, iz);
      if (ix == 0 && iy == 0) {
        zero_mode = std::abs(rhs);
        continue;
      }
      ps.at(ix, iy, iz) = rhs / (-(kx * kx + ky * ky));
    }
  }
  const RealField p3 = inverse(ps);
  SurfacePressure out;
  out.zero_mode = zero_mode;
  out.p = PlaneField(g.nx, g.ny);
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  for (std::size_t n = 0; n < plane; ++n) out.p.data[n] = p3.data[n];
  return out;
}

std::pair<RealField, RealField> grad_h_of_plane(const Grid& g, const PlaneField& p) {
  if (p.nx != g.nx || p.ny != g.ny)
    throw std::invalid_argument("plane field does not match grid");
  RealField lifted(g, Parity::Even);
  const std::size_t plane = std::size_t(g.nx) * g.ny;
  for (int k = 0; k < g.nz; ++k)
    for (std::size_t n = 0; n < plane; ++n) lifted.data[plane * k + n] = p.data[n];
  return grad_h(lifted);
}

}  // namespace anisopede
