#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace anisopede {

// Symmetry of a scalar field in z about z = 0 on the period cell (-h, h).
// None means no symmetry is claimed, not that none is present.
enum class Parity { Even, Odd, None };

const char* to_string(Parity p);
Parity parity_from_string(const std::string& s);

// Uniform collocation grid for the periodic box (0,1) x (0,1) x (-h,h).
// nx, ny, nz must be even and >= 4. Wavenumber tables follow FFT index
// order {0, 1, ..., n/2-1, -n/2, ..., -1}; kx = 2*pi*jx, ky = 2*pi*jy,
// kz = (pi/h)*jz, matching periods 1, 1 and 2h.
struct Grid {
  int nx = 0, ny = 0, nz = 0;
  double h = 0.0;
  std::vector<double> kx, ky, kz;
  // Dealiasing cutoffs per direction: modes with |j| > cutoff are dropped.
  // cutoff = floor((n-1)/3) keeps 3*cutoff < n so that triple products of
  // retained modes cannot alias back into the retained band.
  int cutoff_x = 0, cutoff_y = 0, cutoff_z = 0;

  std::size_t size() const { return std::size_t(nx) * ny * nz; }
  double cell_volume() const { return (1.0 / nx) * (1.0 / ny) * (2.0 * h / nz); }
  double volume() const { return 2.0 * h; }

  double x(int i) const { return double(i) / nx; }
  double y(int j) const { return double(j) / ny; }
  double z(int k) const { return -h + 2.0 * h * k / nz; }

  bool same_shape(const Grid& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && h == o.h;
  }
};

// Validates arguments and fills wavenumber tables.
Grid make_grid(int nx, int ny, int nz, double h);

// Signed mode index for storage index i on an axis of n points.
inline int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }
// Storage index for signed mode index j (j in [-n/2, n/2-1]).
inline int wrap_index(int j, int n) { return j >= 0 ? j : j + n; }

// Scalar field sampled at collocation points, x-fastest storage:
// data[i + nx*(j + ny*k)] = f(x_i, y_j, z_k).
struct RealField {
  Grid grid;
  Parity parity = Parity::None;
  std::vector<double> data;

  RealField() = default;
  RealField(const Grid& g, Parity p = Parity::None)
      : grid(g), parity(p), data(g.size(), 0.0) {}

  double& operator()(int i, int j, int k) {
    return data[std::size_t(i) + std::size_t(grid.nx) * (j + std::size_t(grid.ny) * k)];
  }
  double operator()(int i, int j, int k) const {
    return data[std::size_t(i) + std::size_t(grid.nx) * (j + std::size_t(grid.ny) * k)];
  }
};

// Fourier coefficients of a real field, half-spectrum storage along x:
// data[ix + (nx/2+1)*(iy + ny*iz)] for ix in [0, nx/2]. Coefficients are
// those of the trigonometric interpolant: the (0,0,0) entry is the mean.
// The remaining half spectrum is implied by conjugate symmetry.
struct SpectralField {
  Grid grid;
  Parity parity = Parity::None;
  std::vector<std::complex<double>> data;

  SpectralField() = default;
  SpectralField(const Grid& g, Parity p = Parity::None)
      : grid(g), parity(p), data(std::size_t(g.nx / 2 + 1) * g.ny * g.nz) {}

  int nxc() const { return grid.nx / 2 + 1; }
  std::size_t size() const { return data.size(); }

  std::complex<double>& at(int ix, int iy, int iz) {
    return data[std::size_t(ix) + std::size_t(nxc()) * (iy + std::size_t(grid.ny) * iz)];
  }
  const std::complex<double>& at(int ix, int iy, int iz) const {
    return data[std::size_t(ix) + std::size_t(nxc()) * (iy + std::size_t(grid.ny) * iz)];
  }

  // Logical full-spectrum access by signed mode indices; reconstructs the
  // conjugate half. jx in [-nx/2, nx/2-1], likewise jy, jz.
  std::complex<double> coeff(int jx, int jy, int jz) const;
};

// Evaluates f at all collocation points. Throws if f returns a non-finite
// value. The declared parity is recorded, not checked.
RealField sample(const Grid& g, const std::function<double(double, double, double)>& f,
                 Parity declared = Parity::None);

// Pointwise symmetric (Even) or antisymmetric (Odd) part in z. For Odd the
// z = -h and z = 0 planes come out exactly zero. Idempotent bitwise. Parity
// None is the identity.
RealField enforce_parity(RealField f);

// Max deviation from the tagged symmetry, 0 for parity None.
double parity_residual(const RealField& f);

}  // namespace anisopede
