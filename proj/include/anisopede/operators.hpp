#pragma once

#include "anisopede/grid.hpp"

#include <utility>

namespace anisopede {

// Horizontal field on the unit square (one value per vertical column),
// x-fastest storage.
struct PlaneField {
  int nx = 0, ny = 0;
  std::vector<double> data;

  PlaneField() = default;
  PlaneField(int nx_, int ny_) : nx(nx_), ny(ny_), data(std::size_t(nx_) * ny_, 0.0) {}

  double& operator()(int i, int j) { return data[std::size_t(i) + std::size_t(nx) * j]; }
  double operator()(int i, int j) const { return data[std::size_t(i) + std::size_t(nx) * j]; }
};

// Spectral coefficient multipliers. Differentiation zeroes the Nyquist
// planes: the retained dealiasing band never touches them and an odd
// derivative of the unpaired Nyquist mode is not representable.
SpectralField deriv_x(const SpectralField& s);
SpectralField deriv_y(const SpectralField& s);
SpectralField deriv_z(const SpectralField& s);   // flips Even <-> Odd
SpectralField laplacian_h(const SpectralField& s);

std::pair<RealField, RealField> grad_h(const RealField& f);
RealField laplacian_h(const RealField& f);
RealField deriv_z(const RealField& f);

// Exact antiderivative in z of the trigonometric interpolant, evaluated at
// collocation points and vanishing at z = -h. The interpolant's z-mean mode
// contributes a linear (z + h) term, so the result is generally not
// band-limited; parity tag is None.
RealField integral_from_bottom(const RealField& f);

// Vertical velocity diagnosed from the horizontal velocity:
// w(z) = -integral_from_bottom(div_h v). Tagged Odd; genuinely odd (and
// periodic) exactly when the depth-mean divergence vanishes.
RealField diagnose_w(const RealField& v1, const RealField& v2);

// Value of the diagnosed w at the top lid z = +h, per column. Zero exactly
// when the depth-mean divergence vanishes.
PlaneField w_top(const RealField& v1, const RealField& v2);

// Removes the gradient part of the depth-mean flow so the depth-mean
// divergence vanishes: v' = v - grad_h(phi), laplacian_h(phi) = depth-mean
// divergence, zero-mean gauge. Idempotent up to roundoff.
std::pair<RealField, RealField> barotropic_project(const RealField& v1, const RealField& v2);

// Max pointwise depth-mean divergence, the constraint residual.
double barotropic_residual(const RealField& v1, const RealField& v2);

// p(x,y,z) = -integral_from_bottom(T). Parity tag None: the z-profile is
// even only up to the additive offset fixed by p(-h) = 0.
RealField hydrostatic_pressure(const RealField& T);

struct SurfacePressure {
  PlaneField p;               // zero-mean gauge
  double zero_mode = 0.0;     // discarded zero mode of the Poisson right side
};

// Solves laplacian_h(p) = depth-mean of div_h(f1) on the unit square.
// The zero mode of the right side has no solution and is reported; it
// vanishes identically because the right side is a divergence.
SurfacePressure solve_surface_pressure(const RealField& f1x, const RealField& f1y);

// Residual max |laplacian_h(p) - rhs| for a Poisson solve, used in tests.
std::pair<RealField, RealField> grad_h_of_plane(const Grid& g, const PlaneField& p);

}  // namespace anisopede
