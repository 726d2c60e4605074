#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisopede/operators.hpp"
#include "anisopede/transforms.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace anisopede;
using testutil::max_abs;
using testutil::max_abs_diff;
using testutil::random_band_limited;

namespace {
constexpr double kPi = 3.14159265358979323846;

RealField lift_plane(const Grid& g, const PlaneField& p) {
  RealField f(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) f(i, j, k) = p(i, j);
  return f;
}
}  // namespace

TEST_CASE("spectral derivatives reproduce closed forms") {
  const Grid g = make_grid(8, 8, 16, 0.7);
  const double h = g.h;

  const RealField fx = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
  const RealField dfx = inverse(deriv_x(forward(fx)));
  const RealField dfx_ref =
      sample(g, [](double x, double, double) { return 2 * kPi * std::cos(2 * kPi * x); });
  CHECK(max_abs_diff(dfx, dfx_ref) < 1e-12);
  CHECK(max_abs(inverse(deriv_y(forward(fx)))) < 1e-13);

  const RealField fz =
      sample(g, [h](double, double, double z) { return std::cos(kPi * z / h); }, Parity::Even);
  const SpectralField dz = deriv_z(forward(fz));
  CHECK(dz.parity == Parity::Odd);
  const RealField dfz_ref = sample(
      g, [h](double, double, double z) { return -(kPi / h) * std::sin(kPi * z / h); });
  CHECK(max_abs_diff(inverse(dz), dfz_ref) < 1e-12);

  const RealField fxy = sample(
      g, [](double x, double y, double) { return std::sin(2 * kPi * x) * std::cos(2 * kPi * y); });
  const RealField lap = inverse(laplacian_h(forward(fxy)));
  for (std::size_t n = 0; n < lap.data.size(); ++n)
    CHECK(lap.data[n] == doctest::Approx(-8 * kPi * kPi * fxy.data[n]).epsilon(1e-12));
}

TEST_CASE("real-space wrappers agree with the spectral path") {
  const Grid g = make_grid(8, 8, 8, 0.5);
  const RealField f = random_band_limited(g, 31);
  const auto [gx, gy] = grad_h(f);
  CHECK(max_abs_diff(gx, inverse(deriv_x(forward(f)))) < 1e-13);
  CHECK(max_abs_diff(gy, inverse(deriv_y(forward(f)))) < 1e-13);
  CHECK(max_abs_diff(laplacian_h(f), inverse(laplacian_h(forward(f)))) < 1e-12);
  CHECK(max_abs_diff(deriv_z(f), inverse(deriv_z(forward(f)))) < 1e-12);
}

TEST_CASE("integral_from_bottom matches closed forms") {
  const Grid g = make_grid(4, 4, 16, 0.7);
  const double h = g.h;

  // oscillatory: vanishing z-mean, stays band-limited
  const RealField c =
      sample(g, [h](double, double, double z) { return std::cos(kPi * z / h); });
  const RealField ic = integral_from_bottom(c);
  const RealField ic_ref =
      sample(g, [h](double, double, double z) { return (h / kPi) * std::sin(kPi * z / h); });
  CHECK(max_abs_diff(ic, ic_ref) < 1e-12);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(ic(i, j, 0)) < 1e-13);

  const RealField s =
      sample(g, [h](double, double, double z) { return std::sin(kPi * z / h); });
  const RealField is_ref = sample(g, [h](double, double, double z) {
    return -(h / kPi) * std::cos(kPi * z / h) - h / kPi;
  });
  CHECK(max_abs_diff(integral_from_bottom(s), is_ref) < 1e-12);

  // constant: the z-mean mode integrates to a linear ramp
  const RealField one = sample(g, [](double, double, double) { return 1.0; });
  const RealField ramp_ref = sample(g, [](double, double, double z) { return z + 0.7; });
  CHECK(max_abs_diff(integral_from_bottom(one), ramp_ref) < 1e-12);
}

TEST_CASE("diagnose_w reproduces the hand-computed column integral") {
  const Grid g = make_grid(16, 4, 16, 0.6);
  const double h = g.h;
  const RealField v1 = sample(
      g, [h](double x, double, double z) { return std::sin(2 * kPi * x) * std::cos(kPi * z / h); },
      Parity::Even);
  const RealField v2(g, Parity::Even);
  const RealField w = diagnose_w(v1, v2);
  CHECK(w.parity == Parity::Odd);
  const RealField w_ref = sample(g, [h](double x, double, double z) {
    return -2 * h * std::cos(2 * kPi * x) * std::sin(kPi * z / h);
  });
  CHECK(max_abs_diff(w, w_ref) < 1e-12);

  const PlaneField top = w_top(v1, v2);
  for (double v : top.data) CHECK(std::abs(v) < 1e-13);
  CHECK(barotropic_residual(v1, v2) < 1e-13);
}

TEST_CASE("barotropic projection removes exactly the depth-mean gradient part") {
  const Grid g = make_grid(16, 16, 8, 0.5);

  // a pure gradient projects to zero
  const RealField grad1 =
      sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); }, Parity::Even);
  const RealField zero(g, Parity::Even);
  const auto [p1, p2] = barotropic_project(grad1, zero);
  CHECK(max_abs(p1) < 1e-12);
  CHECK(max_abs(p2) < 1e-12);

  // a divergence-free field is untouched
  const RealField swirl =
      sample(g, [](double, double y, double) { return std::sin(2 * kPi * y); }, Parity::Even);
  const auto [q1, q2] = barotropic_project(swirl, zero);
  CHECK(max_abs_diff(q1, swirl) < 1e-12);
  CHECK(max_abs(q2) < 1e-12);

  // generic field: residual killed, projection idempotent
  const RealField a = random_band_limited(g, 41, Parity::Even);
  const RealField b = random_band_limited(g, 42, Parity::Even);
  CHECK(barotropic_residual(a, b) > 1e-3);
  const auto [c1, c2] = barotropic_project(a, b);
  CHECK(barotropic_residual(c1, c2) < 1e-12);
  const auto [d1, d2] = barotropic_project(c1, c2);
  CHECK(max_abs_diff(d1, c1) < 1e-13);
  CHECK(max_abs_diff(d2, c2) < 1e-13);

  // the changed part is a z-independent gradient: curl of the depth mean kept
  const SpectralField da = forward(a), dc = forward(c1);
  const SpectralField db = forward(b), dd = forward(c2);
  // compare curls: ik_x v2 - ik_y v1 before and after
  SpectralField curl_before = deriv_x(db), curl_after = deriv_x(dd);
  const SpectralField t1 = deriv_y(da), t2 = deriv_y(dc);
  for (std::size_t n = 0; n < curl_before.size(); ++n) {
    curl_before.data[n] -= t1.data[n];
    curl_after.data[n] -= t2.data[n];
  }
  CHECK(max_abs_diff(inverse(curl_before), inverse(curl_after)) < 1e-11);
}

TEST_CASE("hydrostatic_pressure integrates the buoyancy downward") {
  const Grid g = make_grid(4, 4, 16, 0.7);
  const double h = g.h;
  const RealField T =
      sample(g, [h](double, double, double z) { return std::sin(kPi * z / h); }, Parity::Odd);
  const RealField p = hydrostatic_pressure(T);
  const RealField p_ref = sample(g, [h](double, double, double z) {
    return (h / kPi) * std::cos(kPi * z / h) + h / kPi;
  });
  CHECK(max_abs_diff(p, p_ref) < 1e-12);
}

TEST_CASE("surface pressure solve reproduces a hand-computed potential") {
  const Grid g = make_grid(16, 8, 8, 0.5);
  const RealField f1 =
      sample(g, [](double x, double, double) { return -kPi * std::sin(4 * kPi * x); });
  const RealField f2(g);
  const SurfacePressure sp = solve_surface_pressure(f1, f2);
  CHECK(std::abs(sp.zero_mode) < 1e-13);
  double mean = 0.0;
  for (double v : sp.p.data) mean += v;
  CHECK(std::abs(mean) / double(sp.p.data.size()) < 1e-13);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      CHECK(sp.p(i, j) == doctest::Approx(std::cos(4 * kPi * g.x(i)) / 4).epsilon(1e-12));

  const auto [px, py] = grad_h_of_plane(g, sp.p);
  CHECK(max_abs_diff(px, f1) < 1e-11);
  CHECK(max_abs(py) < 1e-12);
}

TEST_CASE("surface pressure solve closes the Poisson equation on random data") {
  const Grid g = make_grid(16, 16, 8, 0.5);
  const RealField f1 = random_band_limited(g, 51);
  const RealField f2 = random_band_limited(g, 52);
  const SurfacePressure sp = solve_surface_pressure(f1, f2);

  // depth-mean divergence of (f1, f2)
  const auto [d1x, d1y] = grad_h(f1);
  const auto [d2x, d2y] = grad_h(f2);
  (void)d1y;
  (void)d2x;
  PlaneField rhs(g.nx, g.ny);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) rhs(i, j) += (d1x(i, j, k) + d2y(i, j, k)) / g.nz;

  const RealField lap = laplacian_h(lift_plane(g, sp.p));
  double resid = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) resid = std::max(resid, std::abs(lap(i, j, 0) - rhs(i, j)));
  CHECK(resid < 1e-10);
}
