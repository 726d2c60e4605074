#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisopede/grid.hpp"
#include "anisopede/norms.hpp"
#include "anisopede/transforms.hpp"

#include "test_util.hpp"

#include <cmath>
#include <complex>
#include <cstring>

using namespace anisopede;
using testutil::max_abs_diff;
using testutil::random_band_limited;
using testutil::random_field;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_grid fills wavenumber tables in FFT order") {
  const Grid g = make_grid(4, 4, 4, 1.0);
  CHECK(g.kx[0] == 0.0);
  CHECK(g.kx[1] == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(g.kx[2] == doctest::Approx(-4 * kPi).epsilon(1e-15));
  CHECK(g.kx[3] == doctest::Approx(-2 * kPi).epsilon(1e-15));
  // kz uses pi/h for the period-2h axis
  CHECK(g.kz[0] == 0.0);
  CHECK(g.kz[1] == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(g.kz[2] == doctest::Approx(-2 * kPi).epsilon(1e-15));
  CHECK(g.kz[3] == doctest::Approx(-kPi).epsilon(1e-15));
  CHECK(g.cutoff_x == 1);
  CHECK(g.cell_volume() == doctest::Approx(2.0 / 64).epsilon(1e-15));
  CHECK(g.volume() == 2.0);

  const Grid g2 = make_grid(8, 8, 8, 0.5);
  CHECK(g2.cutoff_x == 2);
  CHECK(g2.kz[1] == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(g2.z(0) == -0.5);
  CHECK(g2.z(4) == 0.0);
}

TEST_CASE("make_grid rejects bad shapes") {
  CHECK_THROWS_AS(make_grid(5, 4, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 2, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 4, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 4, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 4, 4, -1.0), std::invalid_argument);
}

TEST_CASE("signed and wrapped indices invert each other") {
  for (int n : {4, 8, 10}) {
    for (int i = 0; i < n; ++i) CHECK(wrap_index(signed_index(i, n), n) == i);
    CHECK(signed_index(n / 2, n) == -n / 2);
  }
}

TEST_CASE("sample rejects non-finite values") {
  const Grid g = make_grid(4, 4, 4, 1.0);
  CHECK_THROWS_AS(sample(g, [](double, double, double) { return 1.0 / 0.0; }),
                  std::runtime_error);
}

TEST_CASE("forward picks out single-mode coefficients") {
  const Grid g = make_grid(8, 8, 8, 0.5);
  const RealField f = sample(g, [](double x, double, double) { return std::sin(2 * kPi * x); });
  const SpectralField s = forward(f);
  // sin = (e^{i t} - e^{-i t}) / (2i)
  CHECK(std::abs(s.coeff(1, 0, 0) - std::complex<double>(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(s.coeff(-1, 0, 0) - std::complex<double>(0.0, 0.5)) < 1e-14);
  double rest = 0.0;
  for (int jx = -4; jx < 4; ++jx)
    for (int jy = -4; jy < 4; ++jy)
      for (int jz = -4; jz < 4; ++jz)
        if (std::abs(jx) != 1 || jy != 0 || jz != 0)
          rest = std::max(rest, std::abs(s.coeff(jx, jy, jz)));
  CHECK(rest < 1e-14);

  const RealField c = sample(g, [](double, double, double) { return 3.25; });
  const SpectralField sc = forward(c);
  CHECK(std::abs(sc.coeff(0, 0, 0) - 3.25) < 1e-14);
}

TEST_CASE("inverse(forward) is an identity up to roundoff") {
  const Grid g = make_grid(16, 8, 12, 0.7);
  const RealField f = random_field(g, 11);
  const RealField back = inverse(forward(f));
  CHECK(max_abs_diff(f, back) < 1e-13);
  CHECK(back.parity == f.parity);
}

TEST_CASE("Parseval ties spectral_l2sq to the collocation L2 norm") {
  const Grid g = make_grid(16, 12, 8, 0.3);
  const RealField f = random_field(g, 5);
  const double direct = lq_norm(f, 2.0);
  CHECK(spectral_l2sq(forward(f)) == doctest::Approx(direct * direct).epsilon(1e-12));
}

TEST_CASE("dealias zeroes everything outside the band") {
  const Grid g = make_grid(8, 8, 8, 0.5);
  SpectralField s = forward(random_field(g, 3));
  CHECK_FALSE(is_dealiased(s, 1e-12));
  dealias(s);
  CHECK(is_dealiased(s));
  for (int jx = -4; jx < 4; ++jx)
    for (int jy = -4; jy < 4; ++jy)
      for (int jz = -4; jz < 4; ++jz)
        if (std::abs(jx) > g.cutoff_x || std::abs(jy) > g.cutoff_y || std::abs(jz) > g.cutoff_z)
          CHECK(s.coeff(jx, jy, jz) == std::complex<double>(0.0, 0.0));
  // idempotent
  const SpectralField t = s;
  dealias(s);
  for (std::size_t n = 0; n < s.size(); ++n) CHECK(s.data[n] == t.data[n]);
}

TEST_CASE("dealiased_product equals the truncated convolution") {
  const Grid g = make_grid(8, 8, 8, 0.5);
  const RealField a = random_band_limited(g, 21);
  const RealField b = random_band_limited(g, 22);
  const SpectralField sa = forward(a), sb = forward(b);
  const SpectralField prod = dealiased_product(a, b);
  CHECK(is_dealiased(prod));
  const int cx = g.cutoff_x, cy = g.cutoff_y, cz = g.cutoff_z;
  for (int jx = -cx; jx <= cx; ++jx)
    for (int jy = -cy; jy <= cy; ++jy)
      for (int jz = -cz; jz <= cz; ++jz) {
        std::complex<double> sum = 0.0;
        for (int px = -cx; px <= cx; ++px)
          for (int py = -cy; py <= cy; ++py)
            for (int pz = -cz; pz <= cz; ++pz) {
              const int qx = jx - px, qy = jy - py, qz = jz - pz;
              if (std::abs(qx) > cx || std::abs(qy) > cy || std::abs(qz) > cz) continue;
              sum += sa.coeff(px, py, pz) * sb.coeff(qx, qy, qz);
            }
        CHECK(std::abs(prod.coeff(jx, jy, jz) - sum) < 1e-13);
      }
}

TEST_CASE("enforce_parity splits even and odd parts") {
  const Grid g = make_grid(4, 4, 8, 0.5);
  RealField f = random_field(g, 7);

  f.parity = Parity::Even;
  const RealField even = enforce_parity(f);
  CHECK(parity_residual(even) < 1e-15);
  f.parity = Parity::Odd;
  const RealField odd = enforce_parity(f);
  CHECK(parity_residual(odd) < 1e-15);

  // even + odd reassembles the original
  for (std::size_t n = 0; n < f.data.size(); ++n)
    CHECK(even.data[n] + odd.data[n] == doctest::Approx(f.data[n]).epsilon(1e-14));

  // odd part vanishes identically on the fixed planes z = -h and z = 0
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      CHECK(odd(i, j, 0) == 0.0);
      CHECK(odd(i, j, g.nz / 2) == 0.0);
    }

  // idempotent bitwise
  const RealField even2 = enforce_parity(even);
  CHECK(std::memcmp(even2.data.data(), even.data.data(), even.data.size() * sizeof(double)) == 0);
  const RealField odd2 = enforce_parity(odd);
  CHECK(std::memcmp(odd2.data.data(), odd.data.data(), odd.data.size() * sizeof(double)) == 0);

  // None is the identity
  f.parity = Parity::None;
  const RealField same = enforce_parity(f);
  CHECK(std::memcmp(same.data.data(), f.data.data(), f.data.size() * sizeof(double)) == 0);
  CHECK(parity_residual(f) == 0.0);
}

TEST_CASE("parity_residual flags a wrong tag") {
  const Grid g = make_grid(4, 4, 8, 0.5);
  RealField f = sample(g, [](double, double, double z) { return std::sin(kPi * z / 0.5); });
  f.parity = Parity::Even;
  CHECK(parity_residual(f) > 0.5);
  f.parity = Parity::Odd;
  CHECK(parity_residual(f) < 1e-14);
}

TEST_CASE("parity tags survive the transform pair") {
  const Grid g = make_grid(8, 8, 8, 0.5);
  const RealField f = random_field(g, 9, Parity::Odd);
  const SpectralField s = forward(f);
  CHECK(s.parity == Parity::Odd);
  CHECK(inverse(s).parity == Parity::Odd);
}
