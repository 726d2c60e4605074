#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisopede/gronwall.hpp"

#include <cmath>

using namespace anisopede;

namespace {
const double kE = std::exp(1.0);
}

TEST_CASE("polynomials evaluate and integrate in closed form") {
  const Poly p{{2.0, -3.0, 0.5}};  // 2 - 3t + t^2/2
  CHECK(p.eval(0.0) == 2.0);
  CHECK(p.eval(2.0) == doctest::Approx(2.0 - 6.0 + 2.0).epsilon(1e-15));
  CHECK(p.integral(2.0) == doctest::Approx(4.0 - 6.0 + 8.0 / 6.0).epsilon(1e-14));
  CHECK(Poly{}.eval(1.0) == 0.0);
  CHECK(Poly{}.integral(3.0) == 0.0);
}

TEST_CASE("the barrier never drops below e") {
  const Barrier b{2.0, 0.7, 5.0};
  for (double t : {0.0, 0.3, 1.0})
    for (double a : {-1.0, 0.0, 0.5, 3.0}) CHECK(b.eval(t, a) >= kE);
  CHECK(b.eval(0.0, 0.0) == doctest::Approx(kE).epsilon(1e-15));
  CHECK(b.eval(0.0, 1.0) == doctest::Approx(kE + 2.0).epsilon(1e-15));
}

TEST_CASE("index zero reproduces the closed-form comparison case") {
  const GronwallInstance inst = gronwall_instance(123, 0);  // seed must not matter
  CHECK(inst.K == 1.0);
  CHECK(inst.A0 == doctest::Approx(kE - 1.0).epsilon(1e-15));

  // Q(1) = e (log(e) + 3) = 4e
  CHECK(gronwall_q(inst, 1.0) == doctest::Approx(4.0 * kE).epsilon(1e-13));

  const GronwallCheck chk = check_gronwall(inst, 16);
  REQUIRE(chk.converged);
  CHECK(chk.violations == 0);
  REQUIRE(chk.t.size() == 17);
  // A(t) = e - e^t, int B = e t
  for (std::size_t i = 0; i < chk.t.size(); ++i) {
    CHECK(chk.A[i] == doctest::Approx(kE - std::exp(chk.t[i])).epsilon(1e-8));
    CHECK(chk.intB[i] == doctest::Approx(kE * chk.t[i]).epsilon(1e-8));
    CHECK(chk.A[i] + chk.intB[i] <= chk.bound[i]);
  }
  CHECK(chk.A.back() == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  CHECK(chk.max_ratio < 1.0);
}

TEST_CASE("the bound grows monotonically in its inputs") {
  GronwallInstance inst = gronwall_instance(7, 3);
  const double b1 = gronwall_bound(inst, 0.25);
  const double b2 = gronwall_bound(inst, 0.5);
  const double b3 = gronwall_bound(inst, 1.0);
  CHECK(b1 < b2);
  CHECK(b2 < b3);

  GronwallInstance bigger = inst;
  bigger.A0 = inst.A0 + 1.0;
  CHECK(gronwall_bound(bigger, 1.0) > b3);
  bigger = inst;
  bigger.K = inst.K + 0.5;
  CHECK(gronwall_bound(bigger, 1.0) > b3);
}

TEST_CASE("seeded instances satisfy the conclusion with margin") {
  for (std::uint64_t i = 0; i < 25; ++i) {
    const GronwallInstance inst = gronwall_instance(42, i);
    CHECK(inst.K >= 1.0);
    CHECK(inst.A0 >= 0.0);
    const GronwallCheck chk = check_gronwall(inst, 8);
    REQUIRE(chk.converged);
    CHECK(chk.violations == 0);
    CHECK(chk.max_ratio < 1.0);
    for (std::size_t j = 0; j < chk.t.size(); ++j) {
      CHECK(chk.A[j] >= 0.0);
      if (j > 0) CHECK(chk.intB[j] > chk.intB[j - 1]);
    }
  }
}

TEST_CASE("instances are reproducible and seed-sensitive") {
  const GronwallInstance a = gronwall_instance(1, 5);
  const GronwallInstance b = gronwall_instance(1, 5);
  CHECK(a.K == b.K);
  CHECK(a.A0 == b.A0);
  CHECK(a.B.gamma == b.B.gamma);
  const GronwallInstance c = gronwall_instance(2, 5);
  CHECK(a.K != c.K);
}

TEST_CASE("degenerate start stays pinned at zero growth from f alone") {
  // A0 = 0 with f = e: A' = K A log B + e - B = 0 at A = 0 only if B = e;
  // the clamp keeps A nonnegative either way.
  GronwallInstance inst;
  inst.K = 1.0;
  inst.A0 = 0.0;
  inst.f = Poly{{kE}};
  inst.B = Barrier{0.0, 0.0, 0.0};  // B = e identically
  const GronwallCheck chk = check_gronwall(inst, 8);
  REQUIRE(chk.converged);
  CHECK(chk.violations == 0);
  for (double a : chk.A) CHECK(std::abs(a) < 1e-12);
}

TEST_CASE("check_gronwall validates its arguments") {
  GronwallInstance inst = gronwall_instance(3, 1);
  CHECK_THROWS_AS(check_gronwall(inst, 0), std::invalid_argument);
  inst.horizon = 0.0;
  CHECK_THROWS_AS(check_gronwall(inst, 8), std::invalid_argument);
  inst = gronwall_instance(3, 1);
  inst.K = 0.5;
  CHECK_THROWS_AS(check_gronwall(inst, 8), std::invalid_argument);
  inst = gronwall_instance(3, 1);
  inst.A0 = -1.0;
  CHECK_THROWS_AS(check_gronwall(inst, 8), std::invalid_argument);
}
