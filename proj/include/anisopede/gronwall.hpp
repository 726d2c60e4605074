#pragma once

#include <cstdint>
#include <vector>

namespace anisopede {

// Polynomial in t: coef[0] + coef[1] t + ... Empty means identically zero.
struct Poly {
  std::vector<double> coef;
  double eval(double t) const;
  double integral(double t) const;  // from 0 to t, in closed form
};

// B(t, A) = e + gamma max(A, 0) (1 + beta sin^2(omega t)). Nonnegative
// parameters keep B >= e, so log B >= 1 along the whole trajectory.
struct Barrier {
  double gamma = 0.0, beta = 0.0, omega = 0.0;
  double eval(double t, double A) const;
};

// Comparison problem A' + B <= K A log B + f closed with equality:
//   A' = K A log B + f - B,  A(0) = A0.
// The generated family keeps f >= e = B(., 0), so A' >= 0 at A = 0 and the
// solution stays nonnegative; a clamp at zero guards roundoff and the
// documented degenerate case f = 0, A0 = 0.
struct GronwallInstance {
  double K = 1.0;
  double A0 = 0.0;
  Poly f;
  Barrier B;
  double horizon = 1.0;
};

// Q(t) = e^{Kt} (log(A0 + 1) + (2K^2 + 1) t + int_0^t f ds); the claimed
// bound for A(t) + int_0^t B ds is e^Q (1 + 2Q), returned as +inf when it
// overflows (the comparison then holds trivially).
double gronwall_q(const GronwallInstance& inst, double t);
double gronwall_bound(const GronwallInstance& inst, double t);

struct GronwallCheck {
  std::vector<double> t, A, intB, bound;
  double max_ratio = 0.0;  // max over the grid of (A + int B) / bound
  int violations = 0;      // grid times with A + int B > bound
  bool clipped = false;    // the zero clamp fired during integration
  bool converged = false;  // step refinement reached the tolerance
};

// Integrates the closure with fixed-step RK4 on the augmented state
// (A, int B), doubling the number of steps until the values at the output
// times settle below tol, then evaluates the bound at n_out + 1 equally
// spaced times on [0, horizon].
GronwallCheck check_gronwall(const GronwallInstance& inst, int n_out = 16,
                             double tol = 1e-10);

// Deterministic seeded family satisfying the hypothesis with equality.
// Index 0 is the closed-form case K = 1, A0 = e - 1, f = 0, B = e, whose
// solution is A(t) = e - e^t on [0, 1] and Q(1) = 4e.
GronwallInstance gronwall_instance(std::uint64_t seed, std::uint64_t index);

}  // namespace anisopede
