#pragma once

#include "anisopede/grid.hpp"
#include "anisopede/norms.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anisopede {

enum class SampleFamily { TrigPoly, GaussianBump, BoundaryLayer };

SampleFamily sample_family_from_string(const std::string& name);

// Random smooth test functions. A draw is a continuum function of
// (spec, seed) only; the grid enters at evaluation time, so one seed can be
// rendered at several resolutions and compared.
//
// TrigPoly: sum of n_modes cosine modes with per-axis integer frequencies
// in [-degree, degree] (z frequency in units of pi/h). Degree 5 keeps
// sixth powers below the quadrature-exactness limit of a 32^3 grid.
// GaussianBump: periodized anisotropic Gaussian bumps.
// BoundaryLayer: tanh sheets in z riding on low horizontal modes, stressing
// the z-derivative terms.
struct SampleSpec {
  SampleFamily family = SampleFamily::TrigPoly;
  int degree = 5;
  int n_modes = 12;
  double amp_lo = 0.25;
  double amp_hi = 1.0;
  Parity parity = Parity::None;
  int bumps = 3;
  double width_lo = 0.08;
  double width_hi = 0.2;
  double sharpness = 6.0;
};

RealField sample_field(const Grid& g, const SampleSpec& spec, std::uint64_t seed);

struct LhsRhs {
  double lhs = 0.0;
  double rhs = 0.0;  // with unit constant
  double ratio() const;
};

// Nested-column product inequalities on the square cross-section. LHS is
// always int_S col(a) col(b) dxdy with columns along z:
//   MinForm:    col(|phi|) col(|rho psi|); rhs sqrt(h) min of the two
//               groupings of L2 and Lambda factors
//   L6Form:     same columns; rhs h^(5/6) ||phi||_6 based
//   SquareForm: col(|phi|^2) col(|rho|^2); psi unused
// where Lambda(g) = ||g||_2^(1/2) (||g||_2/L + ||grad_h g||_2)^(1/2) and L
// defaults to the diameter of the unit square.
enum class LadVariant { MinForm, L6Form, SquareForm };

LhsRhs check_ladyzhenskaya(const RealField& phi, const RealField& rho,
                           const RealField& psi, LadVariant variant,
                           double L = 1.4142135623730951);

// Disk version: the cross-section integral runs over a disk of radius r,
// all norms are over the cylinder above the disk, and L is replaced by r.
LhsRhs check_disk_ladyzhenskaya(const RealField& phi, const RealField& rho,
                                const RealField& psi, const Disk& disk,
                                LadVariant variant);

// Max-over-z plane-norm embeddings.
//   L2:     sup_z ||f||_{2,S} <= ||f||_2^(1/2) (||f||_2/2h + 2||dz f||_2)^(1/2)
//           with explicit constants; an absolute inequality, not a fitted one.
//   L4:     sup_z ||f||_{4,S} <= C (||f||_2/h + ||dz f||_2)^(1/2)
//                                 (||f||_2/L + ||grad_h f||_2)^(1/2)
//   L4Disk: the L4 form over a disk cylinder with L replaced by r.
enum class SupZKind { L2, L4, L4Disk };

LhsRhs check_sup_z_embedding(const RealField& f, SupZKind kind,
                             const std::optional<Disk>& disk = {},
                             double L = 1.4142135623730951);

// ||F||_inf against the product of the q-norm ladder sup and the
// logarithm of gradient norms:
//   ||F||_inf <= C max{1, sup_{2<=r<=qmax} ||F||_r / r^lambda}
//                * log^lambda(sum_i (||F||_{p_i} + ||d_i F||_{p_i}) + e).
// Requires p_i in (1, inf) with 1/p1 + 1/p2 + 1/p3 < 1.
struct LogSobolevParams {
  double p1 = 3.0, p2 = 3.0, p3 = 4.0;
  double lambda = 0.5;
  int qmax = 128;
};

LhsRhs check_log_sobolev(const RealField& f, const LogSobolevParams& prm);

struct FitResult {
  double c_star = 0.0;            // max ratio
  std::vector<double> bin_edges;  // log-spaced, counts.size() + 1 edges
  std::vector<int> counts;
};

// Empirical constant plus a log-spaced histogram of the positive ratios.
FitResult fit_constant(const std::vector<double>& ratios, int bins = 20);

enum class LemmaId {
  LadMin,      // "lad-min"
  LadL6,       // "lad-l6"
  LadSquare,   // "lad-sq"
  LadDisk,     // "disk" (MinForm over random disks)
  SupZL2,      // "sup-z-l2"
  SupZL4,      // "sup-z-l4"
  SupZL4Disk,  // "sup-z-l4-disk"
  LogSobolev,  // "log-sobolev"
};

LemmaId lemma_from_string(const std::string& id);
std::string to_string(LemmaId id);

struct EnsembleOptions {
  int samples = 100;
  std::uint64_t seed = 1;
  SampleSpec spec;
  LogSobolevParams logsob;
  int threads = 0;  // 0: default_thread_count()
};

struct SampleRow {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct EnsembleReport {
  LemmaId id{};
  std::vector<SampleRow> rows;  // one per sample, in sample order
  FitResult fit;
  int violations = 0;  // ratio > 1 where the inequality is absolute
};

// Runs the chosen check over a seeded ensemble. Deterministic for fixed
// (seed, samples) regardless of thread count: sample i always uses the
// same derived seeds and results are stored by index.
EnsembleReport run_ensemble(const Grid& g, LemmaId id, const EnsembleOptions& opt);

// CSV rows (sample, lhs, rhs, ratio) followed by a `C_star=` footer.
void write_ensemble_report(const std::string& path, const EnsembleReport& rep);

}  // namespace anisopede
