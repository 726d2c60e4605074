#pragma once

#include "anisopede/grid.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace anisopede {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Disk on the horizontal torus: points within distance r of (cx, cy) in the
// wrapped metric (period 1 in both directions).
struct Disk {
  double cx = 0.0, cy = 0.0, r = 0.0;
  bool contains(double x, double y) const;
};

// Pointwise magnitude of up to three components (1: |f|, 2 or 3: Euclidean
// norm of the vector). All components must share one grid.
class Magnitude {
 public:
  explicit Magnitude(const RealField& a);
  Magnitude(const RealField& a, const RealField& b);
  Magnitude(const RealField& a, const RealField& b, const RealField& c);

  const Grid& grid() const { return *grid_; }
  double operator[](std::size_t n) const;
  std::size_t size() const;

 private:
  const Grid* grid_;
  const RealField* a_;
  const RealField* b_ = nullptr;
  const RealField* c_ = nullptr;
};

// Lebesgue norm over the full box (or the cylinder over a disk) by uniform
// grid sum times cell volume. q = kInf gives the collocation max. Large q
// is evaluated in log space so that huge powers neither overflow nor lose
// the absolute homogeneity ||s*f|| = |s|*||f||.
double lq_norm(const Magnitude& f, double q, const std::optional<Disk>& region = {});
double lq_norm(const RealField& f, double q, const std::optional<Disk>& region = {});

// Max over horizontal planes of the plane Lq norm (area-weighted), q in
// {2, 4}; region restricts the plane integral to a disk.
double sup_z_norm(const Magnitude& f, double q, const std::optional<Disk>& region = {});
double sup_z_norm(const RealField& f, double q, const std::optional<Disk>& region = {});

// Max over a lattice of disk centers (collocation points subsampled by
// stride) of the squared L2 norm over the cylinder D_r x (-h, h).
double local_energy_profile(const Magnitude& f, double r, int stride = 4);

// sup over integer q in [2, qmax] of lq_norm(f, q) / q^lambda.
double sup_lq_over_power(const Magnitude& f, double lambda, int qmax);

// The lambda = 1/2 case, the growth functional tracked along runs.
double weighted_lq_sup(const Magnitude& f, int qmax);

// L2 norm squared from spectral coefficients (Parseval with the interpolant
// coefficient normalization, volume factor included).
double spectral_l2sq(const SpectralField& s);

}  // namespace anisopede
