#include "anisopede/transforms.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace anisopede {

namespace {

// FFTW planning is not thread safe; execution on private buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One r2c/c2r plan pair with private aligned buffers. Data is copied in and
// out so caller arrays need no special alignment. Plans use FFTW_ESTIMATE:
// planning stays cheap and the chosen algorithm does not depend on runtime
// measurements, which keeps results reproducible run to run.
class Fft {
 public:
  explicit Fft(const Grid& g) : nx_(g.nx), ny_(g.ny), nz_(g.nz) {
    nreal_ = std::size_t(nx_) * ny_ * nz_;
    nspec_ = std::size_t(nx_ / 2 + 1) * ny_ * nz_;
    rbuf_ = fftw_alloc_real(nreal_);
    cbuf_ = fftw_alloc_complex(nspec_);
    if (!rbuf_ || !cbuf_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    // x-fastest storage means FFTW sees dimensions (nz, ny, nx) row-major.
    fwd_ = fftw_plan_dft_r2c_3d(nz_, ny_, nx_, rbuf_, cbuf_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_3d(nz_, ny_, nx_, cbuf_, rbuf_, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("FFTW plan creation failed");
  }

  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(rbuf_);
    fftw_free(cbuf_);
  }

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(const double* in, std::complex<double>* out) {
    std::memcpy(rbuf_, in, nreal_ * sizeof(double));
    fftw_execute(fwd_);
    const double scale = 1.0 / double(nreal_);
    const double* src = reinterpret_cast<const double*>(cbuf_);
    double* dst = reinterpret_cast<double*>(out);
    for (std::size_t n = 0; n < 2 * nspec_; ++n) dst[n] = src[n] * scale;
  }

  void inverse(const std::complex<double>* in, double* out) {
    std::memcpy(cbuf_, in, nspec_ * sizeof(fftw_complex));
    fftw_execute(bwd_);
    std::memcpy(out, rbuf_, nreal_ * sizeof(double));
  }

 private:
  int nx_, ny_, nz_;
  std::size_t nreal_, nspec_;
  double* rbuf_;
  fftw_complex* cbuf_;
  fftw_plan fwd_, bwd_;
};

Fft& fft_for(const Grid& g) {
  thread_local std::map<std::tuple<int, int, int>, std::unique_ptr<Fft>> cache;
  auto key = std::make_tuple(g.nx, g.ny, g.nz);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Fft>(g)).first;
  return *it->second;
}

}  // namespace

SpectralField forward(const RealField& f) {
  SpectralField s(f.grid, f.parity);
  fft_for(f.grid).forward(f.data.data(), s.data.data());
  return s;
}

RealField inverse(const SpectralField& s) {
  RealField f(s.grid, s.parity);
  fft_for(s.grid).inverse(s.data.data(), f.data.data());
  return f;
}

void dealias(SpectralField& s) {
  const Grid& g = s.grid;
  const int nxc = s.nxc();
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz) {
    const bool kill_z = std::abs(signed_index(iz, g.nz)) > g.cutoff_z;
    for (int iy = 0; iy < g.ny; ++iy) {
      const bool kill_yz = kill_z || std::abs(signed_index(iy, g.ny)) > g.cutoff_y;
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        if (kill_yz || ix > g.cutoff_x) s.data[idx] = 0.0;
      }
    }
  }
}

bool is_dealiased(const SpectralField& s, double tol) {
  const Grid& g = s.grid;
  const int nxc = s.nxc();
  std::size_t idx = 0;
  for (int iz = 0; iz < g.nz; ++iz) {
    const bool out_z = std::abs(signed_index(iz, g.nz)) > g.cutoff_z;
    for (int iy = 0; iy < g.ny; ++iy) {
      const bool out_yz = out_z || std::abs(signed_index(iy, g.ny)) > g.cutoff_y;
      for (int ix = 0; ix < nxc; ++ix, ++idx) {
        if ((out_yz || ix > g.cutoff_x) && std::abs(s.data[idx]) > tol) return false;
      }
    }
  }
  return true;
}

SpectralField dealiased_product(const RealField& a, const RealField& b) {
  if (!a.grid.same_shape(b.grid))
    throw std::invalid_argument("dealiased_product: grids do not match");
  RealField prod(a.grid);
  for (std::size_t n = 0; n < prod.data.size(); ++n) prod.data[n] = a.data[n] * b.data[n];
  SpectralField s = forward(prod);
  dealias(s);
  return s;
}

}  // namespace anisopede
