#pragma once

#include "anisopede/grid.hpp"

namespace anisopede {

// Forward FFT of a real field. Normalized so that a constant field c maps
// to a single zero-mode coefficient c. Parity tag is carried through.
SpectralField forward(const RealField& f);

// Inverse of forward(); exact round trip up to roundoff.
RealField inverse(const SpectralField& s);

// Zeroes every coefficient outside the dealiasing band |j| <= cutoff per
// direction (two-thirds rule).
void dealias(SpectralField& s);

// True if all coefficients outside the dealiasing band vanish.
bool is_dealiased(const SpectralField& s, double tol = 0.0);

// Real-space product a*b followed by forward transform and dealiasing.
// For band-limited inputs this equals the exactly truncated convolution.
SpectralField dealiased_product(const RealField& a, const RealField& b);

}  // namespace anisopede
