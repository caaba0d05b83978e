#pragma once

#include <complex>
#include <span>
#include <vector>

namespace eitmem::fft {

using cplx = std::complex<double>;

/// Unnormalized forward DFT, X_m = sum_j x_j exp(-2 pi i j m / n).
std::vector<cplx> forward(std::span<const cplx> x);

/// Inverse of forward (includes the 1/n).
std::vector<cplx> inverse(std::span<const cplx> X);

/// In-place variants; size must match the plan cache entry.
void forward_inplace(std::span<cplx> x);
void inverse_inplace(std::span<cplx> X);

} // namespace eitmem::fft
