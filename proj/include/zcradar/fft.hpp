// Minimal power-of-two FFT used by the correlation and transform code.
//
// Forward transform uses the e^{-i2pi kn/N} kernel with no scaling; the
// inverse applies 1/N. Twiddle tables are cached per size and shared
// across threads.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace zcradar {

using cdouble = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place transforms. `data.size()` must be a power of two.
void fft_inplace(std::span<cdouble> data);
void ifft_inplace(std::span<cdouble> data);

std::vector<cdouble> fft(std::span<const cdouble> data);
std::vector<cdouble> ifft(std::span<const cdouble> data);

} // namespace zcradar
