// N-point Discrete Chirp-Fourier Transform and inverse.
//
// Forward: X[k] = (1/sqrt(N)) sum_n x[n] W^{kn - beta*n^2/2}, W = e^{-i2pi/N},
// computed as the normalized DFT of the de-chirped input x[n]*W^{-beta*n^2/2}.
// Inverse: x[n] = (1/sqrt(N)) sum_k X[k] W^{-kn + beta*n^2/2}.
// Both directions are unitary, so nulling a coefficient removes exactly that
// component's energy.
//
// A delayed seed-u sequence transforms under beta = u into a single impulse
// of magnitude sqrt(N) at bin <u*l>_N.

#pragma once

#include "zcradar/fft.hpp"

#include <cstdint>
#include <vector>

namespace zcradar {

struct ChirpSpectrum {
    std::vector<cdouble> coefficients;  // indexed by k in [0, N)
    int chirp_rate = 0;                 // beta in [0, N/2 - 2]
    int length = 0;                     // N
};

// Chirp table c[n] = exp(-i*pi*beta*n^2/N) = W^{beta*n^2/2}; the de-chirp
// factor W^{-beta*n^2/2} is its conjugate. Phase reduced mod 2N exactly.
std::vector<cdouble> chirp_samples(int beta, int N);

ChirpSpectrum dcft(std::span<const cdouble> x, int beta);
std::vector<cdouble> idcft(const ChirpSpectrum& spectrum);

// <u*l>_N, the bin where a delay-l seed-u sequence concentrates when
// beta = u.
int matched_peak_bin(int u, std::int64_t l, int N);

} // namespace zcradar
