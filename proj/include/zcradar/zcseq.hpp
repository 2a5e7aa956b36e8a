// Zadoff-Chu sequence generation and periodic correlation.
//
// Sequences are restricted to even lengths that are powers of two (N >= 8)
// with odd seeds u in {1, ..., N/2 - 2}. For even N the samples are
// z_u[n] = exp(-i*pi*u*n^2/N); the phase exponent u*n^2 is reduced mod 2N
// in integer arithmetic before conversion to radians, so the quadratic
// phase is exact for any n.

#pragma once

#include "zcradar/fft.hpp"

#include <cstdint>
#include <vector>

namespace zcradar {

struct ZcSequence {
    int seed = 0;     // u, odd, coprime with length
    int length = 0;   // N, power of two
    std::vector<cdouble> samples;
};

// Integer phase index in [0, 2N): z_u[n] = exp(-i*pi*index/N). Valid for
// any n (the sequence is N-periodic).
std::int64_t zc_phase_index(std::int64_t u, std::int64_t n, std::int64_t N);

// Throws std::invalid_argument unless N is a power of two >= 8 and u is
// odd with 1 <= u <= N/2 - 2.
ZcSequence generate_zc(int u, int N);

bool is_valid_seed(int u, int N);

// Cyclic shift by l samples: out[n] = z[(n - l) mod N].
std::vector<cdouble> delayed_zc(const ZcSequence& seq, std::int64_t l);

// values[l] = sum_n x[n] * conj(y[(n - l) mod N]), computed via FFT.
std::vector<cdouble> periodic_correlation(std::span<const cdouble> x,
                                          std::span<const cdouble> y);

// Peak of |PCCF| between seeds a and b: sqrt(gcd(N, a-b) * N). Throws on
// a == b (the PACF peak is N, not covered by this bound).
double pccf_peak_bound(int N, int a, int b);

// First M odd integers [1, 3, ..., 2M-1]; throws if 2M-1 exceeds the
// valid seed range for N.
std::vector<int> default_seeds(int M, int N);

} // namespace zcradar
