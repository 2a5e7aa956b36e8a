#include "zcradar/zcseq.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace zcradar {

std::int64_t zc_phase_index(std::int64_t u, std::int64_t n, std::int64_t N) {
    const std::int64_t two_n = 2 * N;
    std::int64_t nm = ((n % N) + N) % N;   // N-periodic: (n+N)^2 = n^2 (mod 2N) for even N
    std::int64_t sq = (nm * nm) % two_n;
    return (u % two_n) * sq % two_n;
}

bool is_valid_seed(int u, int N) {
    return u % 2 == 1 && u >= 1 && u <= N / 2 - 2;
}

ZcSequence generate_zc(int u, int N) {
    if (N < 8 || !is_pow2(static_cast<std::size_t>(N)))
        throw std::invalid_argument("generate_zc: N must be a power of two >= 8, got " +
                                    std::to_string(N));
    if (!is_valid_seed(u, N))
        throw std::invalid_argument("generate_zc: seed must be odd in [1, N/2-2], got u=" +
                                    std::to_string(u));

    ZcSequence seq;
    seq.seed = u;
    seq.length = N;
    seq.samples.resize(N);
    const double step = M_PI / static_cast<double>(N);
    for (int n = 0; n < N; ++n) {
        double ang = -step * static_cast<double>(zc_phase_index(u, n, N));
        seq.samples[n] = {std::cos(ang), std::sin(ang)};
    }
    return seq;
}

std::vector<cdouble> delayed_zc(const ZcSequence& seq, std::int64_t l) {
    const int N = seq.length;
    std::vector<cdouble> out(N);
    std::int64_t shift = ((l % N) + N) % N;
    for (int n = 0; n < N; ++n)
        out[n] = seq.samples[(n - shift + N) % N];
    return out;
}

std::vector<cdouble> periodic_correlation(std::span<const cdouble> x,
                                          std::span<const cdouble> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("periodic_correlation: length mismatch");
    std::vector<cdouble> fx = fft(x);
    std::vector<cdouble> fy = fft(y);
    for (std::size_t k = 0; k < fx.size(); ++k)
        fx[k] *= std::conj(fy[k]);
    ifft_inplace(fx);
    return fx;
}

double pccf_peak_bound(int N, int a, int b) {
    if (a == b)
        throw std::invalid_argument("pccf_peak_bound: seeds are equal (PACF peak is N)");
    if (!is_valid_seed(a, N) || !is_valid_seed(b, N))
        throw std::invalid_argument("pccf_peak_bound: invalid seed");
    int tau = std::gcd(N, std::abs(a - b));
    return std::sqrt(static_cast<double>(tau) * static_cast<double>(N));
}

std::vector<int> default_seeds(int M, int N) {
    if (M < 1)
        throw std::invalid_argument("default_seeds: M must be >= 1");
    if (2 * M - 1 > N / 2 - 2)
        throw std::invalid_argument("default_seeds: seed range exhausted for M=" +
                                    std::to_string(M) + ", N=" + std::to_string(N));
    std::vector<int> seeds(M);
    for (int i = 0; i < M; ++i) seeds[i] = 2 * i + 1;
    return seeds;
}

} // namespace zcradar
