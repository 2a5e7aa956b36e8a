#include "zcradar/dcft.hpp"

#include "zcradar/zcseq.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zcradar {

std::vector<cdouble> chirp_samples(int beta, int N) {
    std::vector<cdouble> c(N);
    const double step = M_PI / static_cast<double>(N);
    for (int n = 0; n < N; ++n) {
        double ang = -step * static_cast<double>(zc_phase_index(beta, n, N));
        c[n] = {std::cos(ang), std::sin(ang)};
    }
    return c;
}

namespace {

void check_beta(int beta, int N) {
    if (!is_pow2(static_cast<std::size_t>(N)) || N < 8)
        throw std::invalid_argument("dcft: N must be a power of two >= 8");
    if (beta < 0 || beta > N / 2 - 2)
        throw std::invalid_argument("dcft: beta out of range [0, N/2-2], got " +
                                    std::to_string(beta));
}

} // namespace

ChirpSpectrum dcft(std::span<const cdouble> x, int beta) {
    const int N = static_cast<int>(x.size());
    check_beta(beta, N);

    ChirpSpectrum spec;
    spec.chirp_rate = beta;
    spec.length = N;
    spec.coefficients.resize(N);

    // de-chirp: multiply by W^{-beta*n^2/2} = conj(chirp_samples)
    std::vector<cdouble> c = chirp_samples(beta, N);
    for (int n = 0; n < N; ++n)
        spec.coefficients[n] = x[n] * std::conj(c[n]);
    fft_inplace(spec.coefficients);

    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (auto& v : spec.coefficients) v *= scale;
    return spec;
}

std::vector<cdouble> idcft(const ChirpSpectrum& spectrum) {
    const int N = spectrum.length;
    check_beta(spectrum.chirp_rate, N);
    if (static_cast<int>(spectrum.coefficients.size()) != N)
        throw std::invalid_argument("idcft: coefficient count does not match length");

    std::vector<cdouble> x(spectrum.coefficients.begin(), spectrum.coefficients.end());
    ifft_inplace(x);  // applies 1/N; combined with sqrt(N) below gives 1/sqrt(N)

    std::vector<cdouble> c = chirp_samples(spectrum.chirp_rate, N);
    const double scale = std::sqrt(static_cast<double>(N));
    for (int n = 0; n < N; ++n)
        x[n] *= scale * c[n];
    return x;
}

int matched_peak_bin(int u, std::int64_t l, int N) {
    std::int64_t r = (static_cast<std::int64_t>(u) * (((l % N) + N) % N)) % N;
    return static_cast<int>(r);
}

} // namespace zcradar
