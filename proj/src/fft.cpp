#include "zcradar/fft.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace zcradar {

namespace {

// Twiddles for one size: w[j] = exp(-i*2*pi*j/n), j < n/2.
const std::vector<cdouble>& twiddles(std::size_t n) {
    static std::mutex mu;
    static std::unordered_map<std::size_t, std::unique_ptr<std::vector<cdouble>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto tab = std::make_unique<std::vector<cdouble>>(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            double ang = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
            (*tab)[j] = {std::cos(ang), std::sin(ang)};
        }
        slot = std::move(tab);
    }
    return *slot;
}

void transform(std::span<cdouble> a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n))
        throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cdouble tw = w[j * step];
                if (inverse) tw = std::conj(tw);
                cdouble u = a[i + j];
                cdouble v = a[i + j + len / 2] * tw;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

} // namespace

void fft_inplace(std::span<cdouble> data) { transform(data, false); }
void ifft_inplace(std::span<cdouble> data) { transform(data, true); }

std::vector<cdouble> fft(std::span<const cdouble> data) {
    std::vector<cdouble> out(data.begin(), data.end());
    fft_inplace(out);
    return out;
}

std::vector<cdouble> ifft(std::span<const cdouble> data) {
    std::vector<cdouble> out(data.begin(), data.end());
    ifft_inplace(out);
    return out;
}

} // namespace zcradar
