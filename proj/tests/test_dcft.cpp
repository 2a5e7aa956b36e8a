#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zcradar/dcft.hpp"
#include "zcradar/zcseq.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace zcradar;

TEST_CASE("beta range is enforced") {
    auto x = oracles::random_complex(64, 1);
    CHECK_THROWS_AS(dcft(x, -1), std::invalid_argument);
    CHECK_THROWS_AS(dcft(x, 31), std::invalid_argument);  // N/2-2 = 30
    CHECK_NOTHROW(dcft(x, 30));
    CHECK_NOTHROW(dcft(x, 0));
}

TEST_CASE("beta = 0 reduces to the normalized DFT") {
    auto x = oracles::random_complex(64, 2);
    ChirpSpectrum spec = dcft(x, 0);
    auto ref = oracles::normalized_dft_direct(x);
    CHECK(oracles::max_abs_diff(spec.coefficients, ref) < 1e-10);
}

TEST_CASE("forward transform matches the double-sum oracle") {
    for (int beta : {1, 7, 30}) {
        auto x = oracles::random_complex(64, 10 + beta);
        ChirpSpectrum spec = dcft(x, beta);
        auto ref = oracles::dcft_direct(x, beta);
        CHECK(oracles::max_abs_diff(spec.coefficients, ref) < 1e-10);
    }
}

TEST_CASE("matched delayed sequence becomes a sqrt(N) impulse") {
    ZcSequence z = generate_zc(3, 2048);
    auto x = delayed_zc(z, 5);
    ChirpSpectrum spec = dcft(x, 3);
    CHECK(matched_peak_bin(3, 5, 2048) == 15);
    CHECK(std::abs(spec.coefficients[15]) ==
          doctest::Approx(std::sqrt(2048.0)).epsilon(1e-12));
    for (int k = 0; k < 2048; ++k)
        if (k != 15) CHECK(std::abs(spec.coefficients[k]) < 1e-6);
}

TEST_CASE("unmatched chirp rate stays between 1 and the PCCF level") {
    ZcSequence z = generate_zc(3, 2048);
    ChirpSpectrum spec = dcft(z.samples, 5);
    double mx = 0.0;
    for (const auto& v : spec.coefficients) mx = std::max(mx, std::abs(v));
    CHECK(mx > 1.0);
    CHECK(mx <= 64.0 + 1e-9);  // sqrt(tau*N)/sqrt(N)*sqrt(N) with tau = gcd(2048,2)
}

TEST_CASE("matched_peak_bin modular arithmetic") {
    CHECK(matched_peak_bin(3, 5, 2048) == 15);
    CHECK(matched_peak_bin(17, 0, 2048) == 0);
    CHECK(matched_peak_bin(3, 683, 2048) == 1);  // 2049 mod 2048

    // locate the actual argmax for the (3, 683) case
    ZcSequence z = generate_zc(3, 2048);
    ChirpSpectrum spec = dcft(delayed_zc(z, 683), 3);
    int argmax = 0;
    double best = 0.0;
    for (int k = 0; k < 2048; ++k)
        if (std::abs(spec.coefficients[k]) > best) {
            best = std::abs(spec.coefficients[k]);
            argmax = k;
        }
    CHECK(argmax == 1);
}

TEST_CASE("round trip and Parseval for every beta at several sizes") {
    for (int n_len : {8, 64, 256}) {
        for (int beta = 0; beta <= n_len / 2 - 2; ++beta) {
            auto x = oracles::random_complex(n_len, 100 + n_len + beta);
            ChirpSpectrum spec = dcft(x, beta);
            auto back = idcft(spec);
            double norm_x = std::sqrt(oracles::energy(x));
            CHECK(oracles::max_abs_diff(back, x) < 1e-9 * norm_x);
            CHECK(std::abs(oracles::energy(spec.coefficients) - oracles::energy(x)) <
                  1e-9 * oracles::energy(x));
        }
    }
}

TEST_CASE("round trip at N=256, beta=7 within 1e-10") {
    auto x = oracles::random_complex(256, 42);
    auto back = idcft(dcft(x, 7));
    CHECK(oracles::max_abs_diff(back, x) < 1e-10);
}

TEST_CASE("idcft of a unit impulse is a unit-energy chirp") {
    const int n_len = 64, u = 5;
    ChirpSpectrum spec;
    spec.length = n_len;
    spec.chirp_rate = u;
    spec.coefficients.assign(n_len, cdouble{0.0, 0.0});
    spec.coefficients[0] = 1.0;
    auto x = idcft(spec);
    auto chirp = chirp_samples(u, n_len);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_len));
    for (int n = 0; n < n_len; ++n)
        CHECK(std::abs(x[n] - scale * chirp[n]) < 1e-12);
    CHECK(oracles::energy(x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("idcft of the zero spectrum is the zero signal") {
    ChirpSpectrum spec;
    spec.length = 64;
    spec.chirp_rate = 3;
    spec.coefficients.assign(64, cdouble{0.0, 0.0});
    for (const auto& v : idcft(spec)) CHECK(v == cdouble{0.0, 0.0});
}

TEST_CASE("linearity") {
    auto x = oracles::random_complex(128, 5);
    auto y = oracles::random_complex(128, 6);
    cdouble a{0.7, -1.3}, b{-0.2, 0.4};
    std::vector<cdouble> mix(128);
    for (int i = 0; i < 128; ++i) mix[i] = a * x[i] + b * y[i];
    auto sx = dcft(x, 9), sy = dcft(y, 9), sm = dcft(mix, 9);
    for (int k = 0; k < 128; ++k)
        CHECK(std::abs(sm.coefficients[k] -
                       (a * sx.coefficients[k] + b * sy.coefficients[k])) < 1e-10);
}

TEST_CASE("off-grid Doppler turns the impulse into a decaying Dirichlet peak") {
    const int n_len = 2048, u = 3, l = 40;
    ZcSequence z = generate_zc(u, n_len);
    auto base = delayed_zc(z, l);

    // integer cycles over the pulse: impulse cyclically shifted
    {
        std::vector<cdouble> x(n_len);
        for (int n = 0; n < n_len; ++n) {
            double ang = 2.0 * M_PI * 3.0 * n / n_len;
            x[n] = base[n] * cdouble{std::cos(ang), std::sin(ang)};
        }
        ChirpSpectrum spec = dcft(x, u);
        int k0 = matched_peak_bin(u, l, n_len);
        CHECK(std::abs(spec.coefficients[(k0 + 3) % n_len]) ==
              doctest::Approx(std::sqrt(2048.0)).epsilon(1e-9));
    }

    // fractional cycles: peak magnitude decays monotonically with |xi|
    double prev = 1e300;
    for (double cycles : {0.0, 0.1, 0.2, 0.3, 0.5}) {
        std::vector<cdouble> x(n_len);
        for (int n = 0; n < n_len; ++n) {
            double ang = 2.0 * M_PI * cycles * n / n_len;
            x[n] = base[n] * cdouble{std::cos(ang), std::sin(ang)};
        }
        ChirpSpectrum spec = dcft(x, u);
        double mx = 0.0;
        for (const auto& v : spec.coefficients) mx = std::max(mx, std::abs(v));
        CHECK(mx < prev + 1e-12);
        prev = mx;
    }
}
