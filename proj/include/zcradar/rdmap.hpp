// Range-Doppler maps over a coherent interval and threshold detection.
//
// cells[l][d] = sum_{n=0}^{eta*N-1} r[n] * conj(s[(n-l) mod N]) *
//               exp(-i*2*pi*(d/(eta*N))*n)
// for signed Doppler bins d in {-eta/2, ..., eta/2-1} folded into [0, eta).
// Computed exactly: one length-eta*N FFT of r, then per Doppler bin a
// spectral gather against the comb spectrum of the N-periodic reference
// and a length-N inverse FFT.

#pragma once

#include "zcradar/fft.hpp"

#include <vector>

namespace zcradar {

struct RangeDopplerMap {
    std::vector<cdouble> cells;  // row-major, cells[l*eta + d]
    int n = 0;
    int eta = 0;
    int tx_index = -1;
    double doppler_bin_width = 0.0;  // 1/(eta*n) cycles/sample
    double noise_floor = 0.0;        // median-based RMS estimate, set at build time

    const cdouble& at(int delay_bin, int doppler_bin) const {
        return cells[static_cast<std::size_t>(delay_bin) * eta + doppler_bin];
    }
    // folded bin -> signed bin in {-eta/2, ..., eta/2-1}
    int signed_doppler(int doppler_bin) const {
        return doppler_bin < eta / 2 ? doppler_bin : doppler_bin - eta;
    }
};

struct Detection {
    int tx_index = -1;
    int delay_bin = 0;
    int doppler_bin = 0;            // folded, [0, eta)
    cdouble amplitude_estimate;     // cells/(eta*n) at the peak
    double peak_magnitude = 0.0;
};

struct ParamEstimate {
    int delay = 0;
    double xi_hat = 0.0;            // cycles/sample, parabolic-refined
    cdouble alpha_hat;
};

// r.size() must equal eta * ref.size(); ref is one pulse of the transmit
// waveform (N samples, extended periodically).
RangeDopplerMap range_doppler_map(std::span<const cdouble> r,
                                  std::span<const cdouble> ref,
                                  int eta, int tx_index = -1);

// Median-based threshold at the given false-alarm probability; local
// maxima (8-neighborhood, both axes cyclic) above threshold, greedily
// accepted in descending magnitude with a +-2 delay x +-1 Doppler guard
// zone. Deterministic given the map. min_threshold lets a cancellation
// loop anchor the floor to the original input so that noise-free residual
// maps of numerical fuzz stop producing detections.
std::vector<Detection> detect(const RangeDopplerMap& map, double pfa,
                              double min_threshold = 0.0);

ParamEstimate estimate_params(const RangeDopplerMap& map, const Detection& det);

} // namespace zcradar
