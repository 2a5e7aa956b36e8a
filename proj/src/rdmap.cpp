#include "zcradar/rdmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zcradar {

namespace {

double median_magnitude(const std::vector<cdouble>& cells) {
    std::vector<double> mags(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) mags[i] = std::abs(cells[i]);
    auto mid = mags.begin() + mags.size() / 2;
    std::nth_element(mags.begin(), mid, mags.end());
    return *mid;
}

} // namespace

RangeDopplerMap range_doppler_map(std::span<const cdouble> r,
                                  std::span<const cdouble> ref,
                                  int eta, int tx_index) {
    const int n = static_cast<int>(ref.size());
    const int len = static_cast<int>(r.size());
    if (eta < 1 || len != eta * n)
        throw std::invalid_argument("range_doppler_map: r must have length eta*N");

    RangeDopplerMap map;
    map.n = n;
    map.eta = eta;
    map.tx_index = tx_index;
    map.doppler_bin_width = 1.0 / static_cast<double>(len);
    map.cells.resize(static_cast<std::size_t>(n) * eta);

    std::vector<cdouble> big = fft(r);           // length eta*N
    std::vector<cdouble> sref = fft(ref);        // length N
    for (auto& v : sref) v = std::conj(v);

    std::vector<cdouble> buf(n);
    for (int bf = 0; bf < eta; ++bf) {
        const int d = bf < eta / 2 ? bf : bf - eta;
        for (int m = 0; m < n; ++m) {
            int idx = (eta * m + d) % len;
            if (idx < 0) idx += len;
            buf[m] = big[idx] * sref[m];
        }
        ifft_inplace(buf);
        for (int l = 0; l < n; ++l)
            map.cells[static_cast<std::size_t>(l) * eta + bf] = buf[l];
    }

    map.noise_floor = median_magnitude(map.cells) / std::sqrt(std::log(2.0));
    return map;
}

std::vector<Detection> detect(const RangeDopplerMap& map, double pfa,
                              double min_threshold) {
    if (pfa <= 0.0 || pfa >= 1.0)
        throw std::invalid_argument("detect: pfa must be in (0, 1)");
    const int n = map.n, eta = map.eta;

    std::vector<double> mag(map.cells.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
        mag[i] = std::abs(map.cells[i]);
        peak = std::max(peak, mag[i]);
    }
    // The 1e-9*peak clamp keeps noise-free maps from tripping on numerical
    // fuzz when the median collapses; it is far below any noise floor.
    const double threshold = std::max({map.noise_floor * std::sqrt(-std::log(pfa)),
                                       1e-9 * peak, min_threshold});
    auto at = [&](int l, int d) -> double {
        return mag[static_cast<std::size_t>(((l % n) + n) % n) * eta + ((d % eta) + eta) % eta];
    };

    struct Cand { int l, d; double m; };
    std::vector<Cand> cands;
    for (int l = 0; l < n; ++l) {
        for (int d = 0; d < eta; ++d) {
            double m = mag[static_cast<std::size_t>(l) * eta + d];
            if (m <= threshold) continue;
            bool is_max = true;
            for (int dl = -1; dl <= 1 && is_max; ++dl)
                for (int dd = -1; dd <= 1; ++dd) {
                    if (dl == 0 && dd == 0) continue;
                    if (at(l + dl, d + dd) > m) { is_max = false; break; }
                }
            if (is_max) cands.push_back({l, d, m});
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.m > b.m; });

    std::vector<char> blocked(map.cells.size(), 0);
    std::vector<Detection> out;
    const double gain = static_cast<double>(eta) * n;
    for (const Cand& c : cands) {
        if (blocked[static_cast<std::size_t>(c.l) * eta + c.d]) continue;
        Detection det;
        det.tx_index = map.tx_index;
        det.delay_bin = c.l;
        det.doppler_bin = c.d;
        det.peak_magnitude = c.m;
        det.amplitude_estimate = map.at(c.l, c.d) / gain;
        out.push_back(det);
        for (int dl = -2; dl <= 2; ++dl)
            for (int dd = -1; dd <= 1; ++dd) {
                int l = ((c.l + dl) % n + n) % n;
                int d = ((c.d + dd) % eta + eta) % eta;
                blocked[static_cast<std::size_t>(l) * eta + d] = 1;
            }
    }
    return out;
}

ParamEstimate estimate_params(const RangeDopplerMap& map, const Detection& det) {
    const int eta = map.eta;
    ParamEstimate est;
    est.delay = det.delay_bin;
    est.alpha_hat = map.at(det.delay_bin, det.doppler_bin) /
                    (static_cast<double>(eta) * map.n);

    const int d = det.doppler_bin;
    double yl = std::abs(map.at(det.delay_bin, ((d - 1) % eta + eta) % eta));
    double y0 = std::abs(map.at(det.delay_bin, d));
    double yr = std::abs(map.at(det.delay_bin, (d + 1) % eta));
    double den = yl - 2.0 * y0 + yr;
    double delta = 0.0;
    if (std::abs(den) > 1e-300)
        delta = std::clamp(0.5 * (yl - yr) / den, -0.5, 0.5);
    est.xi_hat = (map.signed_doppler(d) + delta) * map.doppler_bin_width;
    return est;
}

} // namespace zcradar
