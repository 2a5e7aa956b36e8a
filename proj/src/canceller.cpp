#include "zcradar/canceller.hpp"

#include "zcradar/dcft.hpp"
#include "zcradar/zcseq.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace zcradar {

namespace {

// Unit-norm IDCFT basis vector for bin k under chirp rate u:
// b[n] = (1/sqrt(N)) * W^{-k*n} * W^{u*n^2/2}
std::vector<cdouble> idcft_basis(int u, int k, int n_len) {
    std::vector<cdouble> b = chirp_samples(u, n_len);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_len));
    const double w = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_len);
    for (int n = 0; n < n_len; ++n) {
        double ang = w * n;
        b[n] *= scale * cdouble{std::cos(ang), std::sin(ang)};
    }
    return b;
}

void rotate(std::vector<cdouble>& x, double xi) {
    const double w = 2.0 * M_PI * xi;
    const cdouble step{std::cos(w), std::sin(w)};
    cdouble rot{1.0, 0.0};
    for (std::size_t n = 0; n < x.size(); ++n) {
        x[n] *= rot;
        rot *= step;
        if ((n & 0x3ff) == 0x3ff) rot /= std::abs(rot);
    }
}

} // namespace

std::vector<cdouble> cancel_one(std::span<const cdouble> residual, int u, int l_hat,
                                double xi_hat, int n_len, int eta, int null_width) {
    if (null_width < 1 || null_width % 2 == 0)
        throw std::invalid_argument("cancel_one: null_width must be odd and >= 1");
    if (static_cast<int>(residual.size()) != n_len * eta)
        throw std::invalid_argument("cancel_one: residual must have length eta*N");
    if (l_hat < 0 || l_hat >= n_len)
        throw std::invalid_argument("cancel_one: l_hat must be in [0, N)");

    std::vector<cdouble> w(residual.begin(), residual.end());
#ifndef NDEBUG
    double energy_before = 0.0;
    for (const auto& v : w) energy_before += std::norm(v);
#endif
    rotate(w, -xi_hat);

    const int k0 = matched_peak_bin(u, l_hat, n_len);
    for (int j = -(null_width - 1) / 2; j <= (null_width - 1) / 2; ++j) {
        const int k = ((k0 + j) % n_len + n_len) % n_len;
        std::vector<cdouble> basis = idcft_basis(u, k, n_len);
        for (int seg = 0; seg < eta; ++seg) {
            cdouble* p = w.data() + static_cast<std::size_t>(seg) * n_len;
            cdouble coef{0.0, 0.0};
            for (int t = 0; t < n_len; ++t) coef += p[t] * std::conj(basis[t]);
            for (int t = 0; t < n_len; ++t) p[t] -= coef * basis[t];
        }
    }

    rotate(w, xi_hat);
#ifndef NDEBUG
    double energy_after = 0.0;
    for (const auto& v : w) energy_after += std::norm(v);
    assert(energy_after <= energy_before * (1.0 + 1e-9));
#endif
    return w;
}

namespace {

struct RunContext {
    const Scenario& s;
    int rx;
    std::vector<std::vector<cdouble>> waveforms;

    RunContext(const Scenario& scenario, int receiver_index)
        : s(scenario), rx(receiver_index) {
        s.validate();
        if (rx < 0 || rx >= static_cast<int>(s.receivers.size()))
            throw std::invalid_argument("detector: receiver index out of range");
        waveforms.resize(s.transmitters.size());
        for (int i = 0; i < static_cast<int>(s.transmitters.size()); ++i)
            waveforms[i] = transmit_waveform(s, i);
    }
};

int cyclic_distance(int a, int b, int period) {
    int d = ((a - b) % period + period) % period;
    return std::min(d, period - d);
}

bool is_new_cell(const std::vector<CancellationRecord>& records, int tx, int delay_bin,
                 int doppler_bin, int n, int eta) {
    for (const auto& rec : records) {
        if (rec.tx_index != tx) continue;
        int rec_doppler = static_cast<int>(
            ((std::llround(rec.doppler_xi * n * eta) % eta) + eta) % eta);
        if (cyclic_distance(delay_bin, rec.delay_bin, n) <= 1 &&
            cyclic_distance(doppler_bin, rec_doppler, eta) <= 1)
            return false;
    }
    return true;
}

enum class CancelKind { chirp_null, subtract };

// Absolute detection floor tied to the original input: 1e-9 times the peak
// response a perfectly matched component of that energy would produce.
// Keeps noise-free residual maps from re-detecting cancellation crumbs.
double input_floor(std::span<const cdouble> received) {
    double energy = 0.0;
    for (const auto& v : received) energy += std::norm(v);
    return 1e-9 * std::sqrt(energy * static_cast<double>(received.size()));
}

DetectionReport run_sc(std::span<const cdouble> received, const Scenario& s,
                       int receiver_index, double pfa, int max_passes,
                       CancelKind kind, int null_width) {
    RunContext ctx(s, receiver_index);
    const int n = s.n, eta = s.eta;
    if (static_cast<int>(received.size()) != n * eta)
        throw std::invalid_argument("detector: received must have length eta*N");
    const double floor = input_floor(received);

    DetectionReport report;
    report.residual.assign(received.begin(), received.end());

    const int m_tx = static_cast<int>(s.transmitters.size());
    for (int pass = 0; pass < max_passes; ++pass) {
        int new_detections = 0;
        for (int i = 0; i < m_tx; ++i) {
            RangeDopplerMap map =
                range_doppler_map(report.residual, ctx.waveforms[i], eta, i);
            for (const Detection& det : detect(map, pfa, floor)) {
                if (!is_new_cell(report.records, i, det.delay_bin, det.doppler_bin, n, eta))
                    continue;
                ParamEstimate est = estimate_params(map, det);
                report.detections.push_back({pass, det, est.xi_hat, est.alpha_hat});

                CancellationRecord rec;
                rec.tx_index = i;
                rec.delay_bin = det.delay_bin;
                rec.doppler_xi = est.xi_hat;
                rec.nulled_bin = matched_peak_bin(s.transmitters[i].seed, det.delay_bin, n);
                rec.pass_index = pass;
                report.records.push_back(rec);

                if (kind == CancelKind::chirp_null) {
                    report.residual = cancel_one(report.residual, s.transmitters[i].seed,
                                                 est.delay, est.xi_hat, n, eta, null_width);
                } else if (kind == CancelKind::subtract) {
                    const auto& wf = ctx.waveforms[i];
                    const double w = 2.0 * M_PI * est.xi_hat;
                    const cdouble step{std::cos(w), std::sin(w)};
                    cdouble rot{1.0, 0.0};
                    for (int t = 0; t < n * eta; ++t) {
                        int idx = (t - est.delay) % n;
                        if (idx < 0) idx += n;
                        report.residual[t] -= est.alpha_hat * wf[idx] * rot;
                        rot *= step;
                        if ((t & 0x3ff) == 0x3ff) rot /= std::abs(rot);
                    }
                }
                ++new_detections;
            }
        }
        if (new_detections == 0) break;
    }
    return report;
}

} // namespace

DetectionReport sc_dcft(std::span<const cdouble> received, const Scenario& s,
                        int receiver_index, double pfa, int max_passes, int null_width) {
    if (max_passes < 1)
        throw std::invalid_argument("sc_dcft: max_passes must be >= 1");
    return run_sc(received, s, receiver_index, pfa, max_passes,
                  CancelKind::chirp_null, null_width);
}

DetectionReport sc_time(std::span<const cdouble> received, const Scenario& s,
                        int receiver_index, double pfa, int max_passes) {
    if (max_passes < 1)
        throw std::invalid_argument("sc_time: max_passes must be >= 1");
    return run_sc(received, s, receiver_index, pfa, max_passes,
                  CancelKind::subtract, 1);
}

DetectionReport raw_detect(std::span<const cdouble> received, const Scenario& s,
                           int receiver_index, double pfa) {
    RunContext ctx(s, receiver_index);
    const int n = s.n, eta = s.eta;
    if (static_cast<int>(received.size()) != n * eta)
        throw std::invalid_argument("raw_detect: received must have length eta*N");

    DetectionReport report;
    report.residual.assign(received.begin(), received.end());
    const double floor = input_floor(received);
    for (int i = 0; i < static_cast<int>(s.transmitters.size()); ++i) {
        RangeDopplerMap map = range_doppler_map(report.residual, ctx.waveforms[i], eta, i);
        for (const Detection& det : detect(map, pfa, floor)) {
            ParamEstimate est = estimate_params(map, det);
            report.detections.push_back({0, det, est.xi_hat, est.alpha_hat});
        }
    }
    return report;
}

} // namespace zcradar
