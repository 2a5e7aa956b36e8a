// Successive-cancellation detectors: SC in the chirp-transform domain,
// SC by time-domain waveform subtraction, and single-pass raw detection.
//
// The chirp-domain canceller de-rotates the residual by the estimated
// Doppler over the global sample index, nulls the matched transform bin
// <u*l>_N independently in each of the eta pulse segments, and rotates
// back. Nulling one bin of a unitary transform is the orthogonal
// projection that removes that component, so segment energy never
// increases.

#pragma once

#include "zcradar/rdmap.hpp"
#include "zcradar/scene.hpp"

#include <vector>

namespace zcradar {

struct CancellationRecord {
    int tx_index = 0;
    int delay_bin = 0;
    double doppler_xi = 0.0;   // cycles/sample used for de-rotation
    int nulled_bin = 0;        // <u * delay_bin>_N
    int pass_index = 0;
};

struct ReportEntry {
    int pass_index = 0;
    Detection detection;
    double xi_hat = 0.0;
    cdouble alpha_hat;
};

struct DetectionReport {
    std::vector<ReportEntry> detections;
    std::vector<cdouble> residual;
    std::vector<CancellationRecord> records;
};

// One cancellation of a seed-u component at delay l_hat and Doppler
// xi_hat from an eta*N-sample residual (eta segments of n_len samples).
// null_width is the odd number of adjacent transform bins to null
// (default 1, the matched bin only).
std::vector<cdouble> cancel_one(std::span<const cdouble> residual, int u, int l_hat,
                                double xi_hat, int n_len, int eta, int null_width = 1);

DetectionReport sc_dcft(std::span<const cdouble> received, const Scenario& s,
                        int receiver_index, double pfa, int max_passes = 8,
                        int null_width = 1);

DetectionReport sc_time(std::span<const cdouble> received, const Scenario& s,
                        int receiver_index, double pfa, int max_passes = 8);

DetectionReport raw_detect(std::span<const cdouble> received, const Scenario& s,
                           int receiver_index, double pfa);

} // namespace zcradar
