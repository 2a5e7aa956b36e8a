// Monte-Carlo detection-rate experiments: per-trial scoring against
// ground truth, SNR sweeps, CSV/plot output.
//
// A target counts as detected in a waveform when some detection for that
// transmitter lands within +-1 delay bin and +-1 Doppler bin (both axes
// cyclic) of the ground-truth cell. Trials are independent and seeded
// base_seed + trial_index; aggregation is hit-count summation, so results
// do not depend on worker scheduling. ZCRADAR_THREADS caps the worker
// count.

#pragma once

#include "zcradar/canceller.hpp"
#include "zcradar/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace zcradar {

enum class Method { raw, sc_time, sc_dcft };

const char* method_name(Method m);
Method method_from_name(const std::string& name);  // "raw" | "sc-time" | "sc-dcft"

struct TrialResult {
    double snr_db = 0.0;
    int trial_index = 0;
    Method method = Method::raw;
    int num_targets = 0;
    int num_tx = 0;
    std::vector<std::uint8_t> hits;  // row-major [target * num_tx + tx]

    bool hit(int target, int tx) const {
        return hits[static_cast<std::size_t>(target) * num_tx + tx] != 0;
    }
};

struct DetectionRateTable {
    std::vector<double> snr_grid;
    int trials = 0;
    int num_targets = 0;
    int num_tx = 0;
    // rates[snr][target][tx]; aggregates per (snr, target)
    std::vector<std::vector<std::vector<double>>> rates;
    std::vector<std::vector<double>> rate_any;  // detected in >= 1 waveform
    std::vector<std::vector<double>> rate_all;  // detected in every waveform

    double rate(int snr_idx, int target, int tx) const { return rates[snr_idx][target][tx]; }
};

// Ground-truth (delay bin, folded Doppler bin) per (tx, target).
struct TruthCell {
    int delay_bin = 0;
    int doppler_bin = 0;
};
std::vector<TruthCell> ground_truth_cells(const Scenario& s, int receiver_index);

TrialResult run_trial(const Scenario& s, int receiver_index, double snr_db,
                      Method method, std::uint64_t rng_seed, double pfa = 1e-4,
                      int max_passes = 8);

DetectionRateTable sweep(const Scenario& s, int receiver_index,
                         const std::vector<double>& snr_list, int trials,
                         Method method, std::uint64_t base_seed, double pfa = 1e-4,
                         int max_passes = 8);

// CSV header: snr_db,target,tx,rate with aggregate rows tx=any / tx=all.
// out_plot, when non-empty, gets a PNG line plot of rate vs SNR per target
// (the any-waveform aggregate).
void emit_results(const DetectionRateTable& table, const std::string& out_csv,
                  const std::string& out_plot = "");

DetectionRateTable parse_results_csv(const std::string& path);

// Fast invariant suite used by the `selftest` CLI subcommand. Returns the
// number of failed checks and prints one line per check.
int selftest();

int worker_count();  // min(hardware, ZCRADAR_THREADS)

} // namespace zcradar
