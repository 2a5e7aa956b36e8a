// Multistatic scene description and baseband synthesis.
//
// Received samples follow the continuous-wave model: each target echoes
// every transmit waveform with a bistatic delay (folded into the pulse,
// integer samples), a constant normalized Doppler in cycles/sample, and a
// deterministic complex amplitude from the bistatic radar equation with
// unit antenna gains. Noise is circular complex Gaussian sized either by
// composite SNR (clean-signal power over noise power) or by an absolute
// noise power.

#pragma once

#include "zcradar/fft.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace zcradar {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& v);
Vec3 unit(const Vec3& v);

struct Transmitter {
    Vec3 position;
    double power_w = 500.0;
    int seed = 1;
};

struct Receiver {
    Vec3 position;
};

struct Target {
    Vec3 position;
    Vec3 velocity;
    double rcs_m2 = 1.0;
};

struct Scenario {
    double carrier_hz = 500e6;
    double bandwidth_hz = 20e6;   // complex baseband sample rate
    int n = 2048;                 // samples per pulse
    int eta = 8;                  // pulses per coherent interval
    std::vector<Transmitter> transmitters;
    std::vector<Receiver> receivers;
    std::vector<Target> targets;
    double band_limit_fraction = 1.0;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    int coherent_length() const { return eta * n; }
    // Throws std::invalid_argument on any violated invariant (seed validity,
    // duplicate seeds, non-positive RCS/power, empty tx/rx lists, ...).
    void validate() const;
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

struct Echo {
    int tx_index = 0;
    int target_index = 0;
    int delay_samples = 0;        // folded into [0, n)
    double normalized_doppler = 0.0;  // cycles/sample, |.| < 0.5
    cdouble amplitude;
};

struct ReceivedSignal {
    std::vector<cdouble> samples;  // clean + noise, length eta*n
    std::vector<cdouble> clean;
    double noise_power = 0.0;      // per-sample variance of the complex noise
};

// Rounded bistatic delay in samples (not folded). Throws when the target
// coincides with the transmitter or receiver.
std::int64_t bistatic_delay_samples(const Vec3& tx_pos, const Vec3& tgt_pos,
                                    const Vec3& rx_pos, double fs);

// xi = -(rdot_t + rdot_r)/lambda/fs; positive when closing on both legs.
double normalized_doppler(const Vec3& tx_pos, const Vec3& tgt_pos, const Vec3& tgt_vel,
                          const Vec3& rx_pos, double carrier_hz, double fs);

// Bistatic radar equation with unit gains; deterministic phase
// -2*pi*(Rt+Rr)/lambda.
cdouble reflection_amplitude(const Vec3& tx_pos, const Vec3& tgt_pos, const Vec3& rx_pos,
                             double carrier_hz, double power_w, double rcs_m2);

// All (transmitter, target) echoes seen by one receiver.
std::vector<Echo> enumerate_echoes(const Scenario& s, int receiver_index);

// Transmit waveform of one transmitter: seed-u ZC sequence, band-limited
// when the scenario requests it.
std::vector<cdouble> transmit_waveform(const Scenario& s, int tx_index);

// Zeroes the outermost DFT bins, keeping round(fraction*length) bins
// around DC; inverse-transforms back. Idempotent.
std::vector<cdouble> band_limit(std::span<const cdouble> x, double fraction);

// Composite-SNR mode; throws if the clean signal is identically zero.
ReceivedSignal synthesize_received(const Scenario& s, int receiver_index,
                                   double snr_db, std::uint64_t rng_seed);
// Absolute-noise mode for scenes with no targets.
ReceivedSignal synthesize_received_noise_power(const Scenario& s, int receiver_index,
                                               double noise_power, std::uint64_t rng_seed);

// Deterministic standard-normal generator (Box-Muller over mt19937_64),
// used for reproducible noise across platforms.
class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : state_(seed) {}
    double next();

  private:
    double uniform();
    std::uint64_t splitmix();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace zcradar
