#include "zcradar/scene.hpp"

#include "zcradar/zcseq.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace zcradar {

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 unit(const Vec3& v) {
    double d = norm(v);
    if (d <= 0.0)
        throw std::invalid_argument("unit: zero-length vector (coincident points)");
    return {v.x / d, v.y / d, v.z / d};
}

void Scenario::validate() const {
    if (carrier_hz <= 0.0 || bandwidth_hz <= 0.0)
        throw std::invalid_argument("scenario: carrier_hz and bandwidth_hz must be positive");
    if (n < 8 || !is_pow2(static_cast<std::size_t>(n)))
        throw std::invalid_argument("scenario: n must be a power of two >= 8");
    if (eta < 1)
        throw std::invalid_argument("scenario: eta must be >= 1");
    if (transmitters.empty())
        throw std::invalid_argument("scenario: at least one transmitter required");
    if (receivers.empty())
        throw std::invalid_argument("scenario: at least one receiver required");
    if (band_limit_fraction <= 0.0 || band_limit_fraction > 1.0)
        throw std::invalid_argument("scenario: band_limit_fraction must be in (0, 1]");
    std::set<int> seeds;
    for (const auto& tx : transmitters) {
        if (!is_valid_seed(tx.seed, n))
            throw std::invalid_argument("scenario: invalid seed " + std::to_string(tx.seed));
        if (!seeds.insert(tx.seed).second)
            throw std::invalid_argument("scenario: duplicate seed " + std::to_string(tx.seed));
        if (tx.power_w <= 0.0)
            throw std::invalid_argument("scenario: power_w must be positive");
    }
    for (const auto& t : targets)
        if (t.rcs_m2 <= 0.0)
            throw std::invalid_argument("scenario: rcs_m2 must be positive");
}

namespace {

using nlohmann::json;

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("scenario: expected [x,y,z] array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

} // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    json j = json::parse(in);

    Scenario s;
    s.carrier_hz = j.at("carrier_hz").get<double>();
    s.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    s.n = j.at("n").get<int>();
    s.eta = j.at("eta").get<int>();
    s.band_limit_fraction = j.value("band_limit_fraction", 1.0);
    for (const auto& jt : j.at("transmitters")) {
        Transmitter tx;
        tx.position = vec3_from(jt.at("position"));
        tx.power_w = jt.at("power_w").get<double>();
        tx.seed = jt.at("seed").get<int>();
        s.transmitters.push_back(tx);
    }
    for (const auto& jr : j.at("receivers")) {
        Receiver rx;
        rx.position = vec3_from(jr.at("position"));
        s.receivers.push_back(rx);
    }
    if (j.contains("targets")) {
        for (const auto& jt : j.at("targets")) {
            Target t;
            t.position = vec3_from(jt.at("position"));
            t.velocity = vec3_from(jt.at("velocity"));
            t.rcs_m2 = jt.at("rcs_m2").get<double>();
            s.targets.push_back(t);
        }
    }
    s.validate();
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    json j;
    j["carrier_hz"] = s.carrier_hz;
    j["bandwidth_hz"] = s.bandwidth_hz;
    j["n"] = s.n;
    j["eta"] = s.eta;
    if (s.band_limit_fraction < 1.0)
        j["band_limit_fraction"] = s.band_limit_fraction;
    j["transmitters"] = json::array();
    for (const auto& tx : s.transmitters)
        j["transmitters"].push_back({{"position", vec3_to(tx.position)},
                                     {"power_w", tx.power_w},
                                     {"seed", tx.seed}});
    j["receivers"] = json::array();
    for (const auto& rx : s.receivers)
        j["receivers"].push_back({{"position", vec3_to(rx.position)}});
    j["targets"] = json::array();
    for (const auto& t : s.targets)
        j["targets"].push_back({{"position", vec3_to(t.position)},
                                {"velocity", vec3_to(t.velocity)},
                                {"rcs_m2", t.rcs_m2}});
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write scenario file: " + path);
    out << j.dump(2) << "\n";
}

std::int64_t bistatic_delay_samples(const Vec3& tx_pos, const Vec3& tgt_pos,
                                    const Vec3& rx_pos, double fs) {
    if (fs <= 0.0)
        throw std::invalid_argument("bistatic_delay_samples: fs must be positive");
    double rt = norm(tgt_pos - tx_pos);
    double rr = norm(rx_pos - tgt_pos);
    if (rt <= 0.0 || rr <= 0.0)
        throw std::invalid_argument("bistatic_delay_samples: target coincides with an antenna");
    return std::llround((rt + rr) / kSpeedOfLight * fs);
}

double normalized_doppler(const Vec3& tx_pos, const Vec3& tgt_pos, const Vec3& tgt_vel,
                          const Vec3& rx_pos, double carrier_hz, double fs) {
    double rdot_t = dot(tgt_vel, unit(tgt_pos - tx_pos));
    double rdot_r = dot(tgt_vel, unit(tgt_pos - rx_pos));
    double lambda = kSpeedOfLight / carrier_hz;
    return -(rdot_t + rdot_r) / lambda / fs;
}

cdouble reflection_amplitude(const Vec3& tx_pos, const Vec3& tgt_pos, const Vec3& rx_pos,
                             double carrier_hz, double power_w, double rcs_m2) {
    double rt = norm(tgt_pos - tx_pos);
    double rr = norm(rx_pos - tgt_pos);
    if (rt <= 0.0 || rr <= 0.0)
        throw std::invalid_argument("reflection_amplitude: zero range");
    double lambda = kSpeedOfLight / carrier_hz;
    double mag = std::sqrt(power_w * lambda * lambda * rcs_m2 /
                           (std::pow(4.0 * M_PI, 3) * rt * rt * rr * rr));
    // phase from total path length, reduced mod one wavelength before the
    // 2*pi multiply to keep precision at long ranges
    double frac = std::fmod((rt + rr) / lambda, 1.0);
    double ang = -2.0 * M_PI * frac;
    return {mag * std::cos(ang), mag * std::sin(ang)};
}

std::vector<Echo> enumerate_echoes(const Scenario& s, int receiver_index) {
    if (receiver_index < 0 || receiver_index >= static_cast<int>(s.receivers.size()))
        throw std::invalid_argument("enumerate_echoes: receiver index out of range");
    const Vec3& rxp = s.receivers[receiver_index].position;
    std::vector<Echo> echoes;
    for (int i = 0; i < static_cast<int>(s.transmitters.size()); ++i) {
        const auto& tx = s.transmitters[i];
        for (int q = 0; q < static_cast<int>(s.targets.size()); ++q) {
            const auto& tgt = s.targets[q];
            Echo e;
            e.tx_index = i;
            e.target_index = q;
            std::int64_t l = bistatic_delay_samples(tx.position, tgt.position, rxp,
                                                    s.bandwidth_hz);
            e.delay_samples = static_cast<int>(((l % s.n) + s.n) % s.n);
            e.normalized_doppler = normalized_doppler(tx.position, tgt.position, tgt.velocity,
                                                      rxp, s.carrier_hz, s.bandwidth_hz);
            if (std::abs(e.normalized_doppler) >= 0.5)
                throw std::invalid_argument("enumerate_echoes: normalized Doppler out of range");
            e.amplitude = reflection_amplitude(tx.position, tgt.position, rxp,
                                               s.carrier_hz, tx.power_w, tgt.rcs_m2);
            echoes.push_back(e);
        }
    }
    return echoes;
}

std::vector<cdouble> band_limit(std::span<const cdouble> x, double fraction) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw std::invalid_argument("band_limit: fraction must be in (0, 1]");
    const int len = static_cast<int>(x.size());
    if (fraction == 1.0)
        return std::vector<cdouble>(x.begin(), x.end());
    int keep = static_cast<int>(std::lround(fraction * len));
    int lo = -(keep / 2);
    int hi = lo + keep - 1;
    std::vector<cdouble> spec = fft(x);
    for (int f = 0; f < len; ++f) {
        int signed_f = f < (len + 1) / 2 ? f : f - len;
        if (signed_f < lo || signed_f > hi)
            spec[f] = 0.0;
    }
    ifft_inplace(spec);
    return spec;
}

std::vector<cdouble> transmit_waveform(const Scenario& s, int tx_index) {
    if (tx_index < 0 || tx_index >= static_cast<int>(s.transmitters.size()))
        throw std::invalid_argument("transmit_waveform: tx index out of range");
    ZcSequence seq = generate_zc(s.transmitters[tx_index].seed, s.n);
    if (s.band_limit_fraction < 1.0)
        return band_limit(seq.samples, s.band_limit_fraction);
    return std::move(seq.samples);
}

std::uint64_t GaussianRng::splitmix() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double GaussianRng::uniform() {
    return static_cast<double>(splitmix() >> 11) * 0x1.0p-53;
}

double GaussianRng::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(2.0 * M_PI * u2);
    return r * std::cos(2.0 * M_PI * u2);
}

namespace {

std::vector<cdouble> synthesize_clean(const Scenario& s, int receiver_index) {
    const int len = s.coherent_length();
    std::vector<cdouble> clean(len, cdouble{0.0, 0.0});
    std::vector<std::vector<cdouble>> waveforms(s.transmitters.size());
    for (int i = 0; i < static_cast<int>(s.transmitters.size()); ++i)
        waveforms[i] = transmit_waveform(s, i);

    for (const Echo& e : enumerate_echoes(s, receiver_index)) {
        const auto& wf = waveforms[e.tx_index];
        const double w = 2.0 * M_PI * e.normalized_doppler;
        const cdouble rot_step{std::cos(w), std::sin(w)};
        cdouble rot{1.0, 0.0};
        for (int n = 0; n < len; ++n) {
            int idx = (n - e.delay_samples) % s.n;
            if (idx < 0) idx += s.n;
            clean[n] += e.amplitude * wf[idx] * rot;
            rot *= rot_step;
            // renormalize the running phasor to stop drift over eta*n samples
            if ((n & 0x3ff) == 0x3ff)
                rot /= std::abs(rot);
        }
    }
    return clean;
}

ReceivedSignal add_noise(std::vector<cdouble> clean, double noise_power,
                         std::uint64_t rng_seed) {
    ReceivedSignal out;
    out.noise_power = noise_power;
    out.clean = std::move(clean);
    out.samples = out.clean;
    GaussianRng rng(rng_seed);
    const double scale = std::sqrt(noise_power / 2.0);
    for (auto& v : out.samples)
        v += cdouble{scale * rng.next(), scale * rng.next()};
    return out;
}

} // namespace

ReceivedSignal synthesize_received(const Scenario& s, int receiver_index,
                                   double snr_db, std::uint64_t rng_seed) {
    s.validate();
    std::vector<cdouble> clean = synthesize_clean(s, receiver_index);
    double p_clean = 0.0;
    for (const auto& v : clean) p_clean += std::norm(v);
    p_clean /= static_cast<double>(clean.size());
    if (p_clean <= 0.0)
        throw std::invalid_argument(
            "synthesize_received: clean signal is zero; SNR undefined, use "
            "synthesize_received_noise_power instead");
    double noise_power = p_clean / std::pow(10.0, snr_db / 10.0);
    return add_noise(std::move(clean), noise_power, rng_seed);
}

ReceivedSignal synthesize_received_noise_power(const Scenario& s, int receiver_index,
                                               double noise_power, std::uint64_t rng_seed) {
    s.validate();
    if (noise_power < 0.0)
        throw std::invalid_argument("synthesize_received_noise_power: negative noise power");
    return add_noise(synthesize_clean(s, receiver_index), noise_power, rng_seed);
}

} // namespace zcradar
