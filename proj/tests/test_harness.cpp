#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zcradar/harness.hpp"
#include "zcradar/pngio.hpp"

#include "oracles.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>

using namespace zcradar;

namespace {

Scenario nearfar_scenario() {
    return load_scenario(std::string(ZCRADAR_SCENARIO_DIR) + "/nearfar.json");
}

Scenario lone_target_scene() {
    Scenario s;
    s.n = 1024;
    s.eta = 4;
    s.transmitters.push_back({{0, 0, 0}, 500.0, 1});
    s.transmitters.push_back({{3000, 0, 0}, 500.0, 3});
    s.receivers.push_back({{0, 8000, 0}});
    s.targets.push_back({{1500, 2500, 1500}, {150, 0, 0}, 1.0});
    return s;
}

} // namespace

TEST_CASE("method names round-trip") {
    CHECK(method_from_name("raw") == Method::raw);
    CHECK(method_from_name("sc-time") == Method::sc_time);
    CHECK(method_from_name("sc-dcft") == Method::sc_dcft);
    CHECK(std::string(method_name(Method::sc_dcft)) == "sc-dcft");
    CHECK_THROWS_AS(method_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("lone strong target: hit matrix all true at high SNR") {
    Scenario s = lone_target_scene();
    TrialResult r = run_trial(s, 0, 30.0, Method::raw, 1);
    REQUIRE(r.num_targets == 1);
    REQUIRE(r.num_tx == 2);
    CHECK(r.hit(0, 0));
    CHECK(r.hit(0, 1));
}

TEST_CASE("noise-dominated trials have chance-level hit rates") {
    Scenario s = lone_target_scene();
    int hits = 0;
    for (int t = 0; t < 20; ++t) {
        TrialResult r = run_trial(s, 0, -40.0, Method::raw, 100 + t);
        if (r.hit(0, 0) || r.hit(0, 1)) ++hits;
    }
    CHECK(hits <= 2);
}

TEST_CASE("run_trial is deterministic under a fixed seed") {
    Scenario s = lone_target_scene();
    TrialResult a = run_trial(s, 0, 10.0, Method::sc_dcft, 77);
    TrialResult b = run_trial(s, 0, 10.0, Method::sc_dcft, 77);
    CHECK(a.hits == b.hits);
}

TEST_CASE("sweep aggregates obey all <= per-tx <= any") {
    Scenario s = lone_target_scene();
    DetectionRateTable t =
        sweep(s, 0, {0.0, 10.0, 20.0}, 30, Method::sc_dcft, 500);
    REQUIRE(t.snr_grid.size() == 3);
    for (std::size_t si = 0; si < t.snr_grid.size(); ++si) {
        for (int q = 0; q < t.num_targets; ++q) {
            for (int i = 0; i < t.num_tx; ++i) {
                CHECK(t.rate_all[si][q] <= t.rates[si][q][i] + 1e-12);
                CHECK(t.rates[si][q][i] <= t.rate_any[si][q] + 1e-12);
            }
            CHECK(t.rate_any[si][q] >= 0.0);
            CHECK(t.rate_any[si][q] <= 1.0);
        }
    }
}

TEST_CASE("single SNR, single trial gives 0/1 rates") {
    Scenario s = lone_target_scene();
    DetectionRateTable t = sweep(s, 0, {25.0}, 1, Method::raw, 7);
    for (int i = 0; i < t.num_tx; ++i) {
        double r = t.rates[0][0][i];
        CHECK((r == 0.0 || r == 1.0));
    }
}

TEST_CASE("sweep determinism under a fixed base seed") {
    Scenario s = lone_target_scene();
    DetectionRateTable a = sweep(s, 0, {8.0}, 20, Method::sc_time, 42);
    DetectionRateTable b = sweep(s, 0, {8.0}, 20, Method::sc_time, 42);
    CHECK(a.rates == b.rates);
    CHECK(a.rate_any == b.rate_any);
    CHECK(a.rate_all == b.rate_all);
}

TEST_CASE("emit_results writes CSV that parses back exactly") {
    Scenario s = lone_target_scene();
    DetectionRateTable t = sweep(s, 0, {5.0, 15.0}, 10, Method::raw, 9);
    const std::string csv = "test_harness_rates.csv";
    emit_results(t, csv);
    DetectionRateTable r = parse_results_csv(csv);
    CHECK(r.snr_grid == t.snr_grid);
    CHECK(r.rates == t.rates);
    CHECK(r.rate_any == t.rate_any);
    CHECK(r.rate_all == t.rate_all);
    std::remove(csv.c_str());
}

TEST_CASE("empty table: header-only CSV") {
    DetectionRateTable t;
    const std::string csv = "test_harness_empty.csv";
    emit_results(t, csv);
    std::ifstream in(csv);
    std::string line;
    CHECK(std::getline(in, line));
    CHECK(line == "snr_db,target,tx,rate");
    CHECK(!std::getline(in, line));
    in.close();
    std::remove(csv.c_str());
}

TEST_CASE("plot file is a well-formed PNG") {
    Scenario s = lone_target_scene();
    DetectionRateTable t = sweep(s, 0, {0.0, 10.0, 20.0}, 5, Method::raw, 3);
    const std::string csv = "test_harness_plot.csv";
    const std::string png = "test_harness_plot.png";
    emit_results(t, csv, png);

    std::ifstream in(png, std::ios::binary);
    REQUIRE(in.good());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(data.size() > 100);
    const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    CHECK(std::memcmp(data.data(), sig, 8) == 0);

    // walk the chunks, verifying each CRC, until IEND
    std::size_t pos = 8;
    bool saw_iend = false;
    while (pos + 12 <= data.size()) {
        std::uint32_t len = 0;
        for (int i = 0; i < 4; ++i)
            len = (len << 8) | static_cast<unsigned char>(data[pos + i]);
        REQUIRE(pos + 12 + len <= data.size());
        std::uint32_t stored = 0;
        for (int i = 0; i < 4; ++i)
            stored = (stored << 8) | static_cast<unsigned char>(data[pos + 8 + len + i]);
        std::uint32_t computed = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(data.data() + pos + 4), len + 4));
        CHECK(stored == computed);
        if (std::memcmp(data.data() + pos + 4, "IEND", 4) == 0) saw_iend = true;
        pos += 12 + len;
    }
    CHECK(saw_iend);
    std::remove(csv.c_str());
    std::remove(png.c_str());
}

TEST_CASE("ground-truth cells match the echo parameters") {
    Scenario s = nearfar_scenario();
    auto truth = ground_truth_cells(s, 0);
    auto echoes = enumerate_echoes(s, 0);
    REQUIRE(truth.size() == echoes.size());
    for (const auto& e : echoes) {
        const TruthCell& c = truth[e.tx_index * s.targets.size() + e.target_index];
        CHECK(c.delay_bin == e.delay_samples);
        long long d = std::llround(e.normalized_doppler * s.n * s.eta);
        CHECK(c.doppler_bin == ((d % s.eta) + s.eta) % s.eta);
    }
}

TEST_CASE("selftest passes") { CHECK(selftest() == 0); }
