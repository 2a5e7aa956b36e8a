#include "zcradar/harness.hpp"

#include "zcradar/dcft.hpp"
#include "zcradar/pngio.hpp"
#include "zcradar/zcseq.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace zcradar {

const char* method_name(Method m) {
    switch (m) {
        case Method::raw: return "raw";
        case Method::sc_time: return "sc-time";
        case Method::sc_dcft: return "sc-dcft";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "raw") return Method::raw;
    if (name == "sc-time" || name == "sc_time") return Method::sc_time;
    if (name == "sc-dcft" || name == "sc_dcft") return Method::sc_dcft;
    throw std::invalid_argument("unknown method: " + name);
}

int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ZCRADAR_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

std::vector<TruthCell> ground_truth_cells(const Scenario& s, int receiver_index) {
    const int n = s.n, eta = s.eta;
    std::vector<TruthCell> cells(s.transmitters.size() * s.targets.size());
    for (const Echo& e : enumerate_echoes(s, receiver_index)) {
        TruthCell c;
        c.delay_bin = e.delay_samples;
        long long d = std::llround(e.normalized_doppler * n * eta);
        c.doppler_bin = static_cast<int>(((d % eta) + eta) % eta);
        cells[static_cast<std::size_t>(e.tx_index) * s.targets.size() + e.target_index] = c;
    }
    return cells;
}

namespace {

int cyclic_distance(int a, int b, int period) {
    int d = ((a - b) % period + period) % period;
    return std::min(d, period - d);
}

} // namespace

TrialResult run_trial(const Scenario& s, int receiver_index, double snr_db,
                      Method method, std::uint64_t rng_seed, double pfa,
                      int max_passes) {
    ReceivedSignal rx = synthesize_received(s, receiver_index, snr_db, rng_seed);

    DetectionReport report;
    switch (method) {
        case Method::raw:
            report = raw_detect(rx.samples, s, receiver_index, pfa);
            break;
        case Method::sc_time:
            report = sc_time(rx.samples, s, receiver_index, pfa, max_passes);
            break;
        case Method::sc_dcft:
            report = sc_dcft(rx.samples, s, receiver_index, pfa, max_passes);
            break;
    }

    TrialResult result;
    result.snr_db = snr_db;
    result.method = method;
    result.num_targets = static_cast<int>(s.targets.size());
    result.num_tx = static_cast<int>(s.transmitters.size());
    result.hits.assign(static_cast<std::size_t>(result.num_targets) * result.num_tx, 0);

    std::vector<TruthCell> truth = ground_truth_cells(s, receiver_index);
    for (int q = 0; q < result.num_targets; ++q) {
        for (int i = 0; i < result.num_tx; ++i) {
            const TruthCell& t = truth[static_cast<std::size_t>(i) * result.num_targets + q];
            for (const ReportEntry& entry : report.detections) {
                if (entry.detection.tx_index != i) continue;
                if (cyclic_distance(entry.detection.delay_bin, t.delay_bin, s.n) <= 1 &&
                    cyclic_distance(entry.detection.doppler_bin, t.doppler_bin, s.eta) <= 1) {
                    result.hits[static_cast<std::size_t>(q) * result.num_tx + i] = 1;
                    break;
                }
            }
        }
    }
    return result;
}

DetectionRateTable sweep(const Scenario& s, int receiver_index,
                         const std::vector<double>& snr_list, int trials,
                         Method method, std::uint64_t base_seed, double pfa,
                         int max_passes) {
    if (trials < 1)
        throw std::invalid_argument("sweep: trials must be >= 1");
    s.validate();

    DetectionRateTable table;
    table.snr_grid = snr_list;
    table.trials = trials;
    table.num_targets = static_cast<int>(s.targets.size());
    table.num_tx = static_cast<int>(s.transmitters.size());

    const int k = table.num_targets, m = table.num_tx;
    const int cells = k * m;
    // hit counters per SNR: per-(target,tx) plus any/all per target
    std::vector<std::vector<std::atomic<long>>> counts(snr_list.size());
    std::vector<std::vector<std::atomic<long>>> counts_any(snr_list.size());
    std::vector<std::vector<std::atomic<long>>> counts_all(snr_list.size());
    for (std::size_t si = 0; si < snr_list.size(); ++si) {
        counts[si] = std::vector<std::atomic<long>>(cells);
        counts_any[si] = std::vector<std::atomic<long>>(k);
        counts_all[si] = std::vector<std::atomic<long>>(k);
    }

    const long total_jobs = static_cast<long>(snr_list.size()) * trials;
    std::atomic<long> next_job{0};
    auto worker = [&]() {
        for (;;) {
            long job = next_job.fetch_add(1);
            if (job >= total_jobs) break;
            const std::size_t si = static_cast<std::size_t>(job) / trials;
            const int t = static_cast<int>(job % trials);
            TrialResult r = run_trial(s, receiver_index, snr_list[si], method,
                                      base_seed + static_cast<std::uint64_t>(t), pfa,
                                      max_passes);
            r.trial_index = t;
            for (int q = 0; q < k; ++q) {
                bool any = false, all = true;
                for (int i = 0; i < m; ++i) {
                    bool h = r.hit(q, i);
                    any = any || h;
                    all = all && h;
                    if (h) counts[si][q * m + i].fetch_add(1);
                }
                if (any) counts_any[si][q].fetch_add(1);
                if (all) counts_all[si][q].fetch_add(1);
            }
        }
    };

    const int workers = std::min<long>(worker_count(), total_jobs);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    table.rates.resize(snr_list.size());
    table.rate_any.resize(snr_list.size());
    table.rate_all.resize(snr_list.size());
    for (std::size_t si = 0; si < snr_list.size(); ++si) {
        table.rates[si].assign(k, std::vector<double>(m, 0.0));
        table.rate_any[si].assign(k, 0.0);
        table.rate_all[si].assign(k, 0.0);
        for (int q = 0; q < k; ++q) {
            for (int i = 0; i < m; ++i)
                table.rates[si][q][i] =
                    static_cast<double>(counts[si][q * m + i].load()) / trials;
            table.rate_any[si][q] = static_cast<double>(counts_any[si][q].load()) / trials;
            table.rate_all[si][q] = static_cast<double>(counts_all[si][q].load()) / trials;
        }
    }
    return table;
}

void emit_results(const DetectionRateTable& table, const std::string& out_csv,
                  const std::string& out_plot) {
    std::ofstream out(out_csv);
    if (!out)
        throw std::runtime_error("cannot write " + out_csv);
    out << "snr_db,target,tx,rate\n";
    out.precision(17);
    for (std::size_t si = 0; si < table.snr_grid.size(); ++si) {
        for (int q = 0; q < table.num_targets; ++q) {
            for (int i = 0; i < table.num_tx; ++i)
                out << table.snr_grid[si] << ',' << q << ',' << i << ','
                    << table.rates[si][q][i] << '\n';
            out << table.snr_grid[si] << ',' << q << ",any," << table.rate_any[si][q] << '\n';
            out << table.snr_grid[si] << ',' << q << ",all," << table.rate_all[si][q] << '\n';
        }
    }
    out.close();

    if (!out_plot.empty()) {
        std::vector<std::vector<double>> curves(table.num_targets);
        for (int q = 0; q < table.num_targets; ++q)
            for (std::size_t si = 0; si < table.snr_grid.size(); ++si)
                curves[q].push_back(table.rate_any[si][q]);
        write_rate_plot(out_plot, table.snr_grid, curves);
    }
}

DetectionRateTable parse_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != "snr_db,target,tx,rate")
        throw std::runtime_error("bad results header in " + path);

    struct Row { double snr; int target; std::string tx; double rate; };
    std::vector<Row> rows;
    std::map<double, int> snr_index;
    int max_target = -1, max_tx = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f0, f1, f2, f3;
        std::getline(ss, f0, ','); std::getline(ss, f1, ',');
        std::getline(ss, f2, ','); std::getline(ss, f3, ',');
        Row r{std::stod(f0), std::stoi(f1), f2, std::stod(f3)};
        rows.push_back(r);
        snr_index.emplace(r.snr, 0);
        max_target = std::max(max_target, r.target);
        if (r.tx != "any" && r.tx != "all") max_tx = std::max(max_tx, std::stoi(r.tx));
    }

    DetectionRateTable table;
    for (auto& [snr, idx] : snr_index) {
        idx = static_cast<int>(table.snr_grid.size());
        table.snr_grid.push_back(snr);
    }
    table.num_targets = max_target + 1;
    table.num_tx = max_tx + 1;
    table.rates.assign(table.snr_grid.size(),
                       std::vector<std::vector<double>>(
                           table.num_targets, std::vector<double>(table.num_tx, 0.0)));
    table.rate_any.assign(table.snr_grid.size(),
                          std::vector<double>(table.num_targets, 0.0));
    table.rate_all.assign(table.snr_grid.size(),
                          std::vector<double>(table.num_targets, 0.0));
    for (const auto& r : rows) {
        int si = snr_index[r.snr];
        if (r.tx == "any")
            table.rate_any[si][r.target] = r.rate;
        else if (r.tx == "all")
            table.rate_all[si][r.target] = r.rate;
        else
            table.rates[si][r.target][std::stoi(r.tx)] = r.rate;
    }
    return table;
}

namespace {

bool check(const char* name, bool ok, int& failures) {
    std::cout << (ok ? "  ok   " : "  FAIL ") << name << "\n";
    if (!ok) ++failures;
    return ok;
}

} // namespace

int selftest() {
    int failures = 0;
    std::cout << "zcradar selftest\n";

    // ideal PACF
    {
        ZcSequence z = generate_zc(3, 256);
        auto p = periodic_correlation(z.samples, z.samples);
        bool ok = std::abs(p[0] - cdouble{256.0, 0.0}) < 1e-9;
        double worst = 0.0;
        for (std::size_t l = 1; l < p.size(); ++l) worst = std::max(worst, std::abs(p[l]));
        check("PACF is N*delta (N=256, u=3)", ok && worst < 1e-6, failures);
    }

    // PCCF bound spot checks
    {
        bool ok = true;
        for (auto [a, b] : {std::pair{1, 3}, {1, 5}, {3, 7}}) {
            auto za = generate_zc(a, 256), zb = generate_zc(b, 256);
            auto c = periodic_correlation(za.samples, zb.samples);
            double mx = 0.0;
            for (const auto& v : c) mx = std::max(mx, std::abs(v));
            ok = ok && std::abs(mx - pccf_peak_bound(256, a, b)) < 1e-6;
        }
        check("PCCF max equals sqrt(gcd(N,a-b)*N)", ok, failures);
    }

    // transform round trip + Parseval
    {
        std::mt19937_64 gen(42);
        std::normal_distribution<double> nd;
        std::vector<cdouble> x(256);
        for (auto& v : x) v = {nd(gen), nd(gen)};
        ChirpSpectrum spec = dcft(x, 17);
        auto back = idcft(spec);
        double err = 0.0, ex = 0.0, es = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            err = std::max(err, std::abs(back[i] - x[i]));
            ex += std::norm(x[i]);
            es += std::norm(spec.coefficients[i]);
        }
        check("DCFT round trip and Parseval (N=256)",
              err < 1e-10 && std::abs(es - ex) / ex < 1e-9, failures);
    }

    // matched impulse
    {
        ZcSequence z = generate_zc(3, 2048);
        auto delayed = delayed_zc(z, 5);
        ChirpSpectrum spec = dcft(delayed, 3);
        int argmax = 0;
        double best = 0.0, second = 0.0;
        for (int k = 0; k < 2048; ++k) {
            double m = std::abs(spec.coefficients[k]);
            if (m > best) { second = best; best = m; argmax = k; }
            else second = std::max(second, m);
        }
        check("matched chirp impulse at <u*l>_N",
              argmax == matched_peak_bin(3, 5, 2048) &&
                  std::abs(best - std::sqrt(2048.0)) < 1e-6 && second < 1e-6,
              failures);
    }

    // fast map equals brute force
    {
        std::mt19937_64 gen(7);
        std::normal_distribution<double> nd;
        const int n = 64, eta = 4;
        std::vector<cdouble> r(n * eta);
        for (auto& v : r) v = {nd(gen), nd(gen)};
        ZcSequence z = generate_zc(3, n);
        RangeDopplerMap map = range_doppler_map(r, z.samples, eta);
        double worst = 0.0, scale = 0.0;
        for (int l = 0; l < n; ++l) {
            for (int bf = 0; bf < eta; ++bf) {
                int d = bf < eta / 2 ? bf : bf - eta;
                cdouble acc{0.0, 0.0};
                for (int t = 0; t < n * eta; ++t) {
                    int idx = (t - l) % n;
                    if (idx < 0) idx += n;
                    double ang = -2.0 * M_PI * d * t / static_cast<double>(n * eta);
                    acc += r[t] * std::conj(z.samples[idx]) * cdouble{std::cos(ang), std::sin(ang)};
                }
                worst = std::max(worst, std::abs(acc - map.at(l, bf)));
                scale = std::max(scale, std::abs(acc));
            }
        }
        check("range-Doppler map equals brute-force double sum", worst / scale < 1e-8, failures);
    }

    // synthesis determinism
    {
        Scenario s;
        s.n = 256;
        s.eta = 2;
        s.transmitters.push_back({{0, 0, 0}, 500.0, 1});
        s.receivers.push_back({{5000, 0, 0}});
        s.targets.push_back({{2500, 100, 1000}, {100, 0, 0}, 1.0});
        auto r1 = synthesize_received(s, 0, 10.0, 99);
        auto r2 = synthesize_received(s, 0, 10.0, 99);
        check("synthesis deterministic under fixed seed", r1.samples == r2.samples, failures);
    }

    std::cout << (failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: FAILURES\n");
    return failures;
}

} // namespace zcradar
