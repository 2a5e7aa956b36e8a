// zcradar command-line front end.
//
//   gen-zc    emit one Zadoff-Chu sequence as CSV
//   dcft      forward/inverse chirp transform of a CSV signal
//   rdmap     range-Doppler map of a synthesized scene (CSV or PNG)
//   detect    run one detector on a synthesized scene
//   sweep     Monte-Carlo detection-rate sweep over SNR
//   selftest  fast invariant checks

#include "zcradar/canceller.hpp"
#include "zcradar/dcft.hpp"
#include "zcradar/harness.hpp"
#include "zcradar/pngio.hpp"
#include "zcradar/rdmap.hpp"
#include "zcradar/scene.hpp"
#include "zcradar/zcseq.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace zcradar;

std::vector<cdouble> read_complex_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::vector<cdouble> data;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!line.empty() && !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-'))
            continue;  // header
        std::stringstream ss(line);
        std::string idx, re, im;
        std::getline(ss, idx, ',');
        std::getline(ss, re, ',');
        std::getline(ss, im, ',');
        data.emplace_back(std::stod(re), std::stod(im));
    }
    return data;
}

void write_complex_csv(const std::string& path, const char* index_name,
                       std::span<const cdouble> data) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << index_name << ",re,im\n" << std::setprecision(17);
    for (std::size_t i = 0; i < data.size(); ++i)
        out << i << ',' << data[i].real() << ',' << data[i].imag() << '\n';
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-wave distributed-radar detection simulator"};
    app.require_subcommand(1);

    // gen-zc
    auto* gen = app.add_subcommand("gen-zc", "generate a Zadoff-Chu sequence");
    int gz_seed = 1, gz_length = 2048;
    std::string gz_out = "zc.csv";
    gen->add_option("--seed", gz_seed, "sequence seed u (odd)")->required();
    gen->add_option("--length", gz_length, "sequence length N (power of two)")->required();
    gen->add_option("--out", gz_out, "output CSV path")->required();

    // dcft
    auto* dc = app.add_subcommand("dcft", "chirp transform of a CSV signal");
    std::string dc_in, dc_out = "dcft.csv";
    int dc_beta = 0;
    bool dc_inverse = false;
    dc->add_option("--in", dc_in, "input CSV (index,re,im)")->required();
    dc->add_option("--beta", dc_beta, "chirp rate")->required();
    dc->add_flag("--inverse", dc_inverse, "apply the inverse transform");
    dc->add_option("--out", dc_out, "output CSV path")->required();

    // rdmap
    auto* rd = app.add_subcommand("rdmap", "range-Doppler map of a synthesized scene");
    std::string rd_scenario, rd_out = "rdmap.csv";
    int rd_rx = 0, rd_tx = 0;
    double rd_snr = 20.0;
    std::uint64_t rd_seed = 1;
    rd->add_option("--scenario", rd_scenario, "scenario JSON")->required();
    rd->add_option("--rx", rd_rx, "receiver index");
    rd->add_option("--tx", rd_tx, "transmitter index");
    rd->add_option("--snr-db", rd_snr, "composite SNR in dB");
    rd->add_option("--seed", rd_seed, "noise RNG seed");
    rd->add_option("--out", rd_out, "output path (.csv or .png)");

    // detect
    auto* de = app.add_subcommand("detect", "run one detector on a synthesized scene");
    std::string de_scenario, de_method = "sc-dcft", de_out = "detections.csv";
    int de_rx = 0, de_passes = 8;
    double de_snr = 20.0, de_pfa = 1e-4;
    std::uint64_t de_seed = 1;
    de->add_option("--scenario", de_scenario, "scenario JSON")->required();
    de->add_option("--rx", de_rx, "receiver index");
    de->add_option("--method", de_method, "raw | sc-time | sc-dcft");
    de->add_option("--snr-db", de_snr, "composite SNR in dB");
    de->add_option("--pfa", de_pfa, "per-cell false-alarm probability");
    de->add_option("--seed", de_seed, "noise RNG seed");
    de->add_option("--max-passes", de_passes, "cancellation pass limit");
    de->add_option("--out", de_out, "output CSV path");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Monte-Carlo detection-rate sweep");
    std::string sw_scenario, sw_method = "sc-dcft", sw_list = "0,5,10,15,20";
    std::string sw_csv = "rates.csv", sw_plot;
    int sw_rx = 0, sw_trials = 2000, sw_passes = 8;
    double sw_pfa = 1e-4;
    std::uint64_t sw_base = 1;
    sw->add_option("--scenario", sw_scenario, "scenario JSON")->required();
    sw->add_option("--rx", sw_rx, "receiver index");
    sw->add_option("--method", sw_method, "raw | sc-time | sc-dcft");
    sw->add_option("--snr-db-list", sw_list, "comma-separated SNR grid");
    sw->add_option("--trials", sw_trials, "Monte-Carlo trials per SNR (default 2000)");
    sw->add_option("--pfa", sw_pfa, "per-cell false-alarm probability");
    sw->add_option("--base-seed", sw_base, "trial t uses seed base+t");
    sw->add_option("--out-csv", sw_csv, "rates CSV path");
    sw->add_option("--out-plot", sw_plot, "optional PNG plot path");

    auto* st = app.add_subcommand("selftest", "run the fast invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            ZcSequence z = generate_zc(gz_seed, gz_length);
            write_complex_csv(gz_out, "n", z.samples);
            std::cout << "wrote " << gz_out << " (" << gz_length << " samples)\n";
        } else if (dc->parsed()) {
            std::vector<cdouble> x = read_complex_csv(dc_in);
            if (dc_inverse) {
                ChirpSpectrum spec;
                spec.coefficients = std::move(x);
                spec.length = static_cast<int>(spec.coefficients.size());
                spec.chirp_rate = dc_beta;
                std::vector<cdouble> samples = idcft(spec);
                write_complex_csv(dc_out, "k", samples);
            } else {
                ChirpSpectrum spec = dcft(x, dc_beta);
                write_complex_csv(dc_out, "k", spec.coefficients);
            }
            std::cout << "wrote " << dc_out << "\n";
        } else if (rd->parsed()) {
            Scenario s = load_scenario(rd_scenario);
            ReceivedSignal sig = synthesize_received(s, rd_rx, rd_snr, rd_seed);
            RangeDopplerMap map =
                range_doppler_map(sig.samples, transmit_waveform(s, rd_tx), s.eta, rd_tx);
            if (rd_out.size() > 4 && rd_out.substr(rd_out.size() - 4) == ".png") {
                std::vector<double> mags(map.cells.size());
                for (std::size_t i = 0; i < map.cells.size(); ++i)
                    mags[i] = std::abs(map.cells[i]);
                write_magnitude_png(rd_out, map.n, map.eta, mags);
            } else {
                std::ofstream out(rd_out);
                if (!out) throw std::runtime_error("cannot write " + rd_out);
                out << "delay_bin,doppler_bin,magnitude\n" << std::setprecision(17);
                for (int l = 0; l < map.n; ++l)
                    for (int d = 0; d < map.eta; ++d)
                        out << l << ',' << d << ',' << std::abs(map.at(l, d)) << '\n';
            }
            std::cout << "wrote " << rd_out << "\n";
        } else if (de->parsed()) {
            Scenario s = load_scenario(de_scenario);
            ReceivedSignal sig = synthesize_received(s, de_rx, de_snr, de_seed);
            Method m = method_from_name(de_method);
            DetectionReport report;
            if (m == Method::raw)
                report = raw_detect(sig.samples, s, de_rx, de_pfa);
            else if (m == Method::sc_time)
                report = sc_time(sig.samples, s, de_rx, de_pfa, de_passes);
            else
                report = sc_dcft(sig.samples, s, de_rx, de_pfa, de_passes);
            std::ofstream out(de_out);
            if (!out) throw std::runtime_error("cannot write " + de_out);
            out << "pass,tx,delay_bin,doppler_bin,xi_hat,alpha_re,alpha_im,magnitude\n"
                << std::setprecision(17);
            for (const auto& e : report.detections)
                out << e.pass_index << ',' << e.detection.tx_index << ','
                    << e.detection.delay_bin << ',' << e.detection.doppler_bin << ','
                    << e.xi_hat << ',' << e.alpha_hat.real() << ',' << e.alpha_hat.imag()
                    << ',' << e.detection.peak_magnitude << '\n';
            std::cout << "wrote " << de_out << " (" << report.detections.size()
                      << " detections)\n";
        } else if (sw->parsed()) {
            Scenario s = load_scenario(sw_scenario);
            DetectionRateTable table =
                sweep(s, sw_rx, parse_double_list(sw_list), sw_trials,
                      method_from_name(sw_method), sw_base, sw_pfa, sw_passes);
            emit_results(table, sw_csv, sw_plot);
            std::cout << "wrote " << sw_csv;
            if (!sw_plot.empty()) std::cout << " and " << sw_plot;
            std::cout << "\n";
        } else if (st->parsed()) {
            return selftest() == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
