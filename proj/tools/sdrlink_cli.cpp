// Command-line front end: link simulations, Eb/N0 sweeps, cavity QoS sweeps,
// the EMG command demo, and config validation.
//
// Exit codes: 0 success, 2 configuration error, 3 acceptance-check failure.

#include "sdrlink/harness.hpp"
#include "sdrlink/waveform_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace sdrlink;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFail = 3;

ConfigMap load_or_default(const std::string& path) {
    if (path.empty()) return ConfigMap{};
    return load_config_file(path);
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

std::string link_report_csv(const ConfigMap& raw, const ExperimentConfig& cfg,
                            const LinkReport& r) {
    std::ostringstream os;
    os << artifact_header(raw, cfg.seed);
    os.precision(12);
    os << "ber,fer,frames_sent,frames_detected,bits_checked,bit_errors,"
          "residual_cfo_hz,timing_lock_lost\n";
    os << r.ber << ',' << r.fer << ',' << r.frames_sent << ',' << r.frames_detected
       << ',' << r.payload_bits_checked << ',' << r.payload_bit_errors << ','
       << r.residual_cfo_hz << ',' << (r.timing_lock_lost ? 1 : 0) << '\n';
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sdrlink: baseband link simulator and cavity QoS calculator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    app.add_option("-c,--config", config_path, "experiment config file (INI-style)");
    app.add_option("-o,--out", out_path, "output file (defaults to stdout)");

    long long frames_override = -1;
    long long seed_override = -1;
    double ebn0_override = std::numeric_limits<double>::quiet_NaN();

    auto* link = app.add_subcommand("link", "run one end-to-end link simulation");
    link->add_option("--frames", frames_override, "override [run].frames");
    link->add_option("--seed", seed_override, "override [run].seed");
    link->add_option("--ebn0", ebn0_override, "override [channel].ebn0_db");

    auto* sweep = app.add_subcommand("sweep", "Eb/N0 sweep, CSV output");
    std::vector<double> sweep_points{0.0, 4.0, 8.0, 12.0};
    sweep->add_option("--points", sweep_points, "Eb/N0 points in dB")->expected(-2);
    sweep->add_option("--frames", frames_override, "override [run].frames");
    sweep->add_option("--seed", seed_override, "override [run].seed");

    auto* qos = app.add_subcommand("qos", "cavity QoS sweep over [cavity] spec x modes");
    bool qos_json = false;
    qos->add_flag("--json", qos_json, "emit JSON instead of CSV");

    auto* emg = app.add_subcommand("emg", "EMG command demo over the simulated link");
    emg->add_option("--seed", seed_override, "override [run].seed");
    emg->add_option("--ebn0", ebn0_override, "override [channel].ebn0_db");

    auto* validate = app.add_subcommand("validate-config", "parse and validate a config");

    CLI11_PARSE(app, argc, argv);

    ConfigMap raw;
    ExperimentConfig cfg;
    try {
        raw = load_or_default(config_path);
        cfg = build_experiment(raw);
        if (frames_override > 0) cfg.frames = static_cast<std::size_t>(frames_override);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (!std::isnan(ebn0_override)) cfg.channel.ebn0_db = ebn0_override;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        std::string output;
        int rc = kExitOk;
        if (*link) {
            const LinkReport r = run_link(cfg);
            output = link_report_csv(raw, cfg, r);
        } else if (*sweep) {
            output = artifact_header(raw, cfg.seed) + sweep_ebn0(cfg, sweep_points);
        } else if (*qos) {
            output = qos_json ? qos_sweep_json(cfg.cavities, cfg.modes)
                              : artifact_header(raw, cfg.seed) +
                                    qos_sweep(cfg.cavities, cfg.modes);
            if (!qos_json) {
                // re-check the emission invariant Q_total <= min(Q_tx, Q_rx)
                for (const CavitySpec& s : cfg.cavities)
                    for (const ModeIndices& m : cfg.modes) {
                        const QosReport r = analyze_cavity(s, m);
                        if (r.q_total > std::min(r.q_tx, r.q_rx) * (1.0 + 1e-12))
                            rc = kExitCheckFail;
                    }
            }
        } else if (*emg) {
            const EmgDemoResult r = run_emg_demo(cfg);
            output = artifact_header(raw, cfg.seed) + r.timeline_csv;
            std::cerr << "classifier_accuracy=" << r.classifier_accuracy
                      << " end_to_end_accuracy=" << r.end_to_end_accuracy
                      << " link_ber=" << r.link_ber << "\n";
        } else if (*validate) {
            output = "ok: config hash " + std::to_string(config_hash(raw)) + "\n";
        }

        if (out_path.empty()) {
            std::cout << output;
        } else {
            write_text(out_path, output);
        }
        return rc;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
