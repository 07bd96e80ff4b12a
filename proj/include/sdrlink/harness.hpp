#ifndef SDRLINK_HARNESS_HPP
#define SDRLINK_HARNESS_HPP

#include "sdrlink/cavity.hpp"
#include "sdrlink/channel.hpp"
#include "sdrlink/emg.hpp"
#include "sdrlink/rx.hpp"
#include "sdrlink/tx.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sdrlink {

// INI-style config: `[section]` headers, `key = value` lines, `#` comments.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

ConfigMap parse_config(const std::string& text);
ConfigMap load_config_file(const std::string& path);

struct EmgScenario {
    double fs_hz = 2048.0;
    std::size_t window_len = 512;   // power of two
    std::size_t n_coeffs = 256;
    std::size_t train_per_class = 200;
    std::size_t test_per_class = 500;
    std::vector<Command> commands{Command::sit, Command::stand, Command::sleep};
    double tilt_threshold_deg = 15.0;
    long tilt_event_window = -1;    // window index of an injected excursion, -1 = none
    double tilt_event_deg = 25.0;
};

struct ExperimentConfig {
    TxConfig tx;
    ChannelConfig channel;
    RxConfig rx;
    EmgScenario emg;
    std::vector<CavitySpec> cavities;
    std::vector<ModeIndices> modes;
    std::size_t frames = 100;
    std::uint64_t seed = 1;
    std::string output_dir = ".";
};

// Validates and converts; error messages carry "[section].key" field paths.
ExperimentConfig build_experiment(const ConfigMap& cfg);

// FNV-1a over the canonicalized (sorted) key/value view of the config.
std::uint64_t config_hash(const ConfigMap& cfg);

struct LinkReport {
    double ber = 0.0;
    double fer = 0.0;
    std::size_t frames_sent = 0;
    std::size_t frames_detected = 0;
    std::size_t payload_bits_checked = 0;
    std::size_t payload_bit_errors = 0;
    double residual_cfo_hz = 0.0;
    bool timing_lock_lost = false;
    double wall_clock_s = 0.0;
};

// TX -> channel -> RX for cfg.frames frames; deterministic per seed.
LinkReport run_link(const ExperimentConfig& cfg);

// One LinkReport row per Eb/N0 point (>= 2 points required); the last column
// annotates the monotone-BER check against the previous row.
std::string sweep_ebn0(const ExperimentConfig& cfg, const std::vector<double>& points_db);

// QosReport per (cavity, mode) cell plus the closed-form vs quadrature
// agreement column.
std::string qos_sweep(const std::vector<CavitySpec>& specs,
                      const std::vector<ModeIndices>& modes);
std::string qos_sweep_json(const std::vector<CavitySpec>& specs,
                           const std::vector<ModeIndices>& modes);

struct EmgDemoResult {
    std::string timeline_csv;
    double classifier_accuracy = 0.0; // held-out, before transport
    double end_to_end_accuracy = 0.0; // after the simulated link
    double link_ber = 0.0;
};

// Trains on a seeded corpus, classifies held-out windows, carries each
// decision over the simulated link, and logs decisions plus safety events.
EmgDemoResult run_emg_demo(const ExperimentConfig& cfg);

// Closed-form QPSK bit error rate oracle: 0.5 * erfc(sqrt(Eb/N0)).
double qpsk_ber_theory(double ebn0_db);

// Header comment lines stamped onto every emitted artifact.
std::string artifact_header(const ConfigMap& cfg, std::uint64_t seed);

} // namespace sdrlink

#endif
