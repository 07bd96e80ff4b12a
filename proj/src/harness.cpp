#include "sdrlink/harness.hpp"

#include "sdrlink/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sdrlink {

// ---- config --------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::string* find_key(const ConfigMap& cfg, const std::string& section,
                            const std::string& key) {
    const auto s = cfg.find(section);
    if (s == cfg.end()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
}

double get_double(const ConfigMap& cfg, const std::string& section,
                  const std::string& key, double fallback) {
    const std::string* v = find_key(cfg, section, key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("[" + section + "]." + key + ": not a number: '" + *v + "'");
    }
}

long long get_int(const ConfigMap& cfg, const std::string& section,
                  const std::string& key, long long fallback) {
    const std::string* v = find_key(cfg, section, key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("[" + section + "]." + key + ": not an integer: '" + *v + "'");
    }
}

std::string get_string(const ConfigMap& cfg, const std::string& section,
                       const std::string& key, const std::string& fallback) {
    const std::string* v = find_key(cfg, section, key);
    return v ? *v : fallback;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string cell;
    while (std::getline(is, cell, ',')) {
        cell = trim(cell);
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

} // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap cfg;
    std::istringstream is(text);
    std::string line;
    std::string section = "global";
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        cfg[section][key] = value;
    }
    return cfg;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return parse_config(os.str());
}

std::uint64_t config_hash(const ConfigMap& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0x1f;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [section, kv] : cfg) {
        mix(section);
        for (const auto& [k, v] : kv) {
            mix(k);
            mix(v);
        }
    }
    return h;
}

ExperimentConfig build_experiment(const ConfigMap& cfg) {
    ExperimentConfig e;

    const std::string mode = get_string(cfg, "tx", "mode", "single_carrier");
    if (mode == "single_carrier") {
        e.tx.mode = TxMode::single_carrier;
    } else if (mode == "cp_ofdm") {
        e.tx.mode = TxMode::cp_ofdm;
    } else {
        throw std::invalid_argument("[tx].mode: must be single_carrier or cp_ofdm");
    }
    e.tx.rolloff = get_double(cfg, "tx", "rolloff", 0.5);
    if (!(e.tx.rolloff > 0.0 && e.tx.rolloff <= 1.0))
        throw std::invalid_argument("[tx].rolloff: must be in (0, 1]");
    e.tx.sps = static_cast<int>(get_int(cfg, "tx", "sps", 2));
    e.tx.rrc_span_symbols = static_cast<int>(get_int(cfg, "tx", "rrc_span_symbols", 10));
    e.tx.symbol_rate_hz = get_double(cfg, "tx", "symbol_rate_hz", 100e3);
    if (!(e.tx.symbol_rate_hz > 0.0))
        throw std::invalid_argument("[tx].symbol_rate_hz: must be positive");
    e.tx.nfft = static_cast<std::size_t>(get_int(cfg, "tx", "nfft", 64));
    e.tx.cp_len = static_cast<std::size_t>(get_int(cfg, "tx", "cp_len", 16));
    if (e.tx.cp_len >= e.tx.nfft)
        throw std::invalid_argument("[tx].cp_len: must be smaller than [tx].nfft");
    e.tx.payload_bits_per_frame =
        static_cast<std::size_t>(get_int(cfg, "tx", "payload_bits_per_frame", 512));
    if (e.tx.payload_bits_per_frame % 2 != 0)
        throw std::invalid_argument("[tx].payload_bits_per_frame: must be even");
    e.tx.warmup_symbols =
        static_cast<std::size_t>(get_int(cfg, "tx", "warmup_symbols", 200));

    e.channel.ebn0_db = get_double(cfg, "channel", "ebn0_db", 1e9);
    e.channel.cfo_hz = get_double(cfg, "channel", "cfo_hz", 0.0);
    e.channel.phase_offset_rad = get_double(cfg, "channel", "phase_offset_rad", 0.0);
    e.channel.delay_samples = get_double(cfg, "channel", "delay_samples", 0.0);
    e.channel.drift_ppm = get_double(cfg, "channel", "drift_ppm", 0.0);
    if (std::abs(e.channel.drift_ppm) > 1000.0)
        throw std::invalid_argument("[channel].drift_ppm: |drift| must be <= 1000");

    e.rx.sample_rate_hz = e.tx.symbol_rate_hz * e.tx.sps;
    e.rx.symbol_rate_hz = e.tx.symbol_rate_hz;
    e.rx.rolloff = e.tx.rolloff;
    e.rx.rrc_span_symbols = e.tx.rrc_span_symbols;
    e.rx.sps = e.tx.sps;
    e.rx.payload_bits_per_frame = e.tx.payload_bits_per_frame;
    e.rx.cfc_nfft = static_cast<std::size_t>(get_int(cfg, "rx", "cfc_nfft", 4096));
    e.rx.frame_sync_threshold = get_double(cfg, "rx", "frame_sync_threshold", 0.6);
    e.rx.ffc.loop_bandwidth = get_double(cfg, "rx", "ffc_loop_bandwidth", 0.01);
    e.rx.ffc.damping = get_double(cfg, "rx", "ffc_damping", 0.7071067811865476);
    e.rx.timing.loop_bandwidth = get_double(cfg, "rx", "timing_loop_bandwidth", 0.005);
    e.rx.timing.damping = get_double(cfg, "rx", "timing_damping", 1.0);
    if (!(e.rx.ffc.loop_bandwidth > 0.0 && e.rx.ffc.loop_bandwidth <= 0.1))
        throw std::invalid_argument("[rx].ffc_loop_bandwidth: must be in (0, 0.1]");
    if (!(e.rx.timing.loop_bandwidth > 0.0 && e.rx.timing.loop_bandwidth <= 0.1))
        throw std::invalid_argument("[rx].timing_loop_bandwidth: must be in (0, 0.1]");

    e.emg.fs_hz = get_double(cfg, "emg", "fs_hz", 2048.0);
    e.emg.window_len = static_cast<std::size_t>(get_int(cfg, "emg", "window_len", 512));
    if ((e.emg.window_len & (e.emg.window_len - 1)) != 0 || e.emg.window_len == 0)
        throw std::invalid_argument("[emg].window_len: must be a power of two");
    e.emg.n_coeffs = static_cast<std::size_t>(get_int(cfg, "emg", "n_coeffs", 256));
    if (e.emg.n_coeffs == 0 || e.emg.n_coeffs > e.emg.window_len)
        throw std::invalid_argument("[emg].n_coeffs: must be in [1, window_len]");
    e.emg.train_per_class =
        static_cast<std::size_t>(get_int(cfg, "emg", "train_per_class", 200));
    e.emg.test_per_class =
        static_cast<std::size_t>(get_int(cfg, "emg", "test_per_class", 500));
    e.emg.tilt_threshold_deg = get_double(cfg, "emg", "tilt_threshold_deg", 15.0);
    e.emg.tilt_event_window = get_int(cfg, "emg", "tilt_event_window", -1);
    e.emg.tilt_event_deg = get_double(cfg, "emg", "tilt_event_deg", 25.0);
    if (const std::string* cmds = find_key(cfg, "emg", "commands")) {
        e.emg.commands.clear();
        for (const std::string& name : split_csv(*cmds)) {
            const auto c = command_from_name(name);
            if (!c || *c == Command::none)
                throw std::invalid_argument("[emg].commands: unknown command '" + name + "'");
            e.emg.commands.push_back(*c);
        }
        if (e.emg.commands.size() < 2)
            throw std::invalid_argument("[emg].commands: need at least two commands");
    }

    CavitySpec spec;
    spec.a = get_double(cfg, "cavity", "a", 0.1);
    spec.c = get_double(cfg, "cavity", "c", 0.05);
    spec.b = get_double(cfg, "cavity", "b", 0.1);
    spec.mu_r = get_double(cfg, "cavity", "mu_r", 1.0);
    spec.eps_r = get_double(cfg, "cavity", "eps_r", 1.0);
    spec.tan_delta = get_double(cfg, "cavity", "tan_delta", 1e-4);
    spec.rs_ohm = get_double(cfg, "cavity", "rs_ohm", 0.03);
    if (!(spec.a > 0.0 && spec.b > 0.0 && spec.c > 0.0))
        throw std::invalid_argument("[cavity].a/b/c: extents must be positive");
    if (!(spec.mu_r > 0.0 && spec.eps_r > 0.0))
        throw std::invalid_argument("[cavity].mu_r/eps_r: must be positive");
    if (spec.tan_delta < 0.0 || spec.rs_ohm < 0.0)
        throw std::invalid_argument("[cavity].tan_delta/rs_ohm: must be nonnegative");
    e.cavities = {spec};
    e.modes.clear();
    const std::string modes = get_string(cfg, "cavity", "modes", "101,102,103");
    for (const std::string& m : split_csv(modes)) {
        if (m.size() != 3 || m[0] != '1' || m[1] != '0' || !isdigit(m[2]) || m[2] == '0')
            throw std::invalid_argument("[cavity].modes: expected TE10l codes like 101, got '" + m + "'");
        e.modes.push_back(ModeIndices{1, 0, m[2] - '0'});
    }

    e.frames = static_cast<std::size_t>(get_int(cfg, "run", "frames", 100));
    if (e.frames == 0) throw std::invalid_argument("[run].frames: must be positive");
    e.seed = static_cast<std::uint64_t>(get_int(cfg, "run", "seed", 1));
    e.output_dir = get_string(cfg, "run", "output_dir", ".");
    return e;
}

// ---- link runner -----------------------------------------------------------

double qpsk_ber_theory(double ebn0_db) {
    return 0.5 * std::erfc(std::sqrt(std::pow(10.0, ebn0_db / 10.0)));
}

namespace {

struct FrameBits {
    std::vector<int> payload;
};

// pull the payload bits of a detected frame out of the RxOutput arrays
std::vector<int> rx_frame_payload(const RxOutput& rx, std::size_t frame_start,
                                  std::size_t payload_bits) {
    const std::size_t data_start = frame_start + 26;
    const std::size_t data_syms = (26 + payload_bits) / 2;
    std::vector<int> bits;
    bits.reserve(26 + payload_bits);
    for (std::size_t i = 0; i < data_syms; ++i) {
        bits.push_back(rx.bit1[data_start + i]);
        bits.push_back(rx.bit2[data_start + i]);
    }
    return {bits.begin() + 26, bits.end()}; // strip the header
}

} // namespace

LinkReport run_link(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    LinkReport rep;
    rep.frames_sent = cfg.frames;

    ChannelConfig ch = cfg.channel;
    ch.seed = derive_seed(cfg.seed, 0x10ad);

    const SampleBuffer tx_wave = transmit(cfg.seed, cfg.frames, cfg.tx);
    const SampleBuffer rx_wave = apply_channel(tx_wave, ch, 2, cfg.tx.sps);
    const RxOutput rx = receive(rx_wave, cfg.rx);

    rep.frames_detected = rx.frames_detected;
    rep.residual_cfo_hz = rx.residual_cfo_hz;
    rep.timing_lock_lost = rx.timing_lock_lost;

    const std::size_t frame_syms = frame_symbol_count(cfg.tx);
    const std::size_t payload_bits = cfg.tx.payload_bits_per_frame;

    // map detected frames onto sent frame indices by relative symbol position
    long long frame_idx = 0;
    std::size_t prev_pos = 0;
    bool first = true;
    std::size_t frames_ok = 0;
    for (std::size_t d = 0; d < rx.frame_starts.size(); ++d) {
        const std::size_t pos = rx.frame_starts[d];
        if (first) {
            frame_idx = 0;
            first = false;
        } else {
            const double adv =
                static_cast<double>(pos - prev_pos) / static_cast<double>(frame_syms);
            frame_idx += std::llround(adv);
        }
        prev_pos = pos;
        if (frame_idx < 0 || frame_idx >= static_cast<long long>(cfg.frames)) continue;
        const FramePayload sent = generate_frame_bits(
            cfg.seed, payload_bits, static_cast<std::uint64_t>(frame_idx));
        const std::vector<int> got = rx_frame_payload(rx, pos, payload_bits);
        std::size_t errs = 0;
        for (std::size_t i = 0; i < payload_bits; ++i)
            if (got[i] != sent.payload_bits[i]) ++errs;
        rep.payload_bits_checked += payload_bits;
        rep.payload_bit_errors += errs;
        if (errs == 0) ++frames_ok;
    }
    rep.ber = rep.payload_bits_checked
                  ? static_cast<double>(rep.payload_bit_errors) /
                        static_cast<double>(rep.payload_bits_checked)
                  : 0.0;
    rep.fer = 1.0 - static_cast<double>(frames_ok) / static_cast<double>(cfg.frames);
    rep.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string sweep_ebn0(const ExperimentConfig& cfg, const std::vector<double>& points_db) {
    if (points_db.size() < 2)
        throw std::invalid_argument("sweep_ebn0: need at least two Eb/N0 points");
    std::ostringstream os;
    os.precision(12);
    os << "ebn0_db,ber,fer,frames_sent,frames_detected,bits_checked,bit_errors,"
          "residual_cfo_hz,ber_theory,monotone_ok\n";
    double prev_ber = -1.0;
    std::size_t prev_bits = 0;
    for (double p : points_db) {
        ExperimentConfig c = cfg;
        c.channel.ebn0_db = p;
        const LinkReport r = run_link(c);
        int monotone_ok = 1;
        if (prev_ber >= 0.0) {
            // allow two binomial sigma of slack on top of the previous point
            const double sigma =
                prev_bits ? std::sqrt(std::max(prev_ber, 1e-12) / static_cast<double>(prev_bits))
                          : 0.0;
            monotone_ok = r.ber <= prev_ber + 2.0 * sigma ? 1 : 0;
        }
        os << p << ',' << r.ber << ',' << r.fer << ',' << r.frames_sent << ','
           << r.frames_detected << ',' << r.payload_bits_checked << ','
           << r.payload_bit_errors << ',' << r.residual_cfo_hz << ','
           << qpsk_ber_theory(p) << ',' << monotone_ok << '\n';
        prev_ber = r.ber;
        prev_bits = r.payload_bits_checked;
    }
    return os.str();
}

// ---- cavity sweep ------------------------------------------------------------

namespace {

struct QosRow {
    CavitySpec spec;
    ModeIndices mode;
    QosReport rep;
    double wall_loss_rel_err;
};

std::vector<QosRow> qos_rows(const std::vector<CavitySpec>& specs,
                             const std::vector<ModeIndices>& modes) {
    if (specs.empty() || modes.empty())
        throw std::invalid_argument("qos_sweep: empty (spec, mode) grid");
    std::vector<QosRow> rows;
    for (const CavitySpec& s : specs)
        for (const ModeIndices& m : modes) {
            QosRow row{s, m, analyze_cavity(s, m), 0.0};
            const FieldSolution sol = solve_te10l(m, s);
            const double closed = wall_loss(sol, s, m);
            const double quad = wall_loss_quadrature(sol, s, m, 32);
            row.wall_loss_rel_err =
                closed > 0.0 ? std::abs(closed - quad) / closed : 0.0;
            rows.push_back(row);
        }
    return rows;
}

} // namespace

std::string qos_sweep(const std::vector<CavitySpec>& specs,
                      const std::vector<ModeIndices>& modes) {
    std::ostringstream os;
    os.precision(12);
    os << "a_m,c_m,b_m,mu_r,eps_r,tan_delta,rs_ohm,m,n,l,f_hz,u_e_j,u_m_j,"
          "p_wall_w,sigma_s_per_m,q_tx,q_rx,q_total,wall_loss_quad_rel_err\n";
    for (const QosRow& r : qos_rows(specs, modes)) {
        os << r.spec.a << ',' << r.spec.c << ',' << r.spec.b << ',' << r.spec.mu_r
           << ',' << r.spec.eps_r << ',' << r.spec.tan_delta << ',' << r.spec.rs_ohm
           << ',' << r.mode.m << ',' << r.mode.n << ',' << r.mode.l << ','
           << r.rep.f_mnl_hz << ',' << r.rep.u_electric_j << ',' << r.rep.u_magnetic_j
           << ',' << r.rep.p_wall_w << ',' << r.rep.sigma_eff_s_per_m << ','
           << r.rep.q_tx << ',' << r.rep.q_rx << ',' << r.rep.q_total << ','
           << r.wall_loss_rel_err << '\n';
    }
    return os.str();
}

std::string qos_sweep_json(const std::vector<CavitySpec>& specs,
                           const std::vector<ModeIndices>& modes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const QosRow& r : qos_rows(specs, modes)) {
        nlohmann::json j;
        j["geometry"] = {{"a", r.spec.a}, {"c", r.spec.c}, {"b", r.spec.b}};
        j["material"] = {{"mu_r", r.spec.mu_r},
                         {"eps_r", r.spec.eps_r},
                         {"tan_delta", r.spec.tan_delta},
                         {"rs_ohm", r.spec.rs_ohm}};
        j["mode"] = {{"m", r.mode.m}, {"n", r.mode.n}, {"l", r.mode.l}};
        j["f_hz"] = r.rep.f_mnl_hz;
        j["u_electric_j"] = r.rep.u_electric_j;
        j["u_magnetic_j"] = r.rep.u_magnetic_j;
        j["p_wall_w"] = r.rep.p_wall_w;
        j["sigma_s_per_m"] = r.rep.sigma_eff_s_per_m;
        j["q_tx"] = r.rep.q_tx;
        j["q_rx"] = r.rep.q_rx;
        j["q_total"] = r.rep.q_total;
        j["wall_loss_quad_rel_err"] = r.wall_loss_rel_err;
        arr.push_back(j);
    }
    return arr.dump(2);
}

// ---- EMG demo ------------------------------------------------------------------

namespace {

// one decision byte, repeated across the payload; majority vote on receive
std::vector<int> encode_decision(Command c, std::size_t payload_bits) {
    const unsigned code = static_cast<unsigned>(c);
    std::vector<int> bits(payload_bits, 0);
    for (std::size_t i = 0; i < payload_bits; ++i)
        bits[i] = (code >> (i % 8)) & 1u;
    return bits;
}

Command decode_decision(const std::vector<int>& bits) {
    int votes[8] = {0};
    int counts[8] = {0};
    for (std::size_t i = 0; i < bits.size(); ++i) {
        votes[i % 8] += bits[i];
        counts[i % 8] += 1;
    }
    unsigned code = 0;
    for (int b = 0; b < 8; ++b)
        if (counts[b] && votes[b] * 2 > counts[b]) code |= 1u << b;
    return code <= 5 ? static_cast<Command>(code) : Command::none;
}

} // namespace

EmgDemoResult run_emg_demo(const ExperimentConfig& cfg) {
    const EmgScenario& sc = cfg.emg;
    const double win_duration =
        static_cast<double>(sc.window_len) / sc.fs_hz;

    // training corpus
    std::vector<EmgWindow> train;
    for (std::size_t ci = 0; ci < sc.commands.size(); ++ci)
        for (std::size_t i = 0; i < sc.train_per_class; ++i) {
            const EmgWindow raw = synthesize_emg(
                sc.commands[ci], win_duration, sc.fs_hz,
                derive_seed(cfg.seed, 1000 + ci * sc.train_per_class + i));
            EmgWindow w = preprocess(raw, 1.0, kEmgBandLoHz,
                                     std::min(kEmgBandHiHz, 0.45 * sc.fs_hz));
            w.label = raw.label;
            train.push_back(std::move(w));
        }
    const CommandDatabase db = train_templates(train, sc.n_coeffs);

    // held-out evaluation windows, class-interleaved
    struct Entry {
        Command truth;
        CommandDecision decision;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < sc.test_per_class; ++i)
        for (std::size_t ci = 0; ci < sc.commands.size(); ++ci) {
            const EmgWindow raw = synthesize_emg(
                sc.commands[ci], win_duration, sc.fs_hz,
                derive_seed(cfg.seed, 900000 + ci * sc.test_per_class + i));
            EmgWindow w = preprocess(raw, 1.0, kEmgBandLoHz,
                                     std::min(kEmgBandHiHz, 0.45 * sc.fs_hz));
            const CommandDecision d = classify(extract_features(w, sc.n_coeffs), db);
            entries.push_back({sc.commands[ci], d});
        }

    // transport every decision across the simulated link
    std::vector<std::vector<int>> payloads;
    payloads.reserve(entries.size());
    for (const Entry& e : entries)
        payloads.push_back(encode_decision(e.decision.command,
                                           cfg.tx.payload_bits_per_frame));
    ChannelConfig ch = cfg.channel;
    ch.seed = derive_seed(cfg.seed, 0xe396);
    const SampleBuffer wave = transmit_payloads(cfg.seed, payloads, cfg.tx);
    const SampleBuffer impaired = apply_channel(wave, ch, 2, cfg.tx.sps);
    const RxOutput rx = receive(impaired, cfg.rx);

    // align detected frames to decisions by relative position
    const std::size_t frame_syms = frame_symbol_count(cfg.tx);
    std::vector<Command> link_decisions(entries.size(), Command::none);
    long long idx = 0;
    std::size_t prev_pos = 0;
    bool first = true;
    std::size_t bit_errors = 0;
    std::size_t bits_checked = 0;
    for (std::size_t d = 0; d < rx.frame_starts.size(); ++d) {
        const std::size_t pos = rx.frame_starts[d];
        if (!first)
            idx += std::llround(static_cast<double>(pos - prev_pos) /
                                static_cast<double>(frame_syms));
        first = false;
        prev_pos = pos;
        if (idx < 0 || idx >= static_cast<long long>(entries.size())) continue;
        const std::vector<int> got =
            rx_frame_payload(rx, pos, cfg.tx.payload_bits_per_frame);
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i] != payloads[static_cast<std::size_t>(idx)][i]) ++bit_errors;
            ++bits_checked;
        }
        link_decisions[static_cast<std::size_t>(idx)] = decode_decision(got);
    }

    // timeline with safety supervision
    std::ostringstream os;
    os << "window,true_label,decision,confidence,distance,link_decision,tilt_deg,"
          "safety_event\n";
    os.precision(10);
    std::size_t correct = 0;
    std::size_t link_correct = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        SafetyState s;
        s.tilt_threshold_deg = sc.tilt_threshold_deg;
        s.tilt_deg = (sc.tilt_event_window >= 0 &&
                      i == static_cast<std::size_t>(sc.tilt_event_window))
                         ? sc.tilt_event_deg
                         : 2.0;
        const FallAction act = fall_monitor(s);
        if (entries[i].decision.command == entries[i].truth) ++correct;
        if (link_decisions[i] == entries[i].truth) ++link_correct;
        os << i << ',' << command_name(entries[i].truth) << ','
           << command_name(entries[i].decision.command) << ','
           << entries[i].decision.confidence << ',' << entries[i].decision.distance
           << ',' << command_name(link_decisions[i]) << ',' << s.tilt_deg << ','
           << (act == FallAction::decelerate ? "decelerate" : "normal") << '\n';
    }

    EmgDemoResult res;
    res.timeline_csv = os.str();
    res.classifier_accuracy =
        entries.empty() ? 0.0 : static_cast<double>(correct) / entries.size();
    res.end_to_end_accuracy =
        entries.empty() ? 0.0 : static_cast<double>(link_correct) / entries.size();
    res.link_ber = bits_checked
                       ? static_cast<double>(bit_errors) / static_cast<double>(bits_checked)
                       : 0.0;
    return res;
}

std::string artifact_header(const ConfigMap& cfg, std::uint64_t seed) {
    std::ostringstream os;
    os << "# config_hash=" << std::hex << config_hash(cfg) << std::dec
       << " seed=" << seed << '\n';
    return os.str();
}

} // namespace sdrlink
