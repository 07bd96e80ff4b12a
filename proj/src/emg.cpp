#include "sdrlink/emg.hpp"

#include "sdrlink/rng.hpp"
#include "sdrlink/signal_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sdrlink {

namespace {

constexpr int kBandpassTaps = 129;

struct ClassProfile {
    // weights of the low/mid/high band noise components
    double w_low;
    double w_mid;
    double w_high;
    // activation envelope: gaussian burst center/width in normalized time,
    // or a ramp when width < 0 (sign of center picks the direction)
    double env_center;
    double env_width;
};

// Spectral emphasis separates the classes; the envelope shapes activation.
const ClassProfile& profile_for(Command c) {
    static const ClassProfile sit{1.00, 0.20, 0.05, 0.35, 0.18};
    static const ClassProfile stand{0.20, 1.00, 0.20, 0.65, 0.18};
    static const ClassProfile sleep{0.05, 0.20, 1.00, 0.50, 0.45};
    static const ClassProfile up{0.70, 0.55, 0.10, +1.0, -1.0};
    static const ClassProfile down{0.10, 0.55, 0.70, -1.0, -1.0};
    switch (c) {
        case Command::sit: return sit;
        case Command::stand: return stand;
        case Command::sleep: return sleep;
        case Command::roll_up: return up;
        case Command::roll_down: return down;
        default: throw std::domain_error("synthesize_emg: unknown command");
    }
}

std::vector<double> band_noise(Rng& rng, std::size_t n, double f_lo, double f_hi,
                               double fs) {
    const TapSet bp = design_bandpass(f_lo, f_hi, fs, kBandpassTaps);
    std::vector<double> white(n + kBandpassTaps);
    for (auto& v : white) v = rng.next_gaussian();
    std::vector<double> shaped = fir_filter_real(white, bp);
    return {shaped.begin() + kBandpassTaps, shaped.end()};
}

double envelope_at(const ClassProfile& p, double t01) {
    if (p.env_width < 0.0) {
        const double r = p.env_center > 0.0 ? t01 : 1.0 - t01;
        return 0.15 + 0.85 * r * r;
    }
    const double d = (t01 - p.env_center) / p.env_width;
    return 0.15 + 0.85 * std::exp(-0.5 * d * d);
}

} // namespace

const char* command_name(Command c) {
    switch (c) {
        case Command::sit: return "sit";
        case Command::stand: return "stand";
        case Command::sleep: return "sleep";
        case Command::roll_up: return "roll_up";
        case Command::roll_down: return "roll_down";
        case Command::none: return "none";
    }
    return "none";
}

std::optional<Command> command_from_name(const std::string& name) {
    for (Command c : {Command::sit, Command::stand, Command::sleep,
                      Command::roll_up, Command::roll_down, Command::none})
        if (name == command_name(c)) return c;
    return std::nullopt;
}

EmgWindow synthesize_emg(Command command, double duration_s, double fs_hz,
                         std::uint64_t seed) {
    if (!(duration_s > 0.0) || !(fs_hz > 0.0))
        throw std::invalid_argument("synthesize_emg: duration and fs must be positive");
    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs_hz));
    if (n < 64) throw std::invalid_argument("synthesize_emg: window too short (need >= 64 samples)");
    const ClassProfile& p = profile_for(command);

    // component bands sit inside 20-450 Hz (clamped against Nyquist)
    const double hi_edge = std::min(440.0, 0.44 * fs_hz);
    const double b1 = std::min(120.0, hi_edge * 0.35);
    const double b2 = std::min(260.0, hi_edge * 0.65);

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(command)));
    const std::vector<double> low = band_noise(rng, n, 20.0, b1, fs_hz);
    const std::vector<double> mid = band_noise(rng, n, b1, b2, fs_hz);
    const std::vector<double> high = band_noise(rng, n, b2, hi_edge, fs_hz);
    const std::vector<double> floor_noise = band_noise(rng, n, 20.0, hi_edge, fs_hz);

    EmgWindow w;
    w.sample_rate_hz = fs_hz;
    w.label = command;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t01 = static_cast<double>(i) / static_cast<double>(n - 1);
        const double env = envelope_at(p, t01);
        w.samples[i] = env * (p.w_low * low[i] + p.w_mid * mid[i] + p.w_high * high[i]) +
                       0.05 * floor_noise[i];
    }
    return w;
}

EmgWindow preprocess(const EmgWindow& raw, double gain, double f_lo_hz, double f_hi_hz) {
    if (!(gain > 0.0)) throw std::invalid_argument("preprocess: gain must be positive");
    const TapSet bp = design_bandpass(f_lo_hz, f_hi_hz, raw.sample_rate_hz, kBandpassTaps);
    std::vector<double> scaled = raw.samples;
    for (double& v : scaled) v *= gain;
    EmgWindow out;
    out.sample_rate_hz = raw.sample_rate_hz;
    out.label = raw.label;
    out.samples = fir_filter_real(scaled, bp);
    return out;
}

std::vector<double> extract_features(const EmgWindow& w, std::size_t n_coeffs) {
    if (n_coeffs == 0) throw std::invalid_argument("extract_features: n_coeffs must be positive");
    if (!is_power_of_two(w.samples.size()))
        throw std::length_error("extract_features: window length must be a power of two");
    if (n_coeffs > w.samples.size())
        throw std::length_error("extract_features: n_coeffs exceeds window length");
    const std::vector<double> wht = fwht(w.samples, WhtOrdering::sequency);
    std::vector<double> f(n_coeffs);
    double energy = 0.0;
    for (std::size_t i = 0; i < n_coeffs; ++i) {
        f[i] = std::abs(wht[i]);
        energy += f[i] * f[i];
    }
    if (energy > 0.0) {
        const double inv = 1.0 / std::sqrt(energy);
        for (double& v : f) v *= inv;
    }
    return f;
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

} // namespace

CommandDatabase train_templates(const std::vector<EmgWindow>& labeled,
                                std::size_t n_coeffs) {
    std::map<Command, std::vector<std::vector<double>>> by_class;
    std::vector<Command> order;
    for (const EmgWindow& w : labeled) {
        if (!w.label) throw std::invalid_argument("train_templates: unlabeled window in training set");
        if (by_class.find(*w.label) == by_class.end()) order.push_back(*w.label);
        by_class[*w.label].push_back(extract_features(w, n_coeffs));
    }
    std::sort(order.begin(), order.end());

    CommandDatabase db;
    db.feature_dim = n_coeffs;
    db.commands = order;
    for (Command c : order) {
        const auto& feats = by_class[c];
        if (feats.size() < 2)
            throw std::invalid_argument(std::string("train_templates: command '") +
                                        command_name(c) + "' has fewer than 2 windows");
        CommandTemplate t;
        t.mean.assign(n_coeffs, 0.0);
        t.spread.assign(n_coeffs, 0.0);
        for (const auto& f : feats)
            for (std::size_t i = 0; i < n_coeffs; ++i) t.mean[i] += f[i];
        for (double& v : t.mean) v /= static_cast<double>(feats.size());
        for (const auto& f : feats)
            for (std::size_t i = 0; i < n_coeffs; ++i) {
                const double d = f[i] - t.mean[i];
                t.spread[i] += d * d;
            }
        for (double& v : t.spread) v = std::sqrt(v / static_cast<double>(feats.size()));
        db.templates[c] = std::move(t);
    }

    double worst = 0.0;
    for (Command c : order)
        for (const auto& f : by_class[c])
            worst = std::max(worst, euclidean(f, db.templates[c].mean));
    db.reject_threshold = kRejectMargin * worst;
    return db;
}

CommandDecision classify(const std::vector<double>& features, const CommandDatabase& db) {
    if (features.size() != db.feature_dim)
        throw std::length_error("classify: feature dimension mismatch");
    if (db.commands.empty())
        throw std::invalid_argument("classify: empty database");
    Command best = db.commands.front();
    double best_d = euclidean(features, db.templates.at(best).mean);
    for (std::size_t i = 1; i < db.commands.size(); ++i) {
        const Command c = db.commands[i];
        const double d = euclidean(features, db.templates.at(c).mean);
        if (d < best_d) { // strict: ties keep the lower-indexed command
            best = c;
            best_d = d;
        }
    }
    CommandDecision dec;
    dec.distance = best_d;
    if (best_d > db.reject_threshold) {
        dec.command = Command::none;
        dec.confidence = 0.0;
    } else {
        dec.command = best;
        dec.confidence = best_d == 0.0
                             ? 1.0
                             : std::clamp(std::exp(-best_d / db.reject_threshold), 0.0, 1.0);
    }
    return dec;
}

double angle_feedback_correct(const SafetyState& s, double k_p) {
    const double corr = k_p * (s.joint_target_deg - s.joint_angle_deg);
    return std::clamp(corr, -kCorrectionLimitDeg, kCorrectionLimitDeg);
}

FallAction fall_monitor(const SafetyState& s) {
    return std::abs(s.tilt_deg) > s.tilt_threshold_deg ? FallAction::decelerate
                                                       : FallAction::normal;
}

// ---- persistence ----------------------------------------------------------

std::string database_to_json(const CommandDatabase& db) {
    nlohmann::json j;
    j["version"] = 1;
    j["feature_dim"] = db.feature_dim;
    j["reject_threshold"] = db.reject_threshold;
    nlohmann::json cmds = nlohmann::json::array();
    nlohmann::json templates = nlohmann::json::object();
    for (Command c : db.commands) {
        cmds.push_back(command_name(c));
        const CommandTemplate& t = db.templates.at(c);
        templates[command_name(c)] = {{"mean", t.mean}, {"spread", t.spread}};
    }
    j["commands"] = cmds;
    j["templates"] = templates;
    return j.dump(2);
}

CommandDatabase database_from_json(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.at("version").get<int>() != 1)
        throw std::invalid_argument("database_from_json: unsupported version");
    CommandDatabase db;
    db.feature_dim = j.at("feature_dim").get<std::size_t>();
    db.reject_threshold = j.at("reject_threshold").get<double>();
    for (const auto& name : j.at("commands")) {
        const auto c = command_from_name(name.get<std::string>());
        if (!c) throw std::invalid_argument("database_from_json: unknown command name");
        db.commands.push_back(*c);
        const auto& t = j.at("templates").at(name.get<std::string>());
        CommandTemplate tpl;
        tpl.mean = t.at("mean").get<std::vector<double>>();
        tpl.spread = t.at("spread").get<std::vector<double>>();
        if (tpl.mean.size() != db.feature_dim || tpl.spread.size() != db.feature_dim)
            throw std::invalid_argument("database_from_json: template dimension mismatch");
        db.templates[*c] = std::move(tpl);
    }
    return db;
}

std::string corpus_to_csv(const std::vector<EmgWindow>& windows) {
    std::ostringstream os;
    os.precision(17);
    for (const EmgWindow& w : windows) {
        os << (w.label ? command_name(*w.label) : "none");
        for (double v : w.samples) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

std::vector<EmgWindow> corpus_from_csv(const std::string& csv_text, double fs_hz) {
    std::vector<EmgWindow> out;
    std::istringstream is(csv_text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        EmgWindow w;
        w.sample_rate_hz = fs_hz;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        w.label = command_from_name(cell);
        while (std::getline(ls, cell, ','))
            w.samples.push_back(std::stod(cell));
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace sdrlink
