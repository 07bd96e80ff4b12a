#ifndef SDRLINK_EMG_HPP
#define SDRLINK_EMG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdrlink {

enum class Command { sit = 0, stand = 1, sleep = 2, roll_up = 3, roll_down = 4, none = 5 };

const char* command_name(Command c);
std::optional<Command> command_from_name(const std::string& name);

struct EmgWindow {
    std::vector<double> samples;
    double sample_rate_hz = 1000.0;
    std::optional<Command> label;
};

struct CommandTemplate {
    std::vector<double> mean;
    std::vector<double> spread; // per-feature standard deviation
};

struct CommandDatabase {
    // commands in registration order; index order is the classifier tie-break
    std::vector<Command> commands;
    std::map<Command, CommandTemplate> templates;
    std::size_t feature_dim = 0;
    double reject_threshold = 0.0;
};

struct CommandDecision {
    Command command = Command::none;
    double distance = 0.0;
    double confidence = 0.0;
};

struct SafetyState {
    double tilt_deg = 0.0;
    double tilt_threshold_deg = 15.0;
    double joint_angle_deg = 0.0;
    double joint_target_deg = 0.0;
};

enum class FallAction { normal, decelerate };

// Margin applied to the worst own-class training distance when setting the
// reject threshold.
inline constexpr double kRejectMargin = 1.5;
// Proportional angle corrections saturate at this many degrees per step.
inline constexpr double kCorrectionLimitDeg = 30.0;
// Default physiological EMG band.
inline constexpr double kEmgBandLoHz = 20.0;
inline constexpr double kEmgBandHiHz = 450.0;

// Deterministic synthetic EMG: band-limited (20-450 Hz) noise with a
// command-specific spectral emphasis and activation envelope. Same
// (command, seed) reproduces the window bit-exactly.
EmgWindow synthesize_emg(Command command, double duration_s, double fs_hz,
                         std::uint64_t seed);

// Gain scaling followed by linear-phase band-pass (129-tap Hamming-windowed
// sinc). Output length equals input length.
EmgWindow preprocess(const EmgWindow& raw, double gain, double f_lo_hz, double f_hi_hz);

// Magnitudes of the first n_coeffs sequency-ordered WHT coefficients,
// L2-normalized. Window length must be a power of two.
std::vector<double> extract_features(const EmgWindow& w, std::size_t n_coeffs);

// Per-command mean feature vector and per-feature standard deviation;
// reject_threshold = kRejectMargin * max own-template distance seen in
// training. Requires at least two windows per command.
CommandDatabase train_templates(const std::vector<EmgWindow>& labeled,
                                std::size_t n_coeffs);

// Nearest template by Euclidean distance; ties go to the lower command
// index; distances beyond the reject threshold return Command::none.
CommandDecision classify(const std::vector<double>& features,
                         const CommandDatabase& db);

// correction = k_p * (target - measured), clamped to kCorrectionLimitDeg
double angle_feedback_correct(const SafetyState& s, double k_p);

// decelerate iff |tilt| strictly exceeds the threshold
FallAction fall_monitor(const SafetyState& s);

// ---- persistence ----------------------------------------------------------

std::string database_to_json(const CommandDatabase& db);
CommandDatabase database_from_json(const std::string& json_text);

// Corpus CSV: one window per row, label column first, then samples.
std::string corpus_to_csv(const std::vector<EmgWindow>& windows);
std::vector<EmgWindow> corpus_from_csv(const std::string& csv_text, double fs_hz);

} // namespace sdrlink

#endif
