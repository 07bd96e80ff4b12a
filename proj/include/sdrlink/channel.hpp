#ifndef SDRLINK_CHANNEL_HPP
#define SDRLINK_CHANNEL_HPP

#include "sdrlink/signal_core.hpp"

#include <cstdint>

namespace sdrlink {

struct ChannelConfig {
    double ebn0_db = 1e9;          // effectively noiseless by default
    double cfo_hz = 0.0;
    double phase_offset_rad = 0.0;
    double delay_samples = 0.0;    // fractional allowed
    double drift_ppm = 0.0;        // |drift| <= 1000 ppm model validity bound
    std::uint64_t seed = 1;
};

// Impairments applied in a fixed order: resample (clock drift) -> fractional
// delay (windowed-sinc) -> rotate (CFO + preset phase) -> AWGN. Noise
// variance derives from ebn0_db with the waveform's measured sample power:
//   sigma^2 = P * sps / (bits_per_symbol * 10^(ebn0/10))
// Deterministic per cfg.seed.
SampleBuffer apply_channel(const SampleBuffer& x, const ChannelConfig& cfg,
                           int bits_per_symbol, int sps);

} // namespace sdrlink

#endif
