#ifndef SDRLINK_WAVEFORM_IO_HPP
#define SDRLINK_WAVEFORM_IO_HPP

#include "sdrlink/signal_core.hpp"

#include <cstdint>
#include <string>

namespace sdrlink {

// Waveform fixture format (little-endian):
//   8 bytes  magic "SDRWAV01"
//   u32      mode (0 = single_carrier, 1 = cp_ofdm)
//   f64      sample_rate_hz
//   u32      frame_count
//   u64      sample_count
//   then sample_count pairs of float32 (re, im)
struct WaveformHeader {
    std::uint32_t mode = 0;
    double sample_rate_hz = 0.0;
    std::uint32_t frame_count = 0;
};

void write_waveform(const std::string& path, const SampleBuffer& x,
                    std::uint32_t mode, std::uint32_t frame_count);

SampleBuffer read_waveform(const std::string& path, WaveformHeader* header = nullptr);

} // namespace sdrlink

#endif
