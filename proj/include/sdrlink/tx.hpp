#ifndef SDRLINK_TX_HPP
#define SDRLINK_TX_HPP

#include "sdrlink/signal_core.hpp"

#include <cstdint>
#include <vector>

namespace sdrlink {

enum class TxMode { single_carrier = 0, cp_ofdm = 1 };

struct FramePayload {
    std::vector<int> header_bits;  // 26 bits, identical across frames
    std::vector<int> payload_bits; // PN bits, even count
    std::uint64_t frame_index = 0;
};

struct TxConfig {
    TxMode mode = TxMode::single_carrier;
    double rolloff = 0.5;
    int sps = 2;
    int rrc_span_symbols = 10;
    std::size_t nfft = 64;    // cp_ofdm only
    std::size_t cp_len = 16;  // cp_ofdm only
    double symbol_rate_hz = 100e3;
    std::size_t payload_bits_per_frame = 512;
    std::size_t warmup_symbols = 200; // random symbols ahead of the first frame
};

// 13-chip Barker sequence, +1/-1.
const std::vector<int>& barker13();

// Sync preamble: Barker-13 on the QPSK diagonal, repeated twice (26 symbols).
std::vector<cplx> preamble_symbols();

// Header bit constant: two repetitions of the Barker chips as bits (+1 -> 1).
std::vector<int> header_bits();

// Deterministic frame: fixed 26-bit header plus a PN payload drawn from
// (seed, frame_index).
FramePayload generate_frame_bits(std::uint64_t seed, std::size_t payload_len,
                                 std::uint64_t frame_index = 0);

// Gray-mapped unit-energy QPSK. Bit pair (b_i, b_q):
//   00 -> (+1+j)/sqrt2, 01 -> (+1-j)/sqrt2, 10 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2
std::vector<cplx> qpsk_map(const std::vector<int>& bits);
std::vector<int> qpsk_demap(const std::vector<cplx>& symbols);

// Per-block inverse DFT (unitary) with a cyclic prefix prepended; all nfft
// carriers are occupied and symbol count must divide evenly into blocks.
SampleBuffer ofdm_modulate(const std::vector<cplx>& symbols, std::size_t nfft,
                           std::size_t cp_len, double sample_rate_hz);
std::vector<cplx> ofdm_demodulate(const SampleBuffer& x, std::size_t nfft,
                                  std::size_t cp_len);

// Zero-stuffed upsampling by cfg.sps followed by RRC shaping; taps are scaled
// by sqrt(sps) so waveform power matches symbol power.
SampleBuffer pulse_shape(const std::vector<cplx>& symbols, const TxConfig& cfg);

// Symbols of one frame: 26-symbol preamble + header/payload QPSK symbols.
std::vector<cplx> frame_symbols(const FramePayload& frame);

// Number of symbols a frame occupies (preamble + data).
std::size_t frame_symbol_count(const TxConfig& cfg);

// Full transmit path: warmup symbols, then n_frames preamble+data frames,
// pulse shaped at sps * symbol_rate.
SampleBuffer transmit(std::uint64_t seed, std::size_t n_frames, const TxConfig& cfg);

// Same path but with caller-supplied payload bits, one vector per frame
// (each must have cfg.payload_bits_per_frame bits).
SampleBuffer transmit_payloads(std::uint64_t seed,
                               const std::vector<std::vector<int>>& payloads,
                               const TxConfig& cfg);

} // namespace sdrlink

#endif
