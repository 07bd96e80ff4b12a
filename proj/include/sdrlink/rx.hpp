#ifndef SDRLINK_RX_HPP
#define SDRLINK_RX_HPP

#include "sdrlink/signal_core.hpp"

#include <cstddef>
#include <vector>

namespace sdrlink {

struct AgcState {
    double target_amplitude = 0.5; // 1 / upsampling factor
    double step = 0.01;
    double current_gain = 1.0;
    int window = 32; // sliding amplitude-measurement window, samples
};

struct PllConfig {
    double loop_bandwidth = 0.01; // normalized to symbol rate
    double damping = 0.7071067811865476;
};

struct TimingConfig {
    double loop_bandwidth = 0.005;
    double damping = 1.0;
    double detector_gain = 0.98; // zero-crossing TED at unit RMS input
};

struct TimingResult {
    std::vector<cplx> symbols;
    std::vector<bool> strobes;     // one flag per input sample
    std::vector<double> mu_track;  // fractional interval at each strobe
    bool lock_lost = false;
};

struct FfcResult {
    std::vector<cplx> symbols;      // derotated
    double residual_freq = 0.0;     // rad/symbol at the end of the run
    std::vector<double> phase_track;
};

struct RxOutput {
    std::vector<int> bit1;
    std::vector<int> bit2;
    std::vector<bool> valid;
    std::vector<std::size_t> frame_starts; // symbol index of each detected preamble
    double residual_cfo_hz = 0.0;
    std::size_t frames_detected = 0;
    std::size_t frames_dropped = 0; // correlation peaks below threshold
    bool timing_lock_lost = false;
};

struct RxConfig {
    double sample_rate_hz = 200e3;
    double symbol_rate_hz = 100e3;
    double rolloff = 0.5;
    int rrc_span_symbols = 10;
    int sps = 2;
    std::size_t cfc_nfft = 4096;
    double frame_sync_threshold = 0.6; // fraction of the ideal correlation peak
    std::size_t payload_bits_per_frame = 512;
    PllConfig ffc;
    TimingConfig timing;
    AgcState agc;
};

// ---- stages ---------------------------------------------------------------

// Log-domain multiplicative AGC over a sliding amplitude window. All-zero
// stretches freeze the gain.
SampleBuffer agc(const SampleBuffer& x, AgcState& state);

// Unit-energy RRC receive filter; stays at 2 samples/symbol (the decimation
// is realized by the timing loop's strobe).
SampleBuffer matched_filter(const SampleBuffer& x, double rolloff, int span_symbols,
                            int sps);

// Fourth-power coarse CFO estimate: peak of the averaged |DFT(y^4)|^2 with
// parabolic interpolation, divided by four. Returns 0 Hz when no bin is
// prominent enough. Estimate range is +-fs/8.
double coarse_freq_estimate(const SampleBuffer& y, std::size_t nfft);

// y'[k] = y[k] * exp(-j*2*pi*f_hat*k/fs)
SampleBuffer coarse_freq_correct(const SampleBuffer& y, double f_hat_hz);

// Zero-crossing TED (non-decision-aided form, insensitive to carrier
// rotation) + proportional-integral loop + parabolic interpolator; emits one
// symbol per counter underflow (one per two inputs on average).
TimingResult timing_recovery(const SampleBuffer& y, const TimingConfig& cfg);

// Decision-directed carrier phase PLL at symbol rate. PED:
//   e = sign(Re(s))*Im(s) - sign(Im(s))*Re(s)
FfcResult ffc_pll(const std::vector<cplx>& symbols, const PllConfig& cfg);

// Preamble correlation, 90-degree ambiguity resolution from the correlation
// phase, then demap with valid gated to frame payload spans.
RxOutput frame_sync_decode(const std::vector<cplx>& symbols,
                           const std::vector<cplx>& preamble, const RxConfig& cfg);

// Full chain: AGC -> matched filter -> CFC -> timing -> FFC -> frame sync.
RxOutput receive(const SampleBuffer& x, const RxConfig& cfg);

} // namespace sdrlink

#endif
