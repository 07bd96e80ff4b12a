#include "sdrlink/tx.hpp"

#include "sdrlink/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sdrlink {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
} // namespace

const std::vector<int>& barker13() {
    static const std::vector<int> chips{+1, +1, +1, +1, +1, -1, -1,
                                        +1, +1, -1, +1, -1, +1};
    return chips;
}

std::vector<cplx> preamble_symbols() {
    std::vector<cplx> p;
    p.reserve(26);
    for (int rep = 0; rep < 2; ++rep)
        for (int chip : barker13())
            p.emplace_back(chip * kInvSqrt2, chip * kInvSqrt2);
    return p;
}

std::vector<int> header_bits() {
    std::vector<int> bits;
    bits.reserve(26);
    for (int rep = 0; rep < 2; ++rep)
        for (int chip : barker13()) bits.push_back(chip > 0 ? 1 : 0);
    return bits;
}

FramePayload generate_frame_bits(std::uint64_t seed, std::size_t payload_len,
                                 std::uint64_t frame_index) {
    if (payload_len % 2 != 0)
        throw std::invalid_argument("generate_frame_bits: payload length must be even");
    FramePayload f;
    f.frame_index = frame_index;
    f.header_bits = header_bits();
    f.payload_bits.reserve(payload_len);
    Rng rng(derive_seed(seed, frame_index));
    std::uint64_t word = 0;
    int avail = 0;
    for (std::size_t i = 0; i < payload_len; ++i) {
        if (avail == 0) {
            word = rng.next_u64();
            avail = 64;
        }
        f.payload_bits.push_back(static_cast<int>(word & 1));
        word >>= 1;
        --avail;
    }
    return f;
}

std::vector<cplx> qpsk_map(const std::vector<int>& bits) {
    if (bits.size() % 2 != 0)
        throw std::length_error("qpsk_map: bit count must be even");
    std::vector<cplx> s;
    s.reserve(bits.size() / 2);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        const double re = bits[i] ? -kInvSqrt2 : kInvSqrt2;
        const double im = bits[i + 1] ? -kInvSqrt2 : kInvSqrt2;
        s.emplace_back(re, im);
    }
    return s;
}

std::vector<int> qpsk_demap(const std::vector<cplx>& symbols) {
    std::vector<int> bits;
    bits.reserve(symbols.size() * 2);
    for (const cplx& s : symbols) {
        bits.push_back(s.real() < 0.0 ? 1 : 0);
        bits.push_back(s.imag() < 0.0 ? 1 : 0);
    }
    return bits;
}

SampleBuffer ofdm_modulate(const std::vector<cplx>& symbols, std::size_t nfft,
                           std::size_t cp_len, double sample_rate_hz) {
    if (nfft == 0 || cp_len >= nfft)
        throw std::invalid_argument("ofdm_modulate: need 0 <= cp_len < nfft");
    if (symbols.size() % nfft != 0)
        throw std::invalid_argument("ofdm_modulate: symbol count must divide into nfft blocks");
    SampleBuffer out;
    out.sample_rate_hz = sample_rate_hz;
    const double scale = std::sqrt(static_cast<double>(nfft)); // unitary IDFT
    for (std::size_t blk = 0; blk + nfft <= symbols.size(); blk += nfft) {
        std::vector<cplx> freq(symbols.begin() + blk, symbols.begin() + blk + nfft);
        std::vector<cplx> time = idft(freq);
        for (auto& v : time) v *= scale;
        for (std::size_t i = nfft - cp_len; i < nfft; ++i) out.samples.push_back(time[i]);
        for (const auto& v : time) out.samples.push_back(v);
    }
    return out;
}

std::vector<cplx> ofdm_demodulate(const SampleBuffer& x, std::size_t nfft,
                                  std::size_t cp_len) {
    if (nfft == 0 || cp_len >= nfft)
        throw std::invalid_argument("ofdm_demodulate: need 0 <= cp_len < nfft");
    const std::size_t block = nfft + cp_len;
    if (x.samples.size() % block != 0)
        throw std::invalid_argument("ofdm_demodulate: length must be a multiple of nfft + cp_len");
    std::vector<cplx> out;
    const double scale = 1.0 / std::sqrt(static_cast<double>(nfft));
    for (std::size_t off = 0; off + block <= x.samples.size(); off += block) {
        std::vector<cplx> time(x.samples.begin() + off + cp_len,
                               x.samples.begin() + off + block);
        std::vector<cplx> freq = dft(time, nfft);
        for (auto& v : freq) out.push_back(v * scale);
    }
    return out;
}

SampleBuffer pulse_shape(const std::vector<cplx>& symbols, const TxConfig& cfg) {
    if (cfg.sps != 2)
        throw std::invalid_argument("pulse_shape: chain is designed for sps = 2");
    const TapSet rrc = design_rrc(cfg.rolloff, cfg.rrc_span_symbols, cfg.sps);
    SampleBuffer up;
    up.sample_rate_hz = cfg.symbol_rate_hz * cfg.sps;
    up.samples.assign(symbols.size() * cfg.sps, cplx{0.0, 0.0});
    const double g = std::sqrt(static_cast<double>(cfg.sps));
    for (std::size_t i = 0; i < symbols.size(); ++i)
        up.samples[i * cfg.sps] = symbols[i] * g;
    return fir_filter(up, rrc);
}

std::vector<cplx> frame_symbols(const FramePayload& frame) {
    std::vector<cplx> syms = preamble_symbols();
    std::vector<int> bits = frame.header_bits;
    bits.insert(bits.end(), frame.payload_bits.begin(), frame.payload_bits.end());
    const std::vector<cplx> data = qpsk_map(bits);
    syms.insert(syms.end(), data.begin(), data.end());
    return syms;
}

std::size_t frame_symbol_count(const TxConfig& cfg) {
    return 26 + (26 + cfg.payload_bits_per_frame) / 2;
}

namespace {

SampleBuffer transmit_symbol_stream(std::uint64_t seed,
                                    const std::vector<std::vector<cplx>>& frames,
                                    const TxConfig& cfg) {
    std::vector<cplx> syms;
    // warmup: random QPSK so AGC/CFC/timing converge before the first frame
    Rng warm(derive_seed(seed, 0xabcdefULL));
    for (std::size_t i = 0; i < cfg.warmup_symbols; ++i) {
        const double re = (warm.next_u64() & 1) ? -kInvSqrt2 : kInvSqrt2;
        const double im = (warm.next_u64() & 1) ? -kInvSqrt2 : kInvSqrt2;
        syms.emplace_back(re, im);
    }
    for (const auto& fs : frames) syms.insert(syms.end(), fs.begin(), fs.end());
    // tail flush so the last frame clears the shaping and receive filters
    for (int i = 0; i < 2 * cfg.rrc_span_symbols + 8; ++i) syms.emplace_back(0.0, 0.0);
    return pulse_shape(syms, cfg);
}

} // namespace

SampleBuffer transmit(std::uint64_t seed, std::size_t n_frames, const TxConfig& cfg) {
    std::vector<std::vector<cplx>> frames;
    frames.reserve(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f)
        frames.push_back(
            frame_symbols(generate_frame_bits(seed, cfg.payload_bits_per_frame, f)));
    return transmit_symbol_stream(seed, frames, cfg);
}

SampleBuffer transmit_payloads(std::uint64_t seed,
                               const std::vector<std::vector<int>>& payloads,
                               const TxConfig& cfg) {
    std::vector<std::vector<cplx>> frames;
    frames.reserve(payloads.size());
    for (std::size_t f = 0; f < payloads.size(); ++f) {
        if (payloads[f].size() != cfg.payload_bits_per_frame)
            throw std::invalid_argument("transmit_payloads: payload length mismatch");
        FramePayload frame;
        frame.frame_index = f;
        frame.header_bits = header_bits();
        frame.payload_bits = payloads[f];
        frames.push_back(frame_symbols(frame));
    }
    return transmit_symbol_stream(seed, frames, cfg);
}

} // namespace sdrlink
