#include "sdrlink/rx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdrlink {

namespace {

constexpr double kPi = std::numbers::pi;

inline double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

// proportional / integral gains of the standard second-order loop
struct LoopGains {
    double k1;
    double k2;
};

LoopGains second_order_gains(double loop_bandwidth, double damping,
                             double detector_gain, double nco_gain) {
    const double theta = loop_bandwidth / (damping + 1.0 / (4.0 * damping));
    const double denom = 1.0 + 2.0 * damping * theta + theta * theta;
    LoopGains g;
    g.k1 = 4.0 * damping * theta / (denom * detector_gain * nco_gain);
    g.k2 = 4.0 * theta * theta / (denom * detector_gain * nco_gain);
    return g;
}

} // namespace

// ---- AGC -------------------------------------------------------------------

SampleBuffer agc(const SampleBuffer& x, AgcState& state) {
    if (!(state.target_amplitude > 0.0))
        throw std::invalid_argument("agc: target amplitude must be positive");
    SampleBuffer y;
    y.sample_rate_hz = x.sample_rate_hz;
    y.samples.resize(x.samples.size());
    const int w = std::max(1, state.window);
    double win_sum = 0.0;
    std::vector<double> ring(static_cast<std::size_t>(w), 0.0);
    std::size_t ring_pos = 0;
    std::size_t filled = 0;
    const double log_target = std::log(state.target_amplitude);
    for (std::size_t k = 0; k < x.samples.size(); ++k) {
        const double amp = std::abs(x.samples[k]);
        win_sum += amp - ring[ring_pos];
        ring[ring_pos] = amp;
        ring_pos = (ring_pos + 1) % static_cast<std::size_t>(w);
        if (filled < static_cast<std::size_t>(w)) ++filled;
        const double mean_amp = win_sum / static_cast<double>(filled);
        y.samples[k] = x.samples[k] * state.current_gain;
        const double measured = state.current_gain * mean_amp;
        if (measured > 1e-12) { // freeze on silence
            state.current_gain *=
                std::exp(state.step * (log_target - std::log(measured)));
        }
    }
    return y;
}

// ---- matched filter ----------------------------------------------------------

SampleBuffer matched_filter(const SampleBuffer& x, double rolloff, int span_symbols,
                            int sps) {
    const TapSet rrc = design_rrc(rolloff, span_symbols, sps);
    return fir_filter(x, rrc);
}

// ---- coarse frequency compensation -------------------------------------------

double coarse_freq_estimate(const SampleBuffer& y, std::size_t nfft) {
    if (y.samples.size() < nfft)
        throw std::length_error("coarse_freq_estimate: input shorter than nfft");
    const double fs = y.sample_rate_hz;

    // average the fourth-power periodogram over available segments
    const std::size_t segs = std::min<std::size_t>(16, y.samples.size() / nfft);
    std::vector<double> psd(nfft, 0.0);
    std::vector<cplx> seg(nfft);
    for (std::size_t s = 0; s < segs; ++s) {
        for (std::size_t i = 0; i < nfft; ++i) {
            const cplx v = y.samples[s * nfft + i];
            const cplx v2 = v * v;
            seg[i] = v2 * v2;
        }
        const std::vector<cplx> spec = dft(seg, nfft);
        for (std::size_t i = 0; i < nfft; ++i) psd[i] += std::norm(spec[i]);
    }

    std::size_t peak = 0;
    double peak_val = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < nfft; ++i) {
        total += psd[i];
        if (psd[i] > peak_val) {
            peak_val = psd[i];
            peak = i;
        }
    }
    const double mean_val = total / static_cast<double>(nfft);
    if (peak_val < 8.0 * mean_val) return 0.0; // no prominent line: no estimate

    // parabolic refinement over the wrapped neighbors
    const double pm = psd[(peak + nfft - 1) % nfft];
    const double pp = psd[(peak + 1) % nfft];
    double delta = 0.0;
    const double denom = pm - 2.0 * peak_val + pp;
    if (denom != 0.0) delta = 0.5 * (pm - pp) / denom;
    delta = std::clamp(delta, -0.5, 0.5);

    double bin = static_cast<double>(peak) + delta;
    if (bin > static_cast<double>(nfft) / 2.0) bin -= static_cast<double>(nfft);
    return bin * fs / static_cast<double>(nfft) / 4.0;
}

SampleBuffer coarse_freq_correct(const SampleBuffer& y, double f_hat_hz) {
    SampleBuffer out;
    out.sample_rate_hz = y.sample_rate_hz;
    out.samples.resize(y.samples.size());
    const double w = -2.0 * kPi * f_hat_hz / y.sample_rate_hz;
    for (std::size_t k = 0; k < y.samples.size(); ++k) {
        const double ang = w * static_cast<double>(k);
        out.samples[k] = y.samples[k] * cplx{std::cos(ang), std::sin(ang)};
    }
    return out;
}

// ---- timing recovery ----------------------------------------------------------

TimingResult timing_recovery(const SampleBuffer& y, const TimingConfig& cfg) {
    TimingResult r;
    const std::size_t n = y.samples.size();
    r.strobes.assign(n, false);
    if (n < 8) return r;

    // the zero-crossing TED gain is quoted at unit signal power; normalize
    double rms = std::sqrt(mean_power(y.samples));
    if (rms < 1e-12) rms = 1.0;
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y.samples[i] / rms;

    // NCO counter drains by W = 1/2 + v per input sample; underflow = strobe
    const LoopGains g = second_order_gains(cfg.loop_bandwidth, cfg.damping,
                                           cfg.detector_gain, -1.0);
    double counter = 1.0;
    double v_int = 0.0;
    double v = 0.0;
    cplx prev_symbol{0.0, 0.0};
    bool have_symbol = false;

    double err_power = 0.0; // leaky estimate of e^2 for lock supervision
    int bad_run = 0;

    for (std::size_t k = 2; k + 2 < n; ++k) {
        const double w_step = 0.5 + v;
        const double next = counter - w_step;
        if (next < 0.0) {
            // the counter crossed zero at fraction mu past sample k; take the
            // symbol there and the zero-crossing point one sample earlier
            const double mu = w_step > 0.0 ? counter / w_step : 0.0;
            counter = next + 1.0;
            const cplx cur_symbol =
                parabolic_interp(x[k - 1], x[k], x[k + 1], x[k + 2], mu);
            const cplx mid =
                parabolic_interp(x[k - 2], x[k - 1], x[k], x[k + 1], mu);
            // non-decision-aided zero-crossing detector: the transition sample
            // weighted by the symbol change. The hard-decision variant
            // (sgn(prev) - sgn(cur)) has an inverted S-curve when the carrier
            // sits near 45 deg, and the phase PLL runs downstream of here, so
            // the soft form is required for lock under carrier offsets.
            double e = 0.0;
            if (have_symbol) {
                e = mid.real() * (prev_symbol.real() - cur_symbol.real()) +
                    mid.imag() * (prev_symbol.imag() - cur_symbol.imag());
            }
            v_int += g.k2 * e;
            v = g.k1 * e + v_int;
            r.symbols.push_back(cur_symbol * rms);
            r.mu_track.push_back(mu);
            r.strobes[k] = true;
            prev_symbol = cur_symbol;
            have_symbol = true;

            err_power = 0.99 * err_power + 0.01 * e * e;
            if (err_power > 1.5)
                ++bad_run;
            else
                bad_run = 0;
            if (bad_run > 1000) r.lock_lost = true;
        } else {
            counter = next;
        }
    }
    return r;
}

// ---- fine frequency / phase PLL --------------------------------------------

FfcResult ffc_pll(const std::vector<cplx>& symbols, const PllConfig& cfg) {
    FfcResult r;
    r.symbols.resize(symbols.size());
    r.phase_track.resize(symbols.size());
    if (symbols.empty()) return r;

    double mean_amp = 0.0;
    for (const auto& s : symbols) mean_amp += std::abs(s);
    mean_amp /= static_cast<double>(symbols.size());
    if (mean_amp < 1e-12) mean_amp = 1.0;
    const double ped_gain = std::sqrt(2.0) * mean_amp;

    const LoopGains g =
        second_order_gains(cfg.loop_bandwidth, cfg.damping, ped_gain, 1.0);
    double phase = 0.0;
    double freq = 0.0;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const cplx y = symbols[k] * cplx{std::cos(-phase), std::sin(-phase)};
        r.symbols[k] = y;
        r.phase_track[k] = phase;
        const double e = sgn(y.real()) * y.imag() - sgn(y.imag()) * y.real();
        freq += g.k2 * e;
        phase += freq + g.k1 * e;
        // keep the accumulator bounded on long runs
        if (phase > kPi) phase -= 2.0 * kPi;
        if (phase < -kPi) phase += 2.0 * kPi;
    }
    r.residual_freq = freq;
    return r;
}

// ---- frame synchronization ---------------------------------------------------

RxOutput frame_sync_decode(const std::vector<cplx>& symbols,
                           const std::vector<cplx>& preamble, const RxConfig& cfg) {
    if (preamble.empty())
        throw std::invalid_argument("frame_sync_decode: empty preamble");
    RxOutput out;
    const std::size_t n = symbols.size();
    const std::size_t plen = preamble.size();
    out.bit1.assign(n, 0);
    out.bit2.assign(n, 0);
    out.valid.assign(n, false);
    if (n < plen) return out;

    double p_energy = 0.0;
    for (const auto& p : preamble) p_energy += std::norm(p);
    const double p_norm = std::sqrt(p_energy);

    const std::size_t data_syms = (26 + cfg.payload_bits_per_frame) / 2;

    // normalized cross-correlation against the known preamble
    auto corr_at = [&](std::size_t k, cplx& c) {
        c = cplx{0.0, 0.0};
        double s_energy = 0.0;
        for (std::size_t i = 0; i < plen; ++i) {
            c += std::conj(preamble[i]) * symbols[k + i];
            s_energy += std::norm(symbols[k + i]);
        }
        const double d = p_norm * std::sqrt(s_energy);
        return d > 1e-12 ? std::abs(c) / d : 0.0;
    };

    std::size_t k = 0;
    while (k + plen <= n) {
        cplx c;
        double rho = corr_at(k, c);
        if (rho < cfg.frame_sync_threshold) {
            ++k;
            continue;
        }
        // refine to the local maximum over the next preamble-length of lags;
        // a partial overlap (one Barker copy) crosses the threshold up to
        // plen/2 symbols ahead of the true peak
        std::size_t best = k;
        cplx best_c = c;
        double best_rho = rho;
        for (std::size_t j = k + 1; j < std::min(k + plen + 1, n - plen + 1); ++j) {
            cplx cj;
            const double rj = corr_at(j, cj);
            if (rj > best_rho) {
                best_rho = rj;
                best = j;
                best_c = cj;
            }
        }
        const std::size_t data_start = best + plen;
        if (data_start + data_syms > n) {
            ++out.frames_dropped; // truncated at the end of the capture
            break;
        }
        // carrier phase ambiguity: quantize the correlation phase to 90 deg
        const double theta = std::arg(best_c);
        const double quant = std::round(theta / (kPi / 2.0)) * (kPi / 2.0);
        const cplx derot{std::cos(-quant), std::sin(-quant)};

        out.frame_starts.push_back(best);
        ++out.frames_detected;
        for (std::size_t i = 0; i < data_syms; ++i) {
            const cplx s = symbols[data_start + i] * derot;
            out.bit1[data_start + i] = s.real() < 0.0 ? 1 : 0;
            out.bit2[data_start + i] = s.imag() < 0.0 ? 1 : 0;
            out.valid[data_start + i] = true;
        }
        k = data_start + data_syms;
    }
    return out;
}

// ---- full chain ---------------------------------------------------------------

RxOutput receive(const SampleBuffer& x, const RxConfig& cfg) {
    AgcState agc_state = cfg.agc;
    const SampleBuffer leveled = agc(x, agc_state);
    const SampleBuffer mf =
        matched_filter(leveled, cfg.rolloff, cfg.rrc_span_symbols, cfg.sps);

    double f_hat = 0.0;
    if (mf.samples.size() >= cfg.cfc_nfft)
        f_hat = coarse_freq_estimate(mf, cfg.cfc_nfft);
    const SampleBuffer corrected = coarse_freq_correct(mf, f_hat);

    const TimingResult timing = timing_recovery(corrected, cfg.timing);
    const FfcResult ffc = ffc_pll(timing.symbols, cfg.ffc);

    // preamble defined by the transmit chain; declared locally to keep the
    // receiver free of a tx-module dependency at the interface level
    std::vector<cplx> pre;
    {
        static const int chips[13] = {+1, +1, +1, +1, +1, -1, -1, +1, +1, -1, +1, -1, +1};
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int rep = 0; rep < 2; ++rep)
            for (int chip : chips) pre.emplace_back(chip * inv_sqrt2, chip * inv_sqrt2);
    }

    RxOutput out = frame_sync_decode(ffc.symbols, pre, cfg);
    out.timing_lock_lost = timing.lock_lost;
    out.residual_cfo_hz =
        f_hat + ffc.residual_freq / (2.0 * kPi) * cfg.symbol_rate_hz;
    return out;
}

} // namespace sdrlink
