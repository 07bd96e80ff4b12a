#include "sdrlink/channel.hpp"

#include "sdrlink/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdrlink {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

SampleBuffer apply_channel(const SampleBuffer& x, const ChannelConfig& cfg,
                           int bits_per_symbol, int sps) {
    if (x.samples.empty()) throw std::invalid_argument("apply_channel: empty input");
    if (std::abs(cfg.drift_ppm) > 1000.0)
        throw std::invalid_argument("apply_channel: |drift_ppm| exceeds the 1000 ppm model bound");
    if (cfg.delay_samples < 0.0)
        throw std::invalid_argument("apply_channel: delay must be nonnegative");

    const double fs = x.sample_rate_hz;
    SampleBuffer y;
    y.sample_rate_hz = fs;

    // 1) sample-clock drift: read the input at a stretched rate
    const double ratio = 1.0 + cfg.drift_ppm * 1e-6;
    std::vector<cplx> drifted;
    if (cfg.drift_ppm == 0.0) {
        drifted = x.samples;
    } else {
        const auto out_len =
            static_cast<std::size_t>(std::floor(static_cast<double>(x.samples.size() - 1) / ratio)) + 1;
        drifted.reserve(out_len);
        for (std::size_t k = 0; k < out_len; ++k)
            drifted.push_back(sinc_interp(x.samples, static_cast<double>(k) * ratio));
    }

    // 2) fractional delay
    std::vector<cplx> delayed;
    if (cfg.delay_samples == 0.0) {
        delayed = std::move(drifted);
    } else {
        delayed.resize(drifted.size());
        for (std::size_t k = 0; k < drifted.size(); ++k) {
            const double t = static_cast<double>(k) - cfg.delay_samples;
            delayed[k] = t < 0.0 ? cplx{0.0, 0.0} : sinc_interp(drifted, t);
        }
    }

    // 3) CFO + preset phase rotation
    y.samples.resize(delayed.size());
    for (std::size_t k = 0; k < delayed.size(); ++k) {
        const double ang =
            2.0 * kPi * cfg.cfo_hz * static_cast<double>(k) / fs + cfg.phase_offset_rad;
        y.samples[k] = delayed[k] * cplx{std::cos(ang), std::sin(ang)};
    }

    // 4) AWGN scaled from Eb/N0 against the measured clean-signal power
    if (std::isfinite(cfg.ebn0_db) && cfg.ebn0_db < 280.0) {
        const double gamma_b = std::pow(10.0, cfg.ebn0_db / 10.0);
        const double p = mean_power(y.samples);
        const double sigma2 = p * static_cast<double>(sps) /
                              (static_cast<double>(bits_per_symbol) * gamma_b);
        const double s = std::sqrt(sigma2 / 2.0);
        Rng rng(cfg.seed);
        for (auto& v : y.samples)
            v += cplx{s * rng.next_gaussian(), s * rng.next_gaussian()};
    }
    return y;
}

} // namespace sdrlink
