#include "sdrlink/signal_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdrlink {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

double mean_power(const std::vector<cplx>& x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

// ---- FIR ----------------------------------------------------------------

SampleBuffer fir_filter(const SampleBuffer& x, const TapSet& h) {
    if (h.taps.empty()) throw std::invalid_argument("fir_filter: empty tap set");
    SampleBuffer y;
    y.sample_rate_hz = x.sample_rate_hz;
    y.samples.assign(x.samples.size(), cplx{0.0, 0.0});
    const std::size_t n = x.samples.size();
    const std::size_t m = h.taps.size();
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        const std::size_t jmax = std::min(m - 1, k);
        for (std::size_t j = 0; j <= jmax; ++j)
            acc += h.taps[j] * x.samples[k - j];
        y.samples[k] = acc;
    }
    return y;
}

std::vector<double> fir_filter_real(const std::vector<double>& x, const TapSet& h) {
    if (h.taps.empty()) throw std::invalid_argument("fir_filter: empty tap set");
    std::vector<double> y(x.size(), 0.0);
    const std::size_t m = h.taps.size();
    for (std::size_t k = 0; k < x.size(); ++k) {
        double acc = 0.0;
        const std::size_t jmax = std::min(m - 1, k);
        for (std::size_t j = 0; j <= jmax; ++j)
            acc += h.taps[j] * x[k - j];
        y[k] = acc;
    }
    return y;
}

// ---- RRC design ---------------------------------------------------------

TapSet design_rrc(double rolloff, int span_symbols, int samples_per_symbol) {
    if (!(rolloff > 0.0) || rolloff > 1.0)
        throw std::invalid_argument("design_rrc: rolloff must be in (0, 1]");
    if (span_symbols <= 0 || samples_per_symbol < 2)
        throw std::invalid_argument("design_rrc: need span >= 1 and sps >= 2");

    const int n = 2 * span_symbols * samples_per_symbol + 1; // span_symbols each side of the peak
    const int mid = n / 2;
    const double beta = rolloff;
    std::vector<double> h(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - mid) / samples_per_symbol; // in symbols
        double v;
        if (t == 0.0) {
            v = 1.0 - beta + 4.0 * beta / kPi;
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-12) {
            v = (beta / std::sqrt(2.0)) *
                ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta)) +
                 (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta)));
        } else {
            const double num = std::sin(kPi * t * (1.0 - beta)) +
                               4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
            const double den = kPi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
            v = num / den;
        }
        h[static_cast<std::size_t>(i)] = v;
    }

    double energy = 0.0;
    for (double v : h) energy += v * v;
    const double g = 1.0 / std::sqrt(energy);
    for (double& v : h) v *= g;

    // enforce exact symmetry against rounding in the trig evaluation
    for (int i = 0; i < n / 2; ++i) {
        const double s = 0.5 * (h[static_cast<std::size_t>(i)] +
                                h[static_cast<std::size_t>(n - 1 - i)]);
        h[static_cast<std::size_t>(i)] = s;
        h[static_cast<std::size_t>(n - 1 - i)] = s;
    }

    return TapSet{std::move(h), g};
}

TapSet design_bandpass(double f_lo_hz, double f_hi_hz, double fs_hz, int num_taps) {
    if (!(0.0 < f_lo_hz && f_lo_hz < f_hi_hz && f_hi_hz < fs_hz / 2.0))
        throw std::invalid_argument("design_bandpass: band must satisfy 0 < f_lo < f_hi < fs/2");
    if (num_taps < 3 || num_taps % 2 == 0)
        throw std::invalid_argument("design_bandpass: num_taps must be odd and >= 3");

    const int mid = num_taps / 2;
    const double w_lo = 2.0 * kPi * f_lo_hz / fs_hz;
    const double w_hi = 2.0 * kPi * f_hi_hz / fs_hz;
    std::vector<double> h(static_cast<std::size_t>(num_taps));
    for (int i = 0; i < num_taps; ++i) {
        const int k = i - mid;
        double ideal;
        if (k == 0) {
            ideal = (w_hi - w_lo) / kPi;
        } else {
            ideal = (std::sin(w_hi * k) - std::sin(w_lo * k)) / (kPi * k);
        }
        const double window =
            0.54 - 0.46 * std::cos(2.0 * kPi * i / (num_taps - 1));
        h[static_cast<std::size_t>(i)] = ideal * window;
    }
    // normalize to unity gain at the band center
    const double wc = 0.5 * (w_lo + w_hi);
    double re = 0.0, im = 0.0;
    for (int i = 0; i < num_taps; ++i) {
        re += h[static_cast<std::size_t>(i)] * std::cos(wc * i);
        im -= h[static_cast<std::size_t>(i)] * std::sin(wc * i);
    }
    const double mag = std::hypot(re, im);
    const double g = mag > 0.0 ? 1.0 / mag : 1.0;
    for (double& v : h) v *= g;
    return TapSet{std::move(h), g};
}

// ---- FWHT ---------------------------------------------------------------

namespace {

std::size_t gray(std::size_t i) { return i ^ (i >> 1); }

std::size_t bit_reverse(std::size_t v, int bits) {
    std::size_t r = 0;
    for (int i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

} // namespace

std::vector<double> fwht(const std::vector<double>& x, WhtOrdering ordering) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n))
        throw std::length_error("fwht: length must be a power of two");
    std::vector<double> y = x;
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t i = 0; i < n; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double a = y[j];
                const double b = y[j + len];
                y[j] = a + b;
                y[j + len] = a - b;
            }
        }
    }
    if (ordering == WhtOrdering::sequency) {
        int bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = y[bit_reverse(gray(i), bits)];
        return s;
    }
    return y;
}

// ---- DFT ----------------------------------------------------------------

namespace {

// in-place iterative radix-2, sign = -1 forward / +1 inverse
void fft_radix2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = bit_reverse(i, bits);
        if (j > i) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * kPi / static_cast<double>(len);
        const cplx wlen{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace

std::vector<cplx> dft(const std::vector<cplx>& x, std::size_t nfft) {
    if (nfft == 0) throw std::length_error("dft: nfft must be positive");
    if (nfft < x.size()) throw std::length_error("dft: nfft < input length");
    std::vector<cplx> a(nfft, cplx{0.0, 0.0});
    std::copy(x.begin(), x.end(), a.begin());
    if (is_power_of_two(nfft)) {
        fft_radix2(a, -1);
        return a;
    }
    std::vector<cplx> out(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < nfft; ++m) {
            const double ang = -2.0 * kPi * static_cast<double>(k * m) / static_cast<double>(nfft);
            acc += a[m] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> idft(const std::vector<cplx>& X) {
    const std::size_t n = X.size();
    if (n == 0) throw std::length_error("idft: empty input");
    std::vector<cplx> a = X;
    if (is_power_of_two(n)) {
        fft_radix2(a, +1);
        for (auto& v : a) v /= static_cast<double>(n);
        return a;
    }
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = 2.0 * kPi * static_cast<double>(k * m) / static_cast<double>(n);
            acc += a[m] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[k] = acc / static_cast<double>(n);
    }
    return out;
}

// ---- Interpolation ------------------------------------------------------

cplx sinc_interp(const std::vector<cplx>& x, double t, int half_taps) {
    const double tf = std::floor(t);
    const long base = static_cast<long>(tf);
    const double frac = t - tf;
    if (frac == 0.0) {
        if (base < 0 || base >= static_cast<long>(x.size())) return {0.0, 0.0};
        return x[static_cast<std::size_t>(base)];
    }
    cplx acc{0.0, 0.0};
    const int lo = -half_taps + 1;
    const int hi = half_taps;
    const int span = 2 * half_taps;
    for (int k = lo; k <= hi; ++k) {
        const long idx = base + k;
        if (idx < 0 || idx >= static_cast<long>(x.size())) continue;
        const double u = frac - k;
        const double s = std::sin(kPi * u) / (kPi * u);
        // Blackman window over the tap span, centered on the interpolation point
        const double a = kPi * u / (0.5 * span);
        const double w = 0.42 + 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a);
        acc += x[static_cast<std::size_t>(idx)] * (s * w);
    }
    return acc;
}

cplx parabolic_interp(cplx xm1, cplx x0, cplx x1, cplx x2, double mu) {
    constexpr double a = 0.5;
    const cplx v2 = a * x2 - a * x1 - a * x0 + a * xm1;
    const cplx v1 = -a * x2 + (1.0 + a) * x1 - (1.0 - a) * x0 - a * xm1;
    return (v2 * mu + v1) * mu + x0;
}

} // namespace sdrlink
