#ifndef SDRLINK_SIGNAL_CORE_HPP
#define SDRLINK_SIGNAL_CORE_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace sdrlink {

using cplx = std::complex<double>;

/// Finite block of complex baseband samples at a fixed sample rate.
struct SampleBuffer {
    std::vector<cplx> samples;
    double sample_rate_hz = 1.0;

    std::size_t size() const { return samples.size(); }
};

/// Real FIR coefficient set. `gain` records the normalization factor that
/// was applied at design time.
struct TapSet {
    std::vector<double> taps;
    double gain = 1.0;

    std::size_t size() const { return taps.size(); }
};

// ---- FIR filtering ------------------------------------------------------

// y[k] = sum_j h[j] * x[k-j], x zero-padded below index 0.
// Output length equals input length (the filter's tail is truncated).
SampleBuffer fir_filter(const SampleBuffer& x, const TapSet& h);
std::vector<double> fir_filter_real(const std::vector<double>& x, const TapSet& h);

// ---- Filter design ------------------------------------------------------

// Unit-energy root-raised-cosine taps spanning span_symbols on each side of
// the peak: length = 2 * span_symbols * sps + 1 (odd, symmetric). The
// removable singularities at t = 0 and |t| = Ts/(4*rolloff)
// are evaluated by their analytic limits.
TapSet design_rrc(double rolloff, int span_symbols, int samples_per_symbol);

// Linear-phase band-pass (Hamming-windowed sinc), unity passband gain.
// num_taps must be odd.
TapSet design_bandpass(double f_lo_hz, double f_hi_hz, double fs_hz, int num_taps);

// ---- Walsh-Hadamard -----------------------------------------------------

enum class WhtOrdering { natural, sequency };

// Unnormalized fast Walsh-Hadamard transform; length must be a power of two.
// Natural (Hadamard) ordering by default; sequency reorders rows by the
// number of sign changes.
std::vector<double> fwht(const std::vector<double>& x,
                         WhtOrdering ordering = WhtOrdering::natural);

// ---- DFT ----------------------------------------------------------------

// Forward DFT, zero-padded to nfft (nfft >= x.size()). Radix-2 when nfft is
// a power of two, direct sum otherwise.
std::vector<cplx> dft(const std::vector<cplx>& x, std::size_t nfft);
std::vector<cplx> idft(const std::vector<cplx>& X);

// ---- Interpolation ------------------------------------------------------

// Windowed-sinc fractional interpolation: value of x at real-valued index t.
// Uses `half_taps` points on each side (8-tap total for half_taps = 4),
// Hamming-windowed; exact at integer t. Out-of-range points read as zero.
cplx sinc_interp(const std::vector<cplx>& x, double t, int half_taps = 8);

// Piecewise-parabolic (Farrow, alpha = 0.5) interpolant between x[m] and
// x[m+1] at fraction mu in [0,1). Used by the timing loop.
cplx parabolic_interp(cplx xm1, cplx x0, cplx x1, cplx x2, double mu);

// ---- Small helpers ------------------------------------------------------

bool is_power_of_two(std::size_t n);
double mean_power(const std::vector<cplx>& x);

} // namespace sdrlink

#endif
