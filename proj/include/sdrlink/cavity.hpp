#ifndef SDRLINK_CAVITY_HPP
#define SDRLINK_CAVITY_HPP

#include <complex>
#include <cstdint>

namespace sdrlink {

// Rectangular resonant cavity a x c x b (X, Y, Z extents). The source
// analysis speaks of a "closed cylinder of length b and radius c" but every
// formula is separable in Cartesian sines, so the box reading is the only
// self-consistent one; we implement that.
struct CavitySpec {
    double a = 0.1;       // X extent, m
    double c = 0.05;      // Y extent, m
    double b = 0.1;       // Z extent, m
    double mu_r = 1.0;
    double eps_r = 1.0;
    double tan_delta = 0.0;
    double rs_ohm = 0.0;  // wall surface resistivity
};

struct ModeIndices {
    int m = 1;
    int n = 0;
    int l = 1;
};

// Field amplitude and derived constants for a TE10l standing wave.
struct FieldSolution {
    double e0 = 1.0;        // peak E-field amplitude, V/m
    double k = 0.0;         // wavenumber omega*sqrt(mu*eps), rad/m
    double alpha_mn = 0.0;  // axial propagation constant, rad/m
    double eta = 0.0;       // intrinsic impedance sqrt(mu/eps), ohm
};

struct PropagationConstant {
    double value = 0.0;     // |alpha| in rad/m; attenuation rate when evanescent
    bool evanescent = false;
};

struct QosReport {
    double f_mnl_hz = 0.0;
    double u_electric_j = 0.0;
    double u_magnetic_j = 0.0;
    double p_wall_w = 0.0;
    double sigma_eff_s_per_m = 0.0;
    double q_tx = 0.0;      // conductor-loss quality factor
    double q_rx = 0.0;      // dielectric quality factor, 1/tan_delta
    double q_total = 0.0;   // parallel combination
};

struct FieldTriple {
    std::complex<double> e_y;
    std::complex<double> h_x;
    std::complex<double> h_z;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kEps0 = 8.8541878128e-12;
inline constexpr double kMu0 = 1.25663706212e-6;

// alpha = sqrt(K^2 - (m*pi/a)^2 - (n*pi/b)^2); below cutoff the result is
// tagged evanescent and `value` holds the decay rate.
PropagationConstant propagation_constant(double k, int m, int n, double a, double b);

// O_mnl = (m*pi/a)^2 + (n*pi/c)^2 + (l*pi/b)^2
double mode_eigenvalue(const ModeIndices& mode, const CavitySpec& spec);

// f = c0 / (2*pi*sqrt(mu_r*eps_r)) * sqrt(O_mnl)
double resonance_frequency(const ModeIndices& mode, const CavitySpec& spec);

// Resonant TE10l field solution with the given peak amplitude.
FieldSolution solve_te10l(const ModeIndices& mode, const CavitySpec& spec,
                          double e0 = 1.0);

// Standing-wave fields of the TE10l mode at an interior point.
// Throws std::domain_error outside [0,a]x[0,c]x[0,b].
FieldTriple field_at(double x, double y, double z, const ModeIndices& mode,
                     const FieldSolution& sol, const CavitySpec& spec);

struct StoredEnergies {
    double u_electric_j = 0.0;
    double u_magnetic_j = 0.0;
};

// Closed-form stored energies: U_E = eps*a*c*b*E0^2/16 and its magnetic
// counterpart, which equals U_E at resonance.
StoredEnergies stored_energies(const FieldSolution& sol, const CavitySpec& spec,
                               const ModeIndices& mode);

// Closed-form conductor loss (Rs/2) * surface integral of |H_tan|^2 over the
// six walls. The last two bracket terms follow the surface integral, which
// is authoritative where the printed form is ambiguous.
double wall_loss(const FieldSolution& sol, const CavitySpec& spec,
                 const ModeIndices& mode);

// sigma = omega * eps_r * eps0 * tan_delta
double effective_conductivity(double omega, const CavitySpec& spec);

// Q_tx = 2*omega0*U_E/P_wall, Q_rx = 1/tan_delta, Q_total parallel.
// Lossless channels yield +infinity rather than an error.
QosReport q_factors(const FieldSolution& sol, const CavitySpec& spec,
                    const ModeIndices& mode, double omega0);

// Full report for a (spec, mode) cell: resonance, energies, losses, Q's.
QosReport analyze_cavity(const CavitySpec& spec, const ModeIndices& mode,
                         double e0 = 1.0);

// ---- Quadrature route ----------------------------------------------------
// Independent numerical integration of the same quantities, kept as the
// second half of the dual-route check and surfaced in sweep output.

// (eps/4) * volume integral of |E_y|^2 on an n^3 midpoint grid.
double stored_energy_quadrature(const FieldSolution& sol, const CavitySpec& spec,
                                const ModeIndices& mode, int n = 64);

// (Rs/2) * surface integral of |H_tan|^2 over all six walls, n^2 per wall.
double wall_loss_quadrature(const FieldSolution& sol, const CavitySpec& spec,
                            const ModeIndices& mode, int n = 64);

} // namespace sdrlink

#endif
