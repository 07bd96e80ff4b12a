#include "sdrlink/cavity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sdrlink {

namespace {
constexpr double kPi = std::numbers::pi;
using std::complex;
const complex<double> kJ{0.0, 1.0};
} // namespace

PropagationConstant propagation_constant(double k, int m, int n, double a, double b) {
    if (!(k > 0.0 && a > 0.0 && b > 0.0))
        throw std::invalid_argument("propagation_constant: k, a, b must be positive");
    const double kx = m * kPi / a;
    const double ky = n * kPi / b;
    const double arg = k * k - kx * kx - ky * ky;
    if (arg >= 0.0) return {std::sqrt(arg), false};
    return {std::sqrt(-arg), true};
}

double mode_eigenvalue(const ModeIndices& mode, const CavitySpec& spec) {
    const double tx = mode.m * kPi / spec.a;
    const double ty = mode.n * kPi / spec.c;
    const double tz = mode.l * kPi / spec.b;
    return tx * tx + ty * ty + tz * tz;
}

double resonance_frequency(const ModeIndices& mode, const CavitySpec& spec) {
    const double o = mode_eigenvalue(mode, spec);
    return kSpeedOfLight / (2.0 * kPi * std::sqrt(spec.mu_r * spec.eps_r)) * std::sqrt(o);
}

FieldSolution solve_te10l(const ModeIndices& mode, const CavitySpec& spec, double e0) {
    if (mode.m != 1 || mode.n != 0 || mode.l < 1)
        throw std::invalid_argument("solve_te10l: mode must be TE10l with l >= 1");
    FieldSolution sol;
    sol.e0 = e0;
    sol.k = std::sqrt(mode_eigenvalue(mode, spec));
    sol.alpha_mn = mode.l * kPi / spec.b;
    sol.eta = std::sqrt(spec.mu_r * kMu0 / (spec.eps_r * kEps0));
    return sol;
}

FieldTriple field_at(double x, double y, double z, const ModeIndices& mode,
                     const FieldSolution& sol, const CavitySpec& spec) {
    if (x < 0.0 || x > spec.a || y < 0.0 || y > spec.c || z < 0.0 || z > spec.b)
        throw std::domain_error("field_at: point outside the cavity");
    if (mode.m != 1 || mode.n != 0)
        throw std::invalid_argument("field_at: fields derived for the TE10l family only");
    const double sx = std::sin(kPi * x / spec.a);
    const double cx = std::cos(kPi * x / spec.a);
    const double sz = std::sin(mode.l * kPi * z / spec.b);
    const double cz = std::cos(mode.l * kPi * z / spec.b);
    const double zw = sol.k * sol.eta / sol.alpha_mn; // wave impedance
    FieldTriple f;
    f.e_y = sol.e0 * sx * sz;
    f.h_x = -kJ * (sol.e0 / zw) * sx * cz;
    f.h_z = kJ * (kPi * sol.e0 / (sol.k * sol.eta * spec.a)) * cx * sz;
    return f;
}

StoredEnergies stored_energies(const FieldSolution& sol, const CavitySpec& spec,
                               const ModeIndices& mode) {
    const double eps = spec.eps_r * kEps0;
    const double mu = spec.mu_r * kMu0;
    const double vol = spec.a * spec.c * spec.b;
    StoredEnergies u;
    u.u_electric_j = eps * vol * sol.e0 * sol.e0 / 16.0;
    // magnetic route: (mu/4) * integral(|H_x|^2 + |H_z|^2), each sin*cos
    // product integrating to vol/4; alpha^2 + (pi/a)^2 = K^2 at resonance
    const double ax2 = sol.alpha_mn * sol.alpha_mn;
    const double az2 = (kPi / spec.a) * (kPi / spec.a);
    const double k2eta2 = sol.k * sol.k * sol.eta * sol.eta;
    u.u_magnetic_j = mu * vol * sol.e0 * sol.e0 * (ax2 + az2) / (16.0 * k2eta2);
    (void)mode;
    return u;
}

double wall_loss(const FieldSolution& sol, const CavitySpec& spec,
                 const ModeIndices& mode) {
    // |H_x| peak = E0*l*pi/(b*K*eta); |H_z| peak = E0*pi/(a*K*eta).
    // Wall pair z=0,b:  Ax^2 * a*c           (H_x tangential)
    // Wall pair x=0,a:  Az^2 * c*b           (H_z tangential)
    // Wall pair y=0,c:  (Ax^2 + Az^2)*a*b/2  (both tangential)
    const double l = mode.l;
    const double pre = spec.rs_ohm * sol.e0 * sol.e0 * kPi * kPi /
                       (2.0 * sol.k * sol.k * sol.eta * sol.eta);
    const double bracket = l * l * spec.a * spec.c / (spec.b * spec.b) +
                           spec.c * spec.b / (spec.a * spec.a) +
                           l * l * spec.a / (2.0 * spec.b) +
                           spec.b / (2.0 * spec.a);
    return pre * bracket;
}

double effective_conductivity(double omega, const CavitySpec& spec) {
    if (!(omega > 0.0)) throw std::invalid_argument("effective_conductivity: omega must be positive");
    return omega * spec.eps_r * kEps0 * spec.tan_delta;
}

QosReport q_factors(const FieldSolution& sol, const CavitySpec& spec,
                    const ModeIndices& mode, double omega0) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    QosReport r;
    r.f_mnl_hz = omega0 / (2.0 * kPi);
    const StoredEnergies u = stored_energies(sol, spec, mode);
    r.u_electric_j = u.u_electric_j;
    r.u_magnetic_j = u.u_magnetic_j;
    r.p_wall_w = wall_loss(sol, spec, mode);
    r.sigma_eff_s_per_m = effective_conductivity(omega0, spec);
    r.q_tx = r.p_wall_w > 0.0 ? 2.0 * omega0 * u.u_electric_j / r.p_wall_w : inf;
    r.q_rx = spec.tan_delta > 0.0 ? 1.0 / spec.tan_delta : inf;
    if (std::isinf(r.q_tx) && std::isinf(r.q_rx)) {
        r.q_total = inf;
    } else if (std::isinf(r.q_tx)) {
        r.q_total = r.q_rx;
    } else if (std::isinf(r.q_rx)) {
        r.q_total = r.q_tx;
    } else {
        r.q_total = 1.0 / (1.0 / r.q_tx + 1.0 / r.q_rx);
    }
    return r;
}

QosReport analyze_cavity(const CavitySpec& spec, const ModeIndices& mode, double e0) {
    const FieldSolution sol = solve_te10l(mode, spec, e0);
    const double f = resonance_frequency(mode, spec);
    QosReport r = q_factors(sol, spec, mode, 2.0 * kPi * f);
    r.f_mnl_hz = f;
    return r;
}

// ---- quadrature route ----------------------------------------------------

double stored_energy_quadrature(const FieldSolution& sol, const CavitySpec& spec,
                                const ModeIndices& mode, int n) {
    const double eps = spec.eps_r * kEps0;
    const double dx = spec.a / n, dy = spec.c / n, dz = spec.b / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * dx;
        for (int j = 0; j < n; ++j) {
            const double y = (j + 0.5) * dy;
            for (int k = 0; k < n; ++k) {
                const double z = (k + 0.5) * dz;
                const FieldTriple f = field_at(x, y, z, mode, sol, spec);
                acc += std::norm(f.e_y);
            }
        }
    }
    return eps / 4.0 * acc * dx * dy * dz;
}

double wall_loss_quadrature(const FieldSolution& sol, const CavitySpec& spec,
                            const ModeIndices& mode, int n) {
    double acc = 0.0;
    // z = 0 and z = b walls (x-y planes): tangential H = (H_x, 0)
    {
        const double du = spec.a / n, dv = spec.c / n;
        for (int zi = 0; zi < 2; ++zi) {
            const double z = zi == 0 ? 0.0 : spec.b;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const FieldTriple f =
                        field_at((i + 0.5) * du, (j + 0.5) * dv, z, mode, sol, spec);
                    acc += std::norm(f.h_x) * du * dv;
                }
        }
    }
    // x = 0 and x = a walls (y-z planes): tangential H = (0, H_z)
    {
        const double du = spec.c / n, dv = spec.b / n;
        for (int xi = 0; xi < 2; ++xi) {
            const double x = xi == 0 ? 0.0 : spec.a;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const FieldTriple f =
                        field_at(x, (i + 0.5) * du, (j + 0.5) * dv, mode, sol, spec);
                    acc += std::norm(f.h_z) * du * dv;
                }
        }
    }
    // y = 0 and y = c walls (x-z planes): both H_x and H_z tangential
    {
        const double du = spec.a / n, dv = spec.b / n;
        for (int yi = 0; yi < 2; ++yi) {
            const double y = yi == 0 ? 0.0 : spec.c;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const FieldTriple f =
                        field_at((i + 0.5) * du, y, (j + 0.5) * dv, mode, sol, spec);
                    acc += (std::norm(f.h_x) + std::norm(f.h_z)) * du * dv;
                }
        }
    }
    return spec.rs_ohm / 2.0 * acc;
}

} // namespace sdrlink
