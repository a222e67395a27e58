// Paraxial beam propagation with a time-dependent refraction profile: the
// profile's clock transform, split-step evolution with an optional Kerr
// term, Airy launch fields, the free-space response kernel, and a slab
// resonator whose modes relax with a memory index.
#ifndef FRSE_BEAMS_HPP
#define FRSE_BEAMS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "fft.hpp"
#include "fracops.hpp"
#include "observables.hpp"
#include "specfun/airy.hpp"
#include "specfun/kernel.hpp"
#include "specfun/mittag_leffler.hpp"

namespace frse {

namespace detail {

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 40) {
    if (b <= a) return 0.0;
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace detail

// Refraction profile g(t) of the medium, together with the effective Planck
// constant that scales its clock transform g1(t) = (1/hbar) int_0^t dt'/g.
// Constant and power-law profiles carry closed-form clocks; tabulated ones
// are integrated numerically over a linear interpolant.
struct MetricProfile {
    enum class Kind { constant, power, tabulated };

    Kind kind = Kind::constant;
    double g0 = 1.0;        // constant profile value
    double exponent = 0.0;  // power-law index p in g(t) = t^p
    rvec t_nodes;
    rvec g_nodes;
    double hbar_ef = 1.0;

    static MetricProfile constant(double value, double hbar = 1.0) {
        if (!(value > 0.0)) throw std::domain_error("MetricProfile: profile must be positive");
        if (!(hbar > 0.0)) throw std::invalid_argument("MetricProfile: hbar_ef must be positive");
        MetricProfile p;
        p.kind = Kind::constant;
        p.g0 = value;
        p.hbar_ef = hbar;
        return p;
    }

    static MetricProfile power_law(double exponent, double hbar = 1.0) {
        if (!(hbar > 0.0)) throw std::invalid_argument("MetricProfile: hbar_ef must be positive");
        if (!std::isfinite(exponent)) throw std::invalid_argument("MetricProfile: exponent must be finite");
        MetricProfile p;
        p.kind = Kind::power;
        p.exponent = exponent;
        p.hbar_ef = hbar;
        return p;
    }

    static MetricProfile tabulated(rvec times, rvec values, double hbar = 1.0) {
        if (!(hbar > 0.0)) throw std::invalid_argument("MetricProfile: hbar_ef must be positive");
        if (times.size() != values.size() || times.size() < 2)
            throw std::invalid_argument("MetricProfile: need matching sample arrays, n >= 2");
        if (std::abs(times.front()) > 1e-12)
            throw std::invalid_argument("MetricProfile: samples must start at t = 0");
        for (std::size_t j = 1; j < times.size(); ++j)
            if (!(times[j] > times[j - 1]))
                throw std::invalid_argument("MetricProfile: sample times must ascend");
        for (double g : values)
            if (!(g > 0.0)) throw std::domain_error("MetricProfile: profile must be positive");
        MetricProfile p;
        p.kind = Kind::tabulated;
        p.t_nodes = std::move(times);
        p.g_nodes = std::move(values);
        p.hbar_ef = hbar;
        return p;
    }

    // Profile value at time t; tabulated profiles interpolate linearly and
    // reject queries outside the sampled window.
    double g(double t) const {
        switch (kind) {
            case Kind::constant:
                return g0;
            case Kind::power:
                return std::pow(t, exponent);
            case Kind::tabulated: {
                if (t < t_nodes.front() - 1e-12 || t > t_nodes.back() + 1e-12)
                    throw std::invalid_argument("MetricProfile: t outside tabulated window");
                const double tc = std::clamp(t, t_nodes.front(), t_nodes.back());
                const auto it = std::upper_bound(t_nodes.begin(), t_nodes.end(), tc);
                const std::size_t hi = std::min(t_nodes.size() - 1,
                                                static_cast<std::size_t>(it - t_nodes.begin()));
                const std::size_t lo = hi == 0 ? 0 : hi - 1;
                if (hi == lo) return g_nodes[lo];
                const double w = (tc - t_nodes[lo]) / (t_nodes[hi] - t_nodes[lo]);
                return g_nodes[lo] + w * (g_nodes[hi] - g_nodes[lo]);
            }
        }
        throw std::logic_error("MetricProfile: unknown kind");
    }
};

namespace detail {

// Clock increment (1/hbar) int_{t0}^{t1} dt/g(t).
inline double g1_increment(const MetricProfile& profile, double t0, double t1) {
    if (t1 < t0) throw std::invalid_argument("metric_g1: time must be nonnegative");
    if (t1 == t0) return 0.0;
    switch (profile.kind) {
        case MetricProfile::Kind::constant:
            return (t1 - t0) / (profile.g0 * profile.hbar_ef);
        case MetricProfile::Kind::power: {
            const double p = profile.exponent;
            if (p >= 1.0)
                throw std::domain_error(
                    "metric_g1: clock integral diverges at t = 0 for exponent >= 1");
            const double q = 1.0 - p;
            return (std::pow(t1, q) - std::pow(t0, q)) / (q * profile.hbar_ef);
        }
        case MetricProfile::Kind::tabulated: {
            const double v = adaptive_simpson([&](double t) { return 1.0 / profile.g(t); },
                                              t0, t1, 1e-12 * (t1 - t0) + 1e-15);
            return v / profile.hbar_ef;
        }
    }
    throw std::logic_error("metric_g1: unknown kind");
}

}  // namespace detail

inline double metric_g1(const MetricProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("metric_g1: time must be nonnegative");
    return detail::g1_increment(profile, 0.0, t);
}

// One spectral drift step: every mode picks up the unimodular factor
// exp(-(i/2) hbar^(alpha-1) |k|^alpha dg1), dg1 being the clock increment.
inline WaveField linear_step(const WaveField& f, const FracParams& params, double dg1) {
    params.validate();
    if (!(dg1 >= 0.0)) throw std::invalid_argument("linear_step: clock increment must be >= 0");
    const rvec mags = riesz_multiplier(f.grid, params.alpha);
    const double hpow = std::pow(params.hbar_ef, params.alpha - 1.0);
    WaveField out = f;
    fft_inplace(out.values);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] *= std::exp(cplx(0.0, -0.5 * hpow * dg1 * mags[k]));
    ifft_inplace(out.values);
    return out;
}

// One local Kerr step: psi *= exp(+i (B / (hbar g)) |psi|^2 dt), with g the
// profile value over the substep.
inline WaveField kerr_step(const WaveField& f, const FracParams& params, double g_value,
                           double dt) {
    params.validate();
    if (!(g_value > 0.0)) throw std::domain_error("kerr_step: profile value must be positive");
    if (!(dt >= 0.0)) throw std::invalid_argument("kerr_step: dt must be >= 0");
    const double c = params.B / (params.hbar_ef * g_value);
    WaveField out = f;
    for (cplx& v : out.values) v *= std::exp(cplx(0.0, c * std::norm(v) * dt));
    return out;
}

// Strang-split evolution of i hbar psi_t = (hbar^alpha / 2g) |k|^alpha psi
// - (B/g) |psi|^2 psi over [0, t_final] with a fixed step dt: half a Kerr
// substep, the spectral drift across the step's clock increment, half a
// Kerr substep.  Kerr coefficients are taken at the quarter points so the
// split stays second order for time-dependent profiles.  Diagnostics are
// recorded every record_every steps (0 keeps only the endpoints); a
// non-finite field aborts with the offending step index.
inline EvolutionReport propagate_nlse(const WaveField& psi0, const FracParams& params,
                                      const MetricProfile& profile, double t_final, double dt,
                                      std::size_t record_every = 0) {
    params.validate();
    if (profile.hbar_ef != params.hbar_ef)
        throw std::invalid_argument("propagate_nlse: params and profile disagree on hbar_ef");
    if (!(t_final > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("propagate_nlse: t_final and dt must be positive");
    const long long n_steps = std::llround(t_final / dt);
    if (n_steps < 1 || std::abs(static_cast<double>(n_steps) * dt - t_final) > 1e-6 * dt)
        throw std::invalid_argument("propagate_nlse: dt must divide t_final");

    const rvec mags = riesz_multiplier(psi0.grid, params.alpha);
    const double hpow = std::pow(params.hbar_ef, params.alpha - 1.0);
    const bool kerr_on = params.B != 0.0;

    WaveField psi = psi0;
    EvolutionReport report;
    report.record(0.0, psi);

    cvec mult(psi.grid.n);
    double cached_dg1 = -1.0;
    for (long long step = 0; step < n_steps; ++step) {
        const double t0 = static_cast<double>(step) * dt;
        if (kerr_on) {
            const double c = params.B / (params.hbar_ef * profile.g(t0 + 0.25 * dt));
            for (cplx& v : psi.values) v *= std::exp(cplx(0.0, c * std::norm(v) * 0.5 * dt));
        }
        const double dg1 = detail::g1_increment(profile, t0, t0 + dt);
        if (dg1 != cached_dg1) {
            for (std::size_t k = 0; k < mult.size(); ++k)
                mult[k] = std::exp(cplx(0.0, -0.5 * hpow * dg1 * mags[k]));
            cached_dg1 = dg1;
        }
        fft_inplace(psi.values);
        for (std::size_t k = 0; k < psi.values.size(); ++k) psi.values[k] *= mult[k];
        ifft_inplace(psi.values);
        if (kerr_on) {
            const double c = params.B / (params.hbar_ef * profile.g(t0 + 0.75 * dt));
            for (cplx& v : psi.values) v *= std::exp(cplx(0.0, c * std::norm(v) * 0.5 * dt));
        }
        for (const cplx& v : psi.values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::runtime_error("propagate_nlse: non-finite field at step " +
                                         std::to_string(step + 1));
        const bool last = step + 1 == n_steps;
        if (last || (record_every > 0 && (step + 1) % record_every == 0))
            report.record(static_cast<double>(step + 1) * dt, psi);
    }
    return report;
}

// Airy launch field Ai(a x / hbar^(2/3)) with a half-cosine taper over the
// leftmost taper_fraction of the grid, so the truncated left tail does not
// seed a spurious wrap-around current.  The argument is clipped to zero
// deep in the right tail where the transform underflows.
inline WaveField airy_initial(const Grid& grid, double a, double hbar_ef,
                              double taper_fraction = 0.15) {
    if (!(a > 0.0)) throw std::invalid_argument("airy_initial: scale must be positive");
    if (!(hbar_ef > 0.0)) throw std::invalid_argument("airy_initial: hbar_ef must be positive");
    if (!(taper_fraction >= 0.0 && taper_fraction <= 0.5))
        throw std::invalid_argument("airy_initial: taper_fraction must lie in [0, 0.5]");
    const double scale = a / std::pow(hbar_ef, 2.0 / 3.0);
    if (scale * grid.x_min < -60.0)
        throw std::invalid_argument("airy_initial: left edge beyond the certified Ai range");
    WaveField f;
    f.grid = grid;
    f.values.resize(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double arg = scale * grid.x(j);
        f.values[j] = arg > 30.0 ? 0.0 : airy_ai(arg);
    }
    const std::size_t m = static_cast<std::size_t>(std::lround(taper_fraction * grid.n));
    for (std::size_t j = 0; j < m; ++j)
        f.values[j] *= 0.5 * (1.0 - std::cos(pi * static_cast<double>(j) / m));
    return f;
}

// Free-space response at displacement x after time t: the drift kernel
// evaluated at the profile's accumulated clock, K(x; tau = g1(t)) with
// spectral coefficient (i/2) hbar^(alpha-1).
inline cplx fox_beam_green(double x, double t, const FracParams& params,
                           const MetricProfile& profile,
                           const KernelOptions& opts = {}) {
    params.validate();
    if (t < 0.0) throw std::invalid_argument("fox_beam_green: time must be nonnegative");
    const double tau = metric_g1(profile, t);
    const cplx coeff(0.0, 0.5 * std::pow(params.hbar_ef, params.alpha - 1.0));
    return frac_free_kernel(x, tau, params.alpha, coeff, opts);
}

// Slab resonator bounded by |x| <= half_width: launch spectrum, carrier
// wavenumber and detuning, drift index alpha, and memory index beta.
struct SlabConfig {
    double half_width = 1.0;
    double k_carrier = 1.0;
    double omega = 0.0;
    double alpha = 2.0;
    double beta = 1.0;
    std::size_t n_modes = 16;

    void validate() const {
        if (!(half_width > 0.0)) throw std::invalid_argument("SlabConfig: half_width must be positive");
        if (!(k_carrier > 0.0)) throw std::invalid_argument("SlabConfig: k_carrier must be positive");
        if (!std::isfinite(omega)) throw std::invalid_argument("SlabConfig: omega must be finite");
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw std::invalid_argument("SlabConfig: alpha must lie in (0, 2]");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("SlabConfig: beta must lie in (0, 1]");
        if (n_modes < 4) throw std::invalid_argument("SlabConfig: need at least 4 modes");
    }

    // The envelope reduction assumes the carrier dominates the transverse
    // structure; an order-unity or smaller carrier leaves that regime.
    bool paraxial_suspect() const { return k_carrier < 1.0; }

    // Drift eigenvalue of mode m on the slab, (m pi / 2 half_width)^alpha.
    double mode_eigenvalue(std::size_t m) const {
        return std::pow(static_cast<double>(m) * pi / (2.0 * half_width), alpha);
    }
};

// Mode-resolved slab evolution: the launch field is expanded over the
// Dirichlet sine modes of [-half_width, half_width], and each coefficient
// relaxes by the one-parameter memory factor
//   c_m(z) = c_m(0) E_beta(i (lambda_m - omega) z^beta / (2 k_carrier)).
// Diagnostics and a snapshot are recorded at every requested z.
inline EvolutionReport slab_evolve(const WaveField& psi0, const SlabConfig& cfg,
                                   const rvec& z_values) {
    cfg.validate();
    const Grid& grid = psi0.grid;
    const double h = cfg.half_width;
    if (std::abs(grid.x_min + h) > 1e-9 * h || std::abs(grid.x_max - h) > 1e-9 * h)
        throw std::invalid_argument("slab_evolve: grid must span [-half_width, half_width)");
    if (cfg.n_modes >= grid.n / 2)
        throw std::invalid_argument("slab_evolve: grid too coarse for the requested modes");
    if (z_values.empty()) throw std::invalid_argument("slab_evolve: need at least one z");
    for (std::size_t j = 0; j < z_values.size(); ++j)
        if (!(z_values[j] >= 0.0) || (j > 0 && !(z_values[j] > z_values[j - 1])))
            throw std::invalid_argument("slab_evolve: z values must ascend from 0");

    // Mode samples phi_m(x_j) = sin(m pi (x_j + h) / 2h) / sqrt(h).
    const double rooth = std::sqrt(h);
    std::vector<rvec> modes(cfg.n_modes, rvec(grid.n));
    cvec coeff0(cfg.n_modes);
    for (std::size_t m = 1; m <= cfg.n_modes; ++m) {
        cplx c = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            const double s =
                std::sin(static_cast<double>(m) * pi * (grid.x(j) + h) / (2.0 * h)) / rooth;
            modes[m - 1][j] = s;
            c += psi0.values[j] * s;
        }
        coeff0[m - 1] = c * grid.dx();
    }

    EvolutionReport report;
    WaveField slice;
    slice.grid = grid;
    slice.values.assign(grid.n, 0.0);
    for (double z : z_values) {
        std::fill(slice.values.begin(), slice.values.end(), cplx(0.0));
        for (std::size_t m = 1; m <= cfg.n_modes; ++m) {
            const double theta = cfg.mode_eigenvalue(m) - cfg.omega;
            const cplx arg = iu * theta * std::pow(z, cfg.beta) / (2.0 * cfg.k_carrier);
            const cplx c = coeff0[m - 1] * mittag_leffler(cfg.beta, 1.0, arg);
            for (std::size_t j = 0; j < grid.n; ++j) slice.values[j] += c * modes[m - 1][j];
        }
        report.record(z, slice);
    }
    return report;
}

// Largest envelope-equation residual |psi_zz| / (|2 k psi_z| + floor) over
// the interior slices of an equally spaced propagation sequence, by central
// differences.  Small values certify the slowly varying approximation.
inline double paraxial_residual(const std::vector<WaveField>& slices, double k_carrier,
                                double dz) {
    if (slices.size() < 3) throw std::invalid_argument("paraxial_residual: need >= 3 slices");
    if (!(k_carrier > 0.0) || !(dz > 0.0))
        throw std::invalid_argument("paraxial_residual: k_carrier and dz must be positive");
    const std::size_t n = slices.front().grid.n;
    for (const WaveField& s : slices)
        if (s.grid.n != n) throw std::invalid_argument("paraxial_residual: mismatched grids");

    double denom_peak = 0.0;
    for (std::size_t i = 1; i + 1 < slices.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx dz1 = (slices[i + 1].values[j] - slices[i - 1].values[j]) / (2.0 * dz);
            denom_peak = std::max(denom_peak, 2.0 * k_carrier * std::abs(dz1));
        }
    const double floor = 1e-12 * denom_peak + 1e-300;

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < slices.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d1 = (slices[i + 1].values[j] - slices[i - 1].values[j]) / (2.0 * dz);
            const cplx d2 = (slices[i + 1].values[j] - 2.0 * slices[i].values[j] +
                             slices[i - 1].values[j]) /
                            (dz * dz);
            worst = std::max(worst, std::abs(d2) / (2.0 * k_carrier * std::abs(d1) + floor));
        }
    return worst;
}

}  // namespace frse

#endif
