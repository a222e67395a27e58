// Disordered fractional Hamiltonian on a periodic grid: dense eigenmodes,
// the four-mode overlap tensor, and the resulting system of coupled
// nonlinear oscillators.
#ifndef FRSE_ANDERSON_HPP
#define FRSE_ANDERSON_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "fft.hpp"
#include "fracops.hpp"
#include "observables.hpp"
#include "rng.hpp"

namespace frse {

// Disorder realization: i.i.d. uniform samples in [-W/2, W/2], reproducible
// from the seed alone.
struct RandomPotential {
    std::uint64_t seed = 0;
    double strength = 0.0;
    rvec samples;

    static RandomPotential draw(const Grid& grid, std::uint64_t seed, double strength) {
        if (!(strength >= 0.0))
            throw std::invalid_argument("RandomPotential: strength must be nonnegative");
        RandomPotential pot;
        pot.seed = seed;
        pot.strength = strength;
        pot.samples.resize(grid.n);
        SplitMix64 rng(seed);
        for (double& v : pot.samples) v = strength * (rng.uniform() - 0.5);
        return pot;
    }
};

// Dense Hamiltonian (hbar^alpha/2)(-Laplacian)^{alpha/2} + diag(V): the
// kinetic part is the spectral multiplier carried to the position basis,
// which is circulant and real; the result is symmetrized exactly.
inline Eigen::MatrixXcd build_hamiltonian(const Grid& grid, const RandomPotential& pot,
                                          double alpha, double hbar_ef = 1.0) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::invalid_argument("build_hamiltonian: alpha must lie in (0, 2]");
    if (!(hbar_ef > 0.0))
        throw std::invalid_argument("build_hamiltonian: hbar_ef must be positive");
    if (pot.samples.size() != grid.n)
        throw std::invalid_argument("build_hamiltonian: potential does not match the grid");

    const rvec kmags = riesz_multiplier(grid, alpha);
    const double scale = 0.5 * std::pow(hbar_ef, alpha);
    cvec column(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) column[k] = scale * kmags[k];
    ifft_inplace(column);

    const std::size_t n = grid.n;
    Eigen::MatrixXcd H(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            H(i, j) = column[(i + n - j) % n].real();
    for (std::size_t i = 0; i < n; ++i) H(i, i) += pot.samples[i];
    H = 0.5 * (H + H.adjoint()).eval();
    return H;
}

// Eigenmodes of the disordered Hamiltonian: energies ascending, columns
// orthonormal under the dx measure, each phase-fixed so its largest entry
// is real positive.
struct AndersonModes {
    rvec energies;
    Eigen::MatrixXcd modes;
    double dx = 1.0;
};

inline AndersonModes compute_modes(const Eigen::MatrixXcd& H, double dx = 1.0) {
    if (H.rows() != H.cols()) throw std::invalid_argument("compute_modes: matrix not square");
    if (!(dx > 0.0)) throw std::invalid_argument("compute_modes: dx must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("compute_modes: eigensolver failure");

    AndersonModes out;
    out.dx = dx;
    const Eigen::Index n = H.rows();
    out.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    out.modes = es.eigenvectors() / std::sqrt(dx);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index imax = 0;
        double best = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            const double m = std::abs(out.modes(r, c));
            if (m > best) {
                best = m;
                imax = r;
            }
        }
        if (best > 0.0) out.modes.col(c) *= std::conj(out.modes(imax, c)) / best;
    }
    return out;
}

// Inverse summed squared probability of a mode column: 1 for a single-site
// spike, n for a uniformly spread state.
inline double participation_ratio(const AndersonModes& modes, std::size_t k) {
    if (k >= static_cast<std::size_t>(modes.modes.cols()))
        throw std::invalid_argument("participation_ratio: mode index out of range");
    double p2 = 0.0, p1 = 0.0;
    for (Eigen::Index r = 0; r < modes.modes.rows(); ++r) {
        const double w = std::norm(modes.modes(r, k));
        p1 += w;
        p2 += w * w;
    }
    return p1 * p1 / p2;
}

// Contiguous mode range for restricting the overlap tensor; count 0 means
// every mode.
struct ModeWindow {
    std::size_t first = 0;
    std::size_t count = 0;
};

// Sparse four-index overlap store A_{k,k1,k2,k3} = int P*_k P_k1 P*_k2 P_k3 dx,
// entries below the cutoff omitted, kept sorted for lookup.
struct OverlapTensor {
    std::size_t n_modes = 0;
    double cutoff = 0.0;
    std::vector<std::array<std::uint32_t, 4>> index;
    cvec value;

    cplx find(std::size_t k, std::size_t k1, std::size_t k2, std::size_t k3) const {
        const std::array<std::uint32_t, 4> key{
            static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k1),
            static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k3)};
        const auto it = std::lower_bound(index.begin(), index.end(), key);
        if (it == index.end() || *it != key) return cplx(0.0, 0.0);
        return value[static_cast<std::size_t>(it - index.begin())];
    }
};

// Assembles the tensor over a mode window via one pair-product Gram
// contraction: A[(k,k1),(k2,k3)] = dx * sum_x P_{k,k1}(x) P_{k2,k3}(x) with
// P_{a,b} = conj(Psi_a) Psi_b.  Refuses window^4 work beyond the budget so
// a caller with many modes must choose a window deliberately.
inline OverlapTensor overlap_tensor(const AndersonModes& modes, double cutoff,
                                    ModeWindow window = {},
                                    std::size_t budget = std::size_t(1) << 24) {
    if (!(cutoff >= 0.0)) throw std::invalid_argument("overlap_tensor: cutoff must be >= 0");
    const std::size_t n_modes = static_cast<std::size_t>(modes.modes.cols());
    const std::size_t nx = static_cast<std::size_t>(modes.modes.rows());
    const std::size_t first = window.first;
    const std::size_t count = window.count == 0 ? n_modes : window.count;
    if (first + count > n_modes)
        throw std::invalid_argument("overlap_tensor: mode window out of range");
    const std::size_t pairs = count * count;
    if (pairs * pairs > budget)
        throw std::invalid_argument(
            "overlap_tensor: window^4 exceeds the budget; select a smaller mode window");

    Eigen::MatrixXcd P(pairs, nx);
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b)
            P.row(static_cast<Eigen::Index>(a * count + b)) =
                modes.modes.col(static_cast<Eigen::Index>(first + a))
                    .conjugate()
                    .cwiseProduct(modes.modes.col(static_cast<Eigen::Index>(first + b)))
                    .transpose();

    OverlapTensor out;
    out.n_modes = n_modes;
    out.cutoff = cutoff;
    const std::size_t block = std::max<std::size_t>(1, (std::size_t(1) << 20) / pairs);
    for (std::size_t r0 = 0; r0 < pairs; r0 += block) {
        const std::size_t nb = std::min(block, pairs - r0);
        const Eigen::MatrixXcd rows =
            P.middleRows(static_cast<Eigen::Index>(r0), static_cast<Eigen::Index>(nb)) *
            P.transpose() * modes.dx;
        for (std::size_t r = 0; r < nb; ++r) {
            const std::size_t k = first + (r0 + r) / count;
            const std::size_t k1 = first + (r0 + r) % count;
            for (std::size_t c = 0; c < pairs; ++c) {
                const cplx a = rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                if (std::abs(a) < cutoff) continue;
                out.index.push_back({static_cast<std::uint32_t>(k),
                                     static_cast<std::uint32_t>(k1),
                                     static_cast<std::uint32_t>(first + c / count),
                                     static_cast<std::uint32_t>(first + c % count)});
                out.value.push_back(a);
            }
        }
    }
    return out;
}

// Expansion coefficients over the modes at a given time.
struct OscillatorState {
    cvec coefficients;
    double time = 0.0;
};

// Time series of the oscillator run: squared norm sum |C_k|^2, the
// conserved oscillator energy, and the mode-index spread about the
// intensity centroid.
struct OscillatorReport {
    rvec times;
    rvec norm2;
    rvec h_osc;
    rvec msd;
    std::vector<std::pair<double, cvec>> snapshots;
};

struct OscillatorRun {
    OscillatorState state;
    OscillatorReport report;
};

namespace detail {

// Contraction sum_entries A_{k,k1,k2,k3} C_{k1} C*_{k2} C_{k3} accumulated
// at k.  The conjugation pattern of the coefficients mirrors the pattern of
// the mode factors inside the overlap integrand; that pairing is what makes
// the contraction a gradient of the oscillator Hamiltonian, so both the
// norm and the energy are conserved by the exact flow.
inline void overlap_contraction(const OverlapTensor& A, const cvec& C, cvec& out) {
    for (std::size_t e = 0; e < A.index.size(); ++e) {
        const auto& ix = A.index[e];
        out[ix[0]] += A.value[e] * C[ix[1]] * std::conj(C[ix[2]]) * C[ix[3]];
    }
}

// Nonlinear part of the rotated system: with D = e^{i w tau} C the linear
// rotation drops out and dD/dtau = -i B e^{i w tau} contract(e^{-i w tau} D).
inline void rotated_rhs(const OverlapTensor& A, double B, const cvec& phase, const cvec& D,
                        cvec& lab, cvec& out) {
    const std::size_t n = D.size();
    for (std::size_t k = 0; k < n; ++k) lab[k] = phase[k] * D[k];
    out.assign(n, cplx(0.0, 0.0));
    overlap_contraction(A, lab, out);
    for (std::size_t k = 0; k < n; ++k) out[k] = cplx(0.0, -B) * out[k] / phase[k];
}

inline double mode_msd(const cvec& C) {
    double w = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k < C.size(); ++k) {
        const double p = std::norm(C[k]);
        w += p;
        m1 += static_cast<double>(k) * p;
    }
    if (w == 0.0) return 0.0;
    m1 /= w;
    double m2 = 0.0;
    for (std::size_t k = 0; k < C.size(); ++k)
        m2 += (static_cast<double>(k) - m1) * (static_cast<double>(k) - m1) * std::norm(C[k]);
    return m2 / w;
}

}  // namespace detail

// Oscillator energy sum_k w_k |C_k|^2 + (B/2) sum A C*_k C_k1 C*_k2 C_k3
// over the stored entries.
inline double oscillator_energy(const rvec& energies, const OverlapTensor& A, double B,
                                const cvec& C) {
    double h = 0.0;
    for (std::size_t k = 0; k < C.size(); ++k) h += energies[k] * std::norm(C[k]);
    if (B != 0.0) {
        cplx s(0.0, 0.0);
        for (std::size_t e = 0; e < A.index.size(); ++e) {
            const auto& ix = A.index[e];
            s += A.value[e] * std::conj(C[ix[0]]) * C[ix[1]] * std::conj(C[ix[2]]) * C[ix[3]];
        }
        h += 0.5 * B * s.real();
    }
    return h;
}

// RK4 on i dC_k/dt = w_k C_k + B sum A C C* C, integrated in the rotating
// frame: the diagonal rotation is applied exactly each step and the
// Runge-Kutta stages see only the nonlinear contraction.  With B = 0 the
// step is exact to round-off regardless of how stiff the mode energies
// are, and the norm and energy drift of a coupled run measure the
// nonlinear stage error alone.
inline OscillatorRun evolve_oscillators(const OscillatorState& state, const AndersonModes& modes,
                                        const OverlapTensor& A, double B, double t_final,
                                        double dt, std::size_t record_every = 0) {
    if (!(t_final > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("evolve_oscillators: t_final and dt must be positive");
    if (state.coefficients.size() != modes.energies.size())
        throw std::invalid_argument("evolve_oscillators: state does not match the mode count");
    const long long n_steps = std::llround(t_final / dt);
    if (n_steps < 1 || std::abs(static_cast<double>(n_steps) * dt - t_final) > 1e-6 * dt)
        throw std::invalid_argument("evolve_oscillators: dt must divide t_final");

    const std::size_t n = state.coefficients.size();
    cvec C = state.coefficients;
    OscillatorRun run;

    auto record = [&](double t, bool keep) {
        run.report.times.push_back(t);
        double n2 = 0.0;
        for (const cplx& c : C) n2 += std::norm(c);
        run.report.norm2.push_back(n2);
        run.report.h_osc.push_back(oscillator_energy(modes.energies, A, B, C));
        run.report.msd.push_back(detail::mode_msd(C));
        if (keep) run.report.snapshots.emplace_back(t, C);
    };
    record(state.time, true);

    cvec ones(n, cplx(1.0, 0.0)), half(n), full(n);
    for (std::size_t k = 0; k < n; ++k) {
        half[k] = std::exp(cplx(0.0, -0.5 * modes.energies[k] * dt));
        full[k] = half[k] * half[k];
    }

    const bool coupled = B != 0.0 && !A.index.empty();
    cvec k1(n), k2(n), k3(n), k4(n), stage(n), lab(n);
    for (long long step = 0; step < n_steps; ++step) {
        if (coupled) {
            detail::rotated_rhs(A, B, ones, C, lab, k1);
            for (std::size_t j = 0; j < n; ++j) stage[j] = C[j] + 0.5 * dt * k1[j];
            detail::rotated_rhs(A, B, half, stage, lab, k2);
            for (std::size_t j = 0; j < n; ++j) stage[j] = C[j] + 0.5 * dt * k2[j];
            detail::rotated_rhs(A, B, half, stage, lab, k3);
            for (std::size_t j = 0; j < n; ++j) stage[j] = C[j] + dt * k3[j];
            detail::rotated_rhs(A, B, full, stage, lab, k4);
            for (std::size_t j = 0; j < n; ++j)
                C[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        for (std::size_t j = 0; j < n; ++j) C[j] *= full[j];
        for (const cplx& c : C)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::runtime_error("evolve_oscillators: non-finite coefficients at step " +
                                         std::to_string(step + 1));
        const bool last = step + 1 == n_steps;
        if (last || (record_every > 0 && (step + 1) % record_every == 0))
            record(state.time + static_cast<double>(step + 1) * dt, last);
    }

    run.state.coefficients = C;
    run.state.time = state.time + static_cast<double>(n_steps) * dt;
    return run;
}

// Log-log least-squares exponent of the recorded mode-space spread over a
// time window, with the standard error of the slope.
struct MsdFit {
    double exponent = 0.0;
    double std_error = 0.0;
};

inline MsdFit fit_msd_exponent(const rvec& times, const rvec& msd,
                               std::pair<double, double> window) {
    if (times.size() != msd.size())
        throw std::invalid_argument("fit_msd_exponent: series lengths differ");
    rvec lt, lm;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] < window.first || times[j] > window.second) continue;
        if (!(times[j] > 0.0)) continue;
        if (!(msd[j] > 0.0))
            throw std::invalid_argument("fit_msd_exponent: non-positive spread in window");
        lt.push_back(std::log(times[j]));
        lm.push_back(std::log(msd[j]));
    }
    if (lt.size() < 3)
        throw std::invalid_argument("fit_msd_exponent: fewer than 3 samples in window");

    const LineFit fit = line_fit(lt, lm);
    double ss_res = 0.0, ss_x = 0.0, mean_x = 0.0;
    for (const double x : lt) mean_x += x;
    mean_x /= static_cast<double>(lt.size());
    for (std::size_t j = 0; j < lt.size(); ++j) {
        const double r = lm[j] - (fit.intercept + fit.slope * lt[j]);
        ss_res += r * r;
        ss_x += (lt[j] - mean_x) * (lt[j] - mean_x);
    }
    MsdFit out;
    out.exponent = fit.slope;
    out.std_error = std::sqrt(ss_res / static_cast<double>(lt.size() - 2) / ss_x);
    return out;
}

inline MsdFit fit_msd_exponent(const OscillatorReport& report,
                               std::pair<double, double> window) {
    return fit_msd_exponent(report.times, report.msd, window);
}

}  // namespace frse

#endif
