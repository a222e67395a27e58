// Field diagnostics (norm, centroid, spread, peak location), least-squares
// fits used by the trajectory and exponent studies, and the evolution report
// container shared by the propagation drivers.
#ifndef FRSE_OBSERVABLES_HPP
#define FRSE_OBSERVABLES_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"

namespace frse {

inline double field_norm(const WaveField& f) { return f.norm(); }

// Intensity-weighted mean position.
inline double field_centroid(const WaveField& f) {
    double w = 0.0, xw = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        const double p = std::norm(f.values[j]);
        w += p;
        xw += f.grid.x(j) * p;
    }
    if (w == 0.0) throw std::invalid_argument("field_centroid: zero field");
    return xw / w;
}

// Intensity-weighted variance about the centroid.
inline double field_msd(const WaveField& f) {
    const double c = field_centroid(f);
    double w = 0.0, dw = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        const double p = std::norm(f.values[j]);
        const double d = f.grid.x(j) - c;
        w += p;
        dw += d * d * p;
    }
    return dw / w;
}

// Location of the intensity maximum, refined by the vertex of the parabola
// through the peak sample and its periodic neighbors.
inline double field_peak_position(const WaveField& f) {
    const std::size_t n = f.grid.n;
    std::size_t jm = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = std::norm(f.values[j]);
        if (p > best) {
            best = p;
            jm = j;
        }
    }
    const double yl = std::norm(f.values[(jm + n - 1) % n]);
    const double ym = std::norm(f.values[jm]);
    const double yr = std::norm(f.values[(jm + 1) % n]);
    const double denom = yl - 2.0 * ym + yr;
    double shift = 0.0;
    if (denom < 0.0) shift = 0.5 * (yl - yr) / denom;
    return f.grid.x(jm) + shift * f.grid.dx();
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
inline LineFit line_fit(const rvec& xs, const rvec& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 2) throw std::invalid_argument("line_fit: need matched data, n >= 2");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sx += xs[j];
        sy += ys[j];
        sxx += xs[j] * xs[j];
        sxy += xs[j] * ys[j];
    }
    const double dn = static_cast<double>(n);
    const double det = dn * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("line_fit: degenerate abscissae");
    LineFit fit;
    fit.slope = (dn * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / dn;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean = sy / dn;
    for (std::size_t j = 0; j < n; ++j) {
        const double model = fit.intercept + fit.slope * xs[j];
        ss_res += (ys[j] - model) * (ys[j] - model);
        ss_tot += (ys[j] - mean) * (ys[j] - mean);
    }
    fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// Fit y = A * x^p through logarithms; data must be strictly positive.
// Returned slope is the exponent p, intercept is ln(A).
inline LineFit power_law_fit(const rvec& xs, const rvec& ys) {
    rvec lx(xs.size()), ly(ys.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (!(xs[j] > 0.0) || !(ys[j] > 0.0))
            throw std::invalid_argument("power_law_fit: data must be positive");
        lx[j] = std::log(xs[j]);
        ly[j] = std::log(ys[j]);
    }
    return line_fit(lx, ly);
}

// Time series of diagnostics collected during an evolution run.
struct EvolutionReport {
    rvec times;
    rvec norms;
    rvec centroids;
    rvec msd;
    rvec peak_positions;
    std::vector<std::pair<double, WaveField>> snapshots;

    void record(double t, const WaveField& f, bool keep_snapshot = true) {
        times.push_back(t);
        norms.push_back(field_norm(f));
        centroids.push_back(field_centroid(f));
        msd.push_back(field_msd(f));
        peak_positions.push_back(field_peak_position(f));
        if (keep_snapshot) snapshots.emplace_back(t, f);
    }
};

}  // namespace frse

#endif
