// Shared aliases, constants, grid description, and error types.
#ifndef FRSE_CORE_HPP
#define FRSE_CORE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace frse {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846264338328;

inline constexpr cplx iu{0.0, 1.0};

// Uniform periodic grid on [x_min, x_max): x_j = x_min + j*dx, dx = L/n.
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n = 0;

    double length() const { return x_max - x_min; }
    double dx() const { return length() / static_cast<double>(n); }
    double x(std::size_t j) const { return x_min + dx() * static_cast<double>(j); }

    rvec points() const {
        rvec xs(n);
        for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
        return xs;
    }
};

// Complex field sampled on a periodic grid.
struct WaveField {
    Grid grid;
    cvec values;

    // L2 norm with the dx measure, sqrt(sum |v|^2 dx).
    double norm() const {
        double s = 0.0;
        for (const cplx& v : values) s += std::norm(v);
        return std::sqrt(s * grid.dx());
    }
};

// Physical parameters shared by the evolution modules: space index alpha,
// time index beta, gravitational-kernel index nu, effective Planck constant,
// particle mass, nonlinearity strength B, and Newton constant G.
struct FracParams {
    double alpha = 2.0;
    double beta = 1.0;
    double nu = 0.5;
    double hbar_ef = 1.0;
    double mass = 1.0;
    double B = 0.0;
    double G = 0.0;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw std::invalid_argument("FracParams: alpha must lie in (0, 2]");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("FracParams: beta must lie in (0, 1]");
        if (!(nu > 0.0 && nu < 1.0))
            throw std::invalid_argument("FracParams: nu must lie in (0, 1)");
        if (!(hbar_ef > 0.0)) throw std::invalid_argument("FracParams: hbar_ef must be positive");
        if (!(mass > 0.0)) throw std::invalid_argument("FracParams: mass must be positive");
        if (!(G >= 0.0)) throw std::invalid_argument("FracParams: G must be nonnegative");
    }
};

// Thrown when an oscillatory quadrature cannot reach its tolerance; carries
// both the requested and the achieved residual so callers can report them.
struct quadrature_error : std::runtime_error {
    double requested;
    double achieved;
    quadrature_error(const std::string& what, double req, double ach)
        : std::runtime_error(what + " (requested " + std::to_string(req) +
                             ", achieved " + std::to_string(ach) + ")"),
          requested(req), achieved(ach) {}
};

}  // namespace frse

#endif
