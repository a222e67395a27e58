// Airy function Ai on the real line, certified on [-60, 30].
//
// Three regimes: Maclaurin series in double for |x| <= 4.5, the same series
// in __float128 up to |x| <= 9 (the alternating sums on the negative side
// cancel ~8 digits by there), and the standard asymptotic expansions beyond.
// At the switch points both sides agree to ~1e-13 absolute.
#ifndef FRSE_SPECFUN_AIRY_HPP
#define FRSE_SPECFUN_AIRY_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "../core.hpp"

namespace frse {

namespace detail {

inline constexpr double airy_ai0 = 0.35502805388781723926;    // Ai(0)
inline constexpr double airy_dai0 = -0.25881940379280679841;  // Ai'(0)

// Ai(x) = Ai(0) f(x) + Ai'(0) g(x), where f'' = x f (f(0)=1, f'(0)=0) and
// likewise g (g(0)=0, g'(0)=1); a_{n+3} = a_n / ((n+3)(n+2)).
template <typename R>
R airy_maclaurin(double x) {
    const R xx(x);
    R f(1), tf(1);
    R g(xx), tg(xx);
    const R x3 = xx * xx * xx;
    for (int n = 0; n < 600; n += 3) {
        tf = tf * x3 / R((n + 3) * (n + 2));
        tg = tg * x3 / R((n + 4) * (n + 3));
        f += tf;
        g += tg;
        const R mag = (tf < R(0) ? -tf : tf) + (tg < R(0) ? -tg : tg);
        if (mag < R(1e-40) && n > 9) break;
    }
    return R(airy_ai0) * f + R(airy_dai0) * g;
}

// u_k = Gamma(3k+1/2) / (54^k k! Gamma(k+1/2)); built by ratio
inline double airy_asym_u_next(double u, int k) {
    const double a = 3.0 * k + 0.5;
    return u * (a * (a + 1.0) * (a + 2.0)) / (54.0 * (k + 1.0) * (k + 0.5));
}

inline double airy_asym_right(double x) {
    const double zeta = (2.0 / 3.0) * std::pow(x, 1.5);
    double sum = 0.0, u = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
        const double term = (k % 2 ? -u : u) / std::pow(zeta, k);
        if (std::abs(term) > prev) break;  // divergent tail reached
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-18) break;
        u = airy_asym_u_next(u, k);
    }
    return std::exp(-zeta) * sum / (2.0 * std::sqrt(pi) * std::pow(x, 0.25));
}

inline double airy_asym_left(double x) {
    const double t = -x;
    const double zeta = (2.0 / 3.0) * std::pow(t, 1.5);
    // split u_k into even (cosine) and odd (sine) partial sums
    double ceven = 0.0, codd = 0.0, u = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
        const double term = u / std::pow(zeta, k);
        if (term > prev) break;
        const double signed_term = ((k / 2) % 2 ? -term : term);
        if (k % 2 == 0)
            ceven += signed_term;
        else
            codd += signed_term;
        prev = term;
        if (term < 1e-18) break;
        u = airy_asym_u_next(u, k);
    }
    const double ph = zeta - pi / 4.0;
    return (std::cos(ph) * ceven + std::sin(ph) * codd) /
           (std::sqrt(pi) * std::pow(t, 0.25));
}

}  // namespace detail

inline double airy_ai(double x) {
    if (x < -60.0 || x > 30.0)
        throw std::domain_error("airy_ai: x = " + std::to_string(x) +
                                " outside certified range [-60, 30]");
    const double ax = std::abs(x);
    if (ax <= 4.5) return detail::airy_maclaurin<double>(x);
    if (ax <= 9.0) return static_cast<double>(detail::airy_maclaurin<__float128>(x));
    return x > 0 ? detail::airy_asym_right(x) : detail::airy_asym_left(x);
}

}  // namespace frse

#endif
