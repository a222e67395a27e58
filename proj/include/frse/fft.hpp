// In-place radix-2 complex FFT and frequency helpers.
//
// Grid sizes in this library are powers of two throughout, so a plain
// iterative Cooley-Tukey is all we need; it keeps the headers free of any
// link-time dependency.  Conventions match the usual DFT: forward transform
// sums f_j exp(-2*pi*i*j*k/n), inverse carries the 1/n.
#ifndef FRSE_FFT_HPP
#define FRSE_FFT_HPP

#include <bit>
#include <cmath>
#include <stdexcept>

#include "core.hpp"

namespace frse {

namespace detail {

inline void fft_radix2(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument("fft: size must be a nonzero power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double sgn = inverse ? 1.0 : -1.0;
    // Twiddles come from polar per index, not a running product; the
    // recurrence drifts by O(len) ulp across a stage, which shows up as a
    // systematic norm change when a transform pair runs thousands of times.
    cvec tw(n / 2);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sgn * 2.0 * pi / static_cast<double>(len);
        for (std::size_t j = 0; j < len / 2; ++j) tw[j] = std::polar(1.0, ang * static_cast<double>(j));
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * tw[j];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

}  // namespace detail

inline void fft_inplace(cvec& a) { detail::fft_radix2(a, false); }
inline void ifft_inplace(cvec& a) { detail::fft_radix2(a, true); }

inline cvec fft(cvec a) {
    detail::fft_radix2(a, false);
    return a;
}

inline cvec ifft(cvec a) {
    detail::fft_radix2(a, true);
    return a;
}

// Angular frequencies k_j = 2*pi*j/L in FFT storage order (0, 1, ..., n/2-1,
// -n/2, ..., -1), matching the transform above on a length-L periodic grid.
inline rvec angular_freqs(std::size_t n, double length) {
    rvec k(n);
    const double base = 2.0 * pi / length;
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<std::ptrdiff_t>(j);
        const auto half = static_cast<std::ptrdiff_t>(n / 2);
        k[j] = base * static_cast<double>(sj < half ? sj : sj - static_cast<std::ptrdiff_t>(n));
    }
    return k;
}

inline rvec wavenumbers(const Grid& g) { return angular_freqs(g.n, g.length()); }

}  // namespace frse

#endif
