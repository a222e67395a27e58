#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "frse/fft.hpp"

using namespace frse;

namespace {

// textbook O(n^2) DFT used as the reference
cvec dft_reference(const cvec& a, bool inverse) {
    const std::size_t n = a.size();
    cvec out(n, cplx{0.0, 0.0});
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * 2.0 * pi * static_cast<double>(j * k) / static_cast<double>(n);
            out[k] += a[j] * cplx(std::cos(ang), std::sin(ang));
        }
        if (inverse) out[k] /= static_cast<double>(n);
    }
    return out;
}

double max_abs_diff(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("fft matches the direct DFT") {
    const std::size_t n = 64;
    cvec a(n);
    for (std::size_t j = 0; j < n; ++j)
        a[j] = cplx(std::sin(0.37 * static_cast<double>(j)) + 0.2,
                    std::cos(1.13 * static_cast<double>(j)));

    CHECK(max_abs_diff(fft(a), dft_reference(a, false)) < 1e-12);
    CHECK(max_abs_diff(ifft(a), dft_reference(a, true)) < 1e-12);
}

TEST_CASE("ifft inverts fft") {
    for (std::size_t n : {2u, 8u, 256u, 4096u}) {
        cvec a(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(n);
            a[j] = cplx(std::exp(-10.0 * (t - 0.5) * (t - 0.5)), std::sin(9.0 * t));
        }
        CHECK(max_abs_diff(ifft(fft(a)), a) < 1e-11);
    }
}

TEST_CASE("fft of a pure mode is a delta") {
    const std::size_t n = 128;
    const std::size_t mode = 5;
    cvec a(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = 2.0 * pi * static_cast<double>(mode * j) / static_cast<double>(n);
        a[j] = cplx(std::cos(ang), std::sin(ang));
    }
    cvec A = fft(a);
    for (std::size_t k = 0; k < n; ++k) {
        const double expect = (k == mode) ? static_cast<double>(n) : 0.0;
        CHECK(std::abs(A[k] - cplx(expect, 0.0)) < 1e-11);
    }
}

TEST_CASE("parseval holds") {
    const std::size_t n = 512;
    cvec a(n);
    for (std::size_t j = 0; j < n; ++j)
        a[j] = cplx(std::cos(0.11 * static_cast<double>(j)), 0.3 * std::sin(0.07 * static_cast<double>(j)));
    cvec A = fft(a);
    double sum_t = 0.0, sum_f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sum_t += std::norm(a[j]);
        sum_f += std::norm(A[j]);
    }
    CHECK(std::abs(sum_f / static_cast<double>(n) - sum_t) < 1e-10 * sum_t);
}

TEST_CASE("non power-of-two sizes are rejected") {
    cvec a(48);
    CHECK_THROWS_AS(fft_inplace(a), std::invalid_argument);
    cvec empty;
    CHECK_THROWS_AS(fft_inplace(empty), std::invalid_argument);
}

TEST_CASE("angular frequencies follow fft storage order") {
    const auto k = angular_freqs(8, 4.0);
    const double b = 2.0 * pi / 4.0;
    const double expect[8] = {0, b, 2 * b, 3 * b, -4 * b, -3 * b, -2 * b, -b};
    for (std::size_t j = 0; j < 8; ++j) CHECK(k[j] == Catch::Approx(expect[j]).margin(1e-15));
}
