// Fractional free-propagator kernel
//
//   F(x) = (1/pi) * Int_0^inf cos(kx) exp(-coeff * tau * k^alpha) dk
//
// by segmented oscillatory quadrature.  The cosine splits into e^{+-ixk}
// half-integrals with exponent g(k) = +-ixk - c k^alpha, c = (coeff+eps)*tau;
// eps is the regulator that makes the conditionally convergent integral
// absolutely convergent (documented knob, default 1e-6).  The k-axis is cut
// into geometric segments from k1 ~ 0.3/max(x, |c|^(1/alpha)) up to the decay
// cutoff Re(c) Kmax^alpha = 40:
//   - [0, k1] by tanh-sinh (handles the k^alpha endpoint nonsmoothness),
//   - strongly oscillatory segments by Levin collocation (solve p' + g'p = 1
//     on 16 Chebyshev nodes, then the integral telescopes to [p e^g]),
//   - everything else by Clenshaw-Curtis, bisecting while the phase span is
//     too wide.  The stationary point of the + half lands here by itself
//     since |g'| is small near it.
//
// tau = 0 is a delta limit: the kernel family tends to delta(x), so we
// evaluate at the small documented stand-in tau = opts.delta_tau instead of
// touching the divergent raw integral.
#ifndef FRSE_SPECFUN_KERNEL_HPP
#define FRSE_SPECFUN_KERNEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "../core.hpp"

namespace frse {

struct KernelQuery {
    double x = 0.0;
    double tau = 0.0;     // >= 0
    double alpha = 2.0;   // in (0, 2]
    cplx coeff{0.0, 0.5};
};

struct KernelOptions {
    double eps = 1e-6;        // regulator added to coeff
    double delta_tau = 1e-8;  // stand-in tau for the tau -> 0 delta limit
};

namespace detail {

template <typename G>
cplx kernel_tanh_sinh(G&& g, double a, double b) {
    const int n = 80;
    const double tmax = 3.6;
    const double h = 2.0 * tmax / n;
    cplx sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = -tmax + h * i;
        const double u = 0.5 * pi * std::sinh(t);
        const double xw = std::tanh(u);
        const double w = h * 0.5 * pi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
        const double k = 0.5 * (a + b) + 0.5 * (b - a) * xw;
        const cplx gv = g(k);
        if (gv.real() > -745.0) sum += w * std::exp(gv);
    }
    return 0.5 * (b - a) * sum;
}

// Clenshaw-Curtis weights on n Lobatto nodes of [-1,1], ascending order
inline std::vector<double> cc_weights(int n) {
    const int N = n - 1;
    std::vector<double> w(n, 0.0);
    for (int j = 1; j < N; ++j) {
        const double theta = pi * j / N;
        double v = 1.0;
        for (int k = 1; k <= N / 2; ++k) {
            const double fac = (2 * k < N) ? 2.0 : 1.0;
            v -= fac * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        }
        w[j] = 2.0 * v / N;
    }
    w[0] = w[N] = 1.0 / (N * N - 1 + (N % 2));
    return w;  // symmetric, so node order does not matter
}

struct SegmentBudget {
    int depth_limit = 40;
    double worst_span = 0.0;  // widest unresolvable phase span seen
    bool exhausted = false;
};

template <typename G, typename GP>
cplx kernel_segment(G&& g, GP&& gp, double a, double b, int depth, SegmentBudget& budget) {
    // probe |g'| on 7 points
    double gpv[7];
    double xs[7];
    for (int i = 0; i < 7; ++i) {
        xs[i] = a + (b - a) * i / 6.0;
        gpv[i] = std::abs(gp(xs[i]));
    }
    double mn = gpv[0], mx = gpv[0];
    for (double v : gpv) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }

    if (mn * (b - a) >= 30.0 && mx <= 4.0 * mn) {
        // Levin collocation on 16 Chebyshev-Lobatto nodes
        constexpr int n = 16;
        Eigen::Matrix<cplx, n, n> M = Eigen::Matrix<cplx, n, n>::Zero();
        double nodes[n];
        double csign[n];
        for (int j = 0; j < n; ++j) {
            nodes[j] = std::cos(pi * j / (n - 1));  // 1 .. -1
            csign[j] = ((j == 0 || j == n - 1) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
        }
        for (int i = 0; i < n; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double d = (csign[i] / csign[j]) / (nodes[i] - nodes[j]);
                M(i, j) = d;
                rowsum += d;
            }
            M(i, i) = -rowsum;
        }
        // map D from [-1,1] (descending nodes) to [a,b] ascending: reverse and
        // scale; reversing both indices flips the sign structure correctly
        Eigen::Matrix<cplx, n, n> D;
        double k[n];
        for (int i = 0; i < n; ++i) {
            k[i] = 0.5 * (a + b) + 0.5 * (b - a) * nodes[n - 1 - i];
            for (int j = 0; j < n; ++j) D(i, j) = M(n - 1 - i, n - 1 - j) * (2.0 / (b - a));
        }
        for (int i = 0; i < n; ++i) D(i, i) += gp(k[i]);
        const Eigen::Matrix<cplx, n, 1> rhs = Eigen::Matrix<cplx, n, 1>::Ones();
        const Eigen::Matrix<cplx, n, 1> p = D.partialPivLu().solve(rhs);
        const cplx ga = g(a), gb = g(b);
        const cplx ea = ga.real() > -745.0 ? std::exp(ga) : cplx(0.0);
        const cplx eb = gb.real() > -745.0 ? std::exp(gb) : cplx(0.0);
        return p(n - 1) * eb - p(0) * ea;
    }

    // phase-span estimate: trapezoid of |g'| over the probes
    double span = 0.0;
    for (int i = 0; i < 6; ++i) span += 0.5 * (gpv[i] + gpv[i + 1]) * (xs[i + 1] - xs[i]);
    if (span > 50.0) {
        if (depth >= budget.depth_limit) {
            budget.exhausted = true;
            budget.worst_span = std::max(budget.worst_span, span);
        } else {
            const double m = 0.5 * (a + b);
            return kernel_segment(g, gp, a, m, depth + 1, budget) +
                   kernel_segment(g, gp, m, b, depth + 1, budget);
        }
    }

    int nn = static_cast<int>(std::min(64.0, 12.0 + 1.3 * span));
    if (nn % 2 == 0) ++nn;
    const auto w = cc_weights(nn);
    cplx sum = 0.0;
    for (int j = 0; j < nn; ++j) {
        const double node = std::cos(pi * (nn - 1 - j) / (nn - 1));
        const double kk = 0.5 * (a + b) + 0.5 * (b - a) * node;
        const cplx gv = g(kk);
        if (gv.real() > -745.0) sum += w[j] * std::exp(gv);
    }
    return 0.5 * (b - a) * sum;
}

inline cplx kernel_half_integral(double x, cplx c, double alpha, double sign,
                                 double kmax, SegmentBudget& budget) {
    auto g = [=](double k) { return cplx(0.0, sign * x * k) - c * std::pow(k, alpha); };
    auto gp = [=](double k) {
        return cplx(0.0, sign * x) - c * alpha * std::pow(k, alpha - 1.0);
    };
    double k1 = 0.3 * std::min(1.0 / std::max(x, 1e-12), std::pow(std::abs(c), -1.0 / alpha));
    k1 = std::min(k1, kmax / 8.0);
    cplx total = kernel_tanh_sinh(g, 0.0, k1);
    const double ratio = 1.8;
    double a = k1;
    while (a < kmax) {
        const double b = std::min(a * ratio, kmax);
        total += kernel_segment(g, gp, a, b, 0, budget);
        a = b;
    }
    return total;
}

}  // namespace detail

inline cplx frac_free_kernel(const KernelQuery& q, const KernelOptions& opts = {}) {
    if (q.tau < 0.0) throw std::invalid_argument("frac_free_kernel: tau must be >= 0");
    if (!(q.alpha > 0.0) || q.alpha > 2.0)
        throw std::invalid_argument("frac_free_kernel: alpha must be in (0, 2]");
    if (q.coeff.real() + opts.eps <= 0.0)
        throw std::invalid_argument(
            "frac_free_kernel: Re(coeff) + eps must be positive; raise the regulator");

    const double tau = q.tau > 0.0 ? q.tau : opts.delta_tau;
    const cplx c = (q.coeff + opts.eps) * tau;
    const double x = std::abs(q.x);  // even in x by construction
    const double kmax = std::pow(40.0 / c.real(), 1.0 / q.alpha);

    detail::SegmentBudget budget;
    const cplx ip = detail::kernel_half_integral(x, c, q.alpha, +1.0, kmax, budget);
    const cplx im = detail::kernel_half_integral(x, c, q.alpha, -1.0, kmax, budget);
    if (budget.exhausted)
        throw quadrature_error("frac_free_kernel: phase span not resolved after bisection",
                               50.0, budget.worst_span);
    return (ip + im) / (2.0 * pi);
}

inline cplx frac_free_kernel(double x, double tau, double alpha, cplx coeff,
                             const KernelOptions& opts = {}) {
    return frac_free_kernel(KernelQuery{x, tau, alpha, coeff}, opts);
}

}  // namespace frse

#endif
