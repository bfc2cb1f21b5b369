#pragma once

// Special functions and adaptive quadrature used by the analytical paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "risim/errors.hpp"

namespace risim {

namespace detail {

// Chebyshev-style rational fits for exp(-x)*I0(x) and exp(-x)*I1(x),
// x >= 0 (Abramowitz & Stegun 9.8.1-9.8.4 polynomial approximations).
inline double i0_scaled(double x) {
    if (x < 3.75) {
        const double t = (x / 3.75) * (x / 3.75);
        const double p = 1.0 + t * (3.5156229 + t * (3.0899424 + t * (1.2067492 +
                         t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
        return p * std::exp(-x);
    }
    const double t = 3.75 / x;
    const double p = 0.39894228 + t * (0.01328592 + t * (0.00225319 +
                     t * (-0.00157565 + t * (0.00916281 + t * (-0.02057706 +
                     t * (0.02635537 + t * (-0.01647633 + t * 0.00392377)))))));
    return p / std::sqrt(x);
}

inline double i1_scaled(double x) {
    if (x < 3.75) {
        const double t = (x / 3.75) * (x / 3.75);
        const double p = x * (0.5 + t * (0.87890594 + t * (0.51498869 +
                         t * (0.15084934 + t * (0.02658733 + t * (0.00301532 +
                         t * 0.00032411))))));
        return p * std::exp(-x);
    }
    const double t = 3.75 / x;
    double p = 0.39894228 + t * (-0.03988024 + t * (-0.00362018 +
               t * (0.00163801 + t * (-0.01031555 + t * (0.02282967 +
               t * (-0.02895312 + t * (0.01787654 - t * 0.00420059)))))));
    return p / std::sqrt(x);
}

// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a),
// series for x < a+1, continued fraction otherwise.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // P(a,x) by series, Q = 1 - P
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < 20000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
        }
        const double lg = a * std::log(x) - x - std::lgamma(a);
        return 1.0 - sum * std::exp(lg);
    }
    // Lentz continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 20000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    const double lg = a * std::log(x) - x - std::lgamma(a);
    return std::exp(lg) * h;
}

} // namespace detail

/// Modified Bessel function I0(x), x >= 0. Overflows to +inf for x > ~709.
inline double bessel_i0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_i0: x must be >= 0 and finite");
    return detail::i0_scaled(x) * std::exp(x);
}

/// Modified Bessel function I1(x), x >= 0.
inline double bessel_i1(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_i1: x must be >= 0 and finite");
    return detail::i1_scaled(x) * std::exp(x);
}

/// L_{1/2}(-k) for k >= 0 via the Bessel closed form
///   exp(-k/2) * [(1+k) I0(k/2) + k I1(k/2)].
/// Scaled Bessel evaluation keeps this finite for all k.
inline double laguerre_half(double minus_k) {
    const double k = minus_k;
    if (!(k >= 0.0) || !std::isfinite(k))
        throw std::domain_error("laguerre_half: argument must be finite and >= 0");
    const double h = 0.5 * k;
    return (1.0 + k) * detail::i0_scaled(h) + k * detail::i1_scaled(h);
}

/// Upper tail of the standard normal distribution.
inline double gaussian_q(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gaussian_q: non-finite argument");
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/// First-order Marcum Q function Q1(a,b), a,b >= 0.
///
/// Canonical mixture form: Q1(a,b) = sum_n Poisson(n; a^2/2) * Q(n+1, b^2/2)
/// with Q the regularized upper incomplete gamma. The sum is taken outward
/// from the Poisson mode so only numerically relevant terms are touched,
/// which stays stable for large a*b where the naive series underflows.
inline double marcum_q1(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("marcum_q1: arguments must be finite and >= 0");
    if (b == 0.0) return 1.0;
    const double x = 0.5 * a * a; // Poisson intensity
    const double y = 0.5 * b * b;
    if (x == 0.0) return std::exp(-y);

    const long n0 = static_cast<long>(std::floor(x));
    auto log_pois = [x](long n) {
        return -x + static_cast<double>(n) * std::log(x) - std::lgamma(static_cast<double>(n) + 1.0);
    };
    // t_n = exp(-y) y^n / n!, the increment Q(n+1,y) - Q(n,y)
    auto log_t = [y](long n) {
        return -y + static_cast<double>(n) * std::log(y) - std::lgamma(static_cast<double>(n) + 1.0);
    };

    double sum = 0.0;
    // upward from the mode
    {
        double p = std::exp(log_pois(n0));
        double g = detail::gamma_q(static_cast<double>(n0) + 1.0, y);
        double t = std::exp(log_t(n0 + 1));
        long n = n0;
        for (int it = 0; it < 100000; ++it) {
            sum += p * g;
            if (p * g < 1e-18 * (sum + 1e-300) && n > n0 + 3) break;
            ++n;
            p *= x / static_cast<double>(n);
            g += t;                        // Q(n+1,y) = Q(n,y) + t_n
            t *= y / static_cast<double>(n + 1);
            if (p == 0.0) break;
            if (g > 1.0) g = 1.0;
        }
    }
    // downward from the mode
    if (n0 >= 1) {
        long n = n0 - 1;
        double p = std::exp(log_pois(n));
        double g = detail::gamma_q(static_cast<double>(n) + 1.0, y);
        double t = std::exp(log_t(n + 1));
        for (; n >= 0; --n) {
            sum += p * g;
            if (p * g < 1e-18 * (sum + 1e-300)) break;
            if (n == 0) break;
            p *= static_cast<double>(n) / x;
            t *= static_cast<double>(n + 1) / y;
            g -= t;                        // Q(n,y) = Q(n+1,y) - t_n
            if (g < 0.0) g = 0.0;
        }
    }
    if (sum < 0.0) sum = 0.0;
    if (sum > 1.0) sum = 1.0;
    return sum;
}

/// Accuracy/budget control for adaptive quadrature.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: tolerances must be > 0, max_subdivisions >= 1");
    }
};

namespace detail {

// Gauss-Kronrod 7-15 on [a,b]; returns K15 estimate, err = |K15-G7| based.
template <class F>
double gk15(const F& f, double a, double b, double& err) {
    static const double xk[8] = {
        0.0,
        0.405845151377397166906606412076961, 0.741531185599394439863864773280788,
        0.949107912342758524526189684047851, 0.207784955007898467600689403773245,
        0.586087235467691130294144838258730, 0.864864423359769072789712788640926,
        0.991455371120812639206854697526329};
    static const double wg[8] = {
        0.417959183673469387755102040816327,
        0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
        0.129484966168869693270611432679082, 0.0, 0.0, 0.0, 0.0};
    static const double wk[8] = {
        0.209482141084727828012999174891714,
        0.190350578064785409913256402421014, 0.140653259715525918745189590510238,
        0.063092092629978553290700663189204, 0.204432940075298892414161999234649,
        0.169004726639267902826583426598550, 0.104790010322250183839876322541518,
        0.022935322010529224963732008058970};

    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(mid);
    double g = wg[0] * f0;
    double k = wk[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * xk[i];
        const double fi = f(mid + dx) + f(mid - dx);
        k += wk[i] * fi;
        if (wg[i] != 0.0) g += wg[i] * fi;
    }
    g *= h;
    k *= h;
    err = std::fabs(k - g);
    return k;
}

} // namespace detail

/// Adaptive quadrature of f over [lo, hi]: interval bisection with a GK15
/// kernel per panel, worst-panel-first refinement.
template <class F>
double integrate(const F& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(lo < hi)) throw std::invalid_argument("integrate: requires lo < hi");

    struct Panel {
        double a, b, val, err;
    };
    std::vector<Panel> panels;
    double e0 = 0.0;
    const double v0 = detail::gk15(f, lo, hi, e0);
    panels.push_back({lo, hi, v0, e0});

    for (int it = 0; it < spec.max_subdivisions; ++it) {
        double total = 0.0, toterr = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].val;
            toterr += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (toterr <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
            return total;

        const Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        double e1 = 0.0, e2 = 0.0;
        const double v1 = detail::gk15(f, p.a, m, e1);
        const double v2 = detail::gk15(f, m, p.b, e2);
        panels[worst] = {p.a, m, v1, e1};
        panels.push_back({m, p.b, v2, e2});
    }
    double total = 0.0;
    for (const auto& p : panels) total += p.val;
    throw convergence_error("integrate: subdivision budget exhausted", total);
}

} // namespace risim
