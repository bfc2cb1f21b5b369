#pragma once

// Probability of erroneous index detection (pairwise and overall) for the
// SSK and SM schemes: truncated moment series, asymptotic limits, and an
// independent numerical oracle.
//
// Series structure. With A the noncentrality and D the total variance of a
// non-target branch energy Y, expanding the Rice-power CDF of each of the L
// non-target branches into its Bessel/exponential double series and
// integrating against the target-energy density term by term gives
//
//   PED = 1 - sum over (l_1..l_L, p_1..p_L) of
//         prod_i [ (-1)^{p_i} A^{l_i} e^{-A/D}
//                  / ( D^{2 l_i + p_i + 1} (l_i!)^2 p_i! (l_i+p_i+1) ) ]
//         * E[X^alpha],   alpha = sum_i (l_i + p_i + 1).
//
// Each per-branch factor depends on (l_i, p_i) only through m_i = l_i+p_i+1,
// so the L-fold sum collapses to an L-fold convolution of one per-branch
// coefficient table t[m] against the moment sequence E[X^alpha] (Faa di
// Bruno from the log-c.f. derivatives). The e^{-A/D} factor is folded into
// each table entry to keep every intermediate bounded.

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "risim/model.hpp"
#include "risim/partitions.hpp"
#include "risim/specfun.hpp"

namespace risim {

struct SeriesControl {
    int ell_max = 12;
    int p_max = 12;
    double rel_tol = 1e-8;
    int alpha_cap = 24; // bounds the partition order alpha

    void validate() const {
        if (ell_max < 0 || p_max < 0 || alpha_cap < 1 || !(rel_tol > 0.0))
            throw std::invalid_argument("SeriesControl: bad truncation parameters");
    }
};

enum class PedMethod { Series, Oracle, Asymptotic };
enum class SnrRegime { HighSnr, LowSnr, ZeroSnr };

struct PedResult {
    double value = 0.0;
    PedMethod method = PedMethod::Series;
    double truncation_residual = 0.0;
    bool clamped = false;
};

// ---------------------------------------------------------------------------
// Target-energy moments via Faa di Bruno
// ---------------------------------------------------------------------------

namespace detail {

// h[r-1] = H^(r)(0) / (j^r r!) for H = log of the target-energy c.f.:
//   (2^{r-1}/r) [ r mu1^2 (b1+c)^{r-1} + r mu2^2 (b2+c)^{r-1}
//                 + (b1+c)^r + (b2+c)^r ].
// The powers of 2 are folded into u_i = 2 (b_i + c) so that high orders stay
// representable whenever u_i <= 1 (the scaled form used by the series engine).
inline std::vector<double> log_cf_taylor(const CfParams& p, int max_order) {
    std::vector<double> h(static_cast<std::size_t>(max_order));
    const double u1 = 2.0 * (p.b1 + p.c);
    const double u2 = 2.0 * (p.b2 + p.c);
    double u1p = 1.0; // u1^{r-1}
    double u2p = 1.0;
    for (int r = 1; r <= max_order; ++r) {
        const double bracket = r * p.mu1 * p.mu1 * u1p + r * p.mu2 * p.mu2 * u2p +
                               0.5 * (u1p * u1 + u2p * u2);
        h[static_cast<std::size_t>(r - 1)] = bracket / r;
        u1p *= u1;
        u2p *= u2;
    }
    return h;
}

} // namespace detail

/// E[X^order] of the target-branch energy, assembled from the log-c.f.
/// derivatives through the partition sum.
inline double moment_target(const CfParams& p, int order, int cap = kDefaultPartitionCap) {
    if (order < 1) throw std::invalid_argument("moment_target: order must be >= 1");
    if (order > cap) throw capacity_error("moment_target: order exceeds the partition cap");
    return exp_derivative(order, detail::log_cf_taylor(p, order), cap);
}

// ---------------------------------------------------------------------------
// Numerical oracle
// ---------------------------------------------------------------------------

namespace detail {

// Laplace transform E[exp(-sX)] of the target energy on the inversion
// contour. Both denominator factors keep strictly positive imaginary part
// off the real axis, so principal logarithms are branch-safe.
inline std::complex<double> laplace_target(const CfParams& p, std::complex<double> s) {
    const std::complex<double> d1 = 1.0 + 2.0 * s * (p.b1 + p.c);
    const std::complex<double> d2 = 1.0 + 2.0 * s * (p.b2 + p.c);
    return std::exp(-s * p.mu1 * p.mu1 / d1 - s * p.mu2 * p.mu2 / d2 -
                    0.5 * std::log(d1) - 0.5 * std::log(d2));
}

} // namespace detail

/// CDF of the target-branch energy by fixed-Talbot trapezoidal inversion of
/// the transform L(s)/s. Accurate to roughly 1e-12 absolute while the
/// transform's essential singularity at s = -1/(2 max(b_i + c)) stays mild;
/// once mu^2/(2(b+c)) grows large the inversion loses all digits, so the
/// general-purpose cdf_target below uses a direct Gaussian integral instead
/// and this form is kept as an independent cross-check for moderate scales.
inline double cdf_target_talbot(const CfParams& p, double x, int nodes = 48) {
    if (!(x >= 0.0)) throw std::domain_error("cdf_target: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double r = 2.0 * nodes / (5.0 * x);
    double sum = 0.5 * std::exp(r * x) * (detail::laplace_target(p, r) / r).real();
    for (int j = 1; j < nodes; ++j) {
        const double th = j * M_PI / nodes;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> s(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        const std::complex<double> val =
            std::exp(s * x) * detail::laplace_target(p, s) / s *
            std::complex<double>(1.0, sigma);
        sum += val.real();
    }
    const double f = sum * r / nodes;
    return std::min(1.0, std::max(0.0, f));
}

/// CDF of the target-branch energy X = (mu1 + g1)^2 + (mu2 + g2)^2 with
/// g_i ~ N(0, b_i + c), as a one-dimensional Gaussian integral over the
/// first coordinate with the exact normal-CDF window in the second.
/// Tail-accurate at any scale (no transform inversion involved).
inline double cdf_target(const CfParams& p, double x) {
    if (!(x >= 0.0)) throw std::domain_error("cdf_target: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double s1 = std::sqrt(p.b1 + p.c);
    const double s2 = std::sqrt(p.b2 + p.c);
    // Degenerate coordinates (zero variance) reduce to a single normal CDF.
    if (s1 == 0.0 || s2 == 0.0) {
        if (s1 == 0.0 && s2 == 0.0)
            return (p.mu1 * p.mu1 + p.mu2 * p.mu2 <= x) ? 1.0 : 0.0;
        const double mu_fix = (s1 == 0.0) ? p.mu1 : p.mu2;
        const double mu_var = (s1 == 0.0) ? p.mu2 : p.mu1;
        const double sd = (s1 == 0.0) ? s2 : s1;
        const double rem = x - mu_fix * mu_fix;
        if (rem <= 0.0) return 0.0;
        const double rr = std::sqrt(rem);
        const double v = gaussian_q((-rr - mu_var) / sd) - gaussian_q((rr - mu_var) / sd);
        return std::min(1.0, std::max(0.0, v));
    }
    const double r = std::sqrt(x);
    // Outside +-14 sigma the first-coordinate mass is ~1e-44: negligible.
    const double lo = std::max(-r, p.mu1 - 14.0 * s1);
    const double hi = std::min(r, p.mu1 + 14.0 * s1);
    if (!(lo < hi)) return 0.0;
    auto f = [&](double u) {
        const double t = (u - p.mu1) / s1;
        const double w = std::sqrt(std::max(0.0, x - u * u));
        const double window =
            gaussian_q((-w - p.mu2) / s2) - gaussian_q((w - p.mu2) / s2);
        return std::exp(-0.5 * t * t) * window;
    };
    const double v = integrate(f, lo, hi, QuadratureSpec{1e-13, 1e-10, 2000}) /
                     (s1 * std::sqrt(2.0 * M_PI));
    return std::min(1.0, std::max(0.0, v));
}

namespace detail {

// PED = Pr{ max of L i.i.d. non-target energies exceeds the target energy }
//     = integral of F_X(y) * L * F_Y(y)^{L-1} * f_Y(y) dy.
inline double ped_oracle_core(const CfParams& p, const NonTargetStats& st, int L,
                              const QuadratureSpec& quad = {1e-11, 1e-9, 4000}) {
    // Upper limit from the Marcum tail: Q1(a, a + 14) is far below tolerance.
    const double a = std::sqrt(2.0 * st.mean_sq / st.var);
    const double y_hi = 0.5 * st.var * (a + 14.0) * (a + 14.0);
    auto integrand = [&](double y) {
        if (y <= 0.0) return 0.0;
        const double fy = pdf_nontarget(st, y);
        if (fy == 0.0) return 0.0;
        double w = static_cast<double>(L) * fy;
        if (L > 1) w *= std::pow(cdf_nontarget(st, y), L - 1);
        return w * cdf_target(p, y);
    };
    const double v = integrate(integrand, 0.0, y_hi, quad);
    return std::min(1.0, std::max(0.0, v));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Series engine
// ---------------------------------------------------------------------------

namespace detail {

// Scaled per-branch kernel F[m] = t[m] * D^m * m!, with e^{-A/D} folded in:
//   F[m] = e^{-x} * sum_{l} (-1)^{m-1-l} x^l C(m-1, l) / l!,   x = A/D,
//          l <= min(m-1, ell_max),  m-1-l <= p_max,
// i.e. a Laguerre polynomial in x when both truncation caps are inactive.
// f_abs carries the same sums with every term replaced by its magnitude; it
// feeds the round-off guard in ped_series_core.
struct BranchKernel {
    std::vector<double> f;
    std::vector<double> f_abs;
};

inline BranchKernel branch_kernel(double x, int m_max, const SeriesControl& ctl) {
    const double scale = std::exp(-x);
    BranchKernel k;
    k.f.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
    k.f_abs.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (int m = 1; m <= m_max; ++m) {
        double term = (m % 2 == 1) ? 1.0 : -1.0; // l = 0 carries (-1)^{m-1}
        double acc = 0.0;
        double acc_abs = 0.0;
        const int l_hi = std::min(m - 1, ctl.ell_max);
        const int l_lo = std::max(0, m - 1 - ctl.p_max);
        for (int l = 0; l <= l_hi; ++l) {
            if (l >= l_lo) {
                acc += term;
                acc_abs += std::fabs(term);
            }
            term *= -x * (m - 1 - l) / ((l + 1.0) * (l + 1.0));
        }
        k.f[static_cast<std::size_t>(m)] = acc * scale;
        k.f_abs[static_cast<std::size_t>(m)] = acc_abs * scale;
    }
    return k;
}

// Truncated series evaluation shared by PPED (L=1), PED, and the printed
// asymptotic limits (which reuse the same structure with modified A, D, c).
//
// Everything is evaluated in units of the non-target variance D. With
// G_L[alpha] the binomial L-fold convolution of F (so that conv[alpha] *
// D^alpha * alpha! = G_L[alpha]) and a[alpha] = E[X^alpha] / (D^alpha alpha!)
// from the log-c.f. Taylor recurrence, the anti-diagonal sums become
// G_L[alpha] * a[alpha] with every intermediate of moderate magnitude. The
// partition sum behind E[X^alpha] is evaluated through the equivalent
// cumulant-moment recurrence n a_n = sum_r r h_r a_{n-r}, which reproduces
// the Faa di Bruno expansion exactly while admitting orders far beyond what
// explicit partition enumeration could reach.
//
// An absolute-value replica of the whole computation tracks the worst-case
// cancellation amplitude; when round-off at that amplitude could exceed the
// requested relative tolerance, the evaluation is rejected rather than
// returning silently wrong digits.
inline PedResult ped_series_core(const CfParams& p, double A, double D, int L,
                                 const SeriesControl& ctl) {
    ctl.validate();
    const int cap = ctl.alpha_cap;
    if (L > cap)
        throw capacity_error("ped_series_core: n_rx too large for alpha_cap");
    if (cap > (L > 1 ? 1000 : 6000))
        throw capacity_error("ped_series_core: alpha_cap beyond the double-precision "
                             "range of the series engine");
    const double x = A / D;
    if (!(x < 700.0))
        throw convergence_error("ped_series_core: noncentrality too large for the series", 1.0);
    const int m_max = std::min(ctl.ell_max + ctl.p_max + 1, cap - (L - 1));
    if (m_max < 1)
        throw capacity_error("ped_series_core: truncation caps admit no terms");

    const BranchKernel k = branch_kernel(x, m_max, ctl);

    // Beyond L * m_live every anti-diagonal is structurally zero (the caps
    // zero the kernel), so "quiet" diagonals there carry no evidence of
    // convergence; the sweep below stops at alpha_live instead.
    int m_live = 0;
    for (int m = m_max; m >= 1; --m)
        if (k.f[static_cast<std::size_t>(m)] != 0.0 ||
            k.f_abs[static_cast<std::size_t>(m)] != 0.0) {
            m_live = m;
            break;
        }
    const long long alpha_live_ll = static_cast<long long>(L) * m_live;
    const int alpha_live = static_cast<int>(std::min<long long>(alpha_live_ll, cap));

    // Binomial L-fold convolution: G_j[alpha] = sum_m C(alpha, m) F[m] G_{j-1}[alpha-m].
    std::vector<double> g(static_cast<std::size_t>(cap) + 1, 0.0);
    std::vector<double> g_abs(static_cast<std::size_t>(cap) + 1, 0.0);
    for (int m = 1; m <= m_max; ++m) {
        g[static_cast<std::size_t>(m)] = k.f[static_cast<std::size_t>(m)];
        g_abs[static_cast<std::size_t>(m)] = k.f_abs[static_cast<std::size_t>(m)];
    }
    for (int j = 2; j <= L; ++j) {
        std::vector<double> ng(static_cast<std::size_t>(cap) + 1, 0.0);
        std::vector<double> na(static_cast<std::size_t>(cap) + 1, 0.0);
        for (int alpha = j; alpha <= cap; ++alpha) {
            double acc = 0.0;
            double acc_abs = 0.0;
            double binom = alpha; // C(alpha, 1)
            const int hi = std::min(m_max, alpha - (j - 1));
            for (int m = 1; m <= hi; ++m) {
                acc += binom * k.f[static_cast<std::size_t>(m)] *
                       g[static_cast<std::size_t>(alpha - m)];
                acc_abs += binom * k.f_abs[static_cast<std::size_t>(m)] *
                           g_abs[static_cast<std::size_t>(alpha - m)];
                binom *= static_cast<double>(alpha - m) / (m + 1.0);
            }
            ng[static_cast<std::size_t>(alpha)] = acc;
            na[static_cast<std::size_t>(alpha)] = acc_abs;
        }
        g = std::move(ng);
        g_abs = std::move(na);
    }

    // Scaled target moments a[n] = E[X^n] / (D^n n!).
    CfParams ps = p;
    const double rd = std::sqrt(D);
    ps.mu1 /= rd;
    ps.mu2 /= rd;
    ps.b1 /= D;
    ps.b2 /= D;
    ps.c /= D;
    const std::vector<double> h = log_cf_taylor(ps, cap);
    std::vector<double> a(static_cast<std::size_t>(cap) + 1, 0.0);
    a[0] = 1.0;
    for (int n = 1; n <= cap; ++n) {
        double s = 0.0;
        for (int r = 1; r <= n; ++r)
            s += r * h[static_cast<std::size_t>(r - 1)] * a[static_cast<std::size_t>(n - r)];
        a[static_cast<std::size_t>(n)] = s / n;
    }

    double sum = 0.0;
    double sum_abs = 0.0;
    int quiet = 0; // consecutive negligible anti-diagonals
    double residual = 0.0;
    bool converged = false;
    for (int alpha = L; alpha <= alpha_live; ++alpha) {
        const double term =
            g[static_cast<std::size_t>(alpha)] * a[static_cast<std::size_t>(alpha)];
        const double term_abs =
            g_abs[static_cast<std::size_t>(alpha)] * a[static_cast<std::size_t>(alpha)];
        sum += term;
        sum_abs += term_abs;
        if (!std::isfinite(sum) || !std::isfinite(sum_abs))
            throw convergence_error("ped_series_core: series terms overflow", 1.0 - sum);
        residual = std::fabs(term);
        // Term magnitudes rise to a hump before decaying, so negligible
        // signed terms alone do not prove the tail is spent; the unsigned
        // replica must have entered its decaying tail as well.
        if (residual < ctl.rel_tol * std::max(std::fabs(1.0 - sum), 1e-300) &&
            term_abs < ctl.rel_tol * std::max(sum_abs, 1e-300)) {
            if (++quiet >= 3) { converged = true; break; }
        } else {
            quiet = 0;
        }
    }
    const double raw = 1.0 - sum;
    if (!converged)
        throw convergence_error("ped_series_core: series not converged within caps", raw);
    constexpr double kEps = 2.220446049250313e-16;
    if (sum_abs * kEps > ctl.rel_tol * std::max(std::fabs(raw), 1e-300))
        throw convergence_error("ped_series_core: cancellation beyond double precision", raw);

    PedResult res;
    res.method = PedMethod::Series;
    res.truncation_residual = residual;
    if (raw < -1e-6 || raw > 1.0 + 1e-6)
        throw convergence_error("ped_series_core: series value left [0,1]", raw);
    res.clamped = (raw < 0.0 || raw > 1.0);
    res.value = std::min(1.0, std::max(0.0, raw));
    return res;
}

inline PedResult exact_zero_snr(int L) {
    // Exchangeability: all n_rx branch energies are i.i.d., so the target is
    // maximal with probability 1/(L+1).
    return {static_cast<double>(L) / (L + 1), PedMethod::Series, 0.0, false};
}

inline bool series_out_of_envelope(const SystemConfig& cfg) {
    return cfg.n_elements * cfg.gamma_av > 10.0;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Oracle entry points
// ---------------------------------------------------------------------------

inline PedResult ped_oracle(const SystemConfig& cfg,
                            std::optional<std::complex<double>> symbol = std::nullopt) {
    cfg.validate();
    const int L = cfg.branches_l();
    if (cfg.gamma_av == 0.0) {
        PedResult r = detail::exact_zero_snr(L);
        r.method = PedMethod::Oracle;
        return r;
    }
    const CfParams p = symbol ? cf_params_sm(cfg, *symbol) : cf_params_ssk(cfg);
    const double v = detail::ped_oracle_core(p, nontarget_stats(cfg), L);
    return {v, PedMethod::Oracle, 0.0, false};
}

inline PedResult ppead_oracle(const SystemConfig& cfg,
                              std::optional<std::complex<double>> symbol = std::nullopt) {
    cfg.validate();
    if (cfg.gamma_av == 0.0) return {0.5, PedMethod::Oracle, 0.0, false};
    const CfParams p = symbol ? cf_params_sm(cfg, *symbol) : cf_params_ssk(cfg);
    const double v = detail::ped_oracle_core(p, nontarget_stats(cfg), 1);
    return {v, PedMethod::Oracle, 0.0, false};
}

// ---------------------------------------------------------------------------
// Series entry points
// ---------------------------------------------------------------------------

namespace detail {

inline PedResult ped_series_entry(const SystemConfig& cfg,
                                  std::optional<std::complex<double>> symbol,
                                  int L, const SeriesControl& ctl) {
    cfg.validate();
    if (cfg.gamma_av == 0.0)
        return L == 1 ? PedResult{0.5, PedMethod::Series, 0.0, false} : exact_zero_snr(L);
    if (series_out_of_envelope(cfg)) {
        // The printed series needs partition orders beyond the cap once
        // N * gamma_av is large; defer to the general-purpose oracle.
        return L == 1 ? ppead_oracle(cfg, symbol) : ped_oracle(cfg, symbol);
    }
    const CfParams p = symbol ? cf_params_sm(cfg, *symbol) : cf_params_ssk(cfg);
    const NonTargetStats st = nontarget_stats(cfg);
    return ped_series_core(p, st.mean_sq, st.var, L, ctl);
}

} // namespace detail

inline PedResult ppead_ssk_series(const SystemConfig& cfg, const SeriesControl& ctl = {}) {
    return detail::ped_series_entry(cfg, std::nullopt, 1, ctl);
}

inline PedResult ped_ssk_series(const SystemConfig& cfg, const SeriesControl& ctl = {}) {
    return detail::ped_series_entry(cfg, std::nullopt, cfg.branches_l(), ctl);
}

inline PedResult ppead_sm_series(const SystemConfig& cfg, std::complex<double> symbol,
                                 const SeriesControl& ctl = {}) {
    return detail::ped_series_entry(cfg, symbol, 1, ctl);
}

inline PedResult ped_sm_series(const SystemConfig& cfg, std::complex<double> symbol,
                               const SeriesControl& ctl = {}) {
    return detail::ped_series_entry(cfg, symbol, cfg.branches_l(), ctl);
}

/// Uniform average of the symbol-conditioned PED over the constellation.
inline PedResult ped_sm_avg(const SystemConfig& cfg, const SeriesControl& ctl = {}) {
    cfg.validate();
    if (cfg.scheme != Scheme::Sm)
        throw std::invalid_argument("ped_sm_avg: config scheme must be SM");
    PedResult out;
    double acc = 0.0;
    for (const auto& v : cfg.constellation.points) {
        const PedResult r = ped_sm_series(cfg, v, ctl);
        acc += r.value;
        out.method = r.method;
        out.clamped = out.clamped || r.clamped;
        out.truncation_residual = std::max(out.truncation_residual, r.truncation_residual);
    }
    out.value = acc / static_cast<double>(cfg.constellation.points.size());
    return out;
}

// ---------------------------------------------------------------------------
// Asymptotic limits
// ---------------------------------------------------------------------------

namespace detail {

// High-SNR limit: the full series with the noise terms removed (N0 = 0),
// which is gamma_av-independent by construction. If the truncated series
// cannot resolve the limit within the caps, the same limit is evaluated by
// the oracle quadrature with zero noise.
inline PedResult ped_high_snr(const SystemConfig& cfg,
                              std::optional<std::complex<double>> symbol,
                              int L, const SeriesControl& ctl) {
    SystemConfig lim = cfg;
    lim.gamma_av = 1.0; // placeholder; c is zeroed below
    CfParams p = symbol ? cf_params_sm(lim, *symbol) : cf_params_ssk(lim);
    p.c = 0.0;
    const double n = cfg.n_elements;
    const double A = cfg.rician_k * n * n;
    const double D = n;
    PedResult r;
    try {
        r = ped_series_core(p, A, D, L, ctl);
    } catch (const convergence_error&) {
        r.value = ped_oracle_core(p, NonTargetStats{A, D}, L);
        r.truncation_residual = 0.0;
        r.clamped = false;
    }
    r.method = PedMethod::Asymptotic;
    return r;
}

// Low-SNR limit: noise dominates every branch variance, so the per-branch
// spreads b (target) and N (non-target) are dropped while the mean offsets
// are kept. Both energies become noncentral with common variance N0 and the
// limit is the race probability between the two Rice powers.
inline PedResult ped_low_snr(const SystemConfig& cfg,
                             std::optional<std::complex<double>> symbol,
                             int L) {
    if (!(cfg.gamma_av > 0.0))
        throw std::invalid_argument("ped_low_snr: requires gamma_av > 0");
    const CfParams p = symbol ? cf_params_sm(cfg, *symbol) : cf_params_ssk(cfg);
    const double n0 = 1.0 / cfg.gamma_av;
    const double n = cfg.n_elements;
    const NonTargetStats x_st{p.mu1 * p.mu1 + p.mu2 * p.mu2, n0};
    const NonTargetStats y_st{cfg.rician_k * n * n, n0};

    const double ax = std::sqrt(2.0 * x_st.mean_sq / x_st.var);
    const double ay = std::sqrt(2.0 * y_st.mean_sq / y_st.var);
    const double hi = 0.5 * n0 * std::pow(std::max(ax, ay) + 14.0, 2.0);
    auto integrand = [&](double y) {
        if (y <= 0.0) return 0.0;
        double w = static_cast<double>(L) * pdf_nontarget(y_st, y);
        if (L > 1) w *= std::pow(cdf_nontarget(y_st, y), L - 1);
        return w * cdf_nontarget(x_st, y); // noncentral CDF doubles as F_X here
    };
    const double v = integrate(integrand, 0.0, hi, QuadratureSpec{1e-11, 1e-9, 4000});
    return {std::min(1.0, std::max(0.0, v)), PedMethod::Asymptotic, 0.0, false};
}

inline PedResult ped_asymptotic_entry(const SystemConfig& cfg,
                                      std::optional<std::complex<double>> symbol,
                                      SnrRegime regime, const SeriesControl& ctl) {
    cfg.validate();
    const int L = cfg.branches_l();
    switch (regime) {
        case SnrRegime::ZeroSnr: {
            PedResult r = exact_zero_snr(L);
            r.method = PedMethod::Asymptotic;
            return r;
        }
        case SnrRegime::HighSnr:
            return ped_high_snr(cfg, symbol, L, ctl);
        case SnrRegime::LowSnr:
            return ped_low_snr(cfg, symbol, L);
    }
    throw std::invalid_argument("ped_asymptotic_entry: unknown regime");
}

} // namespace detail

inline PedResult ped_ssk_asymptotic(const SystemConfig& cfg, SnrRegime regime,
                                    const SeriesControl& ctl = {}) {
    return detail::ped_asymptotic_entry(cfg, std::nullopt, regime, ctl);
}

inline PedResult ped_sm_asymptotic(const SystemConfig& cfg, std::complex<double> symbol,
                                   SnrRegime regime, const SeriesControl& ctl = {}) {
    return detail::ped_asymptotic_entry(cfg, symbol, regime, ctl);
}

} // namespace risim
