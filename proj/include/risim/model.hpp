#pragma once

// Scenario parameterization and the derived statistical bundles shared by the
// analytic and simulation paths.
//
// Normalization used throughout: sigma_h^2 = 1, E_s = 1, N0 = 1/gamma_av, and
// the channel mean mu = sqrt(k) taken real. Every quantity of interest then
// depends only on (N, n_rx, k, gamma_av, constellation), and the three
// evaluation paths (series / oracle / Monte Carlo) are directly comparable.
// gamma_av = 0 is handled by dedicated zero-SNR code paths, never by forming
// an infinite N0.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "risim/specfun.hpp"

namespace risim {

enum class Scheme { Ssk, Sm };
enum class Modulation { Psk, Qam };

namespace detail {

inline bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

inline unsigned gray_code(unsigned i) { return i ^ (i >> 1); }

} // namespace detail

/// Unit-average-energy symbol set. `labels[i]` is the Gray bit pattern
/// assigned to `points[i]` (per-axis Gray for QAM), used for bit counting.
struct Constellation {
    Modulation modulation = Modulation::Psk;
    int m = 2;
    std::vector<std::complex<double>> points;
    std::vector<unsigned> labels;

    static Constellation psk(int m) {
        if (!detail::is_power_of_two(m) || m < 2)
            throw std::invalid_argument("Constellation::psk: M must be a power of 2, >= 2");
        Constellation c;
        c.modulation = Modulation::Psk;
        c.m = m;
        // Offset pi/M for M > 2 puts QPSK at (+-1 +- j)/sqrt(2); BPSK stays on +-1.
        const double offset = (m == 2) ? 0.0 : M_PI / m;
        for (int i = 0; i < m; ++i) {
            const double th = 2.0 * M_PI * i / m + offset;
            c.points.emplace_back(std::cos(th), std::sin(th));
            c.labels.push_back(detail::gray_code(static_cast<unsigned>(i)));
        }
        return c;
    }

    static Constellation qam(int m) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
        if (m < 4 || side * side != m || !detail::is_power_of_two(m))
            throw std::invalid_argument("Constellation::qam: M must be a perfect-square power of 2, >= 4");
        Constellation c;
        c.modulation = Modulation::Qam;
        c.m = m;
        const double scale = 1.0 / std::sqrt(2.0 * (side * side - 1) / 3.0);
        int axis_bits = 0;
        while ((1 << axis_bits) < side) ++axis_bits;
        for (int a = 0; a < side; ++a) {
            for (int q = 0; q < side; ++q) {
                const double re = (2 * a - side + 1) * scale;
                const double im = (2 * q - side + 1) * scale;
                c.points.emplace_back(re, im);
                c.labels.push_back((detail::gray_code(static_cast<unsigned>(a)) << axis_bits) |
                                   detail::gray_code(static_cast<unsigned>(q)));
            }
        }
        return c;
    }

    int bits_per_symbol() const {
        int b = 0;
        while ((1 << b) < m) ++b;
        return b;
    }
};

struct SystemConfig {
    int n_elements = 1;     // N
    int n_rx = 2;           // receive diversity branches
    double rician_k = 0.0;  // k = |mu|^2 / sigma_h^2
    double gamma_av = 1.0;  // average SNR per branch, linear; 0 = zero-SNR path
    Scheme scheme = Scheme::Ssk;
    Constellation constellation; // used when scheme == Sm

    int branches_l() const { return n_rx - 1; }

    void validate() const {
        if (n_elements < 1) throw std::invalid_argument("SystemConfig: n_elements must be >= 1");
        if (n_rx < 2) throw std::invalid_argument("SystemConfig: n_rx must be >= 2");
        if (!(rician_k >= 0.0) || !std::isfinite(rician_k))
            throw std::invalid_argument("SystemConfig: rician_k must be finite and >= 0");
        if (!(gamma_av >= 0.0) || !std::isfinite(gamma_av))
            throw std::invalid_argument("SystemConfig: gamma_av must be finite and >= 0");
        if (scheme == Scheme::Sm && constellation.points.empty())
            throw std::invalid_argument("SystemConfig: SM scheme requires a constellation");
    }
};

/// Parameters of the target-branch energy characteristic function. The SSK
/// bundle is the (mu1, b1) half with the second block zeroed, so one
/// evaluation path serves both schemes.
struct CfParams {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double c = 0.0;
};

/// Non-target branch energy: |CN(mean, var)|^2, noncentral with the quoted
/// moments.
struct NonTargetStats {
    double mean_sq = 0.0; // squared magnitude of the complex mean
    double var = 0.0;     // total variance of the complex Gaussian
};

/// beta(k) = 1 + k - (pi/4) L_{1/2}^2(-k); the per-element variance factor of
/// the aligned-channel amplitude sum. Positive for all k >= 0 (asserted).
inline double beta_factor(double k) {
    const double lag = laguerre_half(k);
    const double beta = 1.0 + k - 0.25 * M_PI * lag * lag;
    if (!(beta > 0.0))
        throw std::domain_error("beta_factor: variance factor must be positive");
    return beta;
}

inline CfParams cf_params_ssk(const SystemConfig& cfg) {
    cfg.validate();
    if (!(cfg.gamma_av > 0.0))
        throw std::invalid_argument("cf_params_ssk: requires gamma_av > 0 (use the zero-SNR paths)");
    const double n = cfg.n_elements;
    const double mu_x = 0.5 * n * std::sqrt(M_PI) * laguerre_half(cfg.rician_k);
    CfParams p;
    p.mu1 = mu_x;
    p.b1 = n * beta_factor(cfg.rician_k);
    p.c = 0.5 / cfg.gamma_av;
    return p;
}

inline CfParams cf_params_sm(const SystemConfig& cfg, std::complex<double> symbol) {
    cfg.validate();
    if (cfg.scheme != Scheme::Sm)
        throw std::invalid_argument("cf_params_sm: config scheme must be SM");
    bool found = false;
    for (const auto& pt : cfg.constellation.points)
        if (std::abs(pt - symbol) < 1e-9) { found = true; break; }
    if (!found)
        throw std::invalid_argument("cf_params_sm: symbol not in the configured constellation");
    if (!(cfg.gamma_av > 0.0))
        throw std::invalid_argument("cf_params_sm: requires gamma_av > 0 (use the zero-SNR paths)");

    const double n = cfg.n_elements;
    const double mu_x = 0.5 * n * std::sqrt(M_PI) * laguerre_half(cfg.rician_k);
    const double b = n * beta_factor(cfg.rician_k);
    const double re = symbol.real(), im = symbol.imag();
    CfParams p;
    p.mu1 = mu_x * re;
    p.mu2 = mu_x * im;
    p.b1 = b * re * re;
    p.b2 = b * im * im;
    p.c = 0.5 / cfg.gamma_av;
    return p;
}

/// Characteristic function of the target-branch energy at real omega. Both
/// denominator arguments 1 - 2j*omega*(.) stay off the negative real axis for
/// real omega, so principal-branch square roots are globally correct.
inline std::complex<double> cf_target(const CfParams& p, double omega) {
    if (!std::isfinite(omega)) throw std::domain_error("cf_target: non-finite omega");
    const std::complex<double> jw(0.0, omega);
    const std::complex<double> d1 = 1.0 - 2.0 * jw * (p.b1 + p.c);
    const std::complex<double> d2 = 1.0 - 2.0 * jw * (p.b2 + p.c);
    const std::complex<double> arg = jw * p.mu1 * p.mu1 / d1 + jw * p.mu2 * p.mu2 / d2;
    return std::exp(arg - 0.5 * std::log(d1) - 0.5 * std::log(d2));
}

/// Moment generating function E[exp(sX)] of the target energy, s <= 0.
inline double mgf_target(const CfParams& p, double s) {
    if (!(s <= 0.0)) throw std::domain_error("mgf_target: requires s <= 0");
    const double d1 = 1.0 - 2.0 * s * (p.b1 + p.c);
    const double d2 = 1.0 - 2.0 * s * (p.b2 + p.c);
    return std::exp(s * p.mu1 * p.mu1 / d1 + s * p.mu2 * p.mu2 / d2) / std::sqrt(d1 * d2);
}

inline NonTargetStats nontarget_stats(const SystemConfig& cfg) {
    cfg.validate();
    if (!(cfg.gamma_av > 0.0))
        throw std::invalid_argument("nontarget_stats: requires gamma_av > 0 (use the zero-SNR paths)");
    NonTargetStats s;
    const double n = cfg.n_elements;
    s.mean_sq = cfg.rician_k * n * n;
    s.var = n + 1.0 / cfg.gamma_av;
    return s;
}

inline std::complex<double> cf_nontarget(const NonTargetStats& st, double omega) {
    const std::complex<double> d = 1.0 - std::complex<double>(0.0, omega) * st.var;
    return std::exp(std::complex<double>(0.0, omega) * st.mean_sq / d) / d;
}

/// Rice-power CDF: F(y) = 1 - Q1(sqrt(2 m / var), sqrt(2 y / var)).
inline double cdf_nontarget(const NonTargetStats& st, double y) {
    if (!(y >= 0.0)) throw std::domain_error("cdf_nontarget: y must be >= 0");
    if (y == 0.0) return 0.0;
    return 1.0 - marcum_q1(std::sqrt(2.0 * st.mean_sq / st.var), std::sqrt(2.0 * y / st.var));
}

/// Rice-power density, evaluated overflow-free by pairing the exponential
/// with the scaled Bessel: f(y) = exp(-(sqrt(y)-sqrt(m))^2/var) * i0e(arg)/var.
inline double pdf_nontarget(const NonTargetStats& st, double y) {
    if (!(y >= 0.0)) throw std::domain_error("pdf_nontarget: y must be >= 0");
    const double rm = std::sqrt(st.mean_sq);
    const double ry = std::sqrt(y);
    const double d = ry - rm;
    return std::exp(-d * d / st.var) * detail::i0_scaled(2.0 * rm * ry / st.var) / st.var;
}

/// MGF of the maximum instantaneous SNR gamma (Gaussian surrogate of the
/// aligned amplitude sum), evaluated at s <= 0.
inline double mgf_max_snr(const SystemConfig& cfg, double s) {
    cfg.validate();
    if (!(s <= 0.0)) throw std::domain_error("mgf_max_snr: requires s <= 0");
    const double n = cfg.n_elements;
    const double g = cfg.gamma_av;
    const double lag = laguerre_half(cfg.rician_k);
    const double mean_term = 0.25 * n * n * M_PI * g * lag * lag;
    const double var_term = n * g * beta_factor(cfg.rician_k);
    const double d = 1.0 - 2.0 * s * var_term;
    return std::exp(s * mean_term / d) / std::sqrt(d);
}

} // namespace risim
