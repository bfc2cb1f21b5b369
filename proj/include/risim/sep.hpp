#pragma once

// Symbol error probability of the phase-aligned link for M-PSK and M-QAM:
// exact MGF-based quadrature, the closed-form high/low-SNR limits, and the
// union-bound BER combiners.

#include <cmath>
#include <stdexcept>

#include "risim/model.hpp"
#include "risim/ped.hpp" // SnrRegime
#include "risim/specfun.hpp"

namespace risim {

enum class SepMethod { Quadrature, HighSnrAsymptotic, LowSnrAsymptotic, ZeroSnr };

struct SepResult {
    double value = 0.0;
    SepMethod method = SepMethod::Quadrature;
};

namespace detail {

inline void check_psk_m(int m) {
    if (m < 2 || !is_power_of_two(m))
        throw std::invalid_argument("sep: PSK order must be a power of 2, >= 2");
}

inline void check_qam_m(int m) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (m < 4 || side * side != m || !is_power_of_two(m))
        throw std::invalid_argument("sep: QAM order must be a perfect-square power of 2, >= 4");
}

// The eta -> 0 endpoint sends the MGF argument to -inf where the integrand
// vanishes; opening the interval at this epsilon keeps the truncation error
// far below the quadrature tolerance.
inline constexpr double kEtaEps = 1e-8;

// SEP values can be astronomically small at high SNR; the quadrature must be
// driven by the relative tolerance, so the absolute floor is set near the
// smallest normal double.
inline QuadratureSpec sep_quadrature() { return {1e-280, 1e-10, 4000}; }

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

} // namespace detail

/// SEP for M-PSK: (1/pi) * integral over eta of the max-SNR MGF evaluated at
/// -sin^2(pi/M)/sin^2(eta).
inline SepResult sep_mpsk(const SystemConfig& cfg, int m,
                          const QuadratureSpec& quad = detail::sep_quadrature()) {
    detail::check_psk_m(m);
    cfg.validate();
    if (cfg.gamma_av == 0.0)
        return {static_cast<double>(m - 1) / m, SepMethod::Quadrature};
    const double s0 = std::sin(M_PI / m) * std::sin(M_PI / m);
    auto f = [&](double eta) {
        const double se = std::sin(eta);
        return mgf_max_snr(cfg, -s0 / (se * se));
    };
    const double hi = (m - 1) * M_PI / m;
    const double v = integrate(f, detail::kEtaEps, hi, quad) / M_PI;
    return {detail::clamp01(v), SepMethod::Quadrature};
}

/// SEP for square M-QAM: the standard two-integral MGF form with argument
/// -3 / (2 (M-1) sin^2(eta)).
inline SepResult sep_mqam(const SystemConfig& cfg, int m,
                          const QuadratureSpec& quad = detail::sep_quadrature()) {
    detail::check_qam_m(m);
    cfg.validate();
    if (cfg.gamma_av == 0.0)
        return {static_cast<double>(m - 1) / m, SepMethod::Quadrature};
    const double s0 = 1.5 / (m - 1);
    auto f = [&](double eta) {
        const double se = std::sin(eta);
        return mgf_max_snr(cfg, -s0 / (se * se));
    };
    const double g = 1.0 - 1.0 / std::sqrt(static_cast<double>(m));
    const double i1 = integrate(f, detail::kEtaEps, 0.5 * M_PI, quad);
    const double i2 = integrate(f, detail::kEtaEps, 0.25 * M_PI, quad);
    const double v = (4.0 / M_PI) * g * i1 - (4.0 / M_PI) * g * g * i2;
    return {detail::clamp01(v), SepMethod::Quadrature};
}

namespace detail {

// atan(sqrt(1+z) * tan(theta)) continued past theta = pi/2, matching the
// antiderivative of the low-SNR integrand along the integration path.
inline double atan_branch(double z, double theta) {
    double v = std::atan(std::sqrt(1.0 + z) * std::tan(theta));
    if (theta > 0.5 * M_PI) v += M_PI;
    return v;
}

} // namespace detail

/// Closed-form M-PSK SEP limits. HighSnr is valid for all supported M;
/// LowSnr uses the Gaussian-Q form for M=2 and the arctan form for M>2.
inline SepResult sep_mpsk_asymptotic(const SystemConfig& cfg, int m, SnrRegime regime) {
    detail::check_psk_m(m);
    cfg.validate();
    const double n = cfg.n_elements;
    const double g = cfg.gamma_av;
    const double lag = laguerre_half(cfg.rician_k);
    const double beta = beta_factor(cfg.rician_k);

    switch (regime) {
        case SnrRegime::ZeroSnr:
            return {static_cast<double>(m - 1) / m, SepMethod::ZeroSnr};
        case SnrRegime::HighSnr: {
            if (!(g > 0.0)) throw std::domain_error("sep_mpsk_asymptotic: HighSnr needs gamma_av > 0");
            const double theta = (m - 1) * M_PI / m;
            const double v = (1.0 - std::cos(theta)) /
                             (M_PI * std::sin(M_PI / m) * std::sqrt(2.0 * n * g * beta)) *
                             std::exp(-n * M_PI * lag * lag / (8.0 * beta));
            return {detail::clamp01(v), SepMethod::HighSnrAsymptotic};
        }
        case SnrRegime::LowSnr: {
            if (!(g > 0.0)) throw std::domain_error("sep_mpsk_asymptotic: LowSnr needs gamma_av > 0");
            if (m == 2) {
                const double v = gaussian_q(std::sqrt(0.5 * n * n * M_PI * g * lag * lag));
                return {detail::clamp01(v), SepMethod::LowSnrAsymptotic};
            }
            const double s0 = std::sin(M_PI / m) * std::sin(M_PI / m);
            const double zeta = 1.0 / (2.0 * s0 * n * g * beta);
            const double theta = (m - 1) * M_PI / m;
            const double lead = static_cast<double>(m - 1) / m;
            const double coef = n * lag * lag / (8.0 * beta * std::sqrt(1.0 + zeta));
            const double bracket = detail::atan_branch(zeta, theta) +
                                   0.5 * std::sqrt(1.0 + zeta) * std::tan(theta);
            return {detail::clamp01(lead - coef * bracket), SepMethod::LowSnrAsymptotic};
        }
    }
    throw std::invalid_argument("sep_mpsk_asymptotic: unknown regime");
}

/// Closed-form M-QAM SEP limits.
inline SepResult sep_mqam_asymptotic(const SystemConfig& cfg, int m, SnrRegime regime) {
    detail::check_qam_m(m);
    cfg.validate();
    const double n = cfg.n_elements;
    const double g = cfg.gamma_av;
    const double lag = laguerre_half(cfg.rician_k);
    const double beta = beta_factor(cfg.rician_k);
    const double gm = 1.0 - 1.0 / std::sqrt(static_cast<double>(m));

    switch (regime) {
        case SnrRegime::ZeroSnr:
            return {static_cast<double>(m - 1) / m, SepMethod::ZeroSnr};
        case SnrRegime::HighSnr: {
            if (!(g > 0.0)) throw std::domain_error("sep_mqam_asymptotic: HighSnr needs gamma_av > 0");
            const double common = std::sqrt((m - 1) / (3.0 * n * g * beta)) *
                                  std::exp(-n * M_PI * lag * lag / (8.0 * beta));
            const double v = (4.0 / M_PI) * gm * common -
                             (4.0 / M_PI) * gm * gm * (1.0 - 1.0 / std::sqrt(2.0)) * common;
            return {detail::clamp01(v), SepMethod::HighSnrAsymptotic};
        }
        case SnrRegime::LowSnr: {
            if (!(g > 0.0)) throw std::domain_error("sep_mqam_asymptotic: LowSnr needs gamma_av > 0");
            const double u = (m - 1) / (3.0 * n * g * beta);
            const double q = gaussian_q(std::sqrt(0.75 * n * n * g * M_PI * lag * lag));
            const double inner = (detail::atan_branch(u, 0.25 * M_PI) +
                                  0.5 * std::sqrt(1.0 + u)) /
                                 std::sqrt(1.0 + u);
            const double v = 4.0 * gm * q -
                             (4.0 / M_PI) * gm * gm *
                                 (0.25 * M_PI - n * M_PI * lag * lag / (8.0 * beta) * inner);
            return {detail::clamp01(v), SepMethod::LowSnrAsymptotic};
        }
    }
    throw std::invalid_argument("sep_mqam_asymptotic: unknown regime");
}

/// Union bound on the SSK bit error rate: P_b <= n_rx * ped / 2.
inline double ber_union_ssk(const SystemConfig& cfg, double ped) {
    cfg.validate();
    if (!(ped >= 0.0) || !(ped <= 1.0))
        throw std::invalid_argument("ber_union_ssk: ped must lie in [0,1]");
    return std::min(1.0, 0.5 * cfg.n_rx * ped);
}

/// Approximate SM bit error rate combiner:
///   (1 - (n_rx-1) ped) * sep / log2(N * n_rx) + (n_rx-1) * ped / 2.
/// With `alt_divisor` the per-bit divisor uses the constellation order
/// (log2(M * n_rx)) instead of the element count, for sensitivity studies.
inline double ber_sm_approx(const SystemConfig& cfg, double ped, double sep,
                            bool alt_divisor = false) {
    cfg.validate();
    if (!(ped >= 0.0) || !(ped <= 1.0) || !(sep >= 0.0) || !(sep <= 1.0))
        throw std::invalid_argument("ber_sm_approx: ped and sep must lie in [0,1]");
    const double order = alt_divisor ? static_cast<double>(cfg.constellation.m)
                                     : static_cast<double>(cfg.n_elements);
    const double div = std::log2(order * cfg.n_rx);
    const double v = (1.0 - (cfg.n_rx - 1) * ped) * sep / div + 0.5 * (cfg.n_rx - 1) * ped;
    return detail::clamp01(v);
}

} // namespace risim
