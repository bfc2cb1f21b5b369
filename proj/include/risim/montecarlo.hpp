#pragma once

// Ground-truth simulation of the greedy detector: Rician channel draws, RIS
// phase alignment, index/symbol detection, and Bernoulli estimates with
// standard errors. Trials are partitioned into batches, each with its own
// counter-derived random stream, so estimates are bit-identical under any
// scheduling of the batches.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "risim/model.hpp"

namespace risim {

enum class ChannelMode { ExactSum, CltGaussian };
enum class Metric { Ped, Ppead, Sep, Ber };

struct SimControl {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    ChannelMode channel_mode = ChannelMode::ExactSum;
    std::uint64_t batch_size = 16384;

    void validate() const {
        if (trials < 1 || batch_size < 1)
            throw std::invalid_argument("SimControl: trials and batch_size must be >= 1");
    }
};

struct MetricEstimate {
    double value = 0.0;
    double std_err = 0.0;
    std::uint64_t trials = 0;
    Metric metric = Metric::Ped;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t batch) {
    // splitmix64 finalizer over a golden-ratio stride; distinct batches get
    // uncorrelated generator seeds from one user seed.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (batch + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic normal/uniform source; Box-Muller is hand-rolled because the
// standard library's normal_distribution is implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    double uniform() { // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    std::complex<double> cnormal() { // CN(0, 1)
        return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
    }

    int index(int n) { return static_cast<int>(raw() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline bool is_pow2_int(int x) { return x > 0 && (x & (x - 1)) == 0; }

inline int log2_int(int x) {
    int b = 0;
    while ((1 << b) < x) ++b;
    return b;
}

} // namespace detail

/// One i.i.d. CN(sqrt(k), 1) channel matrix, row-major [n_rx x n_elements].
inline std::vector<std::complex<double>> draw_channel_matrix(const SystemConfig& cfg,
                                                             detail::RandomStream& rng) {
    cfg.validate();
    const double mu = std::sqrt(cfg.rician_k);
    std::vector<std::complex<double>> h(static_cast<std::size_t>(cfg.n_rx) * cfg.n_elements);
    for (auto& e : h) e = mu + rng.cnormal();
    return h;
}

namespace detail {

struct TrialOutcome {
    int target = 0;
    int detected = 0;
    int symbol = 0;                        // transmitted constellation index (SM)
    std::complex<double> z_detected{0.0, 0.0};
    double gain = 0.0;                     // aligned target amplitude sum
};

// One greedy-detection trial. `compare_l` limits the comparison to that many
// non-target branches (1 for the pairwise metric, n_rx-1 otherwise).
inline TrialOutcome greedy_trial(const SystemConfig& cfg, const SimControl& sim,
                                 RandomStream& rng, int compare_l,
                                 std::optional<int> fixed_symbol) {
    TrialOutcome out;
    const int n = cfg.n_elements;
    out.target = rng.index(compare_l + 1);
    std::complex<double> v{1.0, 0.0};
    if (cfg.scheme == Scheme::Sm) {
        out.symbol = fixed_symbol ? *fixed_symbol
                                  : rng.index(static_cast<int>(cfg.constellation.points.size()));
        v = cfg.constellation.points[static_cast<std::size_t>(out.symbol)];
    }

    if (cfg.gamma_av == 0.0) {
        // No signal energy: every branch is pure noise of a common scale.
        double best = -1.0;
        for (int u = 0; u <= compare_l; ++u) {
            const double e = std::norm(rng.cnormal());
            if (e > best) { best = e; out.detected = u; }
        }
        return out;
    }

    const double n0 = 1.0 / cfg.gamma_av;
    const double noise_scale = std::sqrt(n0);
    double best = -1.0;
    int best_idx = 0;

    if (sim.channel_mode == ChannelMode::ExactSum) {
        const double mu = std::sqrt(cfg.rician_k);
        static thread_local std::vector<std::complex<double>> phases;
        phases.resize(static_cast<std::size_t>(n));
        double a = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::complex<double> h = mu + rng.cnormal();
            const double mag = std::abs(h);
            a += mag;
            phases[static_cast<std::size_t>(i)] = std::conj(h) / mag;
        }
        out.gain = a;
        for (int slot = 0; slot <= compare_l; ++slot) {
            std::complex<double> z;
            if (slot == out.target) {
                z = a * v + noise_scale * rng.cnormal();
            } else {
                std::complex<double> s{0.0, 0.0};
                for (int i = 0; i < n; ++i)
                    s += (mu + rng.cnormal()) * phases[static_cast<std::size_t>(i)];
                z = s * v + noise_scale * rng.cnormal();
            }
            const double e = std::norm(z);
            if (e > best) { best = e; best_idx = slot; out.z_detected = z; }
        }
    } else {
        // CLT surrogates: target energy from the (mu1, mu2, b1, b2, c)
        // decomposition; non-target branches conditioned on the actual symbol.
        const CfParams p = cfg.scheme == Scheme::Sm ? cf_params_sm(cfg, v) : cf_params_ssk(cfg);
        const double nt_var = n * std::norm(v) + n0;
        const std::complex<double> nt_mean = static_cast<double>(n) * std::sqrt(cfg.rician_k) * v;
        const double mu_x = 0.5 * n * std::sqrt(M_PI) * laguerre_half(cfg.rician_k);
        out.gain = mu_x + rng.normal() * std::sqrt(n * beta_factor(cfg.rician_k));
        for (int slot = 0; slot <= compare_l; ++slot) {
            std::complex<double> z;
            if (slot == out.target) {
                const double re = p.mu1 + rng.normal() * std::sqrt(p.b1) +
                                  rng.normal() * std::sqrt(p.c);
                const double im = p.mu2 + rng.normal() * std::sqrt(p.b2) +
                                  rng.normal() * std::sqrt(p.c);
                z = {re, im};
            } else {
                z = nt_mean + std::sqrt(nt_var) * rng.cnormal();
            }
            const double e = std::norm(z);
            if (e > best) { best = e; best_idx = slot; out.z_detected = z; }
        }
    }
    out.detected = best_idx;
    return out;
}

inline MetricEstimate bernoulli_estimate(std::uint64_t errors, std::uint64_t trials, Metric m) {
    MetricEstimate e;
    e.metric = m;
    e.trials = trials;
    e.value = static_cast<double>(errors) / static_cast<double>(trials);
    e.std_err = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(trials));
    return e;
}

template <class PerTrial>
std::uint64_t run_batches(const SimControl& sim, const PerTrial& trial_fn) {
    std::uint64_t errors = 0;
    std::uint64_t done = 0;
    for (std::uint64_t batch = 0; done < sim.trials; ++batch) {
        const std::uint64_t count = std::min<std::uint64_t>(sim.batch_size, sim.trials - done);
        RandomStream rng(mix_seed(sim.seed, batch));
        for (std::uint64_t t = 0; t < count; ++t) errors += trial_fn(rng);
        done += count;
    }
    return errors;
}

} // namespace detail

/// Probability of erroneous index detection by direct simulation.
/// `fixed_symbol` conditions the SM metric on one constellation point;
/// `pairwise` restricts the race to a single non-target branch.
inline MetricEstimate simulate_ped(const SystemConfig& cfg, const SimControl& sim,
                                   std::optional<int> fixed_symbol = std::nullopt,
                                   bool pairwise = false) {
    cfg.validate();
    sim.validate();
    const int compare_l = pairwise ? 1 : cfg.branches_l();
    const std::uint64_t errors = detail::run_batches(sim, [&](detail::RandomStream& rng) {
        const auto o = detail::greedy_trial(cfg, sim, rng, compare_l, fixed_symbol);
        return o.detected != o.target ? 1ull : 0ull;
    });
    return detail::bernoulli_estimate(errors, sim.trials, pairwise ? Metric::Ppead : Metric::Ped);
}

/// Symbol error probability on the phase-aligned target branch with
/// maximum-likelihood demodulation against the known aligned gain.
inline MetricEstimate simulate_sep(const SystemConfig& cfg, int m, Modulation modulation,
                                   const SimControl& sim) {
    cfg.validate();
    sim.validate();
    const Constellation cst = modulation == Modulation::Psk ? Constellation::psk(m)
                                                            : Constellation::qam(m);
    const int n = cfg.n_elements;
    const std::uint64_t errors = detail::run_batches(sim, [&](detail::RandomStream& rng) {
        const int s = rng.index(m);
        if (cfg.gamma_av == 0.0) {
            // Zero signal energy leaves the detector with no information.
            return rng.index(m) != s ? 1ull : 0ull;
        }
        double a;
        if (sim.channel_mode == ChannelMode::ExactSum) {
            const double mu = std::sqrt(cfg.rician_k);
            a = 0.0;
            for (int i = 0; i < n; ++i) a += std::abs(mu + rng.cnormal());
        } else {
            const double mu_x = 0.5 * n * std::sqrt(M_PI) * laguerre_half(cfg.rician_k);
            a = mu_x + rng.normal() * std::sqrt(n * beta_factor(cfg.rician_k));
        }
        const std::complex<double> y =
            a * cst.points[static_cast<std::size_t>(s)] +
            std::sqrt(1.0 / cfg.gamma_av) * rng.cnormal();
        int s_hat = 0;
        double best = std::norm(y - a * cst.points[0]);
        for (int j = 1; j < m; ++j) {
            const double d = std::norm(y - a * cst.points[static_cast<std::size_t>(j)]);
            if (d < best) { best = d; s_hat = j; }
        }
        return s_hat != s ? 1ull : 0ull;
    });
    return detail::bernoulli_estimate(errors, sim.trials, Metric::Sep);
}

/// End-to-end bit error rate: natural-binary index bits plus (for SM)
/// Gray-labeled symbol bits demodulated at the detected branch.
inline MetricEstimate simulate_ber(const SystemConfig& cfg, int m, const SimControl& sim) {
    cfg.validate();
    sim.validate();
    if (!detail::is_pow2_int(cfg.n_rx))
        throw std::invalid_argument("simulate_ber: n_rx must be a power of 2");
    const bool sm = cfg.scheme == Scheme::Sm;
    if (sm && (cfg.constellation.m != m || !detail::is_pow2_int(m)))
        throw std::invalid_argument("simulate_ber: M must match the configured constellation");

    const int index_bits = detail::log2_int(cfg.n_rx);
    const int sym_bits = sm ? cfg.constellation.bits_per_symbol() : 0;
    const int bits_per_trial = index_bits + sym_bits;
    const Constellation& cst = cfg.constellation;

    const std::uint64_t bit_errors = detail::run_batches(sim, [&](detail::RandomStream& rng) {
        const auto o = detail::greedy_trial(cfg, sim, rng, cfg.branches_l(), std::nullopt);
        std::uint64_t errs = static_cast<std::uint64_t>(
            __builtin_popcount(static_cast<unsigned>(o.target ^ o.detected)));
        if (sm) {
            if (cfg.gamma_av == 0.0) {
                const int s_hat = rng.index(m);
                errs += static_cast<std::uint64_t>(__builtin_popcount(
                    cst.labels[static_cast<std::size_t>(o.symbol)] ^
                    cst.labels[static_cast<std::size_t>(s_hat)]));
            } else {
                // Demodulate at the detected branch assuming the aligned gain.
                int s_hat = 0;
                double best = std::norm(o.z_detected - o.gain * cst.points[0]);
                for (int j = 1; j < m; ++j) {
                    const double d =
                        std::norm(o.z_detected - o.gain * cst.points[static_cast<std::size_t>(j)]);
                    if (d < best) { best = d; s_hat = j; }
                }
                errs += static_cast<std::uint64_t>(__builtin_popcount(
                    cst.labels[static_cast<std::size_t>(o.symbol)] ^
                    cst.labels[static_cast<std::size_t>(s_hat)]));
            }
        }
        return errs;
    });

    const std::uint64_t total_bits = sim.trials * static_cast<std::uint64_t>(bits_per_trial);
    MetricEstimate e = detail::bernoulli_estimate(bit_errors, total_bits, Metric::Ber);
    e.trials = sim.trials;
    return e;
}

} // namespace risim
