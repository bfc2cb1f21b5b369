#pragma once

// Configuration-driven sweep runner: evaluates the requested metrics by the
// requested methods over a gamma-dB or Rician-k grid and renders the result
// table as CSV. Rows are produced in deterministic grid order regardless of
// how many worker threads evaluate the grid points.

#include <atomic>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "risim/montecarlo.hpp"
#include "risim/ped.hpp"
#include "risim/sep.hpp"

namespace risim {

struct SweepSpec {
    SystemConfig base;
    // axis: gamma sweep unless k_list is non-empty
    double gamma_db_start = 0.0;
    double gamma_db_stop = 0.0;
    double gamma_db_step = 5.0;
    std::vector<double> k_list; // k axis; gamma fixed at gamma_db_start
    bool zero_snr = false;      // prepend an exact gamma_av = 0 grid point
    std::vector<std::string> metrics = {"ped"};
    std::vector<std::string> methods = {"oracle"};
    SimControl sim;
    SeriesControl series;
    std::string output_path = "sweep.csv";
    int threads = 1;
};

struct ResultRow {
    std::string scheme;
    int n = 0;
    int n_rx = 0;
    double k = 0.0;
    bool zero_snr = false; // gamma_db column prints "-inf"
    double gamma_db = 0.0;
    std::string m;            // empty for SSK
    std::string symbol_index; // empty, numeric, or "avg"
    std::string metric;
    std::string method;
    std::optional<double> value;
    std::optional<double> std_err;
    std::optional<std::uint64_t> trials;
    std::optional<bool> clamped;
    std::string status = "ok";
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const std::vector<std::string>& known_metrics() {
    static const std::vector<std::string> v = {"ped", "ppead", "sep", "ber"};
    return v;
}

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> v = {"series",          "oracle",        "quadrature",
                                               "mc",              "asymptotic_high",
                                               "asymptotic_low",  "asymptotic_zero"};
    return v;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
    for (const auto& e : v)
        if (e == s) return true;
    return false;
}

} // namespace detail

/// Collects every violation in the spec (not just the first).
inline std::vector<std::string> validate(const SweepSpec& spec) {
    std::vector<std::string> out;
    if (spec.base.n_rx < 2) out.push_back("n_rx must be >= 2");
    if (spec.base.n_elements < 1) out.push_back("n_elements must be >= 1");
    if (!(spec.base.rician_k >= 0.0)) out.push_back("rician_k must be >= 0");
    if (spec.k_list.empty() && !(spec.gamma_db_step > 0.0))
        out.push_back("gamma_db_step must be > 0");
    if (spec.k_list.empty() && spec.gamma_db_stop < spec.gamma_db_start)
        out.push_back("gamma_db_stop must be >= gamma_db_start");
    for (double k : spec.k_list)
        if (!(k >= 0.0)) out.push_back("k_list entries must be >= 0");
    if (spec.metrics.empty()) out.push_back("metrics must be non-empty");
    if (spec.methods.empty()) out.push_back("methods must be non-empty");
    for (const auto& m : spec.metrics)
        if (!detail::contains(detail::known_metrics(), m))
            out.push_back("unknown metric: " + m);
    for (const auto& m : spec.methods)
        if (!detail::contains(detail::known_methods(), m))
            out.push_back("unknown method: " + m);
    if (spec.base.scheme == Scheme::Sm) {
        const int m = spec.base.constellation.m;
        if (!detail::is_pow2_int(m) || m < 2) out.push_back("M must be a power of 2, >= 2");
        if (spec.base.constellation.modulation == Modulation::Qam) {
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
            if (side * side != m || m < 4) out.push_back("QAM requires perfect-square M");
        }
    }
    if (spec.sim.trials < 1) out.push_back("trials must be >= 1");
    if (spec.threads < 1) out.push_back("threads must be >= 1");
    if (spec.series.ell_max < 0 || spec.series.p_max < 0 || spec.series.alpha_cap < 1 ||
        !(spec.series.rel_tol > 0.0))
        out.push_back("series controls must satisfy ell_max,p_max >= 0, alpha_cap >= 1, rel_tol > 0");
    return out;
}

/// Parses the JSON sweep configuration. Missing keys take documented
/// defaults; malformed JSON raises std::runtime_error with parser context.
inline SweepSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("load_config: " + path + ": " + e.what());
    }

    SweepSpec spec;
    const std::string scheme = j.value("scheme", std::string("ssk"));
    if (scheme == "ssk") spec.base.scheme = Scheme::Ssk;
    else if (scheme == "sm") spec.base.scheme = Scheme::Sm;
    else throw std::runtime_error("load_config: scheme must be \"ssk\" or \"sm\"");

    spec.base.n_elements = j.value("n_elements", 64);
    spec.base.n_rx = j.value("n_rx", 2);
    spec.base.rician_k = j.value("rician_k", 1.0);

    const std::string mod = j.value("modulation", std::string("psk"));
    const int m = j.value("m", 4);
    if (spec.base.scheme == Scheme::Sm) {
        if (mod == "psk") spec.base.constellation = Constellation::psk(m);
        else if (mod == "qam") spec.base.constellation = Constellation::qam(m);
        else throw std::runtime_error("load_config: modulation must be \"psk\" or \"qam\"");
    }

    spec.gamma_db_start = j.value("gamma_db_start", 0.0);
    spec.gamma_db_stop = j.value("gamma_db_stop", spec.gamma_db_start);
    spec.gamma_db_step = j.value("gamma_db_step", 5.0);
    if (j.contains("k_list")) spec.k_list = j.at("k_list").get<std::vector<double>>();
    spec.zero_snr = j.value("zero_snr", false);
    if (j.contains("metrics")) spec.metrics = j.at("metrics").get<std::vector<std::string>>();
    if (j.contains("methods")) spec.methods = j.at("methods").get<std::vector<std::string>>();
    spec.sim.trials = j.value("trials", std::uint64_t{100000});
    spec.sim.seed = j.value("seed", std::uint64_t{1});
    const std::string cm = j.value("channel_mode", std::string("exact_sum"));
    if (cm == "exact_sum") spec.sim.channel_mode = ChannelMode::ExactSum;
    else if (cm == "clt_gaussian") spec.sim.channel_mode = ChannelMode::CltGaussian;
    else throw std::runtime_error("load_config: channel_mode must be \"exact_sum\" or \"clt_gaussian\"");
    if (j.contains("series")) {
        const auto& s = j.at("series");
        spec.series.ell_max = s.value("ell_max", spec.series.ell_max);
        spec.series.p_max = s.value("p_max", spec.series.p_max);
        spec.series.rel_tol = s.value("rel_tol", spec.series.rel_tol);
        spec.series.alpha_cap = s.value("alpha_cap", spec.series.alpha_cap);
    }
    spec.output_path = j.value("output", spec.output_path);
    spec.threads = j.value("threads", 1);
    return spec;
}

namespace detail {

struct GridPoint {
    double k = 0.0;
    double gamma_av = 0.0;
    bool zero = false;
    double gamma_db = 0.0;
};

inline std::vector<GridPoint> build_grid(const SweepSpec& spec) {
    std::vector<GridPoint> pts;
    if (!spec.k_list.empty()) {
        const double g = spec.zero_snr ? 0.0 : std::pow(10.0, spec.gamma_db_start / 10.0);
        for (double k : spec.k_list)
            pts.push_back({k, g, spec.zero_snr, spec.gamma_db_start});
    } else {
        if (spec.zero_snr) pts.push_back({spec.base.rician_k, 0.0, true, 0.0});
        for (double db = spec.gamma_db_start; db <= spec.gamma_db_stop + 1e-9;
             db += spec.gamma_db_step)
            pts.push_back({spec.base.rician_k, std::pow(10.0, db / 10.0), false, db});
    }
    return pts;
}

inline SnrRegime regime_of(const std::string& method) {
    if (method == "asymptotic_high") return SnrRegime::HighSnr;
    if (method == "asymptotic_low") return SnrRegime::LowSnr;
    return SnrRegime::ZeroSnr;
}

inline void fill_ped_result(ResultRow& row, const PedResult& r) {
    row.value = r.value;
    row.clamped = r.clamped;
}

inline void fill_mc_result(ResultRow& row, const MetricEstimate& e) {
    row.value = e.value;
    row.std_err = e.std_err;
    row.trials = e.trials;
}

// Evaluates one (metric, method) cell for one grid point; SM index metrics
// expand to per-symbol rows plus a constellation average.
inline void eval_cell(const SweepSpec& spec, const SystemConfig& cfg, ResultRow base_row,
                      const std::string& metric, const std::string& method,
                      std::vector<ResultRow>& out) {
    const bool sm = cfg.scheme == Scheme::Sm;
    const bool asym = method.rfind("asymptotic", 0) == 0;

    auto push = [&](ResultRow r) { out.push_back(std::move(r)); };
    auto fail = [&](ResultRow r, const std::string& status, std::optional<double> partial) {
        r.status = status;
        r.value = partial;
        push(std::move(r));
    };
    auto run_guarded = [&](ResultRow r, auto&& fn) {
        try {
            fn(r);
            push(std::move(r));
        } catch (const convergence_error& e) {
            fail(std::move(r), "convergence_error", e.partial());
        } catch (const capacity_error&) {
            fail(std::move(r), "capacity_error", std::nullopt);
        } catch (const std::exception&) {
            fail(std::move(r), "error", std::nullopt);
        }
    };

    if (metric == "ped" || metric == "ppead") {
        const bool pair = metric == "ppead";
        auto eval_one = [&](std::optional<int> sym_idx, ResultRow r) {
            std::optional<std::complex<double>> sym;
            if (sym_idx) sym = cfg.constellation.points[static_cast<std::size_t>(*sym_idx)];
            run_guarded(std::move(r), [&](ResultRow& rr) {
                if (method == "series") {
                    PedResult p;
                    if (!sm) p = pair ? ppead_ssk_series(cfg, spec.series) : ped_ssk_series(cfg, spec.series);
                    else p = pair ? ppead_sm_series(cfg, *sym, spec.series)
                                  : ped_sm_series(cfg, *sym, spec.series);
                    fill_ped_result(rr, p);
                    if (p.method == PedMethod::Oracle) rr.status = "ok"; // envelope fallback
                } else if (method == "oracle") {
                    fill_ped_result(rr, pair ? ppead_oracle(cfg, sym) : ped_oracle(cfg, sym));
                    rr.clamped.reset();
                } else if (method == "mc") {
                    fill_mc_result(rr, simulate_ped(cfg, spec.sim, sym_idx, pair));
                } else if (asym) {
                    const SnrRegime reg = regime_of(method);
                    fill_ped_result(rr, sm ? ped_sm_asymptotic(cfg, *sym, reg, spec.series)
                                           : ped_ssk_asymptotic(cfg, reg, spec.series));
                } else {
                    rr.status = "unsupported";
                }
            });
        };
        if (!sm) {
            eval_one(std::nullopt, base_row);
        } else {
            for (int s = 0; s < cfg.constellation.m; ++s) {
                ResultRow r = base_row;
                r.symbol_index = std::to_string(s);
                eval_one(s, std::move(r));
            }
            // Constellation average: analytic methods average the per-symbol
            // values; MC draws the symbol uniformly inside the simulation.
            ResultRow avg = base_row;
            avg.symbol_index = "avg";
            run_guarded(std::move(avg), [&](ResultRow& rr) {
                if (method == "mc") {
                    fill_mc_result(rr, simulate_ped(cfg, spec.sim, std::nullopt, pair));
                    return;
                }
                double acc = 0.0;
                bool clamped = false;
                for (const auto& v : cfg.constellation.points) {
                    PedResult p;
                    if (method == "series")
                        p = pair ? ppead_sm_series(cfg, v, spec.series)
                                 : ped_sm_series(cfg, v, spec.series);
                    else if (method == "oracle")
                        p = pair ? ppead_oracle(cfg, v) : ped_oracle(cfg, v);
                    else if (asym)
                        p = ped_sm_asymptotic(cfg, v, regime_of(method), spec.series);
                    else {
                        rr.status = "unsupported";
                        return;
                    }
                    acc += p.value;
                    clamped = clamped || p.clamped;
                }
                rr.value = acc / cfg.constellation.m;
                if (method == "series" || asym) rr.clamped = clamped;
            });
        }
        return;
    }

    if (metric == "sep") {
        if (!sm) {
            fail(std::move(base_row), "unsupported", std::nullopt);
            return;
        }
        run_guarded(std::move(base_row), [&](ResultRow& rr) {
            const int m = cfg.constellation.m;
            const bool psk = cfg.constellation.modulation == Modulation::Psk;
            if (method == "quadrature") {
                rr.value = (psk ? sep_mpsk(cfg, m) : sep_mqam(cfg, m)).value;
            } else if (method == "mc") {
                fill_mc_result(rr, simulate_sep(cfg, m, cfg.constellation.modulation, spec.sim));
            } else if (asym) {
                const SnrRegime reg = regime_of(method);
                rr.value = (psk ? sep_mpsk_asymptotic(cfg, m, reg)
                                : sep_mqam_asymptotic(cfg, m, reg)).value;
            } else {
                rr.status = "unsupported";
            }
        });
        return;
    }

    // metric == "ber"
    run_guarded(std::move(base_row), [&](ResultRow& rr) {
        if (method == "mc") {
            fill_mc_result(rr, simulate_ber(cfg, sm ? cfg.constellation.m : cfg.n_rx, spec.sim));
            return;
        }
        // Analytic BER combiners built from the same-method PED (and, for SM,
        // the quadrature SEP).
        auto ped_by_method = [&](std::optional<std::complex<double>> sym) {
            if (method == "series")
                return sm ? ped_sm_series(cfg, *sym, spec.series) : ped_ssk_series(cfg, spec.series);
            if (method == "oracle") return ped_oracle(cfg, sym);
            if (asym)
                return sm ? ped_sm_asymptotic(cfg, *sym, regime_of(method), spec.series)
                          : ped_ssk_asymptotic(cfg, regime_of(method), spec.series);
            throw std::invalid_argument("unsupported");
        };
        if (method != "series" && method != "oracle" && !asym) {
            rr.status = "unsupported";
            return;
        }
        if (!sm) {
            rr.value = ber_union_ssk(cfg, ped_by_method(std::nullopt).value);
        } else {
            double ped_avg = 0.0;
            for (const auto& v : cfg.constellation.points) ped_avg += ped_by_method(v).value;
            ped_avg /= cfg.constellation.m;
            const int m = cfg.constellation.m;
            const bool psk = cfg.constellation.modulation == Modulation::Psk;
            double sep;
            if (asym) {
                const SnrRegime reg = regime_of(method);
                sep = (psk ? sep_mpsk_asymptotic(cfg, m, reg) : sep_mqam_asymptotic(cfg, m, reg)).value;
            } else {
                sep = (psk ? sep_mpsk(cfg, m) : sep_mqam(cfg, m)).value;
            }
            rr.value = ber_sm_approx(cfg, ped_avg, sep);
        }
    });
}

inline std::vector<ResultRow> eval_grid_point(const SweepSpec& spec, const GridPoint& pt) {
    SystemConfig cfg = spec.base;
    cfg.rician_k = pt.k;
    cfg.gamma_av = pt.gamma_av;

    ResultRow base;
    base.scheme = cfg.scheme == Scheme::Sm ? "sm" : "ssk";
    base.n = cfg.n_elements;
    base.n_rx = cfg.n_rx;
    base.k = pt.k;
    base.zero_snr = pt.zero;
    base.gamma_db = pt.gamma_db;
    if (cfg.scheme == Scheme::Sm) base.m = std::to_string(cfg.constellation.m);

    std::vector<ResultRow> rows;
    for (const auto& metric : spec.metrics) {
        for (const auto& method : spec.methods) {
            ResultRow r = base;
            r.metric = metric;
            r.method = method;
            eval_cell(spec, cfg, std::move(r), metric, method, rows);
        }
    }
    return rows;
}

} // namespace detail

/// Full Cartesian evaluation; rows come back in deterministic grid order
/// independent of the number of worker threads.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    const auto violations = validate(spec);
    if (!violations.empty()) {
        std::string msg = "run_sweep: invalid spec:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw std::invalid_argument(msg);
    }
    const auto grid = detail::build_grid(spec);
    std::vector<std::vector<ResultRow>> per_point(grid.size());

    const int workers = std::max(1, std::min<int>(spec.threads, static_cast<int>(grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            per_point[i] = detail::eval_grid_point(spec, grid[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= grid.size()) return;
                    per_point[i] = detail::eval_grid_point(spec, grid[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<ResultRow> rows;
    for (auto& v : per_point)
        for (auto& r : v) rows.push_back(std::move(r));
    return rows;
}

inline const char* csv_header() {
    return "scheme,N,n_rx,k,gamma_db,M,symbol_index,metric,method,value,std_err,trials,clamped,status";
}

inline std::string to_csv_line(const ResultRow& r) {
    std::string line;
    line += r.scheme;
    line += ',';
    line += std::to_string(r.n);
    line += ',';
    line += std::to_string(r.n_rx);
    line += ',';
    line += detail::fmt_double(r.k);
    line += ',';
    line += r.zero_snr ? "-inf" : detail::fmt_double(r.gamma_db);
    line += ',';
    line += r.m;
    line += ',';
    line += r.symbol_index;
    line += ',';
    line += r.metric;
    line += ',';
    line += r.method;
    line += ',';
    if (r.value) line += detail::fmt_double(*r.value);
    line += ',';
    if (r.std_err) line += detail::fmt_double(*r.std_err);
    line += ',';
    if (r.trials) line += std::to_string(*r.trials);
    line += ',';
    if (r.clamped) line += *r.clamped ? "true" : "false";
    line += ',';
    line += r.status;
    return line;
}

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    os << csv_header() << '\n';
    for (const auto& r : rows) os << to_csv_line(r) << '\n';
}

} // namespace risim
