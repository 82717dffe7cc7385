// SPDX-License-Identifier: MIT
/**
 * @file commands.hpp
 * @brief Experiment configuration and the subcommand dispatcher.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"
#include "thetaexp/thetaexp.hpp"

namespace thetaexp::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct ExperimentConfig {
    std::vector<std::int64_t> m{2};
    int n = 3;
    std::optional<double> x;
    std::optional<double> y;
    std::size_t grid = 65;
    std::size_t cells = 4096;
    std::int64_t i_max = 0;  ///< 0: command default
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 42;
    std::vector<double> a;  ///< empty: {0, theta/2, theta}
    std::string format = "csv";
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{
        "digits",     "convergents",   "invariance-check", "pf-contract", "kuzmin-1d",
        "kuzmin-2d",  "error-surface", "sandwich",         "bounds-table",
    };
    return names;
}

namespace detail {

using report::Cell;
using report::RunArtifact;

inline void validate(const ExperimentConfig& c) {
    thetaexp::detail::require(!c.m.empty(), "--m needs at least one value");
    for (auto m : c.m) {
        thetaexp::detail::require(m >= 1, "m must be >= 1, got " + std::to_string(m));
    }
    thetaexp::detail::require(c.n >= 0, "n must be >= 0");
    thetaexp::detail::require(c.grid >= 2, "grid must be >= 2");
    thetaexp::detail::require(c.cells >= 4 && c.cells % 2 == 0, "cells must be even and >= 4");
    thetaexp::detail::require(c.samples >= 1, "samples must be >= 1");
    thetaexp::detail::require(c.format == "csv" || c.format == "json", "format must be csv or json");
    for (auto m : c.m) {
        thetaexp::detail::require(c.i_max == 0 || c.i_max >= m, "i_max must be >= m");
    }
}

/// Command-line reals are printed values: accept up to 1e-6 outside [0, theta] and clamp.
inline double unit_arg(const ThetaParams& p, double v, const char* name) {
    constexpr double kPrinted = 1e-6;
    if (v < -kPrinted || v > p.theta + kPrinted) {
        throw invalid_parameter(std::string(name) + " must lie in [0, theta], got " + std::to_string(v));
    }
    return std::clamp(v, 0.0, p.theta);
}

inline std::vector<double> a_list(const ThetaParams& p, const ExperimentConfig& c) {
    if (c.a.empty()) {
        return {0.0, 0.5 * p.theta, p.theta};
    }
    std::vector<double> out;
    for (double a : c.a) {
        out.push_back(unit_arg(p, a, "a"));
    }
    return out;
}

inline double x_or(const ThetaParams& p, const ExperimentConfig& c, double fallback) {
    return c.x ? unit_arg(p, *c.x, "x") : fallback;
}

inline double y_or(const ThetaParams& p, const ExperimentConfig& c, double fallback) {
    return c.y ? unit_arg(p, *c.y, "y") : fallback;
}

inline RunArtifact digits(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "x", "n", "digits", "terminated"};
    for (auto m : c.m) {
        const auto p = make_params(m);
        const double x = x_or(p, c, 0.5 * p.theta);
        const auto ds = expand_digits(p, x, static_cast<std::size_t>(c.n));
        std::string text;
        for (std::size_t i = 0; i < ds.digits.size(); ++i) {
            text += (i ? "," : "") + std::to_string(ds.digits[i]);
        }
        a.add_row({m, x, std::int64_t{c.n}, text, ds.terminated});
    }
    return a;
}

inline RunArtifact convergents(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "k", "digit", "p", "q", "value", "abs_error", "bound_qq", "bound_geometric"};
    for (auto m : c.m) {
        const auto p = make_params(m);
        const double x = x_or(p, c, 0.5 * p.theta);
        const auto ds = expand_digits(p, x, static_cast<std::size_t>(c.n) + 1);
        if (ds.digits.empty()) {
            continue;
        }
        const auto cv = thetaexp::convergents(p, ds.digits);
        const std::size_t shown = std::min(cv.size(), static_cast<std::size_t>(c.n));
        for (std::size_t k = 0; k < shown; ++k) {
            const double qq = k + 1 < cv.size() ? 1.0 / (cv[k].q * cv[k + 1].q) : 0.0;
            const double geo =
                std::pow(1.0 + p.theta * p.theta, -2.0 * static_cast<double>((k + 1) / 2)) /
                (p.theta * p.theta);
            a.add_row({m, std::int64_t{cv[k].index}, ds.digits[k], cv[k].p, cv[k].q, cv[k].value(),
                       std::abs(x - cv[k].value()), qq, geo});
        }
    }
    return a;
}

inline RunArtifact invariance_check(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "x", "gamma_cdf", "preimage_measure", "abs_diff"};
    double worst = 0.0;
    for (auto m : c.m) {
        const auto p = make_params(m);
        const digit_t i_max = c.i_max ? c.i_max : 10000;
        for (std::size_t k = 0; k < c.grid; ++k) {
            const double x = p.theta * static_cast<double>(k) / static_cast<double>(c.grid - 1);
            // gamma(T^{-1}[0, x]) with the telescoped tail ln(1 + x/((i_max+1) theta)).
            double pre = 0.0;
            for (digit_t i = p.m; i <= i_max; ++i) {
                const double it = static_cast<double>(i) * p.theta;
                pre += gamma_cdf(p, std::min(1.0 / it, p.theta)) - gamma_cdf(p, 1.0 / (it + x));
            }
            pre += std::log1p(x / ((static_cast<double>(i_max) + 1.0) * p.theta)) / p.log_norm;
            const double g = gamma_cdf(p, x);
            worst = std::max(worst, std::abs(pre - g));
            a.add_row({m, x, g, pre, std::abs(pre - g)});
        }
        a.meta["i_max"] = i_max;
    }
    a.meta["max_abs_diff"] = worst;
    return a;
}

inline std::vector<std::pair<std::string, GridFunction>> pf_battery(const ThetaParams& p, std::size_t cells,
                                                                    std::uint64_t seed) {
    const double th = p.theta;
    std::vector<std::pair<std::string, GridFunction>> out;
    out.emplace_back("identity", GridFunction::sample(p, cells, [](double x) { return x; }));
    out.emplace_back("indicator", GridFunction::sample(p, cells, [th](double x) { return x <= 0.5 * th ? 1.0 : 0.0; }));
    out.emplace_back("cosine", GridFunction::sample(p, cells, [th](double x) {
                         return std::cos(4.0 * std::numbers::pi * x / th);
                     }));
    const CounterRng rng(seed);
    std::vector<double> walk(cells + 1);
    double v = 0.0;
    for (std::size_t k = 0; k <= cells; ++k) {
        walk[k] = v;
        v += (rng.uniform(k, 0) - 0.5) / std::sqrt(static_cast<double>(cells));
    }
    out.emplace_back("random_walk", GridFunction(th, std::move(walk)));
    return out;
}

inline RunArtifact pf_contract(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "function", "k", "variation", "sup_deviation", "bound", "drift", "slack", "pass"};
    bool all = true;
    for (auto m : c.m) {
        const auto p = make_params(m);
        const digit_t i_max = c.i_max ? c.i_max : 4096;
        const int steps = std::max(c.n, 1);
        for (const auto& [name, f] : pf_battery(p, c.cells, c.seed)) {
            const auto r = contraction_report(p, f, steps, i_max);
            for (int k = 0; k <= steps; ++k) {
                const double limit = r.bounds[k] * (1.0 + 1e-6) + r.slack;
                const bool ok = r.variations[k] <= limit && r.sup_deviations[k] <= limit;
                a.add_row({m, name, std::int64_t{k}, r.variations[k], r.sup_deviations[k], r.bounds[k],
                           r.drifts[k], r.slack, ok});
            }
            all = all && r.all_pass;
        }
        a.meta["i_max"] = i_max;
    }
    a.meta["cells"] = c.cells;
    a.meta["all_pass"] = all;
    return a;
}

inline RunArtifact kuzmin_1d(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "n", "sup_deviation", "bound", "resolution", "x", "gk1d_at_x", "fn_oracle_at_x",
                 "oracle_bound"};
    for (auto m : c.m) {
        const auto p = make_params(m);
        const int n_max = std::max(c.n, 2);
        const auto d = decay_estimate(p, n_max, c.cells);
        const double x = x_or(p, c, 0.5 * p.theta);
        const double th = p.theta;
        const auto run = thetaexp::kuzmin_1d(p, [th](double u) { return u / th; }, n_max, c.cells);
        ChainOperator op(p);
        for (std::size_t k = 0; k < d.n.size(); ++k) {
            const int n = d.n[k];
            const double bound = p.log_norm * std::pow(static_cast<double>(m + 1), -n);
            const double oracle = JointLaw(op, n, 0.0, p.theta)(x);
            a.add_row({m, std::int64_t{n}, d.deviation[k], bound, d.resolution[k], x, run.F[n](x), oracle,
                       op.error_bound(n)});
        }
        a.meta["fitted_rate_m" + std::to_string(m)] = d.fitted_rate;
    }
    a.meta["cells"] = c.cells;
    return a;
}

inline RunArtifact kuzmin_2d(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "n", "x", "y", "exact", "truncation", "mc", "std_error", "discarded", "limit",
                 "abs_deviation"};
    for (auto m : c.m) {
        const auto p = make_params(m);
        const Rect r{x_or(p, c, 0.5), y_or(p, c, 0.5)};
        const Rect rect = make_rect(p, std::min(r.x_max, p.theta), std::min(r.y_max, p.theta));
        ChainOperator op(p);
        for (int n = 0; n <= c.n; ++n) {
            const double exact = std::clamp(JointLaw(op, n, 0.0, rect.y_max, true)(rect.x_max), 0.0, 1.0);
            const auto mc = fbar_mc(p, n, rect, c.samples, c.seed);
            a.add_row({m, std::int64_t{n}, rect.x_max, rect.y_max, exact, op.error_bound(n), mc.estimate,
                       mc.std_error, static_cast<std::int64_t>(mc.discarded), mc.limit,
                       std::abs(exact - mc.limit)});
        }
    }
    a.meta["samples"] = c.samples;
    a.meta["seed"] = c.seed;
    return a;
}

inline RunArtifact error_surface(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "n", "a", "x", "y", "error"};
    for (auto m : c.m) {
        const auto p = make_params(m);
        const double av = c.a.empty() ? 0.0 : unit_arg(p, c.a.front(), "a");
        const auto s = thetaexp::error_surface(p, av, c.n, c.grid);
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            for (std::size_t j = 0; j < s.ys.size(); ++j) {
                a.add_row({m, std::int64_t{c.n}, av, s.xs[i], s.ys[j], s.values[i][j]});
            }
        }
        const std::string key = "m" + std::to_string(m);
        a.meta[key] = {{"sup_abs", s.sup_abs},
                       {"argmax_x", s.argmax_x},
                       {"argmax_y", s.argmax_y},
                       {"truncation_bound", s.truncation_bound}};
    }
    a.meta["grid"] = c.grid;
    return a;
}

inline RunArtifact sandwich(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "n", "a", "sup_abs", "argmax_x", "argmax_y", "lower", "upper",
                 "truncation_bound", "grid_allowance", "slack", "pass"};
    bool all = true;
    for (auto m : c.m) {
        const auto p = make_params(m);
        const auto r = sandwich_check(p, std::max(c.n, 1), a_list(p, c), c.grid);
        for (const auto& e : r.entries) {
            a.add_row({m, std::int64_t{r.n}, e.a, e.sup_abs, e.argmax_x, e.argmax_y, r.lower, r.upper,
                       r.truncation_bound, r.grid_allowance, r.slack, e.pass});
        }
        all = all && r.pass;
    }
    a.meta["grid"] = c.grid;
    a.meta["all_pass"] = all;
    return a;
}

inline RunArtifact bounds_table(const ExperimentConfig& c) {
    RunArtifact a;
    a.columns = {"m", "theta", "lower_limit", "upper_limit"};
    for (const auto& row : thetaexp::bounds_table(c.m)) {
        a.add_row({row.m, row.theta, row.lower_limit, row.upper_limit});
    }
    return a;
}

inline report::Json config_json(const std::string& command, const ExperimentConfig& c) {
    report::Json j = report::Json::object();
    j["command"] = command;
    j["m"] = c.m;
    j["n"] = c.n;
    j["x"] = c.x ? report::Json(*c.x) : report::Json(nullptr);
    j["y"] = c.y ? report::Json(*c.y) : report::Json(nullptr);
    j["grid"] = c.grid;
    j["cells"] = c.cells;
    j["i_max"] = c.i_max;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["a"] = c.a;
    j["format"] = c.format;
    return j;
}

}  // namespace detail

/// Rough operation count per subcommand; runs above kWorkBudget are refused.
inline constexpr double kWorkBudget = 2e11;

namespace detail {

inline void check_budget(const std::string& command, const ExperimentConfig& c) {
    const double n = std::max(c.n, 1);
    const double cells = static_cast<double>(c.cells);
    const double grid = static_cast<double>(c.grid);
    const double m_max = static_cast<double>(*std::max_element(c.m.begin(), c.m.end()));
    double work = 0.0;
    if (command == "pf-contract") {
        work = 4.0 * n * cells * static_cast<double>(c.i_max ? c.i_max : 4096);
    } else if (command == "kuzmin-1d") {
        work = 2.0 * n * cells * cells * m_max;
    } else if (command == "kuzmin-2d") {
        work = n * n * static_cast<double>(c.samples);
    } else if (command == "error-surface" || command == "sandwich") {
        work = grid * grid * n * n * 32.0 * 40.0 * std::max<double>(c.a.size(), 3.0);
    } else if (command == "invariance-check") {
        work = grid * static_cast<double>(c.i_max ? c.i_max : 10000);
    }
    work *= static_cast<double>(c.m.size());
    if (work > kWorkBudget) {
        throw resource_error(command + ": estimated work " + report::format_real(work) +
                             " exceeds the budget of " + report::format_real(kWorkBudget) + " operations");
    }
}

}  // namespace detail

/// Runs one subcommand; throws invalid_parameter or resource_error on failure.
inline report::RunArtifact run(const std::string& command, const ExperimentConfig& config) {
    detail::validate(config);
    detail::check_budget(command, config);
    report::RunArtifact a;
    if (command == "digits") {
        a = detail::digits(config);
    } else if (command == "convergents") {
        a = detail::convergents(config);
    } else if (command == "invariance-check") {
        a = detail::invariance_check(config);
    } else if (command == "pf-contract") {
        a = detail::pf_contract(config);
    } else if (command == "kuzmin-1d") {
        a = detail::kuzmin_1d(config);
    } else if (command == "kuzmin-2d") {
        a = detail::kuzmin_2d(config);
    } else if (command == "error-surface") {
        a = detail::error_surface(config);
    } else if (command == "sandwich") {
        a = detail::sandwich(config);
    } else if (command == "bounds-table") {
        a = detail::bounds_table(config);
    } else {
        throw invalid_parameter("unknown subcommand '" + command + "'");
    }
    a.config = detail::config_json(command, config);
    report::Json meta = report::Json::object();
    meta["tool"] = "thetaexp";
    meta["version"] = kToolVersion;
    for (auto it = a.meta.begin(); it != a.meta.end(); ++it) {
        meta[it.key()] = it.value();
    }
    a.meta = std::move(meta);
    return a;
}

}  // namespace thetaexp::cli
