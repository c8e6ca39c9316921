// SPDX-License-Identifier: Apache-2.0
//
// mdprsma - robust max-min precoder design for mixed dual-polarized
// satellite-terrestrial networks
// Copyright (C) 2026 the mdprsma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mdprsma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <istream>
#include <iterator>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace mdprsma {

namespace {

constexpr std::uint64_t kInitSeedLabel = 0x696e6974; // distinct from channel purposes

// Richer schemes contain the poorer ones as zero-power special cases; a final
// value below the poorer scheme's by more than this margin marks a bad local
// point worth one warm-started repeat. Half the documented nesting slack.
constexpr double kNestingMargin = 5e-5;

const char *init_policy_name(InitPolicy p) {
    return p == InitPolicy::MeanChannel ? "mean-channel" : "random-isotropic";
}

InitPolicy init_policy_from_name(std::string_view name) {
    if (name == "mean-channel")
        return InitPolicy::MeanChannel;
    if (name == "random-isotropic")
        return InitPolicy::RandomIsotropic;
    throw std::invalid_argument("unknown init policy: " + std::string(name));
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto pos = text.find(sep);
        parts.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos)
            break;
        text.remove_prefix(pos + 1);
    }
    return parts;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view key, std::string_view value) {
    const std::string v(trim(value));
    char *end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    require(!v.empty() && end == v.c_str() + v.size() && std::isfinite(x),
            "config: bad number for " + std::string(key) + ": " + v);
    return x;
}

std::uint64_t parse_count(std::string_view key, std::string_view value) {
    const std::string v(trim(value));
    char *end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    require(!v.empty() && end == v.c_str() + v.size(),
            "config: bad count for " + std::string(key) + ": " + v);
    return x;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string join_doubles(const std::vector<double> &v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += fmt(v[i]);
    }
    return out;
}

std::string join_schemes(const std::vector<Scheme> &v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += scheme_name(v[i]);
    }
    return out;
}

double mean_or_zero(const vec &v) { return v.n_elem == 0 ? 0.0 : arma::mean(v); }

// A swept copy of the config; "none" passes the base through.
ScenarioConfig with_sweep_value(const ScenarioConfig &base, double v) {
    ScenarioConfig cfg = base;
    if (base.sweep == "ps_dbw") {
        cfg.ps_dbw = v;
    } else if (base.sweep == "kappa_db") {
        cfg.kappa_db = v;
    } else if (base.sweep == "xpd_db") {
        cfg.xpd_los_db = v;
        cfg.xpd_nlos_db = v;
        cfg.xpd_bs_db = v;
    } else if (base.sweep == "ks") {
        require(v >= 0.0 && v == std::floor(v), "sweep: ks values must be whole numbers");
        cfg.ks = static_cast<uword>(v);
    }
    return cfg;
}

uword worker_count() {
    const char *env = std::getenv("MDPRSMA_THREADS");
    if (env == nullptr || *env == '\0')
        return 1;
    const std::uint64_t n = parse_count("MDPRSMA_THREADS", env);
    require(n >= 1 && n <= 256, "MDPRSMA_THREADS must be between 1 and 256");
    return static_cast<uword>(n);
}

} // namespace

void ScenarioConfig::validate() const {
    require(nx >= 1 && ny >= 1, "config: the satellite array needs at least one pair per axis");
    require(nt >= 1, "config: the terrestrial array needs at least one pair");
    require(ks % 2 == 0, "config: ks must be even (equal RHCP/LHCP halves)");
    require(kt % 2 == 0, "config: kt must be even (equal V/H halves)");
    require(ks + kt >= 1, "config: need at least one user");
    require(fc_hz > 0.0 && bandwidth_hz > 0.0, "config: carrier and bandwidth must be positive");
    require(altitude_m > 0.0, "config: altitude must be positive");
    require(sat_radius_m > 0.0 && bs_radius_m > 0.0, "config: radii must be positive");
    require(sat_radius_m > 2.0 * bs_radius_m,
            "config: the coverage disc must fit the terrestrial cell with margin");
    require(bs_height_m > 0.0, "config: base-station height must be positive");
    require(eta >= 2.0, "config: pathloss exponent below free space");
    require(samples >= 1 && eval_samples >= 1, "config: need at least one fading draw");
    require(epsilon > 0.0, "config: epsilon must be positive");
    require(max_outer_iters >= 1, "config: need at least one outer iteration");
    require(trials >= 1, "config: need at least one trial");
    for (size_t i = 0; i < schemes.size(); ++i)
        for (size_t j = i + 1; j < schemes.size(); ++j)
            require(schemes[i] != schemes[j], "config: duplicate scheme in list");
    const bool known = sweep == "none" || sweep == "ps_dbw" || sweep == "kappa_db" ||
                       sweep == "xpd_db" || sweep == "ks";
    require(known, "config: unknown sweep axis: " + sweep);
    if (sweep == "none")
        require(sweep_values.empty(), "config: sweep_values given without a sweep axis");
    else
        require(!sweep_values.empty(), "config: sweep axis given without sweep_values");
    for (double v : sweep_values)
        with_sweep_value(*this, v); // value-specific constraints throw here
}

ScenarioConfig make_profile(std::string_view name) {
    if (name == "desk")
        return {};
    if (name == "paper") {
        ScenarioConfig cfg;
        cfg.nx = 4;
        cfg.ny = 4;
        cfg.nt = 6;
        cfg.ks = 8;
        cfg.kt = 4;
        cfg.samples = 1000;
        cfg.eval_samples = 1000;
        cfg.epsilon = 1e-6;
        return cfg;
    }
    throw std::invalid_argument("unknown profile: " + std::string(name));
}

void apply_setting(ScenarioConfig &cfg, std::string_view key, std::string_view value) {
    const std::string_view k = trim(key);
    const std::string_view v = trim(value);
    if (k == "nx")
        cfg.nx = parse_count(k, v);
    else if (k == "ny")
        cfg.ny = parse_count(k, v);
    else if (k == "nt")
        cfg.nt = parse_count(k, v);
    else if (k == "ks")
        cfg.ks = parse_count(k, v);
    else if (k == "kt")
        cfg.kt = parse_count(k, v);
    else if (k == "ps_dbw")
        cfg.ps_dbw = parse_double(k, v);
    else if (k == "pt_dbw")
        cfg.pt_dbw = parse_double(k, v);
    else if (k == "fc_hz")
        cfg.fc_hz = parse_double(k, v);
    else if (k == "bandwidth_hz")
        cfg.bandwidth_hz = parse_double(k, v);
    else if (k == "altitude_m")
        cfg.altitude_m = parse_double(k, v);
    else if (k == "sat_radius_m")
        cfg.sat_radius_m = parse_double(k, v);
    else if (k == "bs_height_m")
        cfg.bs_height_m = parse_double(k, v);
    else if (k == "bs_radius_m")
        cfg.bs_radius_m = parse_double(k, v);
    else if (k == "kappa_db")
        cfg.kappa_db = parse_double(k, v);
    else if (k == "xpd_los_db")
        cfg.xpd_los_db = parse_double(k, v);
    else if (k == "xpd_nlos_db")
        cfg.xpd_nlos_db = parse_double(k, v);
    else if (k == "xpd_bs_db")
        cfg.xpd_bs_db = parse_double(k, v);
    else if (k == "eta")
        cfg.eta = parse_double(k, v);
    else if (k == "samples")
        cfg.samples = parse_count(k, v);
    else if (k == "eval_samples")
        cfg.eval_samples = parse_count(k, v);
    else if (k == "epsilon")
        cfg.epsilon = parse_double(k, v);
    else if (k == "max_outer_iters")
        cfg.max_outer_iters = parse_count(k, v);
    else if (k == "trials")
        cfg.trials = parse_count(k, v);
    else if (k == "seed")
        cfg.seed = parse_count(k, v);
    else if (k == "init")
        cfg.init = init_policy_from_name(v);
    else if (k == "schemes") {
        cfg.schemes.clear();
        if (!v.empty())
            for (std::string_view part : split(v, ','))
                cfg.schemes.push_back(scheme_from_name(std::string(trim(part))));
    } else if (k == "sweep")
        cfg.sweep = std::string(v);
    else if (k == "sweep_values") {
        cfg.sweep_values.clear();
        if (!v.empty())
            for (std::string_view part : split(v, ','))
                cfg.sweep_values.push_back(parse_double(k, trim(part)));
    } else
        throw std::invalid_argument("config: unknown key: " + std::string(k));
}

ScenarioConfig load_config(std::istream &in, ScenarioConfig base) {
    std::string line;
    uword lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view s = trim(line);
        if (s.empty() || s.front() == '#')
            continue;
        const auto eq = s.find('=');
        require(eq != std::string_view::npos,
                "config line " + std::to_string(lineno) + ": expected key=value");
        apply_setting(base, s.substr(0, eq), s.substr(eq + 1));
    }
    return base;
}

std::string config_text(const ScenarioConfig &cfg) {
    std::ostringstream os;
    os << "# mdprsma scenario configuration\n";
    os << "# satellite array pairs per axis and terrestrial array pairs\n";
    os << "nx=" << cfg.nx << "\nny=" << cfg.ny << "\nnt=" << cfg.nt << "\n";
    os << "# user counts, each split into two equal polarization halves\n";
    os << "ks=" << cfg.ks << "\nkt=" << cfg.kt << "\n";
    os << "# transmit power budgets\n";
    os << "ps_dbw=" << fmt(cfg.ps_dbw) << "\npt_dbw=" << fmt(cfg.pt_dbw) << "\n";
    os << "# carrier, bandwidth and scenario geometry\n";
    os << "fc_hz=" << fmt(cfg.fc_hz) << "\nbandwidth_hz=" << fmt(cfg.bandwidth_hz) << "\n";
    os << "altitude_m=" << fmt(cfg.altitude_m) << "\nsat_radius_m=" << fmt(cfg.sat_radius_m)
       << "\n";
    os << "bs_height_m=" << fmt(cfg.bs_height_m) << "\nbs_radius_m=" << fmt(cfg.bs_radius_m)
       << "\n";
    os << "# fading: Rician factor, discrimination values, terrestrial pathloss\n";
    os << "kappa_db=" << fmt(cfg.kappa_db) << "\n";
    os << "xpd_los_db=" << fmt(cfg.xpd_los_db) << "\nxpd_nlos_db=" << fmt(cfg.xpd_nlos_db)
       << "\nxpd_bs_db=" << fmt(cfg.xpd_bs_db) << "\n";
    os << "eta=" << fmt(cfg.eta) << "\n";
    os << "# sample-average draws (optimization / held-out evaluation)\n";
    os << "samples=" << cfg.samples << "\neval_samples=" << cfg.eval_samples << "\n";
    os << "# outer loop stop rule and caps\n";
    os << "epsilon=" << fmt(cfg.epsilon) << "\nmax_outer_iters=" << cfg.max_outer_iters << "\n";
    os << "# Monte Carlo shape\n";
    os << "trials=" << cfg.trials << "\nseed=" << cfg.seed << "\n";
    os << "# init: mean-channel | random-isotropic\n";
    os << "init=" << init_policy_name(cfg.init) << "\n";
    os << "schemes=" << join_schemes(cfg.schemes) << "\n";
    os << "# sweep: none | ps_dbw | kappa_db | xpd_db | ks\n";
    os << "sweep=" << cfg.sweep << "\n";
    os << "sweep_values=" << join_doubles(cfg.sweep_values) << "\n";
    return os.str();
}

TrialData make_trial(const ScenarioConfig &cfg, uword trial) {
    cfg.validate();
    GeometryParams g;
    g.ks = cfg.ks;
    g.kt = cfg.kt;
    g.altitude_m = cfg.altitude_m;
    g.sat_coverage_radius_m = cfg.sat_radius_m;
    g.bs_height_m = cfg.bs_height_m;
    g.bs_cell_radius_m = cfg.bs_radius_m;
    g.fc_hz = cfg.fc_hz;
    g.bandwidth_hz = cfg.bandwidth_hz;
    g.terrestrial_pathloss_exp = cfg.eta;
    g.kappa_db = cfg.kappa_db;
    g.xpd_los_db = cfg.xpd_los_db;
    g.xpd_nlos_db = cfg.xpd_nlos_db;
    g.xpd_bs_db = cfg.xpd_bs_db;

    TrialData t;
    t.scenario = draw_scenario(g, cfg.seed, trial);
    const ArrayConfig arr{cfg.nx, cfg.ny};
    t.opt = build_ensemble(t.scenario, arr, cfg.nt, cfg.samples, cfg.seed, trial, 0);
    t.eval = build_ensemble(t.scenario, arr, cfg.nt, cfg.eval_samples, cfg.seed, trial, 1);
    t.budgets.sat = std::pow(10.0, cfg.ps_dbw / 10.0);
    t.budgets.terr = std::pow(10.0, cfg.pt_dbw / 10.0);
    t.scheme_cfg.max_outer_iters = cfg.max_outer_iters;
    t.scheme_cfg.epsilon = cfg.epsilon;
    t.scheme_cfg.init = cfg.init;
    t.scheme_cfg.init_seed = RngStream::derive(cfg.seed, {kInitSeedLabel, trial});
    return t;
}

namespace {

ResultRow make_row(const std::string &sweep, double value, uword trial, const RunTrace &run,
                   const EvalReport &rep) {
    ResultRow row;
    row.sweep = sweep;
    row.value = value;
    row.scheme = run.scheme;
    row.trial = trial;
    row.min_rate = rep.rates.min_rate;
    row.opt_min_rate = run.final_r_min();
    row.mean_rate_spc = mean_or_zero(rep.c_spc);
    row.mean_rate_cpc = mean_or_zero(rep.c_cpc);
    row.mean_rate_lpc = mean_or_zero(rep.c_lpc);
    row.mean_rate_su_private = mean_or_zero(rep.rates.layers.su_p);
    row.mean_rate_cu_private = mean_or_zero(rep.rates.layers.cu_p);
    row.spc_power_fraction = run.sol.spc_power_fraction();
    row.rescale_shortfall = rep.rescale_shortfall;
    row.outer_iters = run.outer_iters;
    row.solver_iters = run.solver_iters;
    row.converged = run.converged;
    row.solver_failed = run.solver_failed;
    row.wall_seconds = run.wall_seconds;
    return row;
}

// All schemes of one (sweep value, trial) cell, in canonical scheme order.
std::vector<ResultRow> run_cell(const ScenarioConfig &swept, const std::string &axis,
                                double value, uword trial,
                                const std::vector<Scheme> &ordered) {
    const TrialData data = make_trial(swept, trial);
    std::vector<RunTrace> runs;
    runs.reserve(ordered.size());
    for (Scheme s : ordered)
        runs.push_back(optimize_scheme(s, data.opt, data.budgets, data.scheme_cfg));

    // One warm-started repeat when a nested pair came out inverted.
    const Scheme chain[] = {Scheme::Sdma, Scheme::RsmaPd, Scheme::MdpRsma};
    auto find = [&](Scheme s) -> RunTrace * {
        for (size_t i = 0; i < ordered.size(); ++i)
            if (ordered[i] == s)
                return &runs[i];
        return nullptr;
    };
    for (size_t i = 0; i + 1 < std::size(chain); ++i) {
        RunTrace *poorer = find(chain[i]);
        RunTrace *richer = find(chain[i + 1]);
        if (poorer == nullptr || richer == nullptr)
            continue;
        if (richer->final_r_min() >= poorer->final_r_min() - kNestingMargin)
            continue;
        RunTrace again = optimize_scheme(richer->scheme, data.opt, data.budgets,
                                         data.scheme_cfg, &poorer->sol);
        if (again.final_r_min() > richer->final_r_min())
            *richer = std::move(again);
    }

    std::vector<ResultRow> rows;
    rows.reserve(ordered.size());
    for (const RunTrace &run : runs)
        rows.push_back(
            make_row(axis, value, trial, run, evaluate_run(run, data.eval, data.scheme_cfg)));
    return rows;
}

} // namespace

std::vector<ResultRow> run_sweep(const ScenarioConfig &cfg) {
    cfg.validate();

    std::vector<double> values = cfg.sweep_values;
    std::sort(values.begin(), values.end());
    if (cfg.sweep == "none")
        values.push_back(0.0);

    std::vector<Scheme> ordered = cfg.schemes;
    std::sort(ordered.begin(), ordered.end(),
              [](Scheme a, Scheme b) { return static_cast<int>(a) < static_cast<int>(b); });

    const uword cells = values.size() * cfg.trials;
    std::vector<std::vector<ResultRow>> cell_rows(cells);

    std::atomic<uword> next{0};
    std::exception_ptr first_error;
    std::mutex error_mtx;
    auto work = [&]() {
        for (uword i = next.fetch_add(1); i < cells; i = next.fetch_add(1)) {
            const uword vi = i / cfg.trials;
            const uword trial = i % cfg.trials;
            try {
                const ScenarioConfig swept = with_sweep_value(cfg, values[vi]);
                cell_rows[i] = run_cell(swept, cfg.sweep, values[vi], trial, ordered);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    const uword workers = std::min<uword>(worker_count(), std::max<uword>(cells, 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (uword i = 0; i < workers; ++i)
            pool.emplace_back(work);
        for (std::thread &t : pool)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    // Canonical order: sweep value ascending, then scheme, then trial.
    std::vector<ResultRow> rows;
    rows.reserve(cells * ordered.size());
    for (uword vi = 0; vi < values.size(); ++vi)
        for (size_t si = 0; si < ordered.size(); ++si)
            for (uword t = 0; t < cfg.trials; ++t)
                rows.push_back(std::move(cell_rows[vi * cfg.trials + t][si]));
    return rows;
}

namespace {

const char *kCsvHeader =
    "sweep,value,scheme,trial,min_rate,opt_min_rate,mean_rate_spc,mean_rate_cpc,"
    "mean_rate_lpc,mean_rate_su_private,mean_rate_cu_private,spc_power_fraction,"
    "rescale_shortfall,outer_iters,solver_iters,converged,solver_failed";

} // namespace

void write_csv(const std::vector<ResultRow> &rows, std::ostream &out) {
    require(!rows.empty(), "write_csv: empty result table");
    out << kCsvHeader << "\n";
    for (const ResultRow &r : rows) {
        out << r.sweep << ',' << fmt(r.value) << ',' << scheme_name(r.scheme) << ',' << r.trial
            << ',' << fmt(r.min_rate) << ',' << fmt(r.opt_min_rate) << ','
            << fmt(r.mean_rate_spc) << ',' << fmt(r.mean_rate_cpc) << ',' << fmt(r.mean_rate_lpc)
            << ',' << fmt(r.mean_rate_su_private) << ',' << fmt(r.mean_rate_cu_private) << ','
            << fmt(r.spc_power_fraction) << ',' << fmt(r.rescale_shortfall) << ','
            << r.outer_iters << ',' << r.solver_iters << ',' << int(r.converged) << ','
            << int(r.solver_failed) << "\n";
    }
}

std::vector<ResultRow> parse_csv(std::istream &in) {
    std::string line;
    require(bool(std::getline(in, line)), "parse_csv: empty input");
    require(trim(line) == kCsvHeader, "parse_csv: unexpected header");
    std::vector<ResultRow> rows;
    uword lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto f = split(trim(line), ',');
        require(f.size() == 17, "parse_csv: wrong field count on line " + std::to_string(lineno));
        ResultRow r;
        r.sweep = std::string(f[0]);
        r.value = parse_double("value", f[1]);
        r.scheme = scheme_from_name(std::string(f[2]));
        r.trial = parse_count("trial", f[3]);
        r.min_rate = parse_double("min_rate", f[4]);
        r.opt_min_rate = parse_double("opt_min_rate", f[5]);
        r.mean_rate_spc = parse_double("mean_rate_spc", f[6]);
        r.mean_rate_cpc = parse_double("mean_rate_cpc", f[7]);
        r.mean_rate_lpc = parse_double("mean_rate_lpc", f[8]);
        r.mean_rate_su_private = parse_double("mean_rate_su_private", f[9]);
        r.mean_rate_cu_private = parse_double("mean_rate_cu_private", f[10]);
        r.spc_power_fraction = parse_double("spc_power_fraction", f[11]);
        r.rescale_shortfall = parse_double("rescale_shortfall", f[12]);
        r.outer_iters = parse_count("outer_iters", f[13]);
        r.solver_iters = parse_count("solver_iters", f[14]);
        r.converged = parse_count("converged", f[15]) != 0;
        r.solver_failed = parse_count("solver_failed", f[16]) != 0;
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_gnuplot(const std::vector<ResultRow> &rows, std::ostream &out) {
    require(!rows.empty(), "write_gnuplot: empty result table");
    out << "# mdprsma sweep results\n";
    out << "# sweep axis: " << rows.front().sweep << "\n";
    out << "# columns: value mean_min_rate stderr_min_rate mean_opt_min_rate\n";

    std::vector<Scheme> order;
    for (const ResultRow &r : rows)
        if (std::find(order.begin(), order.end(), r.scheme) == order.end())
            order.push_back(r.scheme);

    bool first_block = true;
    for (Scheme s : order) {
        if (!first_block)
            out << "\n\n";
        first_block = false;
        out << "# scheme: " << scheme_name(s) << "\n";
        std::map<double, std::vector<const ResultRow *>> by_value;
        for (const ResultRow &r : rows)
            if (r.scheme == s)
                by_value[r.value].push_back(&r);
        for (const auto &[value, group] : by_value) {
            double m = 0.0, m_opt = 0.0;
            for (const ResultRow *r : group) {
                m += r->min_rate;
                m_opt += r->opt_min_rate;
            }
            m /= double(group.size());
            m_opt /= double(group.size());
            double var = 0.0;
            for (const ResultRow *r : group)
                var += (r->min_rate - m) * (r->min_rate - m);
            const double se =
                group.size() > 1 ? std::sqrt(var / double(group.size() - 1) / double(group.size()))
                                 : 0.0;
            out << fmt(value) << ' ' << fmt(m) << ' ' << fmt(se) << ' ' << fmt(m_opt) << "\n";
        }
    }
}

} // namespace mdprsma
