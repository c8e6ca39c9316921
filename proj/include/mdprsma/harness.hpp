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

#pragma once

#include "mdprsma/channel.hpp"
#include "mdprsma/geometry.hpp"
#include "mdprsma/schemes.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mdprsma {

// Complete description of a Monte Carlo experiment. Every field maps to one
// key in the flat key=value config format (see config_text for the schema);
// user counts must stay even because the polarization assignment splits each
// group into two equal halves.
struct ScenarioConfig {
    uword nx = 2, ny = 2; // satellite array, nx * ny dual-polarized pairs
    uword nt = 2;         // terrestrial array pairs
    uword ks = 4;
    uword kt = 2;

    double ps_dbw = 22.0;
    double pt_dbw = 13.0;

    double fc_hz = 2e9;
    double bandwidth_hz = 5e6;
    double altitude_m = 530e3;
    double sat_radius_m = 50e3;
    double bs_height_m = 30.0;
    double bs_radius_m = 1e3;
    double kappa_db = 15.0;
    double xpd_los_db = 15.0;
    double xpd_nlos_db = 5.0;
    double xpd_bs_db = 5.0;
    double eta = 4.0;

    uword samples = 50;      // optimization draws per trial
    uword eval_samples = 50; // held-out draws per trial
    double epsilon = 1e-4;
    uword max_outer_iters = 300;
    uword trials = 30;
    std::uint64_t seed = 1;
    InitPolicy init = InitPolicy::MeanChannel;

    std::vector<Scheme> schemes{Scheme::MdpRsma,    Scheme::RsmaPd,  Scheme::Sdma,
                                Scheme::RsmaDualPm, Scheme::SdmaOma, Scheme::RsmaOma};

    // "none", or one of ps_dbw | kappa_db | xpd_db | ks. xpd_db drives the
    // LOS, NLOS and base-station discrimination values together.
    std::string sweep = "none";
    std::vector<double> sweep_values;

    void validate() const;
};

// Named presets: "desk" is the CI-sized default above, "paper" the full-size
// configuration (16 satellite pairs, 8 SUs, 6 BS pairs, 4 CUs, 1000 draws).
ScenarioConfig make_profile(std::string_view name);

// One "key=value" assignment; unknown keys and unparsable values throw.
void apply_setting(ScenarioConfig &cfg, std::string_view key, std::string_view value);

// Reads a config file: one key=value per line, blank lines and #-comments
// ignored. Settings are applied on top of `base`.
ScenarioConfig load_config(std::istream &in, ScenarioConfig base = {});

// Full schema as a loadable config file, one commented line per key.
std::string config_text(const ScenarioConfig &cfg);

// Everything one trial needs: the drawn geometry, the optimization and
// held-out ensembles, and the per-run knobs derived from the config.
struct TrialData {
    ScenarioGeometry scenario;
    ChannelEnsemble opt;
    ChannelEnsemble eval;
    PowerBudgets budgets;
    SchemeConfig scheme_cfg;
};

TrialData make_trial(const ScenarioConfig &cfg, uword trial);

// One (sweep value, scheme, trial) outcome. min_rate grades the optimized
// design on the held-out ensemble; opt_min_rate is the final value of the
// optimizer's own trace. wall_seconds is informational and never emitted,
// keeping file output byte-reproducible.
struct ResultRow {
    std::string sweep = "none";
    double value = 0.0;
    Scheme scheme = Scheme::MdpRsma;
    uword trial = 0;
    double min_rate = 0.0;
    double opt_min_rate = 0.0;
    double mean_rate_spc = 0.0;
    double mean_rate_cpc = 0.0;
    double mean_rate_lpc = 0.0;
    double mean_rate_su_private = 0.0;
    double mean_rate_cu_private = 0.0;
    double spc_power_fraction = 0.0;
    double rescale_shortfall = 0.0;
    uword outer_iters = 0;
    uword solver_iters = 0;
    bool converged = false;
    bool solver_failed = false;
    double wall_seconds = 0.0;
};

// Runs every (sweep value, trial, scheme) combination and returns rows in
// canonical order (sweep value as listed, then scheme, then trial). Trials
// are dispatched to MDPRSMA_THREADS workers (default 1); results do not
// depend on the worker count. Failed runs are flagged, never dropped. When
// both ends of a nesting pair (SDMA < RSMA-PD < MDP-RSMA) are requested and
// the richer scheme lands below the poorer one, the richer run is repeated
// once warm-started from the poorer solution and the better result kept.
std::vector<ResultRow> run_sweep(const ScenarioConfig &cfg);

// CSV with a fixed header; numbers are emitted at full round-trip precision
// so equal tables produce identical bytes. Throws on an empty table.
void write_csv(const std::vector<ResultRow> &rows, std::ostream &out);

// Inverse of write_csv, including the header check.
std::vector<ResultRow> parse_csv(std::istream &in);

// Gnuplot-friendly blocks: one index per scheme, columns are the sweep value,
// the across-trial mean and standard error of min_rate, and the mean of
// opt_min_rate. Throws on an empty table.
void write_gnuplot(const std::vector<ResultRow> &rows, std::ostream &out);

} // namespace mdprsma
