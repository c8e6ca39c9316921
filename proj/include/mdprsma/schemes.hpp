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

#include "mdprsma/conic_solver.hpp"
#include "mdprsma/subproblem.hpp"

#include <cstdint>
#include <string_view>

namespace mdprsma {

// The compared transmission strategies. The first four share one spectrum
// between both networks and differ only in which common layers exist and how
// receivers peel them; the two orthogonal-access baselines run each network
// alone on half of the resource.
enum class Scheme {
    MdpRsma,    // super-common + per-network common + private, full SIC ladder
    RsmaPd,     // per-network common + private, no super-common layer
    Sdma,       // private streams only
    RsmaDualPm, // common/private layers on fixed polarization ports, no SIC
    SdmaOma,    // private-only halves on orthogonal resources
    RsmaOma,    // per-network RSMA halves on orthogonal resources
};

// Stable lowercase identifiers, used in configs and result tables.
const char *scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

bool scheme_is_orthogonal(Scheme s);

// How the first iterate is built. MeanChannel points every precoder along a
// sample-mean (or principal) channel direction; RandomIsotropic draws unit
// directions from init_seed, which probes how sensitive a run is to its start.
enum class InitPolicy { MeanChannel, RandomIsotropic };

struct PowerBudgets {
    double sat = 0.0;
    double terr = 0.0;
};

struct SchemeConfig {
    uword max_outer_iters = 300;
    double epsilon = 1e-6; // stop once one outer step gains at most this much
    InitPolicy init = InitPolicy::MeanChannel;
    std::uint64_t init_seed = 0;
    double sigma2 = 1.0;
    SolveOptions solver;
};

// One alternating-optimization run. r_min logs the exact sample-average
// min-rate of the accepted iterate, entry 0 being the starting point; a
// candidate that fails to improve it is discarded, so the log never decreases.
struct RunTrace {
    Scheme scheme = Scheme::MdpRsma;
    vec r_min;
    PrecoderSolution sol;
    bool converged = false;     // stop rule fired before the iteration cap
    bool solver_failed = false; // an inner solve failed twice; sol is the last good iterate
    uword outer_iters = 0;
    uword solver_iters = 0; // interior-point iterations summed over all solves
    double wall_seconds = 0.0;

    double final_r_min() const { return r_min.n_elem ? r_min(r_min.n_elem - 1) : 0.0; }
};

// Message topology a scheme optimizes over. The orthogonal-access schemes
// reuse their shared-spectrum counterpart's topology on each half; layers
// without listeners vanish on their own.
StreamTopology scheme_topology(Scheme s, uword n_sat, uword n_bs);

// A feasible starting bank: unit directions per the policy, budget split over
// the active layers (satellite private/common/super-common 0.6/0.25/0.15 and
// terrestrial 0.75/0.25, renormalized when layers are off), equal shares
// within a layer. Networks without users stay silent.
PrecoderSolution initial_solution(const ChannelEnsemble &ens, const StreamTopology &topo,
                                  PowerBudgets budgets, InitPolicy policy, std::uint64_t seed);

// Alternate averaged-coefficient updates with conic precoder solves until the
// min-rate gain drops to cfg.epsilon or the iteration cap. A failed solve is
// retried once with a heavier static regularization; a second failure stops
// the run with solver_failed set. `warm` overrides the initial bank.
RunTrace optimize_with_topology(const ChannelEnsemble &ens, const StreamTopology &topo,
                                PowerBudgets budgets, const SchemeConfig &cfg,
                                const PrecoderSolution *warm = nullptr);

// Runs one scheme end to end. Orthogonal-access schemes optimize each network
// separately on its own sub-ensemble with the full own budget, then report
// half of the worse network's rate; their combined trace pads the shorter
// half with its final value. Warm starts apply to shared-spectrum schemes.
RunTrace optimize_scheme(Scheme s, const ChannelEnsemble &ens, PowerBudgets budgets,
                         const SchemeConfig &cfg, const PrecoderSolution *warm = nullptr);

// Spec'd entry points per strategy.
RunTrace optimize_mdp_rsma(const ChannelEnsemble &ens, PowerBudgets budgets,
                           const SchemeConfig &cfg);
RunTrace optimize_rsma_pd_istn(const ChannelEnsemble &ens, PowerBudgets budgets,
                               const SchemeConfig &cfg);
RunTrace optimize_sdma_istn(const ChannelEnsemble &ens, PowerBudgets budgets,
                            const SchemeConfig &cfg);
RunTrace optimize_rsma_dual_pm_istn(const ChannelEnsemble &ens, PowerBudgets budgets,
                                    const SchemeConfig &cfg);
// `s` picks the orthogonal variant: SdmaOma or RsmaOma.
RunTrace optimize_oma(Scheme s, const ChannelEnsemble &ens, PowerBudgets budgets,
                      const SchemeConfig &cfg);

// Held-out performance of a finished run. Rates are recomputed on the
// evaluation ensemble; when a common-rate pool caps below the portions the
// optimizer stored, the portions are scaled down to fit and the worst
// pre-rescale overdraw is reported alongside.
struct EvalReport {
    RateReport rates;
    // Common-rate portions as applied on the evaluation ensemble, after any
    // rescale (and halving for the orthogonal-access schemes).
    vec c_spc, c_cpc, c_lpc;
    double rescale_shortfall = 0.0;
};

EvalReport evaluate_run(const RunTrace &run, const ChannelEnsemble &eval_ens,
                        const SchemeConfig &cfg);

} // namespace mdprsma
