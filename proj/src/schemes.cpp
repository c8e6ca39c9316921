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

#include "mdprsma/schemes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace mdprsma {

const char *scheme_name(Scheme s) {
    switch (s) {
    case Scheme::MdpRsma:
        return "mdp-rsma";
    case Scheme::RsmaPd:
        return "rsma-pd";
    case Scheme::Sdma:
        return "sdma";
    case Scheme::RsmaDualPm:
        return "rsma-dual-pm";
    case Scheme::SdmaOma:
        return "sdma-oma";
    case Scheme::RsmaOma:
        return "rsma-oma";
    }
    return "?";
}

Scheme scheme_from_name(std::string_view name) {
    for (Scheme s : {Scheme::MdpRsma, Scheme::RsmaPd, Scheme::Sdma, Scheme::RsmaDualPm,
                     Scheme::SdmaOma, Scheme::RsmaOma})
        if (name == scheme_name(s))
            return s;
    throw std::invalid_argument("unknown scheme: " + std::string(name));
}

bool scheme_is_orthogonal(Scheme s) {
    return s == Scheme::SdmaOma || s == Scheme::RsmaOma;
}

StreamTopology scheme_topology(Scheme s, uword n_sat, uword n_bs) {
    switch (s) {
    case Scheme::MdpRsma:
        return StreamTopology::full_rsma();
    case Scheme::RsmaPd:
    case Scheme::RsmaOma:
        return StreamTopology::per_network_rsma();
    case Scheme::Sdma:
    case Scheme::SdmaOma:
        return StreamTopology::private_only();
    case Scheme::RsmaDualPm:
        return StreamTopology::fixed_polarization(n_sat, n_bs);
    }
    throw std::invalid_argument("unknown scheme id");
}

namespace {

// Unit direction inside the allowed span; the span's first basis vector when
// the seed vector has no component there.
cx_vec unit_direction(const cx_vec &seed, const cx_mat &basis) {
    cx_vec d = basis.n_elem ? cx_vec(basis * (basis.t() * seed)) : seed;
    const double n = arma::norm(d);
    if (n > 1e-14 * (1.0 + arma::norm(seed)))
        return d / n;
    if (basis.n_elem)
        return basis.col(0);
    cx_vec e(seed.n_elem, arma::fill::zeros);
    e(0) = 1.0;
    return e;
}

// Dominant left singular direction of a column stack, confined to the span.
cx_vec principal_direction(const cx_mat &stack, const cx_mat &basis) {
    cx_mat m = basis.n_elem ? cx_mat(basis * (basis.t() * stack)) : stack;
    if (m.n_elem == 0 || arma::norm(m, "fro") <= 1e-14)
        return unit_direction(cx_vec(stack.n_rows ? stack.col(0) : cx_vec(1)), basis);
    cx_mat u, v;
    vec sv;
    arma::svd_econ(u, sv, v, m, "left");
    return u.col(0);
}

cx_vec random_direction(uword dim, const cx_mat &basis, RngStream rng) {
    cx_vec seed(dim);
    for (uword i = 0; i < dim; ++i)
        seed(i) = rng.cnormal();
    return unit_direction(seed, basis);
}

// Sets the stored portions to the max-min split at the current precoders and
// returns the exact sample-average min-rate they achieve.
double allocate_portions(const ChannelEnsemble &ens, PrecoderSolution &sol,
                         const StreamTopology &topo, double sigma2) {
    const LayerRates rates = ergodic_rates(ens, sol, topo, sigma2);
    const AllocationResult alloc = best_allocation(rates, topo);
    sol.c_spc = alloc.c_spc;
    sol.c_cpc = alloc.c_cpc;
    sol.c_lpc = alloc.c_lpc;
    return alloc.min_rate;
}

// Scales common portions down to the pool caps this ensemble supports and
// reports the worst overdraw that had to be absorbed.
double rescale_portions(const ChannelEnsemble &ens, PrecoderSolution &sol,
                        const StreamTopology &topo, double sigma2) {
    const LayerRates rates = ergodic_rates(ens, sol, topo, sigma2);
    double worst = 0.0;
    auto fit = [&worst](vec &portions, double cap) {
        const double total = arma::accu(portions);
        if (total > cap) {
            worst = std::max(worst, total - cap);
            portions *= (total > 0.0 ? std::max(cap, 0.0) / total : 0.0);
        }
    };
    fit(sol.c_spc, cap_spc(rates, topo));
    fit(sol.c_cpc, cap_cpc(rates, topo));
    fit(sol.c_lpc, cap_lpc(rates, topo));
    return worst;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

PrecoderSolution initial_solution(const ChannelEnsemble &ens, const StreamTopology &topo,
                                  PowerBudgets budgets, InitPolicy policy, std::uint64_t seed) {
    ens.validate();
    require(budgets.sat >= 0.0 && budgets.terr >= 0.0, "initial_solution: negative budget");
    const uword ks = ens.ks(), kt = ens.kt();
    PrecoderSolution sol = PrecoderSolution::zeros(ens.n_sat, ens.n_bs, ks, kt);
    const bool random = policy == InitPolicy::RandomIsotropic;

    if (ks > 0 && budgets.sat > 0.0) {
        double w_priv = 0.6;
        double w_cpc = topo.sat_common ? 0.25 : 0.0;
        double w_spc = topo.super_common ? 0.15 : 0.0;
        const double total = w_priv + w_cpc + w_spc;
        w_priv /= total;
        w_cpc /= total;
        w_spc /= total;

        cx_mat su_means(2 * ens.n_sat, ks);
        for (uword k = 0; k < ks; ++k)
            su_means.col(k) = ens.mean_f(k);

        for (uword k = 0; k < ks; ++k) {
            const cx_vec dir = random
                                   ? random_direction(2 * ens.n_sat, topo.sat_private_basis,
                                                      RngStream::child(seed, {1, k}))
                                   : unit_direction(su_means.col(k), topo.sat_private_basis);
            sol.w.col(2 + k) = std::sqrt(w_priv * budgets.sat / double(ks)) * dir;
        }
        if (w_cpc > 0.0) {
            const cx_vec dir = random ? random_direction(2 * ens.n_sat, topo.sat_common_basis,
                                                         RngStream::child(seed, {2, 0}))
                                      : principal_direction(su_means, topo.sat_common_basis);
            sol.w.col(1) = std::sqrt(w_cpc * budgets.sat) * dir;
        }
        if (w_spc > 0.0) {
            // Every receiver in both networks decodes this layer, so its
            // direction blends the satellite links of both user groups.
            cx_mat all_means(2 * ens.n_sat, ks + kt);
            all_means.head_cols(ks) = su_means;
            for (uword k = 0; k < kt; ++k)
                all_means.col(ks + k) = arma::mean(ens.z_cu(k), 1);
            const cx_vec dir = random ? random_direction(2 * ens.n_sat, topo.sat_common_basis,
                                                         RngStream::child(seed, {3, 0}))
                                      : principal_direction(all_means, topo.sat_common_basis);
            sol.w.col(0) = std::sqrt(w_spc * budgets.sat) * dir;
        }
    }

    if (kt > 0 && budgets.terr > 0.0) {
        double p_priv = 0.75;
        double p_lpc = topo.terr_common ? 0.25 : 0.0;
        const double total = p_priv + p_lpc;
        p_priv /= total;
        p_lpc /= total;

        for (uword k = 0; k < kt; ++k) {
            const cx_vec dir = random
                                   ? random_direction(2 * ens.n_bs, topo.terr_private_basis,
                                                      RngStream::child(seed, {4, k}))
                                   : unit_direction(ens.h_cu.col(k), topo.terr_private_basis);
            sol.p.col(1 + k) = std::sqrt(p_priv * budgets.terr / double(kt)) * dir;
        }
        if (p_lpc > 0.0) {
            const cx_vec dir = random ? random_direction(2 * ens.n_bs, topo.terr_common_basis,
                                                         RngStream::child(seed, {5, 0}))
                                      : principal_direction(ens.h_cu, topo.terr_common_basis);
            sol.p.col(0) = std::sqrt(p_lpc * budgets.terr) * dir;
        }
    }

    return sol;
}

RunTrace optimize_with_topology(const ChannelEnsemble &ens, const StreamTopology &topo,
                                PowerBudgets budgets, const SchemeConfig &cfg,
                                const PrecoderSolution *warm) {
    const auto t0 = std::chrono::steady_clock::now();
    ens.validate();
    require(cfg.epsilon > 0.0, "optimize: epsilon must be positive");
    require(cfg.max_outer_iters >= 1, "optimize: need at least one outer iteration");
    require(cfg.sigma2 > 0.0, "optimize: noise power must be positive");
    require(budgets.sat >= 0.0 && budgets.terr >= 0.0, "optimize: negative budget");

    const SubproblemDims dims{ens.n_sat, ens.n_bs, ens.ks(), ens.kt()};

    RunTrace out;
    out.sol = warm ? *warm
                   : initial_solution(ens, topo, budgets, cfg.init, cfg.init_seed);
    out.sol.validate(dims.n_sat, dims.n_bs, dims.ks, dims.kt);

    if (dims.ks + dims.kt == 0) {
        out.r_min = vec{0.0};
        out.converged = true;
        out.wall_seconds = seconds_since(t0);
        return out;
    }

    double best = allocate_portions(ens, out.sol, topo, cfg.sigma2);
    std::vector<double> trace{best};

    for (uword n = 0; n < cfg.max_outer_iters; ++n) {
        const WmmseCoefficients co = step1_coefficients(ens, out.sol, topo, cfg.sigma2);
        const Subproblem sp =
            build_subproblem(co, topo, dims, budgets.sat, budgets.terr, cfg.sigma2);
        SolveResult res = solve(sp.program, cfg.solver);
        out.solver_iters += res.iterations;
        if (res.status != SolveStatus::Optimal) {
            // Retry with stronger regularization at the accuracy the dense
            // normal equations can actually certify; the candidate is still
            // screened by the exact rate comparison below.
            SolveOptions retry = cfg.solver;
            retry.static_reg = std::max(1e-8, 100.0 * cfg.solver.static_reg);
            retry.feas_tol = std::max(retry.feas_tol, 1e-7);
            retry.gap_tol = std::max(retry.gap_tol, 1e-7);
            res = solve(sp.program, retry);
            out.solver_iters += res.iterations;
        }
        if (res.status != SolveStatus::Optimal) {
            out.solver_failed = true;
            break;
        }

        PrecoderSolution cand = extract_solution(sp.layout, topo, dims, res.x);
        const double gained = allocate_portions(ens, cand, topo, cfg.sigma2);
        // The previous iterate is feasible for its own subproblem, so a
        // non-improving candidate can only be solver slack; keep the best.
        if (gained >= best) {
            best = gained;
            out.sol = std::move(cand);
        }
        trace.push_back(best);
        out.outer_iters = n + 1;
        if (trace[trace.size() - 1] - trace[trace.size() - 2] <= cfg.epsilon) {
            out.converged = true;
            break;
        }
    }

    out.r_min = vec(trace);
    out.wall_seconds = seconds_since(t0);
    return out;
}

namespace {

// Time sharing between the networks: run each alone on its own sub-ensemble
// and full budget, then report half of the worse network's rate. Traces are
// padded with their final value so the combined log stays per-iteration.
RunTrace combine_orthogonal(Scheme s, RunTrace sat, RunTrace terr, const ChannelEnsemble &ens) {
    RunTrace out;
    out.scheme = s;
    const bool have_sat = ens.ks() > 0;
    const bool have_terr = ens.kt() > 0;

    const uword len = std::max<uword>(
        1, std::max(have_sat ? sat.r_min.n_elem : 0, have_terr ? terr.r_min.n_elem : 0));
    vec combined(len, arma::fill::zeros);
    auto padded = [](const RunTrace &r, uword i) {
        return r.r_min(std::min(i, r.r_min.n_elem - 1));
    };
    for (uword i = 0; i < len; ++i) {
        double worst = arma::datum::inf;
        if (have_sat)
            worst = std::min(worst, padded(sat, i));
        if (have_terr)
            worst = std::min(worst, padded(terr, i));
        combined(i) = std::isfinite(worst) ? 0.5 * worst : 0.0;
    }
    out.r_min = combined;

    out.sol = PrecoderSolution::zeros(ens.n_sat, ens.n_bs, ens.ks(), ens.kt());
    if (have_sat) {
        out.sol.w = sat.sol.w;
        out.sol.c_spc = sat.sol.c_spc;
        out.sol.c_cpc = sat.sol.c_cpc;
    }
    if (have_terr) {
        out.sol.p = terr.sol.p;
        out.sol.c_lpc = terr.sol.c_lpc;
    }

    out.converged = (!have_sat || sat.converged) && (!have_terr || terr.converged);
    out.solver_failed = sat.solver_failed || terr.solver_failed;
    out.outer_iters = std::max(sat.outer_iters, terr.outer_iters);
    out.solver_iters = sat.solver_iters + terr.solver_iters;
    out.wall_seconds = sat.wall_seconds + terr.wall_seconds;
    return out;
}

} // namespace

RunTrace optimize_scheme(Scheme s, const ChannelEnsemble &ens, PowerBudgets budgets,
                         const SchemeConfig &cfg, const PrecoderSolution *warm) {
    const StreamTopology topo = scheme_topology(s, ens.n_sat, ens.n_bs);
    if (!scheme_is_orthogonal(s)) {
        RunTrace out = optimize_with_topology(ens, topo, budgets, cfg, warm);
        out.scheme = s;
        return out;
    }
    require(warm == nullptr, "optimize_scheme: warm starts do not split across halves");

    RunTrace sat, terr;
    if (ens.ks() > 0)
        sat = optimize_with_topology(ens.satellite_only(), topo, {budgets.sat, 0.0}, cfg);
    if (ens.kt() > 0)
        terr = optimize_with_topology(ens.terrestrial_only(), topo, {0.0, budgets.terr}, cfg);
    return combine_orthogonal(s, std::move(sat), std::move(terr), ens);
}

RunTrace optimize_mdp_rsma(const ChannelEnsemble &ens, PowerBudgets budgets,
                           const SchemeConfig &cfg) {
    return optimize_scheme(Scheme::MdpRsma, ens, budgets, cfg);
}

RunTrace optimize_rsma_pd_istn(const ChannelEnsemble &ens, PowerBudgets budgets,
                               const SchemeConfig &cfg) {
    return optimize_scheme(Scheme::RsmaPd, ens, budgets, cfg);
}

RunTrace optimize_sdma_istn(const ChannelEnsemble &ens, PowerBudgets budgets,
                            const SchemeConfig &cfg) {
    return optimize_scheme(Scheme::Sdma, ens, budgets, cfg);
}

RunTrace optimize_rsma_dual_pm_istn(const ChannelEnsemble &ens, PowerBudgets budgets,
                                    const SchemeConfig &cfg) {
    return optimize_scheme(Scheme::RsmaDualPm, ens, budgets, cfg);
}

RunTrace optimize_oma(Scheme s, const ChannelEnsemble &ens, PowerBudgets budgets,
                      const SchemeConfig &cfg) {
    require(scheme_is_orthogonal(s), "optimize_oma: expected an orthogonal-access scheme");
    return optimize_scheme(s, ens, budgets, cfg);
}

EvalReport evaluate_run(const RunTrace &run, const ChannelEnsemble &eval_ens,
                        const SchemeConfig &cfg) {
    eval_ens.validate();
    const StreamTopology topo = scheme_topology(run.scheme, eval_ens.n_sat, eval_ens.n_bs);

    EvalReport rep;
    if (!scheme_is_orthogonal(run.scheme)) {
        PrecoderSolution sol = run.sol;
        rep.rescale_shortfall = rescale_portions(eval_ens, sol, topo, cfg.sigma2);
        rep.rates = evaluate_rates(eval_ens, sol, topo, cfg.sigma2);
        rep.c_spc = sol.c_spc;
        rep.c_cpc = sol.c_cpc;
        rep.c_lpc = sol.c_lpc;
        return rep;
    }

    // Each network is graded alone on its own held-out half, then every rate
    // is halved for the time share it actually gets.
    const uword ks = eval_ens.ks(), kt = eval_ens.kt();
    double worst = arma::datum::inf;
    if (ks > 0) {
        const ChannelEnsemble half = eval_ens.satellite_only();
        PrecoderSolution sol = PrecoderSolution::zeros(eval_ens.n_sat, eval_ens.n_bs, ks, 0);
        sol.w = run.sol.w;
        sol.c_spc = run.sol.c_spc;
        sol.c_cpc = run.sol.c_cpc;
        rep.rescale_shortfall =
            std::max(rep.rescale_shortfall, rescale_portions(half, sol, topo, cfg.sigma2));
        const RateReport r = evaluate_rates(half, sol, topo, cfg.sigma2);
        rep.c_spc = 0.5 * sol.c_spc;
        rep.c_cpc = 0.5 * sol.c_cpc;
        rep.rates.cap_spc = 0.5 * r.cap_spc;
        rep.rates.cap_cpc = 0.5 * r.cap_cpc;
        rep.rates.su_total = 0.5 * r.su_total;
        rep.rates.layers.su_spc = 0.5 * r.layers.su_spc;
        rep.rates.layers.su_cpc = 0.5 * r.layers.su_cpc;
        rep.rates.layers.su_p = 0.5 * r.layers.su_p;
        rep.rates.alloc_violation = std::max(rep.rates.alloc_violation, r.alloc_violation);
        worst = std::min(worst, r.min_rate);
    }
    if (kt > 0) {
        const ChannelEnsemble half = eval_ens.terrestrial_only();
        PrecoderSolution sol = PrecoderSolution::zeros(eval_ens.n_sat, eval_ens.n_bs, 0, kt);
        sol.p = run.sol.p;
        sol.c_lpc = run.sol.c_lpc;
        rep.rescale_shortfall =
            std::max(rep.rescale_shortfall, rescale_portions(half, sol, topo, cfg.sigma2));
        const RateReport r = evaluate_rates(half, sol, topo, cfg.sigma2);
        rep.c_lpc = 0.5 * sol.c_lpc;
        rep.rates.cap_lpc = 0.5 * r.cap_lpc;
        rep.rates.cu_total = 0.5 * r.cu_total;
        rep.rates.layers.cu_lpc = 0.5 * r.layers.cu_lpc;
        rep.rates.layers.cu_p = 0.5 * r.layers.cu_p;
        rep.rates.alloc_violation = std::max(rep.rates.alloc_violation, r.alloc_violation);
        worst = std::min(worst, r.min_rate);
    }
    rep.rates.min_rate = std::isfinite(worst) ? 0.5 * worst : 0.0;
    return rep;
}

} // namespace mdprsma
