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

#include "mdprsma/wmmse.hpp"

namespace mdprsma {

cx mmse_equalizer(const cx_vec &channel, const cx_vec &precoder, double total_power) {
    require(total_power > 0.0, "mmse_equalizer: total power must be positive");
    return arma::cdot(precoder, channel) / total_power;
}

double mmse_value(const cx_vec &channel, const cx_vec &precoder, double total_power) {
    require(total_power > 0.0, "mmse_value: total power must be positive");
    const double signal = std::norm(arma::cdot(precoder, channel));
    require(signal <= total_power * (1.0 + 1e-9),
            "mmse_value: T excludes the signal term; mis-assembled total power");
    return std::max(1.0 - signal / total_power, 0.0);
}

double optimal_weight(double mmse, uword *clamped) {
    double u = (mmse > 0.0) ? 1.0 / mmse : kMaxWeight;
    if (u >= kMaxWeight) {
        u = kMaxWeight;
        if (clamped)
            ++*clamped;
    }
    return u;
}

double rate_wmse_identity_gap(const cx_vec &channel, const cx_vec &precoder,
                              double total_power) {
    const double eps = mmse_value(channel, precoder, total_power);
    const double signal = std::norm(arma::cdot(precoder, channel));
    const double gamma = signal / (total_power - signal);
    const double xi_star = 1.0 + std::log2(eps);
    const double rate = std::log2(1.0 + gamma);
    return std::abs(xi_star - (1.0 - rate));
}

uword WmmseCoefficients::clamped_total() const {
    uword n = 0;
    for (const auto *set : {&spc_su, &spc_cu, &cpc_su, &lpc_cu, &p_su, &p_cu})
        for (const auto &c : *set)
            n += c.clamped;
    return n;
}

namespace {

// Accumulates one receiver's instance over the fading ensemble. `sat` columns
// are weighted by the sampled satellite-side channel, `terr` ones by the
// fixed terrestrial link (empty for satellite users).
LayerInstanceCoeffs
accumulate_instance(StreamLayer layer, uword user, const ChannelEnsemble &ens,
                    const PrecoderSolution &sol, const StreamTopology &topo, double sigma2) {
    const bool cu_side = layer == StreamLayer::spc_cu || layer == StreamLayer::lpc_cu ||
                         layer == StreamLayer::p_cu;
    const ColumnRef target = target_column(layer, user);
    const cx_vec h = cu_side ? cx_vec(ens.h_cu.col(user)) : cx_vec();
    const cx_mat &sat_samples = cu_side ? ens.z_cu(user) : ens.f_su(user);
    const uword n_samples = ens.num_samples;

    LayerInstanceCoeffs out;
    KahanSum delta_acc, u_acc, nu_acc;
    KahanCxMat omega_acc(target.terrestrial ? h.n_elem : 2 * ens.n_sat, 1);
    KahanCxMat sat_psi_acc(2 * ens.n_sat, 2 * ens.n_sat);
    const cx_vec wt =
        target.terrestrial ? cx_vec(sol.p.col(target.col)) : cx_vec(sol.w.col(target.col));

    for (uword s = 0; s < n_samples; ++s) {
        const cx_vec ch_sat = sat_samples.col(s);
        const cx_vec &ch_target = target.terrestrial ? h : ch_sat;

        const double T = decode_signal(layer, ch_sat, h, sol, user) +
                         decode_denominator(layer, ch_sat, h, sol, user, topo, sigma2);
        const cx q = mmse_equalizer(ch_target, wt, T);
        const double eps = mmse_value(ch_target, wt, T);
        const double u = optimal_weight(eps, &out.clamped);
        const double delta = u * std::norm(q);

        delta_acc.add(delta);
        u_acc.add(u);
        nu_acc.add(std::log2(u));
        omega_acc.add(u * std::conj(q) * ch_target);
        sat_psi_acc.add(delta * (ch_sat * ch_sat.t()));
    }

    const double inv_s = 1.0 / double(n_samples);
    out.delta_bar = delta_acc.value() * inv_s;
    out.u_bar = u_acc.value() * inv_s;
    out.nu_bar = nu_acc.value() * inv_s;
    out.omega_bar = omega_acc.value() * inv_s;
    if (cu_side) {
        out.psi_bar = out.delta_bar * (h * h.t());
        out.psi_bar_intf = sat_psi_acc.value() * inv_s;
    } else {
        out.psi_bar = sat_psi_acc.value() * inv_s;
    }
    return out;
}

} // namespace

WmmseCoefficients step1_coefficients(const ChannelEnsemble &ens, const PrecoderSolution &sol,
                                     const StreamTopology &topo, double sigma2) {
    ens.validate();
    sol.validate(ens.n_sat, ens.n_bs, ens.ks(), ens.kt());
    require(sigma2 > 0.0, "step1_coefficients: noise power must be positive");

    WmmseCoefficients out;
    for (uword k = 0; k < ens.ks(); ++k) {
        if (topo.super_common)
            out.spc_su.push_back(
                accumulate_instance(StreamLayer::spc_su, k, ens, sol, topo, sigma2));
        if (topo.sat_common)
            out.cpc_su.push_back(
                accumulate_instance(StreamLayer::cpc_su, k, ens, sol, topo, sigma2));
        out.p_su.push_back(accumulate_instance(StreamLayer::p_su, k, ens, sol, topo, sigma2));
    }
    for (uword k = 0; k < ens.kt(); ++k) {
        if (topo.super_common)
            out.spc_cu.push_back(
                accumulate_instance(StreamLayer::spc_cu, k, ens, sol, topo, sigma2));
        if (topo.terr_common)
            out.lpc_cu.push_back(
                accumulate_instance(StreamLayer::lpc_cu, k, ens, sol, topo, sigma2));
        out.p_cu.push_back(accumulate_instance(StreamLayer::p_cu, k, ens, sol, topo, sigma2));
    }
    return out;
}

double surrogate_rate(const LayerInstanceCoeffs &c, StreamLayer layer, uword user,
                      const PrecoderSolution &sol, const StreamTopology &topo, double sigma2) {
    const bool cu_side = layer == StreamLayer::spc_cu || layer == StreamLayer::lpc_cu ||
                         layer == StreamLayer::p_cu;
    const ColumnRef target = target_column(layer, user);
    const cx_vec wt =
        target.terrestrial ? cx_vec(sol.p.col(target.col)) : cx_vec(sol.w.col(target.col));

    double val = c.constant(sigma2) + 2.0 * std::real(arma::cdot(c.omega_bar, wt));
    for (const ColumnRef &col : heard_columns(layer, sol.ks(), sol.kt(), topo)) {
        if (col.terrestrial) {
            const cx_vec x(sol.p.col(col.col));
            val -= std::real(arma::cdot(x, c.psi_bar * x));
        } else {
            const cx_vec x(sol.w.col(col.col));
            const cx_mat &psi = cu_side ? c.psi_bar_intf : c.psi_bar;
            val -= std::real(arma::cdot(x, psi * x));
        }
    }
    return val;
}

} // namespace mdprsma
