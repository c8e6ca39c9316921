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

#include "mdprsma/rsma.hpp"

namespace mdprsma {

// Weight cap for numerically perfect links; the MSE model assumes strictly
// positive errors, floating point does not.
inline constexpr double kMaxWeight = 1e12;

// Scalar MMSE receive gain for one stream: q = (precoder^H channel) / T,
// where T is that stream's signal-plus-interference-plus-noise power.
cx mmse_equalizer(const cx_vec &channel, const cx_vec &precoder, double total_power);

// Minimum mean square error 1 - |precoder^H channel|^2 / T, in (0, 1].
double mmse_value(const cx_vec &channel, const cx_vec &precoder, double total_power);

// Inverse-MMSE weight, capped at kMaxWeight; bumps *clamped when the cap bites.
double optimal_weight(double mmse, uword *clamped = nullptr);

// |xi_star - (1 - R)| where xi_star = 1 + log2(MMSE) and R = log2(1 + SINR);
// zero up to rounding for any (channel, precoder, T) triple.
double rate_wmse_identity_gap(const cx_vec &channel, const cx_vec &precoder,
                              double total_power);

// Sample-averaged quadratic coefficients of one (layer, user) rate constraint.
// For satellite receivers psi_bar quadratizes the satellite bank; terrestrial
// receivers split into psi_bar on their own bank (the fixed link h) and
// psi_bar_intf on the satellite bank (the fading interference z).
struct LayerInstanceCoeffs {
    double delta_bar = 0.0; // mean u |q|^2, multiplies the noise power
    double u_bar = 0.0;     // mean weight
    double nu_bar = 0.0;    // mean log2 weight
    cx_mat psi_bar;
    cx_mat psi_bar_intf;
    cx_vec omega_bar; // mean u q* channel, on the target column's side
    uword clamped = 0;

    // Constant part of the linearized rate: 1 - delta_bar sigma^2 - u_bar + nu_bar.
    double constant(double sigma2) const {
        return 1.0 - delta_bar * sigma2 - u_bar + nu_bar;
    }
};

struct WmmseCoefficients {
    std::vector<LayerInstanceCoeffs> spc_su, spc_cu; // present when the topology has spc
    std::vector<LayerInstanceCoeffs> cpc_su;
    std::vector<LayerInstanceCoeffs> lpc_cu;
    std::vector<LayerInstanceCoeffs> p_su, p_cu;

    uword clamped_total() const;
};

// Equalizers and weights at the previous iterate, reduced to the averaged
// constraint coefficients. T for each instance is assembled from the same
// column ladder the rate expressions use.
WmmseCoefficients step1_coefficients(const ChannelEnsemble &ens, const PrecoderSolution &sol,
                                     const StreamTopology &topo, double sigma2 = 1.0);

// Linearized ergodic rate of one instance at a candidate solution:
// constant + 2 Re(omega^H target) - sum of heard-column quadratics. Equals the
// direct sample average of 1 - xi at the coefficients' own iterate.
double surrogate_rate(const LayerInstanceCoeffs &c, StreamLayer layer, uword user,
                      const PrecoderSolution &sol, const StreamTopology &topo,
                      double sigma2 = 1.0);

} // namespace mdprsma
