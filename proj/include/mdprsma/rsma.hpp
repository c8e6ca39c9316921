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

#include <vector>

namespace mdprsma {

// Which message layers exist and how receivers peel them off. The decode
// ladder is super-common first (everyone), then the per-network common layer,
// then the private stream. `sic` controls whether decoded common layers are
// actually subtracted before the private stage; the fixed-polarization
// multiplexing baseline decodes both of its layers in parallel instead.
struct StreamTopology {
    bool super_common = true;
    bool sat_common = true;
    bool terr_common = true;
    bool sic = true;

    // Optional per-layer support restriction: precoder columns are confined
    // to span of the basis (orthonormal columns). Empty means unrestricted.
    cx_mat sat_common_basis;
    cx_mat sat_private_basis;
    cx_mat terr_common_basis;
    cx_mat terr_private_basis;

    static StreamTopology full_rsma();        // all three common layers, SIC
    static StreamTopology per_network_rsma(); // no super-common layer
    static StreamTopology private_only();     // pure spatial multiplexing
    // Common layers ride one polarization excitation, privates the other; no
    // SIC at any receiver.
    static StreamTopology fixed_polarization(uword n_sat, uword n_bs);

    bool restricted() const {
        return sat_common_basis.n_elem || sat_private_basis.n_elem ||
               terr_common_basis.n_elem || terr_private_basis.n_elem;
    }
};

// Precoder bank plus the common-rate portions that rate splitting hands out.
// Satellite columns: [super-common, sat-common, private 1..ks]. Terrestrial
// columns: [terr-common, private 1..kt]. Inactive layers keep zero columns so
// every rate expression can treat the banks uniformly.
struct PrecoderSolution {
    cx_mat w; // (2 n_sat) x (2 + ks)
    cx_mat p; // (2 n_bs) x (1 + kt)
    vec c_spc; // ks portions of the super-common rate (satellite users own them)
    vec c_cpc; // ks portions of the satellite common rate
    vec c_lpc; // kt portions of the terrestrial common rate

    uword ks() const { return c_spc.n_elem; }
    uword kt() const { return c_lpc.n_elem; }

    cx_vec w_spc() const { return w.col(0); }
    cx_vec w_cpc() const { return w.col(1); }
    cx_vec w_p(uword k) const { return w.col(2 + k); }
    cx_vec p_lpc() const { return p.col(0); }
    cx_vec p_p(uword k) const { return p.col(1 + k); }

    double sat_power() const;
    double terr_power() const;
    // Share of the spent satellite power carried by the super-common column.
    double spc_power_fraction() const;

    static PrecoderSolution zeros(uword n_sat, uword n_bs, uword ks, uword kt);
    void validate(uword n_sat, uword n_bs, uword ks, uword kt) const;
};

enum class StreamLayer { spc_su, spc_cu, cpc_su, lpc_cu, p_su, p_cu };

const char *stream_layer_name(StreamLayer layer);

// One column of a precoder bank: the satellite bank unless `terrestrial`.
struct ColumnRef {
    bool terrestrial = false;
    uword col = 0;
    bool operator==(const ColumnRef &) const = default;
};

ColumnRef target_column(StreamLayer layer, uword user);

// Columns still on the air when `layer` is decoded (the target included),
// restricted to layers the topology activates. Rate denominators, the MSE
// total power T, and the subproblem quadratics all share this set.
std::vector<ColumnRef> heard_columns(StreamLayer layer, uword ks, uword kt,
                                     const StreamTopology &topo);

// Received signal power of the layer's own stream at one fading sample.
// `sat` is the satellite-side effective channel of this receiver (f for
// satellite users, z for terrestrial ones); `terr` is the terrestrial-side
// vector and may be empty for satellite users.
double decode_signal(StreamLayer layer, const cx_vec &sat, const cx_vec &terr,
                     const PrecoderSolution &sol, uword user);

// Interference-plus-noise power at the ladder stage where `layer` is decoded.
double decode_denominator(StreamLayer layer, const cx_vec &sat, const cx_vec &terr,
                          const PrecoderSolution &sol, uword user,
                          const StreamTopology &topo, double sigma2);

double decode_sinr(StreamLayer layer, const cx_vec &sat, const cx_vec &terr,
                   const PrecoderSolution &sol, uword user, const StreamTopology &topo,
                   double sigma2);

// Per-user ergodic rates of each active layer, sample-averaged over the
// ensemble. Inactive layers keep empty vectors.
struct LayerRates {
    vec su_spc, cu_spc; // super-common decodability at each receiver
    vec su_cpc;
    vec cu_lpc;
    vec su_p, cu_p;
};

LayerRates ergodic_rates(const ChannelEnsemble &ens, const PrecoderSolution &sol,
                         const StreamTopology &topo, double sigma2 = 1.0);

// A common layer is decodable at the rate of its weakest listener; the
// super-common layer must clear every receiver in both networks.
double cap_spc(const LayerRates &r, const StreamTopology &topo);
double cap_cpc(const LayerRates &r, const StreamTopology &topo);
double cap_lpc(const LayerRates &r, const StreamTopology &topo);

struct RateReport {
    double cap_spc = 0.0, cap_cpc = 0.0, cap_lpc = 0.0;
    vec su_total, cu_total; // private rate plus this user's common portions
    double min_rate = 0.0;  // worst user across both networks
    LayerRates layers;
    double alloc_violation = 0.0; // worst overdraw of any pooled constraint
};

// Rates achieved by `sol` as-is: the stored portions are applied against the
// ensemble's caps and the violation is reported, not repaired.
RateReport evaluate_rates(const ChannelEnsemble &ens, const PrecoderSolution &sol,
                          const StreamTopology &topo, double sigma2 = 1.0);

// Largest pooled-rate overdraw (negative portions count too).
double allocation_violation(const PrecoderSolution &sol, const LayerRates &rates,
                            const StreamTopology &topo);

struct AllocationResult {
    vec c_spc, c_cpc, c_lpc;
    double min_rate = 0.0;
};

// Max-min optimal split of the common-rate pools at fixed precoders: bisects
// on the worst total and covers each user's deficit from the pools that user
// can draw on. Satellite users draw on the super-common and sat-common pools
// jointly; terrestrial users on the terr-common pool.
AllocationResult best_allocation(const LayerRates &rates, const StreamTopology &topo);

} // namespace mdprsma
