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

#include "mdprsma/geometry.hpp"

#include <iosfwd>

namespace mdprsma {

// One 2x2 polarimetric draw of a satellite downlink,
//   G = R(zeta) * sqrt(beta/(kappa+1)) * (sqrt(kappa) e^{j phase0} M_los + M_nlos)
// where M_los mixes co/cross polar ports through chi0 and M_nlos holds four
// independent CN(0,1) fading terms weighted by chi_tilde. kappa = +inf yields
// the deterministic LOS-only channel and consumes no random draws.
cx_mat sample_sat_polarimetric(const SatUserGeometry &geom, RngStream &rng);

// Rayleigh terrestrial downlink of nt dual-polarized pairs: a (2 nt) x 2
// matrix of CN(0, beta) entries, scaled per port pair by the co/cross polar
// split (1-chi, chi).
cx_mat sample_terrestrial(const TerrestrialUserGeometry &geom, uword nt, RngStream &rng);

// Per-pair full channel of an n-pair transmit array: F = a (x) G, size (2n) x 2.
cx_mat assemble_full_channel(const cx_vec &steering, const cx_mat &g);

// Projects a full (2n) x 2 channel onto the receive polarization and a pair of
// transmit excitation ports: f = vec( ((I (x) rx^H) F [t1 t2])^T ). Component
// 2i+c is the scalar link from transmit port c of pair i into the receiver.
cx_vec effective_channel(const cx_mat &full, const cx_vec &rx_pol, const cx_mat &tx_basis);

// Sample-average ensemble for one trial: S draws of every satellite-side
// effective vector (satellite users f, interference links z towards cellular
// users) plus the fixed terrestrial vectors h (perfect knowledge, one draw).
struct ChannelEnsemble {
    uword n_sat = 0; // satellite element pairs
    uword n_bs = 0;  // terrestrial element pairs
    uword num_samples = 0;
    arma::field<cx_mat> f_su; // ks entries, each (2 n_sat) x S
    arma::field<cx_mat> z_cu; // kt entries, each (2 n_sat) x S
    cx_mat h_cu;              // (2 n_bs) x kt

    uword ks() const { return f_su.n_elem; }
    uword kt() const { return z_cu.n_elem; }

    // Mean effective vector of one satellite user over the ensemble.
    cx_vec mean_f(uword k) const;

    // Sub-networks used by the orthogonal-access baselines.
    ChannelEnsemble satellite_only() const;
    ChannelEnsemble terrestrial_only() const;

    void validate() const;
};

// Draws the fading ensemble for a trial geometry. Per-user substreams are
// derived from (seed, trial, purpose, user) so ensembles are reproducible and
// independent of evaluation order; an ensemble_id of 0 is the optimization
// ensemble, higher ids give fresh held-out draws of the same geometry.
ChannelEnsemble build_ensemble(const ScenarioGeometry &scenario, const ArrayConfig &sat_array,
                               uword nt, uword num_samples, std::uint64_t seed,
                               std::uint64_t trial, std::uint64_t ensemble_id = 0);

// Little-endian binary layout: magic, counts, then interleaved re/im doubles
// per matrix in column-major order. The CSV form is a readable dump of the
// same content.
void write_ensemble(const ChannelEnsemble &ens, std::ostream &os);
ChannelEnsemble read_ensemble(std::istream &is);
void write_ensemble_csv(const ChannelEnsemble &ens, std::ostream &os);

} // namespace mdprsma
