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

#include "mdprsma/channel.hpp"

#include <cstring>
#include <istream>
#include <ostream>

namespace mdprsma {

namespace {

constexpr std::uint64_t kStreamEnsembleSu = 0x656e7375;  // "ensu"
constexpr std::uint64_t kStreamEnsembleCu = 0x656e6375;  // "encu"
constexpr std::uint64_t kStreamTerrestrial = 0x74657272; // "terr"

constexpr char kEnsembleMagic[8] = {'M', 'D', 'P', 'E', 'N', 'S', '0', '1'};

void write_u32(std::ostream &os, std::uint32_t v) {
    os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream &is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char *>(&v), sizeof(v));
    return v;
}

void write_cx_mat(std::ostream &os, const cx_mat &m) {
    for (uword j = 0; j < m.n_cols; ++j) {
        for (uword i = 0; i < m.n_rows; ++i) {
            double re = m(i, j).real();
            double im = m(i, j).imag();
            os.write(reinterpret_cast<const char *>(&re), sizeof(re));
            os.write(reinterpret_cast<const char *>(&im), sizeof(im));
        }
    }
}

cx_mat read_cx_mat(std::istream &is, uword rows, uword cols) {
    cx_mat m(rows, cols);
    for (uword j = 0; j < cols; ++j) {
        for (uword i = 0; i < rows; ++i) {
            double re = 0.0, im = 0.0;
            is.read(reinterpret_cast<char *>(&re), sizeof(re));
            is.read(reinterpret_cast<char *>(&im), sizeof(im));
            m(i, j) = cx(re, im);
        }
    }
    return m;
}

void dump_mat_csv(std::ostream &os, const char *kind, uword user, const cx_mat &m) {
    for (uword j = 0; j < m.n_cols; ++j)
        for (uword i = 0; i < m.n_rows; ++i)
            os << kind << ',' << user << ',' << j << ',' << i << ',' << m(i, j).real() << ','
               << m(i, j).imag() << '\n';
}

} // namespace

cx_mat sample_sat_polarimetric(const SatUserGeometry &geom, RngStream &rng) {
    geom.validate();
    const cx phase = std::exp(cx(0.0, geom.phase0));
    const double c0 = std::sqrt(1.0 - geom.chi0);
    const double x0 = std::sqrt(geom.chi0);

    cx_mat los(2, 2);
    los(0, 0) = c0;
    los(0, 1) = x0;
    los(1, 0) = x0;
    los(1, 1) = c0;

    cx_mat inner(2, 2);
    if (std::isinf(geom.kappa)) {
        inner = std::sqrt(geom.beta) * phase * los;
    } else {
        const double ct = std::sqrt(1.0 - geom.chi_tilde);
        const double xt = std::sqrt(geom.chi_tilde);
        cx_mat nlos(2, 2);
        nlos(0, 0) = ct * rng.cnormal();
        nlos(0, 1) = xt * rng.cnormal();
        nlos(1, 0) = xt * rng.cnormal();
        nlos(1, 1) = ct * rng.cnormal();
        inner = std::sqrt(geom.beta / (geom.kappa + 1.0)) *
                (std::sqrt(geom.kappa) * phase * los + nlos);
    }
    return rotation_matrix(geom.zeta) * inner;
}

cx_mat sample_terrestrial(const TerrestrialUserGeometry &geom, uword nt, RngStream &rng) {
    geom.validate();
    require(nt >= 1, "sample_terrestrial: nt must be positive");
    const double co = std::sqrt(1.0 - geom.chi);
    const double cross = std::sqrt(geom.chi);
    cx_mat h(2 * nt, 2);
    for (uword n = 0; n < nt; ++n) {
        h(2 * n + 0, 0) = co * rng.cnormal(geom.beta);
        h(2 * n + 0, 1) = cross * rng.cnormal(geom.beta);
        h(2 * n + 1, 0) = cross * rng.cnormal(geom.beta);
        h(2 * n + 1, 1) = co * rng.cnormal(geom.beta);
    }
    return h;
}

cx_mat assemble_full_channel(const cx_vec &steering, const cx_mat &g) {
    require(g.n_rows == 2 && g.n_cols == 2, "assemble_full_channel: g must be 2x2");
    return arma::kron(steering, g);
}

cx_vec effective_channel(const cx_mat &full, const cx_vec &rx_pol, const cx_mat &tx_basis) {
    require(full.n_cols == 2 && full.n_rows % 2 == 0,
            "effective_channel: full channel must be (2n) x 2");
    require(rx_pol.n_elem == 2, "effective_channel: rx_pol must have 2 entries");
    require(tx_basis.n_rows == 2 && tx_basis.n_cols == 2,
            "effective_channel: tx_basis must be 2x2");
    const uword n = full.n_rows / 2;
    cx_vec out(2 * n);
    for (uword i = 0; i < n; ++i) {
        // 1x2 row: receiver projection of this pair, expressed on the two
        // transmit excitation ports.
        cx_mat row = rx_pol.t() * full.rows(2 * i, 2 * i + 1) * tx_basis;
        out(2 * i + 0) = row(0, 0);
        out(2 * i + 1) = row(0, 1);
    }
    return out;
}

cx_vec ChannelEnsemble::mean_f(uword k) const {
    require(k < ks(), "mean_f: user index out of range");
    return arma::mean(f_su(k), 1);
}

ChannelEnsemble ChannelEnsemble::satellite_only() const {
    ChannelEnsemble out;
    out.n_sat = n_sat;
    out.n_bs = n_bs;
    out.num_samples = num_samples;
    out.f_su = f_su;
    out.z_cu.set_size(0);
    out.h_cu.set_size(2 * n_bs, 0);
    return out;
}

ChannelEnsemble ChannelEnsemble::terrestrial_only() const {
    ChannelEnsemble out;
    out.n_sat = n_sat;
    out.n_bs = n_bs;
    out.num_samples = num_samples;
    out.f_su.set_size(0);
    out.z_cu.set_size(kt());
    for (uword k = 0; k < kt(); ++k)
        out.z_cu(k) = cx_mat(2 * n_sat, num_samples, arma::fill::zeros);
    out.h_cu = h_cu;
    return out;
}

void ChannelEnsemble::validate() const {
    require(num_samples >= 1, "ChannelEnsemble: needs at least one sample");
    for (uword k = 0; k < ks(); ++k)
        require(f_su(k).n_rows == 2 * n_sat && f_su(k).n_cols == num_samples,
                "ChannelEnsemble: f_su shape mismatch");
    for (uword k = 0; k < kt(); ++k)
        require(z_cu(k).n_rows == 2 * n_sat && z_cu(k).n_cols == num_samples,
                "ChannelEnsemble: z_cu shape mismatch");
    require(h_cu.n_cols == kt() && (kt() == 0 || h_cu.n_rows == 2 * n_bs),
            "ChannelEnsemble: h_cu shape mismatch");
}

ChannelEnsemble build_ensemble(const ScenarioGeometry &scenario, const ArrayConfig &sat_array,
                               uword nt, uword num_samples, std::uint64_t seed,
                               std::uint64_t trial, std::uint64_t ensemble_id) {
    require(num_samples >= 1, "build_ensemble: num_samples must be positive");
    const uword ks = scenario.su.size();
    const uword kt = scenario.cu.size();
    require(scenario.cu_sat.size() == kt, "build_ensemble: cu_sat/cu size mismatch");

    ChannelEnsemble ens;
    ens.n_sat = sat_array.pairs();
    ens.n_bs = nt;
    ens.num_samples = num_samples;
    ens.f_su.set_size(ks);
    ens.z_cu.set_size(kt);
    ens.h_cu.set_size(2 * nt, kt);

    const cx_mat sat_tx = tx_pair(Polarization::rhcp, Polarization::lhcp);
    const cx_mat bs_tx = tx_pair(Polarization::vertical, Polarization::horizontal);

    for (uword k = 0; k < ks; ++k) {
        const SatUserGeometry &g = scenario.su[k];
        const cx_vec a = steering_vector(sat_array, g.theta, g.phi);
        const cx_vec rx = pol_basis(g.pol);
        RngStream rng = RngStream::child(seed, {trial, kStreamEnsembleSu, ensemble_id, k});
        cx_mat f(2 * ens.n_sat, num_samples);
        for (uword s = 0; s < num_samples; ++s)
            f.col(s) = effective_channel(assemble_full_channel(a, sample_sat_polarimetric(g, rng)),
                                         rx, sat_tx);
        ens.f_su(k) = std::move(f);
    }

    for (uword k = 0; k < kt; ++k) {
        const SatUserGeometry &g = scenario.cu_sat[k];
        const cx_vec a = steering_vector(sat_array, g.theta, g.phi);
        const cx_vec rx = pol_basis(g.pol);
        RngStream rng = RngStream::child(seed, {trial, kStreamEnsembleCu, ensemble_id, k});
        cx_mat z(2 * ens.n_sat, num_samples);
        for (uword s = 0; s < num_samples; ++s)
            z.col(s) = effective_channel(assemble_full_channel(a, sample_sat_polarimetric(g, rng)),
                                         rx, sat_tx);
        ens.z_cu(k) = std::move(z);

        // The terrestrial link is known to the transmitter: one draw per
        // trial, shared by the optimization and held-out ensembles.
        RngStream hrng = RngStream::child(seed, {trial, kStreamTerrestrial, k});
        ens.h_cu.col(k) = effective_channel(sample_terrestrial(scenario.cu[k], nt, hrng),
                                            pol_basis(scenario.cu[k].pol), bs_tx);
    }

    ens.validate();
    return ens;
}

void write_ensemble(const ChannelEnsemble &ens, std::ostream &os) {
    ens.validate();
    os.write(kEnsembleMagic, sizeof(kEnsembleMagic));
    write_u32(os, std::uint32_t(ens.n_sat));
    write_u32(os, std::uint32_t(ens.n_bs));
    write_u32(os, std::uint32_t(ens.ks()));
    write_u32(os, std::uint32_t(ens.kt()));
    write_u32(os, std::uint32_t(ens.num_samples));
    for (uword k = 0; k < ens.ks(); ++k)
        write_cx_mat(os, ens.f_su(k));
    for (uword k = 0; k < ens.kt(); ++k)
        write_cx_mat(os, ens.z_cu(k));
    write_cx_mat(os, ens.h_cu);
}

ChannelEnsemble read_ensemble(std::istream &is) {
    char magic[8] = {};
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kEnsembleMagic, sizeof(magic)) != 0)
        throw std::runtime_error("read_ensemble: bad magic");
    ChannelEnsemble ens;
    ens.n_sat = read_u32(is);
    ens.n_bs = read_u32(is);
    const uword ks = read_u32(is);
    const uword kt = read_u32(is);
    ens.num_samples = read_u32(is);
    ens.f_su.set_size(ks);
    ens.z_cu.set_size(kt);
    for (uword k = 0; k < ks; ++k)
        ens.f_su(k) = read_cx_mat(is, 2 * ens.n_sat, ens.num_samples);
    for (uword k = 0; k < kt; ++k)
        ens.z_cu(k) = read_cx_mat(is, 2 * ens.n_sat, ens.num_samples);
    ens.h_cu = read_cx_mat(is, 2 * ens.n_bs, kt);
    if (!is)
        throw std::runtime_error("read_ensemble: truncated stream");
    ens.validate();
    return ens;
}

void write_ensemble_csv(const ChannelEnsemble &ens, std::ostream &os) {
    os << "kind,user,sample,row,re,im\n";
    for (uword k = 0; k < ens.ks(); ++k)
        dump_mat_csv(os, "f_su", k, ens.f_su(k));
    for (uword k = 0; k < ens.kt(); ++k)
        dump_mat_csv(os, "z_cu", k, ens.z_cu(k));
    dump_mat_csv(os, "h_cu", 0, ens.h_cu);
}

} // namespace mdprsma
