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

#include "mdprsma/geometry.hpp"

namespace mdprsma {

namespace {

constexpr std::uint64_t kStreamBs = 0x6273;  // "bs"
constexpr std::uint64_t kStreamCu = 0x6375;  // "cu"
constexpr std::uint64_t kStreamSu = 0x7375;  // "su"

constexpr double kBoltzmann = 1.380649e-23;

struct Point2 {
    double x;
    double y;
};

Point2 uniform_disc(RngStream &rng, double radius) {
    double r = radius * std::sqrt(rng.uniform());
    double psi = rng.uniform(0.0, 2.0 * arma::datum::pi);
    return {r * std::cos(psi), r * std::sin(psi)};
}

} // namespace

cx_vec steering_vector(const ArrayConfig &array, double theta, double phi) {
    require(array.nx >= 1 && array.ny >= 1, "steering_vector: empty array");
    const double pi = arma::datum::pi;
    cx_vec ax(array.nx), ay(array.ny);
    for (uword m = 0; m < array.nx; ++m)
        ax(m) = std::exp(cx(0.0, -pi * double(m) * std::sin(phi) * std::cos(theta)));
    for (uword n = 0; n < array.ny; ++n)
        ay(n) = std::exp(cx(0.0, -pi * double(n) * std::sin(phi) * std::sin(theta)));
    return arma::kron(ax, ay);
}

double link_budget(double gain_tx_dbi, double gain_rx_dbi, double fc_hz, double bandwidth_hz,
                   double tsys_k, double distance_m, double pathloss_exp) {
    require(fc_hz > 0.0 && bandwidth_hz > 0.0 && tsys_k > 0.0 && distance_m > 0.0,
            "link_budget: fc, bandwidth, tsys and distance must be positive");
    const double gains = db_to_linear(gain_tx_dbi) * db_to_linear(gain_rx_dbi);
    const double noise = kBoltzmann * tsys_k * bandwidth_hz;
    const double wave = 299792458.0 / (4.0 * arma::datum::pi * fc_hz);
    return gains / noise * wave * wave * std::pow(distance_m, -pathloss_exp);
}

void SatUserGeometry::validate() const {
    require(distance_m > 0.0, "SatUserGeometry: distance must be positive");
    require(kappa > 0.0, "SatUserGeometry: kappa must be positive");
    require(chi0 > 0.0 && chi0 <= 1.0, "SatUserGeometry: chi0 must be in (0, 1]");
    require(chi_tilde > 0.0 && chi_tilde <= 1.0, "SatUserGeometry: chi_tilde must be in (0, 1]");
    require(beta > 0.0, "SatUserGeometry: beta must be positive");
}

void TerrestrialUserGeometry::validate() const {
    require(distance_m > 0.0, "TerrestrialUserGeometry: distance must be positive");
    require(chi > 0.0 && chi <= 1.0, "TerrestrialUserGeometry: chi must be in (0, 1]");
    require(beta > 0.0, "TerrestrialUserGeometry: beta must be positive");
    require(pol == Polarization::vertical || pol == Polarization::horizontal,
            "TerrestrialUserGeometry: terrestrial users are linearly polarized");
}

ScenarioGeometry draw_scenario(const GeometryParams &p, std::uint64_t seed, std::uint64_t trial) {
    require(p.ks >= 1 && p.ks % 2 == 0, "draw_scenario: ks must be a positive even count");
    require(p.kt % 2 == 0, "draw_scenario: kt must be an even count");
    require(p.sat_coverage_radius_m > p.bs_cell_radius_m,
            "draw_scenario: cell must fit inside the coverage disc");

    const double two_pi = 2.0 * arma::datum::pi;
    const double kappa = db_to_linear(p.kappa_db);
    const double chi0 = xpd_to_chi(p.xpd_los_db);
    const double chi_tilde = xpd_to_chi(p.xpd_nlos_db);
    const double chi_bs = xpd_to_chi(p.xpd_bs_db);

    ScenarioGeometry out;
    out.su.resize(p.ks);
    out.cu_sat.resize(p.kt);
    out.cu.resize(p.kt);

    RngStream bs_rng = RngStream::child(seed, {trial, kStreamBs});
    const Point2 bs =
        uniform_disc(bs_rng, p.sat_coverage_radius_m - p.bs_cell_radius_m);
    out.bs_x = bs.x;
    out.bs_y = bs.y;

    auto sat_link = [&](const Point2 &pos, RngStream &rng, Polarization pol) {
        SatUserGeometry g;
        const double ground = std::hypot(pos.x, pos.y);
        g.theta = std::atan2(pos.y, pos.x);
        g.phi = std::atan2(ground, p.altitude_m);
        g.distance_m = std::hypot(ground, p.altitude_m);
        g.zeta = rng.uniform(0.0, two_pi);
        g.phase0 = rng.uniform(0.0, two_pi);
        g.kappa = kappa;
        g.chi0 = chi0;
        g.chi_tilde = chi_tilde;
        g.beta = link_budget(p.gain_tx_sat_dbi, p.gain_rx_dbi, p.fc_hz, p.bandwidth_hz, p.tsys_k,
                             g.distance_m, 2.0);
        g.pol = pol;
        g.validate();
        return g;
    };

    for (uword k = 0; k < p.kt; ++k) {
        RngStream rng = RngStream::child(seed, {trial, kStreamCu, k});
        Point2 local = uniform_disc(rng, p.bs_cell_radius_m);
        Point2 abs{bs.x + local.x, bs.y + local.y};

        TerrestrialUserGeometry t;
        t.distance_m = std::hypot(std::hypot(local.x, local.y), p.bs_height_m);
        t.chi = chi_bs;
        t.beta = link_budget(p.gain_tx_bs_dbi, p.gain_rx_dbi, p.fc_hz, p.bandwidth_hz, p.tsys_k,
                             t.distance_m, p.terrestrial_pathloss_exp);
        t.pol = (k < p.kt / 2) ? Polarization::vertical : Polarization::horizontal;
        t.validate();
        out.cu[k] = t;
        out.cu_sat[k] = sat_link(abs, rng, t.pol);
    }

    for (uword k = 0; k < p.ks; ++k) {
        RngStream rng = RngStream::child(seed, {trial, kStreamSu, k});
        Point2 pos{0.0, 0.0};
        // Satellite users stay out of the terrestrial cell.
        for (int attempt = 0; attempt < 4096; ++attempt) {
            pos = uniform_disc(rng, p.sat_coverage_radius_m);
            if (std::hypot(pos.x - bs.x, pos.y - bs.y) > p.bs_cell_radius_m)
                break;
        }
        Polarization pol = (k < p.ks / 2) ? Polarization::rhcp : Polarization::lhcp;
        out.su[k] = sat_link(pos, rng, pol);
        out.su_x.push_back(pos.x);
        out.su_y.push_back(pos.y);
    }

    return out;
}

} // namespace mdprsma
