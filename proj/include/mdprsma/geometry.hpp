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

#include "mdprsma/common.hpp"
#include "mdprsma/polarization.hpp"

#include <vector>

namespace mdprsma {

// Uniform planar array of nx * ny dual-polarized element pairs at
// half-wavelength spacing.
struct ArrayConfig {
    uword nx = 1;
    uword ny = 1;
    uword pairs() const { return nx * ny; }
};

// Array steering vector for departure angles (theta = azimuth, phi = boresight
// tilt), a = a_x (x) a_y with
//   a_x[m] = exp(-j pi m sin(phi) cos(theta)),  m = 0..nx-1
//   a_y[n] = exp(-j pi n sin(phi) sin(theta)),  n = 0..ny-1
cx_vec steering_vector(const ArrayConfig &array, double theta, double phi);

// Noise-normalized link power gain
//   beta = Gtx * Grx / (kB * Tsys * B) * (c / (4 pi fc))^2 * d^(-eta)
// so that a unit-variance receiver noise corresponds to thermal noise over the
// given bandwidth. eta = 2 reproduces free-space loss.
double link_budget(double gain_tx_dbi, double gain_rx_dbi, double fc_hz, double bandwidth_hz,
                   double tsys_k, double distance_m, double pathloss_exp);

// One satellite downlink. Angles and distance follow from the user position,
// the polarimetric state describes orientation mismatch (zeta), the fixed
// line-of-sight phase, the Rician factor and the depolarization fractions.
struct SatUserGeometry {
    double theta = 0.0;
    double phi = 0.0;
    double distance_m = 0.0;
    double zeta = 0.0;
    double phase0 = 0.0;
    double kappa = 1.0;     // linear Rician factor, +inf selects the pure LOS limit
    double chi0 = 1e-30;    // LOS cross-polar fraction
    double chi_tilde = 0.5; // NLOS cross-polar fraction
    double beta = 1.0;
    Polarization pol = Polarization::rhcp;

    void validate() const;
};

// One terrestrial downlink (Rayleigh, known to the transmitter).
struct TerrestrialUserGeometry {
    double distance_m = 0.0;
    double chi = 0.5;
    double beta = 1.0;
    Polarization pol = Polarization::vertical;

    void validate() const;
};

// Static parameters needed to draw one trial geometry.
struct GeometryParams {
    uword ks = 4;
    uword kt = 2;
    double altitude_m = 530e3;
    double sat_coverage_radius_m = 50e3;
    double bs_height_m = 30.0;
    double bs_cell_radius_m = 1e3;
    double gain_tx_sat_dbi = 6.0;
    double gain_tx_bs_dbi = 6.0;
    double gain_rx_dbi = 0.0;
    double fc_hz = 2e9;
    double bandwidth_hz = 5e6;
    double tsys_k = 290.0;
    double terrestrial_pathloss_exp = 4.0;
    double kappa_db = 15.0;
    double xpd_los_db = 15.0;
    double xpd_nlos_db = 5.0;
    double xpd_bs_db = 5.0;
};

// One drawn trial: satellite links of the satellite users, terrestrial links
// of the cellular users, plus the satellite interference links towards the
// cellular users. su[k] and cu_sat[k] carry their own orientation mismatch and
// LOS phase. Satellite users alternate RHCP/LHCP in two equal halves,
// cellular users alternate V/H.
struct ScenarioGeometry {
    std::vector<SatUserGeometry> su;
    std::vector<SatUserGeometry> cu_sat;
    std::vector<TerrestrialUserGeometry> cu;
    double bs_x = 0.0; // cell center on the coverage plane
    double bs_y = 0.0;
    std::vector<double> su_x, su_y; // planar user positions, kept for inspection
};

// Draws user positions uniformly on the relevant discs: the base station
// center falls uniformly inside the satellite coverage disc (with margin for
// its own cell), cellular users uniformly inside the cell, satellite users
// uniformly on the coverage disc but rejected out of the cell area. Azimuth
// and tilt seen from the satellite use flat-earth geometry from the given
// altitude. The draw order is fixed per entity so streams stay reproducible.
ScenarioGeometry draw_scenario(const GeometryParams &params, std::uint64_t seed, std::uint64_t trial);

} // namespace mdprsma
