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

#include "mdprsma/polarization.hpp"

namespace mdprsma {

const char *polarization_name(Polarization p) {
    switch (p) {
    case Polarization::rhcp:
        return "rhcp";
    case Polarization::lhcp:
        return "lhcp";
    case Polarization::vertical:
        return "v";
    case Polarization::horizontal:
        return "h";
    }
    return "?";
}

cx_vec pol_basis(Polarization p) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (p) {
    case Polarization::rhcp:
        return cx_vec{cx(s, 0.0), cx(0.0, -s)};
    case Polarization::lhcp:
        return cx_vec{cx(s, 0.0), cx(0.0, s)};
    case Polarization::vertical:
        return cx_vec{cx(1.0, 0.0), cx(0.0, 0.0)};
    case Polarization::horizontal:
        return cx_vec{cx(0.0, 0.0), cx(1.0, 0.0)};
    }
    throw std::invalid_argument("pol_basis: unknown polarization");
}

cx_mat rotation_matrix(double zeta) {
    cx_mat r(2, 2);
    r(0, 0) = std::cos(zeta);
    r(0, 1) = std::sin(zeta);
    r(1, 0) = -std::sin(zeta);
    r(1, 1) = std::cos(zeta);
    return r;
}

double xpd_to_chi(double xpd_db) {
    if (std::isinf(xpd_db) && xpd_db > 0.0)
        return 0.0;
    return 1.0 / (1.0 + db_to_linear(xpd_db));
}

double chi_to_xpd(double chi) {
    require(chi > 0.0 && chi <= 1.0, "chi_to_xpd: chi must be in (0, 1]");
    return linear_to_db(1.0 / chi - 1.0);
}

cx_mat tx_pair(Polarization first, Polarization second) {
    cx_mat t(2, 2);
    t.col(0) = pol_basis(first);
    t.col(1) = pol_basis(second);
    return t;
}

} // namespace mdprsma
