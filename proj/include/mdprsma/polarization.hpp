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

namespace mdprsma {

enum class Polarization { rhcp, lhcp, vertical, horizontal };

const char *polarization_name(Polarization p);

// Jones vector of the given polarization in the linear (v, h) port basis.
// Circular vectors are unit norm: rhcp = (1, -j)/sqrt(2), lhcp = (1, +j)/sqrt(2).
cx_vec pol_basis(Polarization p);

// In-plane polarization rotation by zeta radians,
//   R = [ cos z   sin z ]
//       [ -sin z  cos z ]
// Circular basis vectors are eigenvectors: R*rhcp = exp(-j z)*rhcp and
// R*lhcp = exp(+j z)*lhcp, which is what makes circular feeds insensitive to
// orientation mismatch.
cx_mat rotation_matrix(double zeta);

// Cross-polar power fraction chi from a discrimination figure in dB,
// chi = 1 / (1 + 10^(xpd_db/10)). xpd = +inf maps to chi = 0.
double xpd_to_chi(double xpd_db);
double chi_to_xpd(double chi);

// 2x2 transmit basis [t1 t2] used when projecting a dual-polarized channel.
cx_mat tx_pair(Polarization first, Polarization second);

} // namespace mdprsma
