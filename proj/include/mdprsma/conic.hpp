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

#include <string>
#include <vector>

namespace mdprsma {

enum class ConeKind { NonNegative, SecondOrder };

// Contiguous index span [start, start + len) of the variable vector.
struct ConeBlock {
    ConeKind kind = ConeKind::NonNegative;
    uword start = 0;
    uword len = 0;
};

// Standard-form cone program
//
//   maximize  objective^T x
//   s.t.      equality x = rhs,   x in K,
//
// where K is the product of the listed blocks. The blocks must be disjoint
// and together cover every variable; second-order blocks need length >= 2
// (head first, then the tail whose norm it bounds).
struct ConicProgram {
    uword num_vars = 0;
    vec objective;
    sp_mat equality; // num_eq x num_vars
    vec rhs;
    std::vector<ConeBlock> cones;

    uword num_eq() const { return equality.n_rows; }

    void validate() const;

    // Plain-text form, exact round trip through parse().
    std::string dump() const;
    static ConicProgram parse(const std::string &text);
};

// Worst cone-membership margin violation of x: how far any nonnegative entry
// dips below zero, or any second-order tail norm exceeds its head. Zero on K.
double cone_violation(const vec &x, const std::vector<ConeBlock> &cones);

} // namespace mdprsma
