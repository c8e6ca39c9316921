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

#include "mdprsma/conic.hpp"

#include <limits>

namespace mdprsma {

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter, NumericalFailure };

const char *solve_status_name(SolveStatus s);

struct SolveOptions {
    uword max_iters = 100;
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    double static_reg = 1e-10; // added to the KKT diagonal before factoring
    bool trace = false;        // record per-iteration progress
};

struct KktResiduals {
    double primal = std::numeric_limits<double>::infinity();
    double dual = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();

    double worst() const { return std::max(primal, std::max(dual, gap)); }
};

struct SolveIterate {
    uword iter = 0;
    double mu = 0.0;
    double step = 0.0;
    double primal_obj = 0.0; // objective^T x at this iterate
    double dual_obj = 0.0;   // rhs^T y at this iterate
    double gap = 0.0;        // complementarity s^T z / tau^2, nonnegative
    double primal_res = 0.0;
    double dual_res = 0.0;
};

// x always has num_vars entries, y num_eq, z num_vars. For Optimal and
// MaxIter they are the (approximate) primal/dual pair; for Infeasible y,z
// carry the dual ray certificate (rhs^T y < 0, equality^T y in the dual
// cone); for Unbounded x carries the improving primal ray.
struct SolveResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    vec x, y, z;
    double objective = 0.0;
    KktResiduals kkt;
    uword iterations = 0;
    std::vector<SolveIterate> trace;
};

SolveResult solve(const ConicProgram &prog, const SolveOptions &opts = {});

// Stationarity, feasibility, and complementarity of a candidate pair under
// the program's maximize convention: the dual slack is equality^T y - objective.
KktResiduals kkt_residuals(const ConicProgram &prog, const vec &x, const vec &y);

} // namespace mdprsma
