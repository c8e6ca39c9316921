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
#include "mdprsma/wmmse.hpp"

#include <utility>
#include <vector>

namespace mdprsma {

// Stacks [Re v; Im v] so real inner products carry the complex correlation:
// dot(complex_to_real(a), complex_to_real(b)) = Re(a^H b).
vec complex_to_real(const cx_vec &v);

// Inverse of the stacking; the length must be even.
cx_vec real_to_complex(const vec &x);

// Real form [[Re, -Im], [Im, Re]] of a Hermitian quadratic form, so that
// w^H Psi w = x^T M x with x = complex_to_real(w). Non-Hermitian input is
// rejected.
mat complex_to_real(const cx_mat &psi);

// Factor with L L^H = psi + eps I for eps = max(0, -lambda_min) + 1e-12.
// Columns whose lifted eigenvalue is at or below 1e-12 max(1, lambda_max)
// are dropped, so a zero matrix factors into zero columns and the column
// count reveals the numerical rank. Input indefinite beyond roundoff is
// rejected.
cx_mat psd_factor(const cx_mat &psi);

struct SubproblemDims {
    uword n_sat = 0; // transmit element pairs; precoder banks have 2x rows
    uword n_bs = 0;
    uword ks = 0;
    uword kt = 0;
};

// One linearized rate constraint in reduced column coordinates:
//   constant + 2 Re(omega^H xi_target) - sum_cols |L_col^H xi_col|^2
// must cover the sum of the rhs variables (the pooled portions of a common
// layer, or one private-rate bound). Column bases are folded into omega and
// the factors, so both act on the free coordinates directly.
struct QuadraticConstraintSpec {
    StreamLayer layer = StreamLayer::p_su;
    uword user = 0;
    ColumnRef target;
    cx_vec omega;
    double constant = 0.0;
    std::vector<std::pair<ColumnRef, cx_mat>> factors; // heard column, its L
    uvec rhs_vars;
};

// Index map of the assembled variable vector. The leading block is the
// nonnegative orthant: worst rate, common-rate portions of the active
// layers, private-rate bounds, one epigraph slack and one surplus per rate
// constraint, and one surplus per link. Precoder coordinates live inside the
// power cones, one [sqrt(budget); stacked column coordinates] block per
// transmitter; every rate constraint then owns a [1 + t; 2 L^T x; 1 - t]
// cone that pins its epigraph slack t above the quadratic terms.
struct SubproblemLayout {
    uword r_min = 0;
    uvec c_spc, c_cpc, c_lpc; // empty when the layer is off
    uvec alpha_su, alpha_cu;
    uvec t;
    uvec s_rate;
    uvec s_link_su, s_link_cu;
    uword orthant_len = 0;

    struct ColumnVars {
        uword start = 0;
        uword cdim = 0; // complex coordinates; zero marks an inactive column
    };
    std::vector<ColumnVars> sat_cols;  // aligned with PrecoderSolution::w
    std::vector<ColumnVars> terr_cols; // aligned with PrecoderSolution::p
    uword num_vars = 0;
};

struct Subproblem {
    ConicProgram program;
    SubproblemLayout layout;
    std::vector<QuadraticConstraintSpec> constraints;
};

// Compiles one inner iteration into a cone program: maximize the worst link
// rate subject to the linearized per-listener rate constraints, the pooled
// common-rate accounting, and one power ball per transmitter. Portions, rate
// bounds, and the worst rate are kept nonnegative; the iterate the
// coefficients were averaged at always remains feasible.
Subproblem build_subproblem(const WmmseCoefficients &coeffs, const StreamTopology &topo,
                            const SubproblemDims &dims, double sat_budget, double terr_budget,
                            double sigma2 = 1.0);

// Precoder bank and rate portions at a solver point; basis-reduced columns
// are expanded back to the element space, inactive columns stay zero.
PrecoderSolution extract_solution(const SubproblemLayout &layout, const StreamTopology &topo,
                                  const SubproblemDims &dims, const vec &x);

// Worst shortfall at x across the original constraint set, evaluated through
// the complex-domain rate expressions on the extracted solution: linearized
// rates against their portion sums, worst-rate rows, sign constraints, and
// the power budgets. Nonpositive means feasible.
double max_constraint_violation(const Subproblem &sp, const WmmseCoefficients &coeffs,
                                const StreamTopology &topo, const SubproblemDims &dims,
                                const vec &x, double sat_budget, double terr_budget,
                                double sigma2 = 1.0);

// Worst link total implied by the linearized private rates plus the
// extracted portions; coincides with the optimal objective at a solver
// optimum.
double implied_min_rate(const WmmseCoefficients &coeffs, const StreamTopology &topo,
                        const SubproblemLayout &layout, const SubproblemDims &dims,
                        const vec &x, double sigma2 = 1.0);

} // namespace mdprsma
