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

#include "mdprsma/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace mdprsma {

vec complex_to_real(const cx_vec &v) {
    return arma::join_cols(vec(arma::real(v)), vec(arma::imag(v)));
}

cx_vec real_to_complex(const vec &x) {
    require(x.n_elem % 2 == 0, "real_to_complex: length must be even");
    const uword n = x.n_elem / 2;
    return cx_vec(vec(x.head(n)), vec(x.tail(n)));
}

mat complex_to_real(const cx_mat &psi) {
    require(psi.is_square(), "complex_to_real: quadratic form must be square");
    const double scale = std::max(1.0, arma::norm(psi, "fro"));
    require(arma::norm(cx_mat(psi - psi.t()), "fro") <= 1e-10 * scale,
            "complex_to_real: quadratic form must be Hermitian");
    const mat re = arma::real(psi);
    const mat im = arma::imag(psi);
    return arma::join_rows(arma::join_cols(re, im), arma::join_cols(mat(-im), re));
}

cx_mat psd_factor(const cx_mat &psi) {
    require(psi.is_square(), "psd_factor: matrix must be square");
    const uword n = psi.n_rows;
    if (n == 0)
        return cx_mat(0, 0);
    const double scale = std::max(1.0, arma::norm(psi, "fro"));
    require(arma::norm(cx_mat(psi - psi.t()), "fro") <= 1e-10 * scale,
            "psd_factor: matrix must be Hermitian");

    vec lam;
    cx_mat vecs;
    const cx_mat sym = 0.5 * (psi + psi.t());
    require(arma::eig_sym(lam, vecs, sym), "psd_factor: eigendecomposition failed");
    require(lam.min() >= -1e-9 * std::max(1.0, std::abs(lam.max())),
            "psd_factor: matrix is indefinite beyond roundoff");

    const double shift = std::max(0.0, -lam.min()) + 1e-12;
    const vec lifted = lam + shift;
    const double keep_above = 1e-12 * std::max(1.0, lifted.max());

    // eig_sym orders ascending; emit the strongest directions first.
    std::vector<uword> keep;
    for (uword i = n; i-- > 0;)
        if (lifted(i) > keep_above)
            keep.push_back(i);
    cx_mat fac(n, uword(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        fac.col(uword(j)) = vecs.col(keep[j]) * std::sqrt(lifted(keep[j]));
    return fac;
}

namespace {

// Triplet accumulator for the equality block; coordinates never repeat.
class EqBuilder {
  public:
    uword add_row(double rhs) {
        rhs_.push_back(rhs);
        return uword(rhs_.size()) - 1;
    }

    void set(uword row, uword col, double val) {
        if (val != 0.0) {
            rows_.push_back(row);
            cols_.push_back(col);
            vals_.push_back(val);
        }
    }

    sp_mat matrix(uword num_vars) const {
        arma::umat locs(2, uword(rows_.size()));
        vec vals(uword(vals_.size()));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            locs(0, uword(i)) = rows_[i];
            locs(1, uword(i)) = cols_[i];
            vals(uword(i)) = vals_[i];
        }
        return sp_mat(locs, vals, uword(rhs_.size()), num_vars);
    }

    vec rhs() const { return vec(rhs_); }

  private:
    std::vector<uword> rows_, cols_;
    std::vector<double> vals_;
    std::vector<double> rhs_;
};

const cx_mat &column_basis(const StreamTopology &topo, ColumnRef col) {
    if (col.terrestrial)
        return col.col == 0 ? topo.terr_common_basis : topo.terr_private_basis;
    return col.col <= 1 ? topo.sat_common_basis : topo.sat_private_basis;
}

// Quadratics on w = B xi act on xi through B^H L; factor directions that
// project out of the span carry nothing and are dropped.
cx_mat reduce_factor(const cx_mat &basis, const cx_mat &fac) {
    if (basis.n_elem == 0)
        return fac;
    require(basis.n_rows == fac.n_rows, "build_subproblem: factor rows do not match the basis");
    const cx_mat red = basis.t() * fac;
    const double floor = 1e-12 * std::max(1.0, red.n_elem ? arma::norm(red, "fro") : 0.0);
    std::vector<uword> keep;
    for (uword j = 0; j < red.n_cols; ++j)
        if (arma::norm(red.col(j)) > floor)
            keep.push_back(j);
    if (keep.size() == std::size_t(red.n_cols))
        return red;
    cx_mat out(red.n_rows, uword(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        out.col(uword(j)) = red.col(keep[j]);
    return out;
}

bool is_cu_side(StreamLayer layer) {
    return layer == StreamLayer::spc_cu || layer == StreamLayer::lpc_cu ||
           layer == StreamLayer::p_cu;
}

const LayerInstanceCoeffs &instance_coeffs(const WmmseCoefficients &co, StreamLayer layer,
                                           uword user) {
    switch (layer) {
    case StreamLayer::spc_su:
        return co.spc_su.at(user);
    case StreamLayer::spc_cu:
        return co.spc_cu.at(user);
    case StreamLayer::cpc_su:
        return co.cpc_su.at(user);
    case StreamLayer::lpc_cu:
        return co.lpc_cu.at(user);
    case StreamLayer::p_su:
        return co.p_su.at(user);
    case StreamLayer::p_cu:
        return co.p_cu.at(user);
    }
    throw std::invalid_argument("instance_coeffs: unknown layer");
}

} // namespace

Subproblem build_subproblem(const WmmseCoefficients &coeffs, const StreamTopology &topo,
                            const SubproblemDims &dims, double sat_budget, double terr_budget,
                            double sigma2) {
    require(dims.ks + dims.kt >= 1, "build_subproblem: need at least one user");
    require(dims.ks == 0 || dims.n_sat >= 1, "build_subproblem: satellite users need an array");
    require(dims.kt == 0 || dims.n_bs >= 1, "build_subproblem: terrestrial users need an array");
    require(std::isfinite(sat_budget) && sat_budget >= 0.0,
            "build_subproblem: satellite budget must be nonnegative");
    require(std::isfinite(terr_budget) && terr_budget >= 0.0,
            "build_subproblem: terrestrial budget must be nonnegative");
    require(sigma2 > 0.0, "build_subproblem: noise power must be positive");

    const bool spc_on = topo.super_common;
    const bool cpc_on = topo.sat_common;
    const bool lpc_on = topo.terr_common && dims.kt > 0;

    auto expect = [](std::size_t got, uword want, const char *what) {
        require(got == std::size_t(want), what);
    };
    expect(coeffs.spc_su.size(), spc_on ? dims.ks : 0, "build_subproblem: spc_su count mismatch");
    expect(coeffs.spc_cu.size(), spc_on ? dims.kt : 0, "build_subproblem: spc_cu count mismatch");
    expect(coeffs.cpc_su.size(), cpc_on ? dims.ks : 0, "build_subproblem: cpc_su count mismatch");
    expect(coeffs.lpc_cu.size(), lpc_on ? dims.kt : 0, "build_subproblem: lpc_cu count mismatch");
    expect(coeffs.p_su.size(), dims.ks, "build_subproblem: p_su count mismatch");
    expect(coeffs.p_cu.size(), dims.kt, "build_subproblem: p_cu count mismatch");

    struct Inst {
        StreamLayer layer;
        uword user;
    };
    std::vector<Inst> insts;
    if (spc_on) {
        for (uword k = 0; k < dims.ks; ++k)
            insts.push_back({StreamLayer::spc_su, k});
        for (uword k = 0; k < dims.kt; ++k)
            insts.push_back({StreamLayer::spc_cu, k});
    }
    if (cpc_on)
        for (uword k = 0; k < dims.ks; ++k)
            insts.push_back({StreamLayer::cpc_su, k});
    if (lpc_on)
        for (uword k = 0; k < dims.kt; ++k)
            insts.push_back({StreamLayer::lpc_cu, k});
    for (uword k = 0; k < dims.ks; ++k)
        insts.push_back({StreamLayer::p_su, k});
    for (uword k = 0; k < dims.kt; ++k)
        insts.push_back({StreamLayer::p_cu, k});
    const uword n_inst = uword(insts.size());

    SubproblemLayout lay;
    uword next = 0;
    auto take = [&next](uword n) {
        uvec v(n);
        for (uword i = 0; i < n; ++i)
            v(i) = next++;
        return v;
    };
    lay.r_min = next++;
    if (spc_on)
        lay.c_spc = take(dims.ks);
    if (cpc_on)
        lay.c_cpc = take(dims.ks);
    if (lpc_on)
        lay.c_lpc = take(dims.kt);
    lay.alpha_su = take(dims.ks);
    lay.alpha_cu = take(dims.kt);
    lay.t = take(n_inst);
    lay.s_rate = take(n_inst);
    lay.s_link_su = take(dims.ks);
    lay.s_link_cu = take(dims.kt);
    lay.orthant_len = next;

    const uword sat_dim = 2 * dims.n_sat;
    const uword terr_dim = 2 * dims.n_bs;

    auto column_cdim = [&](ColumnRef col) -> uword {
        const cx_mat &b = column_basis(topo, col);
        const uword full = col.terrestrial ? terr_dim : sat_dim;
        if (b.n_elem == 0)
            return full;
        require(b.n_rows == full, "build_subproblem: basis row count mismatch");
        const cx_mat gram = b.t() * b;
        require(arma::norm(cx_mat(gram - arma::eye<cx_mat>(b.n_cols, b.n_cols)), "fro") <=
                    1e-10 * std::max(1.0, double(b.n_cols)),
                "build_subproblem: column basis must be orthonormal");
        return b.n_cols;
    };

    std::vector<bool> sat_active(2 + dims.ks, false);
    sat_active[0] = spc_on;
    sat_active[1] = cpc_on;
    for (uword k = 0; k < dims.ks; ++k)
        sat_active[2 + k] = true;
    std::vector<bool> terr_active(1 + dims.kt, false);
    terr_active[0] = lpc_on;
    for (uword k = 0; k < dims.kt; ++k)
        terr_active[1 + k] = true;

    lay.sat_cols.assign(sat_active.size(), {});
    lay.terr_cols.assign(terr_active.size(), {});

    // A power block with no live columns would be a bare cone head; skip the
    // block entirely so every emitted second-order block has a tail.
    const bool sat_any =
        std::any_of(sat_active.begin(), sat_active.end(), [](bool b) { return b; });
    uword sat_head = 0, sat_block_len = 0;
    if (sat_any) {
        sat_head = next++;
        for (uword j = 0; j < sat_active.size(); ++j) {
            if (!sat_active[j])
                continue;
            const uword cd = column_cdim({false, j});
            lay.sat_cols[j] = {next, cd};
            next += 2 * cd;
        }
        sat_block_len = next - sat_head;
    }

    const bool terr_any =
        std::any_of(terr_active.begin(), terr_active.end(), [](bool b) { return b; });
    uword terr_head = 0, terr_block_len = 0;
    if (terr_any) {
        terr_head = next++;
        for (uword j = 0; j < terr_active.size(); ++j) {
            if (!terr_active[j])
                continue;
            const uword cd = column_cdim({true, j});
            lay.terr_cols[j] = {next, cd};
            next += 2 * cd;
        }
        terr_block_len = next - terr_head;
    }

    std::vector<QuadraticConstraintSpec> specs(insts.size());
    std::vector<std::pair<uword, uword>> quad_span(insts.size());
    for (uword i = 0; i < n_inst; ++i) {
        const StreamLayer layer = insts[i].layer;
        const uword user = insts[i].user;
        const LayerInstanceCoeffs &c = instance_coeffs(coeffs, layer, user);
        QuadraticConstraintSpec &q = specs[i];
        q.layer = layer;
        q.user = user;
        q.target = target_column(layer, user);
        q.constant = c.constant(sigma2);

        // Each side's quadratic matrix is shared by all heard columns on
        // that side; factor once and fold the per-column basis in.
        cx_mat l_sat, l_terr;
        bool have_sat = false, have_terr = false;
        for (const ColumnRef &col : heard_columns(layer, dims.ks, dims.kt, topo)) {
            const cx_mat &psi =
                col.terrestrial ? c.psi_bar : (is_cu_side(layer) ? c.psi_bar_intf : c.psi_bar);
            cx_mat &cache = col.terrestrial ? l_terr : l_sat;
            bool &have = col.terrestrial ? have_terr : have_sat;
            if (!have) {
                require(psi.n_rows == (col.terrestrial ? terr_dim : sat_dim),
                        "build_subproblem: quadratic matrix size mismatch");
                cache = psd_factor(psi);
                have = true;
            }
            q.factors.emplace_back(col, reduce_factor(column_basis(topo, col), cache));
        }

        require(c.omega_bar.n_elem == (q.target.terrestrial ? terr_dim : sat_dim),
                "build_subproblem: linear term size mismatch");
        const cx_mat &tb = column_basis(topo, q.target);
        q.omega = tb.n_elem ? cx_vec(tb.t() * c.omega_bar) : c.omega_bar;

        switch (layer) {
        case StreamLayer::spc_su:
        case StreamLayer::spc_cu:
            q.rhs_vars = lay.c_spc;
            break;
        case StreamLayer::cpc_su:
            q.rhs_vars = lay.c_cpc;
            break;
        case StreamLayer::lpc_cu:
            q.rhs_vars = lay.c_lpc;
            break;
        case StreamLayer::p_su:
            q.rhs_vars = uvec{lay.alpha_su(user)};
            break;
        case StreamLayer::p_cu:
            q.rhs_vars = uvec{lay.alpha_cu(user)};
            break;
        }

        uword vrows = 0;
        for (const auto &f : q.factors)
            vrows += 2 * f.second.n_cols;
        quad_span[i] = {next, 2 + vrows};
        next += 2 + vrows;
    }
    lay.num_vars = next;

    ConicProgram prog;
    prog.num_vars = lay.num_vars;
    prog.objective = vec(lay.num_vars, arma::fill::zeros);
    prog.objective(lay.r_min) = 1.0;
    prog.cones.push_back({ConeKind::NonNegative, 0, lay.orthant_len});
    if (sat_any)
        prog.cones.push_back({ConeKind::SecondOrder, sat_head, sat_block_len});
    if (terr_any)
        prog.cones.push_back({ConeKind::SecondOrder, terr_head, terr_block_len});
    for (uword i = 0; i < n_inst; ++i)
        prog.cones.push_back({ConeKind::SecondOrder, quad_span[i].first, quad_span[i].second});

    EqBuilder eq;
    if (sat_any) {
        const uword r = eq.add_row(std::sqrt(sat_budget));
        eq.set(r, sat_head, 1.0);
    }
    if (terr_any) {
        const uword r = eq.add_row(std::sqrt(terr_budget));
        eq.set(r, terr_head, 1.0);
    }

    for (uword i = 0; i < n_inst; ++i) {
        const QuadraticConstraintSpec &q = specs[i];
        const uword u0 = quad_span[i].first;
        const uword u1 = quad_span[i].first + quad_span[i].second - 1;
        {
            const uword r = eq.add_row(1.0);
            eq.set(r, u0, 1.0);
            eq.set(r, lay.t(i), -1.0);
        }
        {
            const uword r = eq.add_row(1.0);
            eq.set(r, u1, 1.0);
            eq.set(r, lay.t(i), 1.0);
        }

        uword vpos = u0 + 1;
        for (const auto &[col, fac] : q.factors) {
            const SubproblemLayout::ColumnVars cv =
                col.terrestrial ? lay.terr_cols[col.col] : lay.sat_cols[col.col];
            require(fac.n_rows == cv.cdim, "build_subproblem: factor does not fit its column");
            for (uword fc = 0; fc < fac.n_cols; ++fc) {
                // Two real rows per factor direction: the cone rows carry
                // 2 Re(l^H w) and 2 Im(l^H w).
                const uword ra = eq.add_row(0.0);
                const uword rb = eq.add_row(0.0);
                eq.set(ra, vpos, 1.0);
                eq.set(rb, vpos + 1, 1.0);
                for (uword j = 0; j < cv.cdim; ++j) {
                    const double lre = fac(j, fc).real();
                    const double lim = fac(j, fc).imag();
                    eq.set(ra, cv.start + j, -2.0 * lre);
                    eq.set(ra, cv.start + cv.cdim + j, -2.0 * lim);
                    eq.set(rb, cv.start + j, 2.0 * lim);
                    eq.set(rb, cv.start + cv.cdim + j, -2.0 * lre);
                }
                vpos += 2;
            }
        }

        const uword lr = eq.add_row(-q.constant);
        const SubproblemLayout::ColumnVars tv =
            q.target.terrestrial ? lay.terr_cols[q.target.col] : lay.sat_cols[q.target.col];
        require(q.omega.n_elem == tv.cdim, "build_subproblem: linear term does not fit its column");
        for (uword j = 0; j < tv.cdim; ++j) {
            eq.set(lr, tv.start + j, 2.0 * q.omega(j).real());
            eq.set(lr, tv.start + tv.cdim + j, 2.0 * q.omega(j).imag());
        }
        eq.set(lr, lay.t(i), -1.0);
        for (uword idx : q.rhs_vars)
            eq.set(lr, idx, -1.0);
        eq.set(lr, lay.s_rate(i), -1.0);
    }

    for (uword k = 0; k < dims.ks; ++k) {
        const uword r = eq.add_row(0.0);
        eq.set(r, lay.alpha_su(k), 1.0);
        if (spc_on)
            eq.set(r, lay.c_spc(k), 1.0);
        if (cpc_on)
            eq.set(r, lay.c_cpc(k), 1.0);
        eq.set(r, lay.r_min, -1.0);
        eq.set(r, lay.s_link_su(k), -1.0);
    }
    for (uword k = 0; k < dims.kt; ++k) {
        const uword r = eq.add_row(0.0);
        eq.set(r, lay.alpha_cu(k), 1.0);
        if (lpc_on)
            eq.set(r, lay.c_lpc(k), 1.0);
        eq.set(r, lay.r_min, -1.0);
        eq.set(r, lay.s_link_cu(k), -1.0);
    }

    prog.equality = eq.matrix(lay.num_vars);
    prog.rhs = eq.rhs();
    prog.validate();

    Subproblem sp;
    sp.program = std::move(prog);
    sp.layout = std::move(lay);
    sp.constraints = std::move(specs);
    return sp;
}

PrecoderSolution extract_solution(const SubproblemLayout &layout, const StreamTopology &topo,
                                  const SubproblemDims &dims, const vec &x) {
    require(x.n_elem == layout.num_vars, "extract_solution: point length mismatch");
    require(layout.sat_cols.size() == std::size_t(2 + dims.ks) &&
                layout.terr_cols.size() == std::size_t(1 + dims.kt),
            "extract_solution: layout does not match the dimensions");

    PrecoderSolution sol = PrecoderSolution::zeros(dims.n_sat, dims.n_bs, dims.ks, dims.kt);
    auto expand = [&](const SubproblemLayout::ColumnVars &cv, ColumnRef col) -> cx_vec {
        const cx_vec xi = real_to_complex(x.subvec(cv.start, cv.start + 2 * cv.cdim - 1));
        const cx_mat &b = column_basis(topo, col);
        return b.n_elem ? cx_vec(b * xi) : xi;
    };
    for (uword j = 0; j < layout.sat_cols.size(); ++j)
        if (layout.sat_cols[j].cdim > 0)
            sol.w.col(j) = expand(layout.sat_cols[j], {false, j});
    for (uword j = 0; j < layout.terr_cols.size(); ++j)
        if (layout.terr_cols[j].cdim > 0)
            sol.p.col(j) = expand(layout.terr_cols[j], {true, j});

    for (uword k = 0; k < layout.c_spc.n_elem; ++k)
        sol.c_spc(k) = x(layout.c_spc(k));
    for (uword k = 0; k < layout.c_cpc.n_elem; ++k)
        sol.c_cpc(k) = x(layout.c_cpc(k));
    for (uword k = 0; k < layout.c_lpc.n_elem; ++k)
        sol.c_lpc(k) = x(layout.c_lpc(k));
    return sol;
}

double max_constraint_violation(const Subproblem &sp, const WmmseCoefficients &coeffs,
                                const StreamTopology &topo, const SubproblemDims &dims,
                                const vec &x, double sat_budget, double terr_budget,
                                double sigma2) {
    const SubproblemLayout &lay = sp.layout;
    require(x.n_elem == lay.num_vars, "max_constraint_violation: point length mismatch");
    const PrecoderSolution sol = extract_solution(lay, topo, dims, x);

    double worst = sol.sat_power() - sat_budget;
    worst = std::max(worst, sol.terr_power() - terr_budget);

    for (const QuadraticConstraintSpec &q : sp.constraints) {
        const LayerInstanceCoeffs &c = instance_coeffs(coeffs, q.layer, q.user);
        const double rate = surrogate_rate(c, q.layer, q.user, sol, topo, sigma2);
        double need = 0.0;
        for (uword idx : q.rhs_vars)
            need += x(idx);
        worst = std::max(worst, need - rate);
    }

    const double r_min = x(lay.r_min);
    worst = std::max(worst, -r_min);
    for (uword k = 0; k < dims.ks; ++k) {
        double total = x(lay.alpha_su(k));
        if (lay.c_spc.n_elem)
            total += x(lay.c_spc(k));
        if (lay.c_cpc.n_elem)
            total += x(lay.c_cpc(k));
        worst = std::max(worst, r_min - total);
        worst = std::max(worst, -x(lay.alpha_su(k)));
    }
    for (uword k = 0; k < dims.kt; ++k) {
        double total = x(lay.alpha_cu(k));
        if (lay.c_lpc.n_elem)
            total += x(lay.c_lpc(k));
        worst = std::max(worst, r_min - total);
        worst = std::max(worst, -x(lay.alpha_cu(k)));
    }
    auto least = [](const vec &v) { return v.n_elem ? v.min() : 0.0; };
    worst = std::max(worst, -std::min({least(sol.c_spc), least(sol.c_cpc), least(sol.c_lpc)}));
    return worst;
}

double implied_min_rate(const WmmseCoefficients &coeffs, const StreamTopology &topo,
                        const SubproblemLayout &layout, const SubproblemDims &dims, const vec &x,
                        double sigma2) {
    require(x.n_elem == layout.num_vars, "implied_min_rate: point length mismatch");
    const PrecoderSolution sol = extract_solution(layout, topo, dims, x);

    double worst = arma::datum::inf;
    for (uword k = 0; k < dims.ks; ++k) {
        double total =
            surrogate_rate(instance_coeffs(coeffs, StreamLayer::p_su, k), StreamLayer::p_su, k,
                           sol, topo, sigma2);
        if (layout.c_spc.n_elem)
            total += x(layout.c_spc(k));
        if (layout.c_cpc.n_elem)
            total += x(layout.c_cpc(k));
        worst = std::min(worst, total);
    }
    for (uword k = 0; k < dims.kt; ++k) {
        double total =
            surrogate_rate(instance_coeffs(coeffs, StreamLayer::p_cu, k), StreamLayer::p_cu, k,
                           sol, topo, sigma2);
        if (layout.c_lpc.n_elem)
            total += x(layout.c_lpc(k));
        worst = std::min(worst, total);
    }
    return worst;
}

} // namespace mdprsma
