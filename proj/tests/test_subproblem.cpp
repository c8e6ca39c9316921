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

#include "doctest.h"

#include "mdprsma/conic_solver.hpp"
#include "mdprsma/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

using namespace mdprsma;

namespace {

cx_vec random_cx_vec(uword n, RngStream &rng) {
    cx_vec v(n);
    for (uword i = 0; i < n; ++i)
        v(i) = rng.cnormal();
    return v;
}

ChannelEnsemble random_ensemble(uword n_sat, uword n_bs, uword ks, uword kt, uword samples,
                                RngStream &rng) {
    ChannelEnsemble e;
    e.n_sat = n_sat;
    e.n_bs = n_bs;
    e.num_samples = samples;
    e.f_su.set_size(ks);
    e.z_cu.set_size(kt);
    e.h_cu.set_size(2 * n_bs, kt);
    for (uword k = 0; k < ks; ++k) {
        e.f_su(k).set_size(2 * n_sat, samples);
        for (uword s = 0; s < samples; ++s)
            e.f_su(k).col(s) = random_cx_vec(2 * n_sat, rng);
    }
    for (uword k = 0; k < kt; ++k) {
        e.z_cu(k).set_size(2 * n_sat, samples);
        for (uword s = 0; s < samples; ++s)
            e.z_cu(k).col(s) = 0.4 * random_cx_vec(2 * n_sat, rng);
        e.h_cu.col(k) = random_cx_vec(2 * n_bs, rng);
    }
    return e;
}

// All-zero quadratics and linear terms; constant(1) reduces to nu_bar, so the
// instance contributes a fixed rate bound and nothing else.
LayerInstanceCoeffs flat_instance(double constant, uword sat_dim, uword terr_dim,
                                  StreamLayer layer) {
    LayerInstanceCoeffs c;
    c.u_bar = 1.0;
    c.nu_bar = constant;
    const bool cu = layer == StreamLayer::spc_cu || layer == StreamLayer::lpc_cu ||
                    layer == StreamLayer::p_cu;
    const bool terr_target = target_column(layer, 0).terrestrial;
    c.omega_bar = cx_vec(terr_target ? terr_dim : sat_dim, arma::fill::zeros);
    if (cu) {
        c.psi_bar = cx_mat(terr_dim, terr_dim, arma::fill::zeros);
        c.psi_bar_intf = cx_mat(sat_dim, sat_dim, arma::fill::zeros);
    } else {
        c.psi_bar = cx_mat(sat_dim, sat_dim, arma::fill::zeros);
    }
    return c;
}

WmmseCoefficients flat_coeffs(const SubproblemDims &d, const vec &spc_su, const vec &spc_cu,
                              const vec &cpc_su, const vec &lpc_cu, const vec &p_su,
                              const vec &p_cu) {
    const uword sd = 2 * d.n_sat, td = 2 * d.n_bs;
    WmmseCoefficients co;
    for (uword k = 0; k < spc_su.n_elem; ++k)
        co.spc_su.push_back(flat_instance(spc_su(k), sd, td, StreamLayer::spc_su));
    for (uword k = 0; k < spc_cu.n_elem; ++k)
        co.spc_cu.push_back(flat_instance(spc_cu(k), sd, td, StreamLayer::spc_cu));
    for (uword k = 0; k < cpc_su.n_elem; ++k)
        co.cpc_su.push_back(flat_instance(cpc_su(k), sd, td, StreamLayer::cpc_su));
    for (uword k = 0; k < lpc_cu.n_elem; ++k)
        co.lpc_cu.push_back(flat_instance(lpc_cu(k), sd, td, StreamLayer::lpc_cu));
    for (uword k = 0; k < p_su.n_elem; ++k)
        co.p_su.push_back(flat_instance(p_su(k), sd, td, StreamLayer::p_su));
    for (uword k = 0; k < p_cu.n_elem; ++k)
        co.p_cu.push_back(flat_instance(p_cu(k), sd, td, StreamLayer::p_cu));
    return co;
}

const LayerInstanceCoeffs &coeff_of(const WmmseCoefficients &co, StreamLayer layer, uword user) {
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
    default:
        return co.p_cu.at(user);
    }
}

// Independent max-min allocator for the degenerate program with fixed rate
// bounds: a worst rate r is reachable iff each network covers its users'
// deficits from the pools those users draw on. Satellite users draw on the
// super-common and satellite-common pools jointly, so only the pool sums
// matter.
double allocation_oracle(const vec &su_base, const vec &cu_base, double su_pool, double cu_pool) {
    auto feasible = [&](double r) {
        double need = 0.0;
        for (uword k = 0; k < su_base.n_elem; ++k)
            need += std::max(0.0, r - su_base(k));
        if (need > su_pool + 1e-15)
            return false;
        double cneed = 0.0;
        for (uword k = 0; k < cu_base.n_elem; ++k)
            cneed += std::max(0.0, r - cu_base(k));
        return cneed <= cu_pool + 1e-15;
    };
    double lo = 0.0, hi = 100.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

// Constraint value straight from the reduced-coordinate spec, bypassing the
// extraction path the library checkers use.
double spec_rate(const QuadraticConstraintSpec &q, const SubproblemLayout &lay, const vec &x) {
    auto coords = [&](ColumnRef c) {
        const SubproblemLayout::ColumnVars cv =
            c.terrestrial ? lay.terr_cols[c.col] : lay.sat_cols[c.col];
        return real_to_complex(x.subvec(cv.start, cv.start + 2 * cv.cdim - 1));
    };
    double val = q.constant + 2.0 * std::real(arma::cdot(q.omega, coords(q.target)));
    for (const auto &[col, fac] : q.factors)
        val -= std::pow(arma::norm(fac.t() * coords(col)), 2.0);
    return val;
}

} // namespace

TEST_CASE("real embeddings carry complex products exactly") {
    RngStream rng(301);
    const uword n = 4;
    cx_mat a(n, n);
    for (uword i = 0; i < n; ++i)
        for (uword j = 0; j < n; ++j)
            a(i, j) = rng.cnormal();
    const cx_mat psi = 0.5 * (a + a.t());
    const mat m = complex_to_real(psi);
    REQUIRE(m.n_rows == 2 * n);

    for (int rep = 0; rep < 8; ++rep) {
        const cx_vec w = random_cx_vec(n, rng);
        const vec x = complex_to_real(w);
        const double real_form = arma::dot(x, m * x);
        const double complex_form = std::real(arma::cdot(w, psi * w));
        CHECK(std::abs(real_form - complex_form) <= 1e-12 * std::max(1.0, std::abs(complex_form)));
    }

    const mat ident = complex_to_real(cx_mat(arma::eye<cx_mat>(3, 3)));
    CHECK(arma::norm(ident - arma::eye(6, 6), "fro") == 0.0);

    // A purely imaginary linear coefficient is invisible to a real vector.
    cx_vec omega(3, arma::fill::zeros);
    omega(0) = cx(0.0, 1.3);
    omega(2) = cx(0.0, -0.4);
    cx_vec w_real(3, arma::fill::zeros);
    w_real(0) = 2.0;
    w_real(2) = -5.0;
    CHECK(arma::dot(complex_to_real(omega), complex_to_real(w_real)) == 0.0);

    const cx_vec v = random_cx_vec(5, rng);
    CHECK(arma::norm(real_to_complex(complex_to_real(v)) - v) == 0.0);

    CHECK_THROWS_AS((void)complex_to_real(a), std::invalid_argument);
    CHECK_THROWS_AS((void)complex_to_real(cx_mat(2, 3, arma::fill::zeros)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)real_to_complex(vec(3, arma::fill::ones)), std::invalid_argument);
}

TEST_CASE("psd_factor reconstructs and reveals rank") {
    RngStream rng(302);

    CHECK(psd_factor(cx_mat(3, 3, arma::fill::zeros)).n_cols == 0);

    const cx_vec c = random_cx_vec(4, rng);
    const cx_mat rank1 = c * c.t();
    const cx_mat l1 = psd_factor(rank1);
    CHECK(l1.n_cols == 1);
    CHECK(arma::norm(cx_mat(l1 * l1.t() - rank1), "fro") <=
          1e-10 * (1.0 + arma::norm(rank1, "fro")));

    cx_mat a(5, 3);
    for (uword i = 0; i < 5; ++i)
        for (uword j = 0; j < 3; ++j)
            a(i, j) = rng.cnormal();
    const cx_mat psi = a * a.t();
    const cx_mat l = psd_factor(psi);
    CHECK(l.n_cols == 3);
    CHECK(arma::norm(cx_mat(l * l.t() - psi), "fro") <= 1e-9);

    // Slightly negative eigenvalues are roundoff and get lifted.
    cx_mat near_psd(2, 2, arma::fill::zeros);
    near_psd(0, 0) = 1.0;
    near_psd(1, 1) = -5e-10;
    const cx_mat ln = psd_factor(near_psd);
    CHECK(ln.n_cols == 1);

    cx_mat indef(2, 2, arma::fill::zeros);
    indef(0, 0) = 1.0;
    indef(1, 1) = -0.5;
    CHECK_THROWS_AS((void)psd_factor(indef), std::invalid_argument);
    CHECK_THROWS_AS((void)psd_factor(cx_mat(2, 3, arma::fill::zeros)), std::invalid_argument);
}

TEST_CASE("zero-coefficient program reduces to the allocation LP") {
    const SubproblemDims dims{1, 1, 2, 1};
    const StreamTopology topo = StreamTopology::full_rsma();

    const vec spc_su{0.9, 0.6}, spc_cu{0.7};
    const vec cpc_su{0.5, 0.4};
    const vec lpc_cu{0.3};
    const vec p_su{0.5, 1.0};

    SUBCASE("terrestrial side binds") {
        const vec p_cu{0.8};
        const auto co = flat_coeffs(dims, spc_su, spc_cu, cpc_su, lpc_cu, p_su, p_cu);
        const Subproblem sp = build_subproblem(co, topo, dims, 1.0, 1.0);
        const SolveResult res = solve(sp.program);
        REQUIRE(res.status == SolveStatus::Optimal);

        const double pool_su = std::min({0.9, 0.6, 0.7}) + std::min(0.5, 0.4);
        const double want = allocation_oracle(p_su, p_cu, pool_su, 0.3);
        CHECK(want == doctest::Approx(1.1).epsilon(1e-12));
        CHECK(std::abs(res.x(sp.layout.r_min) - want) <= 1e-6);
        CHECK(std::abs(res.objective - res.x(sp.layout.r_min)) <= 1e-9);
        CHECK(res.kkt.worst() <= 1e-7);
        CHECK(max_constraint_violation(sp, co, topo, dims, res.x, 1.0, 1.0) <= 1e-6);
    }

    SUBCASE("satellite side binds when the terrestrial user is rich") {
        const vec p_cu{2.5};
        const auto co = flat_coeffs(dims, spc_su, spc_cu, cpc_su, lpc_cu, p_su, p_cu);
        const Subproblem sp = build_subproblem(co, topo, dims, 1.0, 1.0);
        const SolveResult res = solve(sp.program);
        REQUIRE(res.status == SolveStatus::Optimal);

        const double want = allocation_oracle(p_su, p_cu, 1.0, 0.3);
        CHECK(want == doctest::Approx(1.25).epsilon(1e-12));
        CHECK(std::abs(res.x(sp.layout.r_min) - want) <= 1e-6);

        // Pool accounting survives the round trip.
        const PrecoderSolution sol = extract_solution(sp.layout, topo, dims, res.x);
        CHECK(arma::accu(sol.c_spc) <= 0.6 + 1e-6);
        CHECK(arma::accu(sol.c_cpc) <= 0.4 + 1e-6);
        CHECK(arma::accu(sol.c_lpc) <= 0.3 + 1e-6);
        CHECK(sol.c_spc.min() >= -1e-9);
    }
}

TEST_CASE("single-user program returns the matched filter and its capacity") {
    const SubproblemDims dims{2, 1, 1, 0};
    const StreamTopology topo = StreamTopology::private_only();
    const double power = 4.0;

    cx_vec h(4);
    h(0) = cx(0.9, 0.3);
    h(1) = cx(-0.6, 0.8);
    h(2) = cx(0.2, -1.1);
    h(3) = cx(0.45, 0.15);

    ChannelEnsemble ens;
    ens.n_sat = 2;
    ens.n_bs = 1;
    ens.num_samples = 1;
    ens.f_su.set_size(1);
    ens.f_su(0) = cx_mat(h);
    ens.z_cu.set_size(0);
    ens.h_cu.set_size(2, 0);

    PrecoderSolution sol0 = PrecoderSolution::zeros(2, 1, 1, 0);
    sol0.w.col(2) = std::sqrt(power) / arma::norm(h) * h;

    const WmmseCoefficients co = step1_coefficients(ens, sol0, topo);
    const Subproblem sp = build_subproblem(co, topo, dims, power, 0.0);

    // A tighter gap keeps the argmax sharp along the power boundary; the
    // centering term pins the flat directions, so the filter comes back to
    // far better than the tolerance below.
    SolveOptions opts;
    opts.gap_tol = 1e-9;
    opts.feas_tol = 1e-9;
    const SolveResult res = solve(sp.program, opts);
    REQUIRE(res.status == SolveStatus::Optimal);

    // At the matched filter the linearization is exact, so the program's
    // optimum is the beamforming capacity and its argmax is the filter again.
    const double capacity = std::log2(1.0 + power * std::pow(arma::norm(h), 2.0));
    CHECK(std::abs(res.x(sp.layout.r_min) - capacity) <= 1e-6);

    const PrecoderSolution sol = extract_solution(sp.layout, topo, dims, res.x);
    CHECK(arma::norm(sol.w.col(2) - sol0.w.col(2)) <= 1e-4 * arma::norm(sol0.w.col(2)));
    CHECK(std::abs(sol.sat_power() - power) <= 1e-6);
    CHECK(std::abs(res.x(sp.layout.alpha_su(0)) - res.x(sp.layout.r_min)) <= 1e-7);

    CHECK(res.kkt.worst() <= 1e-7);
    CHECK(max_constraint_violation(sp, co, topo, dims, res.x, power, 0.0) <= 1e-6);
    CHECK(std::abs(implied_min_rate(co, topo, sp.layout, dims, res.x) -
                   res.x(sp.layout.r_min)) <= 1e-6);
}

TEST_CASE("pinned portions beyond the rate bounds are infeasible") {
    const SubproblemDims dims{1, 1, 2, 1};
    const StreamTopology topo = StreamTopology::full_rsma();
    const vec zs2{0.0, 0.0}, zs1{0.0};
    const auto co = flat_coeffs(dims, zs2, zs1, zs2, zs1, zs2, zs1);
    const Subproblem sp = build_subproblem(co, topo, dims, 0.0, 0.0);

    ConicProgram prog = sp.program;
    const uword ne = prog.num_eq();
    prog.equality.resize(ne + 1, prog.num_vars);
    prog.equality(ne, sp.layout.c_spc(0)) = 1.0;
    prog.rhs.resize(ne + 1);
    prog.rhs(ne) = 0.5;

    const SolveResult res = solve(prog);
    CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("full network subproblem round-trips its constraints") {
    const SubproblemDims dims{2, 1, 2, 1};
    const StreamTopology topo = StreamTopology::full_rsma();
    const double ps = 10.0, pt = 5.0;
    RngStream rng(23);

    const ChannelEnsemble ens = random_ensemble(2, 1, 2, 1, 6, rng);
    PrecoderSolution sol0 = PrecoderSolution::zeros(2, 1, 2, 1);
    for (uword j = 0; j < sol0.w.n_cols; ++j)
        sol0.w.col(j) = random_cx_vec(4, rng);
    for (uword j = 0; j < sol0.p.n_cols; ++j)
        sol0.p.col(j) = random_cx_vec(2, rng);
    sol0.w *= std::sqrt(0.8 * ps / sol0.sat_power());
    sol0.p *= std::sqrt(0.8 * pt / sol0.terr_power());

    const WmmseCoefficients co = step1_coefficients(ens, sol0, topo);
    const Subproblem sp = build_subproblem(co, topo, dims, ps, pt);

    // Factors reproduce the averaged quadratic forms they encode.
    for (const auto &q : sp.constraints) {
        const LayerInstanceCoeffs &c = coeff_of(co, q.layer, q.user);
        const bool cu = q.layer == StreamLayer::spc_cu || q.layer == StreamLayer::lpc_cu ||
                        q.layer == StreamLayer::p_cu;
        for (const auto &[col, fac] : q.factors) {
            const cx_mat &psi = col.terrestrial ? c.psi_bar : (cu ? c.psi_bar_intf : c.psi_bar);
            CHECK(arma::norm(cx_mat(fac * fac.t() - psi), "fro") <=
                  1e-10 * (1.0 + arma::norm(psi, "fro")));
        }
    }

    const SolveResult res = solve(sp.program);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.kkt.worst() <= 1e-7);

    const double r_min = res.x(sp.layout.r_min);
    CHECK(r_min >= 0.0);
    CHECK(max_constraint_violation(sp, co, topo, dims, res.x, ps, pt) <= 1e-6);
    CHECK(std::abs(implied_min_rate(co, topo, sp.layout, dims, res.x) - r_min) <= 1e-6);

    // Reduced-coordinate constraint values agree with the complex-domain
    // rate expressions evaluated on the extracted bank.
    const PrecoderSolution sol = extract_solution(sp.layout, topo, dims, res.x);
    for (const auto &q : sp.constraints) {
        const LayerInstanceCoeffs &c = coeff_of(co, q.layer, q.user);
        const double direct = surrogate_rate(c, q.layer, q.user, sol, topo);
        const double reduced = spec_rate(q, sp.layout, res.x);
        CHECK(std::abs(direct - reduced) <= 1e-9 * (1.0 + std::abs(direct)));
    }

    CHECK(sol.sat_power() <= ps + 1e-6);
    CHECK(sol.terr_power() <= pt + 1e-6);
}

TEST_CASE("port-restricted columns stay inside their subspace") {
    const StreamTopology topo = StreamTopology::fixed_polarization(2, 1);
    const SubproblemDims dims{2, 1, 2, 1};
    const double ps = 8.0, pt = 4.0;
    RngStream rng(29);

    const ChannelEnsemble ens = random_ensemble(2, 1, 2, 1, 6, rng);
    PrecoderSolution sol0 = PrecoderSolution::zeros(2, 1, 2, 1);
    sol0.w.col(1) = topo.sat_common_basis * random_cx_vec(2, rng);
    sol0.w.col(2) = topo.sat_private_basis * random_cx_vec(2, rng);
    sol0.w.col(3) = topo.sat_private_basis * random_cx_vec(2, rng);
    sol0.p.col(0) = topo.terr_common_basis * random_cx_vec(1, rng);
    sol0.p.col(1) = topo.terr_private_basis * random_cx_vec(1, rng);
    sol0.w *= std::sqrt(0.8 * ps / sol0.sat_power());
    sol0.p *= std::sqrt(0.8 * pt / sol0.terr_power());

    const WmmseCoefficients co = step1_coefficients(ens, sol0, topo);
    const Subproblem sp = build_subproblem(co, topo, dims, ps, pt);

    // The super-common column is off and every active column is reduced to
    // one coordinate per element pair.
    CHECK(sp.layout.sat_cols[0].cdim == 0);
    CHECK(sp.layout.sat_cols[1].cdim == 2);
    CHECK(sp.layout.sat_cols[2].cdim == 2);
    CHECK(sp.layout.terr_cols[0].cdim == 1);
    CHECK(sp.layout.terr_cols[1].cdim == 1);

    const SolveResult res = solve(sp.program);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.kkt.worst() <= 1e-7);

    const PrecoderSolution sol = extract_solution(sp.layout, topo, dims, res.x);
    CHECK(arma::norm(sol.w.col(0)) == 0.0);
    auto in_span = [](const cx_mat &b, const cx_vec &w) {
        return arma::norm(cx_vec(w - b * (b.t() * w))) <= 1e-8 * (1.0 + arma::norm(w));
    };
    CHECK(in_span(topo.sat_common_basis, sol.w.col(1)));
    CHECK(in_span(topo.sat_private_basis, sol.w.col(2)));
    CHECK(in_span(topo.sat_private_basis, sol.w.col(3)));
    CHECK(in_span(topo.terr_common_basis, sol.p.col(0)));
    CHECK(in_span(topo.terr_private_basis, sol.p.col(1)));

    CHECK(max_constraint_violation(sp, co, topo, dims, res.x, ps, pt) <= 1e-6);
    CHECK(std::abs(implied_min_rate(co, topo, sp.layout, dims, res.x) -
                   res.x(sp.layout.r_min)) <= 1e-6);
}

TEST_CASE("malformed inputs are rejected") {
    const SubproblemDims dims{1, 1, 2, 1};
    const StreamTopology topo = StreamTopology::full_rsma();
    const vec v2{0.1, 0.1}, v1{0.1};
    auto co = flat_coeffs(dims, v2, v1, v2, v1, v2, v1);

    CHECK_THROWS_AS((void)build_subproblem(co, topo, dims, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)build_subproblem(co, topo, dims, 1.0, 1.0, 0.0),
                    std::invalid_argument);

    auto missing = co;
    missing.p_su.pop_back();
    CHECK_THROWS_AS((void)build_subproblem(missing, topo, dims, 1.0, 1.0),
                    std::invalid_argument);

    // Extra instances for layers the topology switched off.
    CHECK_THROWS_AS((void)build_subproblem(co, StreamTopology::private_only(), dims, 1.0, 1.0),
                    std::invalid_argument);

    const Subproblem sp = build_subproblem(co, topo, dims, 1.0, 1.0);
    CHECK_THROWS_AS((void)extract_solution(sp.layout, topo, dims, vec(3, arma::fill::zeros)),
                    std::invalid_argument);
}

TEST_CASE("a network with no satellite users drops the satellite power block") {
    const SubproblemDims dims{2, 1, 0, 2};
    const StreamTopology topo = StreamTopology::private_only();
    RngStream rng(41);
    const ChannelEnsemble ens = random_ensemble(2, 1, 0, 2, 5, rng);
    const double pt = 3.0;

    PrecoderSolution sol0 = PrecoderSolution::zeros(2, 1, 0, 2);
    sol0.p.col(1) = random_cx_vec(2, rng);
    sol0.p.col(2) = random_cx_vec(2, rng);
    sol0.p *= std::sqrt(0.8 * pt) / arma::norm(sol0.p, "fro");

    const WmmseCoefficients co = step1_coefficients(ens, sol0, topo);
    const Subproblem sp = build_subproblem(co, topo, dims, 7.0, pt);

    // Orthant, the terrestrial power block, and one block per private stream;
    // nothing for the idle satellite side.
    CHECK(sp.program.cones.size() == 4);
    for (const auto &c : sp.layout.sat_cols)
        CHECK(c.cdim == 0);

    const SolveResult res = solve(sp.program);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.kkt.worst() <= 1e-7);

    const PrecoderSolution sol = extract_solution(sp.layout, topo, dims, res.x);
    CHECK(arma::norm(sol.w, "fro") == 0.0);
    CHECK(sol.terr_power() <= pt + 1e-6);
    CHECK(max_constraint_violation(sp, co, topo, dims, res.x, 7.0, pt) <= 1e-6);
}
