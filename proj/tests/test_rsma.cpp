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

#include "mdprsma/rsma.hpp"

#include <algorithm>

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
            e.z_cu(k).col(s) = 0.3 * random_cx_vec(2 * n_sat, rng);
        e.h_cu.col(k) = random_cx_vec(2 * n_bs, rng);
    }
    return e;
}

PrecoderSolution random_solution(uword n_sat, uword n_bs, uword ks, uword kt,
                                 const StreamTopology &topo, RngStream &rng) {
    PrecoderSolution s = PrecoderSolution::zeros(n_sat, n_bs, ks, kt);
    if (topo.super_common)
        s.w.col(0) = random_cx_vec(2 * n_sat, rng);
    if (topo.sat_common)
        s.w.col(1) = random_cx_vec(2 * n_sat, rng);
    for (uword k = 0; k < ks; ++k)
        s.w.col(2 + k) = random_cx_vec(2 * n_sat, rng);
    if (topo.terr_common)
        s.p.col(0) = random_cx_vec(2 * n_bs, rng);
    for (uword k = 0; k < kt; ++k)
        s.p.col(1 + k) = random_cx_vec(2 * n_bs, rng);
    return s;
}

double pw(const cx_vec &ch, const cx_vec &col) { return std::norm(arma::cdot(ch, col)); }

bool contains(const std::vector<ColumnRef> &set, ColumnRef c) {
    return std::find(set.begin(), set.end(), c) != set.end();
}

} // namespace

TEST_CASE("topology factories switch the advertised layers") {
    StreamTopology mdp = StreamTopology::full_rsma();
    CHECK(mdp.super_common);
    CHECK(mdp.sat_common);
    CHECK(mdp.terr_common);
    CHECK(mdp.sic);
    CHECK_FALSE(mdp.restricted());

    StreamTopology pd = StreamTopology::per_network_rsma();
    CHECK_FALSE(pd.super_common);
    CHECK(pd.sat_common);

    StreamTopology sdma = StreamTopology::private_only();
    CHECK_FALSE(sdma.super_common);
    CHECK_FALSE(sdma.sat_common);
    CHECK_FALSE(sdma.terr_common);

    StreamTopology fp = StreamTopology::fixed_polarization(4, 2);
    CHECK_FALSE(fp.super_common);
    CHECK(fp.sat_common);
    CHECK(fp.terr_common);
    CHECK_FALSE(fp.sic);
    CHECK(fp.restricted());
    // Selector bases: orthonormal, disjoint support covering all ports.
    CHECK(arma::norm(fp.sat_common_basis.t() * fp.sat_common_basis -
                     arma::eye<cx_mat>(4, 4)) == 0.0);
    CHECK(arma::norm(fp.sat_common_basis.t() * fp.sat_private_basis) == 0.0);
    CHECK(fp.terr_common_basis.n_rows == 4);
    CHECK(fp.terr_common_basis.n_cols == 2);
}

TEST_CASE("decode ladder column sets follow the topology") {
    StreamTopology mdp = StreamTopology::full_rsma();
    auto p_cu = heard_columns(StreamLayer::p_cu, 2, 2, mdp);
    CHECK_FALSE(contains(p_cu, {false, 0})); // super-common subtracted
    CHECK(contains(p_cu, {false, 1}));       // sat-common never decoded here
    CHECK_FALSE(contains(p_cu, {true, 0}));  // own common subtracted
    CHECK(contains(p_cu, {true, 1}));
    CHECK(contains(p_cu, {true, 2}));

    auto spc_cu = heard_columns(StreamLayer::spc_cu, 2, 2, mdp);
    CHECK(spc_cu.size() == 7); // everything on the air
    auto p_su = heard_columns(StreamLayer::p_su, 2, 2, mdp);
    CHECK(p_su.size() == 2); // both commons peeled off, privates remain

    StreamTopology sdma = StreamTopology::private_only();
    auto sdma_p_su = heard_columns(StreamLayer::p_su, 3, 2, sdma);
    CHECK(sdma_p_su.size() == 3);
    for (const auto &c : sdma_p_su)
        CHECK_FALSE(c.terrestrial);

    StreamTopology fp = StreamTopology::fixed_polarization(2, 1);
    auto fp_p_su = heard_columns(StreamLayer::p_su, 2, 2, fp);
    CHECK(contains(fp_p_su, {false, 1})); // no SIC: the common layer stays
    auto fp_p_cu = heard_columns(StreamLayer::p_cu, 2, 2, fp);
    CHECK(contains(fp_p_cu, {true, 0}));
}

TEST_CASE("per-sample SINRs match hand-expanded power ratios") {
    RngStream rng = RngStream::child(17, {0});
    const uword n_sat = 2, n_bs = 1, ks = 2, kt = 2;
    StreamTopology topo = StreamTopology::full_rsma();
    ChannelEnsemble ens = random_ensemble(n_sat, n_bs, ks, kt, 1, rng);
    PrecoderSolution sol = random_solution(n_sat, n_bs, ks, kt, topo, rng);
    const double s2 = 0.7;

    cx_vec f = ens.f_su(0).col(0);
    double p_spc = pw(f, sol.w_spc()), p_cpc = pw(f, sol.w_cpc());
    double p0 = pw(f, sol.w_p(0)), p1 = pw(f, sol.w_p(1));

    CHECK(decode_sinr(StreamLayer::spc_su, f, {}, sol, 0, topo, s2) ==
          doctest::Approx(p_spc / (p_cpc + p0 + p1 + s2)).epsilon(1e-12));
    CHECK(decode_sinr(StreamLayer::cpc_su, f, {}, sol, 0, topo, s2) ==
          doctest::Approx(p_cpc / (p0 + p1 + s2)).epsilon(1e-12));
    CHECK(decode_sinr(StreamLayer::p_su, f, {}, sol, 0, topo, s2) ==
          doctest::Approx(p0 / (p1 + s2)).epsilon(1e-12));

    cx_vec z = ens.z_cu(1).col(0);
    cx_vec h = ens.h_cu.col(1);
    double q_spc = pw(z, sol.w_spc()), q_cpc = pw(z, sol.w_cpc());
    double q0 = pw(z, sol.w_p(0)), q1 = pw(z, sol.w_p(1));
    double b_lpc = pw(h, sol.p_lpc()), b0 = pw(h, sol.p_p(0)), b1 = pw(h, sol.p_p(1));

    CHECK(decode_sinr(StreamLayer::spc_cu, z, h, sol, 1, topo, s2) ==
          doctest::Approx(q_spc / (q_cpc + q0 + q1 + b_lpc + b0 + b1 + s2)).epsilon(1e-12));
    CHECK(decode_sinr(StreamLayer::lpc_cu, z, h, sol, 1, topo, s2) ==
          doctest::Approx(b_lpc / (q_cpc + q0 + q1 + b0 + b1 + s2)).epsilon(1e-12));
    CHECK(decode_sinr(StreamLayer::p_cu, z, h, sol, 1, topo, s2) ==
          doctest::Approx(b1 / (q_cpc + q0 + q1 + b0 + s2)).epsilon(1e-12));
}

TEST_CASE("parallel decoding keeps the common layer in private denominators") {
    RngStream rng = RngStream::child(17, {1});
    const uword n_sat = 2, n_bs = 2, ks = 2, kt = 2;
    StreamTopology fp = StreamTopology::fixed_polarization(n_sat, n_bs);
    ChannelEnsemble ens = random_ensemble(n_sat, n_bs, ks, kt, 1, rng);
    PrecoderSolution sol = random_solution(n_sat, n_bs, ks, kt, fp, rng);
    const double s2 = 1.0;

    cx_vec f = ens.f_su(0).col(0);
    double p_cpc = pw(f, sol.w_cpc());
    double p0 = pw(f, sol.w_p(0)), p1 = pw(f, sol.w_p(1));
    CHECK(decode_sinr(StreamLayer::p_su, f, {}, sol, 0, fp, s2) ==
          doctest::Approx(p0 / (p_cpc + p1 + s2)).epsilon(1e-12));

    cx_vec z = ens.z_cu(0).col(0);
    cx_vec h = ens.h_cu.col(0);
    double q_all = pw(z, sol.w_cpc()) + pw(z, sol.w_p(0)) + pw(z, sol.w_p(1));
    double b_lpc = pw(h, sol.p_lpc()), b0 = pw(h, sol.p_p(0)), b1 = pw(h, sol.p_p(1));
    CHECK(decode_sinr(StreamLayer::p_cu, z, h, sol, 0, fp, s2) ==
          doctest::Approx(b0 / (b_lpc + b1 + q_all + s2)).epsilon(1e-12));
}

TEST_CASE("single-receiver ladder rates telescope to the sum capacity") {
    // Peeling spc, then cpc, then the private stream splits
    // log2(1 + total/sigma^2) exactly into the three layer rates.
    RngStream rng = RngStream::child(17, {2});
    StreamTopology topo = StreamTopology::full_rsma();
    ChannelEnsemble ens = random_ensemble(2, 1, 1, 0, 1, rng);
    PrecoderSolution sol = random_solution(2, 1, 1, 0, topo, rng);
    const double s2 = 1.3;

    cx_vec f = ens.f_su(0).col(0);
    double total = pw(f, sol.w_spc()) + pw(f, sol.w_cpc()) + pw(f, sol.w_p(0));
    double sum = 0.0;
    for (StreamLayer l : {StreamLayer::spc_su, StreamLayer::cpc_su, StreamLayer::p_su})
        sum += std::log2(1.0 + decode_sinr(l, f, {}, sol, 0, topo, s2));
    CHECK(sum == doctest::Approx(std::log2(1.0 + total / s2)).epsilon(1e-12));
}

TEST_CASE("ergodic rates average the per-sample rates") {
    RngStream rng = RngStream::child(17, {3});
    const uword n_sat = 2, n_bs = 1, ks = 2, kt = 2, S = 7;
    StreamTopology topo = StreamTopology::full_rsma();
    ChannelEnsemble ens = random_ensemble(n_sat, n_bs, ks, kt, S, rng);
    PrecoderSolution sol = random_solution(n_sat, n_bs, ks, kt, topo, rng);

    LayerRates r = ergodic_rates(ens, sol, topo);
    double manual = 0.0;
    for (uword s = 0; s < S; ++s)
        manual += std::log2(1.0 + decode_sinr(StreamLayer::cpc_su, ens.f_su(1).col(s), {}, sol,
                                              1, topo, 1.0));
    CHECK(r.su_cpc(1) == doctest::Approx(manual / S).epsilon(1e-12));

    manual = 0.0;
    for (uword s = 0; s < S; ++s)
        manual += std::log2(1.0 + decode_sinr(StreamLayer::lpc_cu, ens.z_cu(0).col(s),
                                              ens.h_cu.col(0), sol, 0, topo, 1.0));
    CHECK(r.cu_lpc(0) == doctest::Approx(manual / S).epsilon(1e-12));

    // Layer activation controls which outputs exist.
    StreamTopology sdma = StreamTopology::private_only();
    PrecoderSolution psol = random_solution(n_sat, n_bs, ks, kt, sdma, rng);
    LayerRates pr = ergodic_rates(ens, psol, sdma);
    CHECK(pr.su_spc.n_elem == 0);
    CHECK(pr.su_cpc.n_elem == 0);
    CHECK(pr.cu_lpc.n_elem == 0);
    CHECK(pr.su_p.n_elem == ks);

    // A powered column on a disabled layer is rejected.
    PrecoderSolution bad = psol;
    bad.w.col(0) = random_cx_vec(2 * n_sat, rng);
    CHECK_THROWS_AS((void)ergodic_rates(ens, bad, sdma), std::invalid_argument);
}

TEST_CASE("common caps take the weakest listener") {
    StreamTopology topo = StreamTopology::full_rsma();
    LayerRates r;
    r.su_spc = {1.2, 0.8};
    r.cu_spc = {0.5, 2.0};
    r.su_cpc = {1.5, 0.9};
    r.cu_lpc = {0.7, 0.3};
    r.su_p = {1.0, 1.0};
    r.cu_p = {1.0, 1.0};
    CHECK(cap_spc(r, topo) == 0.5); // the terrestrial listener limits it
    CHECK(cap_cpc(r, topo) == 0.9);
    CHECK(cap_lpc(r, topo) == 0.3);

    LayerRates su_only = r;
    su_only.cu_spc = vec();
    su_only.cu_lpc = vec();
    su_only.cu_p = vec();
    CHECK(cap_spc(su_only, topo) == 0.8);
    CHECK(cap_lpc(su_only, topo) == 0.0);

    CHECK(cap_spc(r, StreamTopology::private_only()) == 0.0);
}

TEST_CASE("allocation violations are measured against the caps") {
    RngStream rng = RngStream::child(17, {4});
    StreamTopology topo = StreamTopology::full_rsma();
    ChannelEnsemble ens = random_ensemble(2, 1, 2, 2, 5, rng);
    PrecoderSolution sol = random_solution(2, 1, 2, 2, topo, rng);

    RateReport rep = evaluate_rates(ens, sol, topo);
    CHECK(rep.alloc_violation == 0.0); // zero portions never overdraw
    CHECK(rep.min_rate ==
          doctest::Approx(std::min(rep.su_total.min(), rep.cu_total.min())));
    CHECK(rep.su_total(0) == doctest::Approx(rep.layers.su_p(0)).epsilon(1e-12));

    sol.c_lpc(0) = rep.cap_lpc + 0.25;
    RateReport over = evaluate_rates(ens, sol, topo);
    CHECK(over.alloc_violation == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(over.cu_total(0) ==
          doctest::Approx(over.layers.cu_p(0) + sol.c_lpc(0)).epsilon(1e-12));

    sol.c_lpc(0) = -0.1;
    CHECK(evaluate_rates(ens, sol, topo).alloc_violation == doctest::Approx(0.1));
}

TEST_CASE("pool split hand cases") {
    StreamTopology topo = StreamTopology::full_rsma();
    LayerRates r;
    r.su_p = {1.0, 3.0};
    // Caps come from the weakest listener; fabricate exact pool sizes.
    r.su_spc = {0.5, 0.5};
    r.su_cpc = {0.3, 0.3};
    r.cu_spc = vec();
    r.cu_lpc = vec();
    r.cu_p = vec();

    AllocationResult a = best_allocation(r, topo);
    CHECK(a.min_rate == doctest::Approx(1.8).epsilon(1e-9));
    CHECK(a.c_spc(0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(a.c_cpc(0) == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(a.c_spc(1) == doctest::Approx(0.0));
    CHECK(a.c_spc(0) + a.c_cpc(0) <= 0.8 + 1e-12);

    LayerRates t;
    t.cu_p = {0.5, 0.6};
    t.cu_lpc = {0.4, 0.4};
    t.su_p = vec();
    AllocationResult b = best_allocation(t, topo);
    CHECK(b.min_rate == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(b.c_lpc(0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(b.c_lpc(1) == doctest::Approx(0.15).epsilon(1e-6));
}

TEST_CASE("pool split is max-min optimal against a grid oracle") {
    RngStream rng = RngStream::child(17, {5});
    StreamTopology topo = StreamTopology::full_rsma();
    for (int rep = 0; rep < 50; ++rep) {
        const uword ks = 3, kt = 2;
        LayerRates r;
        r.su_p.set_size(ks);
        r.cu_p.set_size(kt);
        for (uword k = 0; k < ks; ++k)
            r.su_p(k) = 2.0 * rng.uniform();
        for (uword k = 0; k < kt; ++k)
            r.cu_p(k) = 2.0 * rng.uniform();
        r.su_spc = vec(ks, arma::fill::value(rng.uniform()));
        r.cu_spc = vec(kt, arma::fill::value(rng.uniform() + 0.1));
        r.su_cpc = vec(ks, arma::fill::value(rng.uniform()));
        r.cu_lpc = vec(kt, arma::fill::value(rng.uniform()));

        AllocationResult a = best_allocation(r, topo);

        // Feasibility of the returned portions.
        CHECK(arma::accu(a.c_spc) <= cap_spc(r, topo) + 1e-12);
        CHECK(arma::accu(a.c_cpc) <= cap_cpc(r, topo) + 1e-12);
        CHECK(arma::accu(a.c_lpc) <= cap_lpc(r, topo) + 1e-12);
        CHECK(a.c_spc.min() >= 0.0);
        CHECK(a.c_lpc.min() >= 0.0);

        // Optimality: no r above the returned one is coverable by the pools.
        const double pool_sat = cap_spc(r, topo) + cap_cpc(r, topo);
        const double pool_cu = cap_lpc(r, topo);
        auto deficit = [](const vec &p, double r_) {
            double d = 0.0;
            for (uword k = 0; k < p.n_elem; ++k)
                d += std::max(0.0, r_ - p(k));
            return d;
        };
        const double probe = a.min_rate + 1e-6;
        bool coverable =
            deficit(r.su_p, probe) <= pool_sat && deficit(r.cu_p, probe) <= pool_cu;
        CHECK_FALSE(coverable);
        // And the returned min rate is actually achieved by the portions.
        double worst = arma::datum::inf;
        for (uword k = 0; k < ks; ++k)
            worst = std::min(worst, r.su_p(k) + a.c_spc(k) + a.c_cpc(k));
        for (uword k = 0; k < kt; ++k)
            worst = std::min(worst, r.cu_p(k) + a.c_lpc(k));
        CHECK(worst == doctest::Approx(a.min_rate).epsilon(1e-9));
    }
}

TEST_CASE("solution bookkeeping: power, fractions, shape checks") {
    PrecoderSolution s = PrecoderSolution::zeros(2, 1, 2, 2);
    CHECK(s.sat_power() == 0.0);
    CHECK(s.spc_power_fraction() == 0.0);

    s.w(0, 0) = cx(1.0, 0.0);
    s.w(1, 2) = cx(0.0, 1.0);
    CHECK(s.sat_power() == doctest::Approx(2.0));
    CHECK(s.spc_power_fraction() == doctest::Approx(0.5));
    s.p(0, 0) = cx(2.0, 0.0);
    CHECK(s.terr_power() == doctest::Approx(4.0));

    CHECK_THROWS_AS(s.validate(3, 1, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(s.validate(2, 1, 1, 2), std::invalid_argument);
    s.validate(2, 1, 2, 2);
}
