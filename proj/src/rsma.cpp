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

#include "mdprsma/rsma.hpp"

namespace mdprsma {

namespace {

double port_power(const cx_vec &ch, const cx_vec &col) {
    if (ch.n_elem == 0)
        return 0.0;
    return std::norm(arma::cdot(ch, col));
}

cx_mat port_selector(uword pairs, uword offset) {
    cx_mat b(2 * pairs, pairs, arma::fill::zeros);
    for (uword i = 0; i < pairs; ++i)
        b(2 * i + offset, i) = 1.0;
    return b;
}

double rate_of(double sinr) { return std::log2(1.0 + sinr); }

} // namespace

StreamTopology StreamTopology::full_rsma() { return {}; }

StreamTopology StreamTopology::per_network_rsma() {
    StreamTopology t;
    t.super_common = false;
    return t;
}

StreamTopology StreamTopology::private_only() {
    StreamTopology t;
    t.super_common = false;
    t.sat_common = false;
    t.terr_common = false;
    return t;
}

StreamTopology StreamTopology::fixed_polarization(uword n_sat, uword n_bs) {
    StreamTopology t;
    t.super_common = false;
    t.sic = false;
    // Common layers on the first excitation port of every pair, privates on
    // the second; the receivers decode the two layers in parallel.
    t.sat_common_basis = port_selector(n_sat, 0);
    t.sat_private_basis = port_selector(n_sat, 1);
    t.terr_common_basis = port_selector(n_bs, 0);
    t.terr_private_basis = port_selector(n_bs, 1);
    return t;
}

double PrecoderSolution::sat_power() const { return std::pow(arma::norm(w, "fro"), 2); }

double PrecoderSolution::terr_power() const { return std::pow(arma::norm(p, "fro"), 2); }

double PrecoderSolution::spc_power_fraction() const {
    const double total = sat_power();
    if (total <= 0.0)
        return 0.0;
    return std::pow(arma::norm(w.col(0)), 2) / total;
}

PrecoderSolution PrecoderSolution::zeros(uword n_sat, uword n_bs, uword ks, uword kt) {
    PrecoderSolution s;
    s.w = cx_mat(2 * n_sat, 2 + ks, arma::fill::zeros);
    s.p = cx_mat(2 * n_bs, 1 + kt, arma::fill::zeros);
    s.c_spc = vec(ks, arma::fill::zeros);
    s.c_cpc = vec(ks, arma::fill::zeros);
    s.c_lpc = vec(kt, arma::fill::zeros);
    return s;
}

void PrecoderSolution::validate(uword n_sat, uword n_bs, uword ks_, uword kt_) const {
    require(w.n_rows == 2 * n_sat && w.n_cols == 2 + ks_,
            "PrecoderSolution: satellite bank shape mismatch");
    require(p.n_rows == 2 * n_bs && p.n_cols == 1 + kt_,
            "PrecoderSolution: terrestrial bank shape mismatch");
    require(c_spc.n_elem == ks_ && c_cpc.n_elem == ks_ && c_lpc.n_elem == kt_,
            "PrecoderSolution: portion vector size mismatch");
    require(w.is_finite() && p.is_finite() && c_spc.is_finite() && c_cpc.is_finite() &&
                c_lpc.is_finite(),
            "PrecoderSolution: non-finite entries");
}

const char *stream_layer_name(StreamLayer layer) {
    switch (layer) {
    case StreamLayer::spc_su: return "spc_su";
    case StreamLayer::spc_cu: return "spc_cu";
    case StreamLayer::cpc_su: return "cpc_su";
    case StreamLayer::lpc_cu: return "lpc_cu";
    case StreamLayer::p_su: return "p_su";
    case StreamLayer::p_cu: return "p_cu";
    }
    return "?";
}

ColumnRef target_column(StreamLayer layer, uword user) {
    switch (layer) {
    case StreamLayer::spc_su:
    case StreamLayer::spc_cu: return {false, 0};
    case StreamLayer::cpc_su: return {false, 1};
    case StreamLayer::lpc_cu: return {true, 0};
    case StreamLayer::p_su: return {false, 2 + user};
    case StreamLayer::p_cu: return {true, 1 + user};
    }
    return {};
}

std::vector<ColumnRef> heard_columns(StreamLayer layer, uword ks, uword kt,
                                     const StreamTopology &topo) {
    const bool cu_side = layer == StreamLayer::spc_cu || layer == StreamLayer::lpc_cu ||
                         layer == StreamLayer::p_cu;
    const bool past_spc = layer != StreamLayer::spc_su && layer != StreamLayer::spc_cu;
    const bool spc_gone = topo.super_common && topo.sic && past_spc;
    // Only receivers that decode a common layer can have subtracted it.
    const bool cpc_gone = topo.sat_common && topo.sic && layer == StreamLayer::p_su;
    const bool lpc_gone = topo.terr_common && topo.sic && layer == StreamLayer::p_cu;

    std::vector<ColumnRef> cols;
    if (topo.super_common && !spc_gone)
        cols.push_back({false, 0});
    if (topo.sat_common && !cpc_gone)
        cols.push_back({false, 1});
    for (uword j = 0; j < ks; ++j)
        cols.push_back({false, 2 + j});
    if (cu_side) {
        if (topo.terr_common && !lpc_gone)
            cols.push_back({true, 0});
        for (uword j = 0; j < kt; ++j)
            cols.push_back({true, 1 + j});
    }
    return cols;
}

double decode_signal(StreamLayer layer, const cx_vec &sat, const cx_vec &terr,
                     const PrecoderSolution &sol, uword user) {
    const ColumnRef t = target_column(layer, user);
    return t.terrestrial ? port_power(terr, sol.p.col(t.col)) : port_power(sat, sol.w.col(t.col));
}

double decode_denominator(StreamLayer layer, const cx_vec &sat, const cx_vec &terr,
                          const PrecoderSolution &sol, uword user,
                          const StreamTopology &topo, double sigma2) {
    const ColumnRef target = target_column(layer, user);
    double acc = sigma2;
    for (const ColumnRef &c : heard_columns(layer, sol.ks(), sol.kt(), topo)) {
        if (c == target)
            continue;
        acc += c.terrestrial ? port_power(terr, sol.p.col(c.col))
                             : port_power(sat, sol.w.col(c.col));
    }
    return acc;
}

double decode_sinr(StreamLayer layer, const cx_vec &sat, const cx_vec &terr,
                   const PrecoderSolution &sol, uword user, const StreamTopology &topo,
                   double sigma2) {
    return decode_signal(layer, sat, terr, sol, user) /
           decode_denominator(layer, sat, terr, sol, user, topo, sigma2);
}

LayerRates ergodic_rates(const ChannelEnsemble &ens, const PrecoderSolution &sol,
                         const StreamTopology &topo, double sigma2) {
    ens.validate();
    sol.validate(ens.n_sat, ens.n_bs, ens.ks(), ens.kt());
    // Layers the topology switches off are not just unpriced, they do not
    // exist on the air; a nonzero column there is a mis-built solution.
    require(topo.super_common || arma::norm(sol.w.col(0)) == 0.0,
            "ergodic_rates: inactive super-common column carries power");
    require(topo.sat_common || arma::norm(sol.w.col(1)) == 0.0,
            "ergodic_rates: inactive sat-common column carries power");
    require(topo.terr_common || arma::norm(sol.p.col(0)) == 0.0,
            "ergodic_rates: inactive terr-common column carries power");
    const uword ks = ens.ks();
    const uword kt = ens.kt();
    const double inv_s = 1.0 / double(ens.num_samples);
    const cx_vec none;

    LayerRates out;
    if (topo.super_common) {
        out.su_spc.zeros(ks);
        out.cu_spc.zeros(kt);
    }
    if (topo.sat_common)
        out.su_cpc.zeros(ks);
    if (topo.terr_common)
        out.cu_lpc.zeros(kt);
    out.su_p.zeros(ks);
    out.cu_p.zeros(kt);

    for (uword k = 0; k < ks; ++k) {
        KahanSum spc, cpc, priv;
        for (uword s = 0; s < ens.num_samples; ++s) {
            const cx_vec f = ens.f_su(k).col(s);
            if (topo.super_common)
                spc.add(rate_of(decode_sinr(StreamLayer::spc_su, f, none, sol, k, topo, sigma2)));
            if (topo.sat_common)
                cpc.add(rate_of(decode_sinr(StreamLayer::cpc_su, f, none, sol, k, topo, sigma2)));
            priv.add(rate_of(decode_sinr(StreamLayer::p_su, f, none, sol, k, topo, sigma2)));
        }
        if (topo.super_common)
            out.su_spc(k) = spc.value() * inv_s;
        if (topo.sat_common)
            out.su_cpc(k) = cpc.value() * inv_s;
        out.su_p(k) = priv.value() * inv_s;
    }

    for (uword k = 0; k < kt; ++k) {
        const cx_vec h = ens.h_cu.col(k);
        KahanSum spc, lpc, priv;
        for (uword s = 0; s < ens.num_samples; ++s) {
            const cx_vec z = ens.z_cu(k).col(s);
            if (topo.super_common)
                spc.add(rate_of(decode_sinr(StreamLayer::spc_cu, z, h, sol, k, topo, sigma2)));
            if (topo.terr_common)
                lpc.add(rate_of(decode_sinr(StreamLayer::lpc_cu, z, h, sol, k, topo, sigma2)));
            priv.add(rate_of(decode_sinr(StreamLayer::p_cu, z, h, sol, k, topo, sigma2)));
        }
        if (topo.super_common)
            out.cu_spc(k) = spc.value() * inv_s;
        if (topo.terr_common)
            out.cu_lpc(k) = lpc.value() * inv_s;
        out.cu_p(k) = priv.value() * inv_s;
    }
    return out;
}

double cap_spc(const LayerRates &r, const StreamTopology &topo) {
    if (!topo.super_common)
        return 0.0;
    double cap = arma::datum::inf;
    for (uword k = 0; k < r.su_spc.n_elem; ++k)
        cap = std::min(cap, r.su_spc(k));
    for (uword k = 0; k < r.cu_spc.n_elem; ++k)
        cap = std::min(cap, r.cu_spc(k));
    return std::isfinite(cap) ? cap : 0.0;
}

double cap_cpc(const LayerRates &r, const StreamTopology &topo) {
    if (!topo.sat_common || r.su_cpc.n_elem == 0)
        return 0.0;
    return r.su_cpc.min();
}

double cap_lpc(const LayerRates &r, const StreamTopology &topo) {
    if (!topo.terr_common || r.cu_lpc.n_elem == 0)
        return 0.0;
    return r.cu_lpc.min();
}

double allocation_violation(const PrecoderSolution &sol, const LayerRates &rates,
                            const StreamTopology &topo) {
    double v = 0.0;
    auto neg = [&](const vec &c) {
        if (c.n_elem)
            v = std::max(v, -c.min());
    };
    neg(sol.c_spc);
    neg(sol.c_cpc);
    neg(sol.c_lpc);
    v = std::max(v, arma::accu(sol.c_spc) - cap_spc(rates, topo));
    v = std::max(v, arma::accu(sol.c_cpc) - cap_cpc(rates, topo));
    v = std::max(v, arma::accu(sol.c_lpc) - cap_lpc(rates, topo));
    return std::max(v, 0.0);
}

RateReport evaluate_rates(const ChannelEnsemble &ens, const PrecoderSolution &sol,
                          const StreamTopology &topo, double sigma2) {
    RateReport rep;
    rep.layers = ergodic_rates(ens, sol, topo, sigma2);
    rep.cap_spc = cap_spc(rep.layers, topo);
    rep.cap_cpc = cap_cpc(rep.layers, topo);
    rep.cap_lpc = cap_lpc(rep.layers, topo);

    const uword ks = ens.ks();
    const uword kt = ens.kt();
    rep.su_total.zeros(ks);
    rep.cu_total.zeros(kt);
    for (uword k = 0; k < ks; ++k)
        rep.su_total(k) = rep.layers.su_p(k) + (topo.super_common ? sol.c_spc(k) : 0.0) +
                          (topo.sat_common ? sol.c_cpc(k) : 0.0);
    for (uword k = 0; k < kt; ++k)
        rep.cu_total(k) = rep.layers.cu_p(k) + (topo.terr_common ? sol.c_lpc(k) : 0.0);

    double worst = arma::datum::inf;
    for (uword k = 0; k < ks; ++k)
        worst = std::min(worst, rep.su_total(k));
    for (uword k = 0; k < kt; ++k)
        worst = std::min(worst, rep.cu_total(k));
    rep.min_rate = std::isfinite(worst) ? worst : 0.0;
    rep.alloc_violation = allocation_violation(sol, rep.layers, topo);
    return rep;
}

AllocationResult best_allocation(const LayerRates &rates, const StreamTopology &topo) {
    const uword ks = rates.su_p.n_elem;
    const uword kt = rates.cu_p.n_elem;
    const double sat_spc = cap_spc(rates, topo);
    const double sat_cpc = cap_cpc(rates, topo);
    const double sat_pool = sat_spc + sat_cpc;
    const double cu_pool = cap_lpc(rates, topo);

    AllocationResult res;
    res.c_spc.zeros(ks);
    res.c_cpc.zeros(ks);
    res.c_lpc.zeros(kt);
    if (ks + kt == 0)
        return res;

    auto deficit_sum = [](const vec &p, double r) {
        double sum = 0.0;
        for (uword k = 0; k < p.n_elem; ++k)
            sum += std::max(0.0, r - p(k));
        return sum;
    };
    auto feasible = [&](double r) {
        if (ks && deficit_sum(rates.su_p, r) > sat_pool)
            return false;
        if (kt && deficit_sum(rates.cu_p, r) > cu_pool)
            return false;
        return true;
    };

    double lo = arma::datum::inf;
    if (ks)
        lo = std::min(lo, rates.su_p.min());
    if (kt)
        lo = std::min(lo, rates.cu_p.min());
    double hi = lo + sat_pool + cu_pool + 1.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    const double r = lo;

    if (ks && sat_pool > 0.0) {
        vec d(ks);
        for (uword k = 0; k < ks; ++k)
            d(k) = std::max(0.0, r - rates.su_p(k));
        // The bisection limit can land a hair over the pool; renormalize so
        // the portions never overdraw.
        const double total = arma::accu(d);
        if (total > sat_pool)
            d *= sat_pool / total;
        res.c_spc = d * (sat_spc / sat_pool);
        res.c_cpc = d * (sat_cpc / sat_pool);
    }
    if (kt && cu_pool > 0.0) {
        vec d(kt);
        for (uword k = 0; k < kt; ++k)
            d(k) = std::max(0.0, r - rates.cu_p(k));
        const double total = arma::accu(d);
        if (total > cu_pool)
            d *= cu_pool / total;
        res.c_lpc = d;
    }

    double worst = arma::datum::inf;
    for (uword k = 0; k < ks; ++k)
        worst = std::min(worst, rates.su_p(k) + res.c_spc(k) + res.c_cpc(k));
    for (uword k = 0; k < kt; ++k)
        worst = std::min(worst, rates.cu_p(k) + res.c_lpc(k));
    res.min_rate = std::isfinite(worst) ? worst : 0.0;
    return res;
}

} // namespace mdprsma
