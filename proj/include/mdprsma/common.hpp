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

#include <armadillo>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace mdprsma {

using cx = std::complex<double>;
using arma::cx_mat;
using arma::cx_vec;
using arma::mat;
using arma::sp_mat;
using arma::sword;
using arma::uvec;
using arma::uword;
using arma::vec;

inline void require(bool cond, const std::string &msg) {
    if (!cond)
        throw std::invalid_argument(msg);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Deterministic splittable RNG. Every consumer derives its own stream from a
// master seed plus a list of integer labels, so the draw order of one
// component can never perturb another. Gaussians use an explicit Box-Muller
// transform; std::normal_distribution is not byte-stable across library
// versions.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
        std::uint64_t h = splitmix(seed);
        for (std::uint64_t v : labels)
            h = splitmix(h ^ v);
        return h;
    }

    static RngStream child(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
        return RngStream(derive(seed, labels));
    }

    // Uniform on [0, 1).
    double uniform() {
        return (engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the spare value is discarded so the
    // stream position depends only on the number of calls.
    double normal() {
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * arma::datum::pi * u2);
    }

    // Circularly-symmetric complex normal CN(0, variance).
    cx cnormal(double variance = 1.0) {
        double s = std::sqrt(variance / 2.0);
        double re = s * normal();
        double im = s * normal();
        return cx(re, im);
    }

    std::uint64_t raw() { return engine_(); }

  private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

// Compensated (Kahan) scalar accumulator, used for all sample averages so
// results do not depend on how a reduction is chunked.
class KahanSum {
  public:
    void add(double v) {
        double y = v - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Elementwise compensated accumulator for complex matrices.
class KahanCxMat {
  public:
    KahanCxMat(uword rows, uword cols)
        : sum_(rows, cols, arma::fill::zeros), comp_(rows, cols, arma::fill::zeros) {}

    void add(const cx_mat &v) {
        cx_mat y = v - comp_;
        cx_mat t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    const cx_mat &value() const { return sum_; }

  private:
    cx_mat sum_;
    cx_mat comp_;
};

} // namespace mdprsma
