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

#include "mdprsma/conic.hpp"

#include <iomanip>
#include <sstream>

namespace mdprsma {

void ConicProgram::validate() const {
    require(objective.n_elem == num_vars, "conic program: objective length mismatch");
    require(equality.n_cols == num_vars || (num_eq() == 0 && equality.n_cols == 0),
            "conic program: equality column count mismatch");
    require(rhs.n_elem == num_eq(), "conic program: rhs length mismatch");
    require(objective.is_finite(), "conic program: objective must be finite");
    require(rhs.is_finite(), "conic program: rhs must be finite");

    std::vector<char> covered(num_vars, 0);
    for (const ConeBlock &blk : cones) {
        require(blk.len >= 1, "conic program: empty cone block");
        require(blk.kind != ConeKind::SecondOrder || blk.len >= 2,
                "conic program: second-order block needs a head and a tail");
        require(blk.start + blk.len <= num_vars, "conic program: cone block out of range");
        for (uword i = blk.start; i < blk.start + blk.len; ++i) {
            require(!covered[i], "conic program: overlapping cone blocks");
            covered[i] = 1;
        }
    }
    for (uword i = 0; i < num_vars; ++i)
        require(covered[i], "conic program: variable not covered by any cone");

    for (sp_mat::const_iterator it = equality.begin(); it != equality.end(); ++it)
        require(std::isfinite(*it), "conic program: equality entries must be finite");
}

double cone_violation(const vec &x, const std::vector<ConeBlock> &cones) {
    double worst = 0.0;
    for (const ConeBlock &blk : cones) {
        if (blk.kind == ConeKind::NonNegative) {
            for (uword i = blk.start; i < blk.start + blk.len; ++i)
                worst = std::max(worst, -x(i));
        } else {
            const double tail = arma::norm(x.subvec(blk.start + 1, blk.start + blk.len - 1));
            worst = std::max(worst, tail - x(blk.start));
        }
    }
    return worst;
}

std::string ConicProgram::dump() const {
    validate();
    std::ostringstream os;
    os << std::setprecision(17);
    os << "conic-program v1\n";
    os << "vars " << num_vars << "\n";

    uword obj_nnz = 0;
    for (uword i = 0; i < num_vars; ++i)
        if (objective(i) != 0.0)
            ++obj_nnz;
    os << "objective " << obj_nnz << "\n";
    for (uword i = 0; i < num_vars; ++i)
        if (objective(i) != 0.0)
            os << i << " " << objective(i) << "\n";

    os << "cones " << cones.size() << "\n";
    for (const ConeBlock &blk : cones)
        os << (blk.kind == ConeKind::NonNegative ? "nonneg " : "soc ") << blk.start << " "
           << blk.len << "\n";

    os << "equalities " << num_eq() << " " << equality.n_nonzero << "\n";
    for (sp_mat::const_iterator it = equality.begin(); it != equality.end(); ++it)
        os << it.row() << " " << it.col() << " " << *it << "\n";

    os << "rhs\n";
    for (uword r = 0; r < num_eq(); ++r)
        os << rhs(r) << "\n";
    os << "end\n";
    return os.str();
}

namespace {

// Pulls the next whitespace-separated token and fails loudly on truncation.
std::string next_token(std::istringstream &in, const char *what) {
    std::string tok;
    if (!(in >> tok))
        throw std::invalid_argument(std::string("conic program parse: missing ") + what);
    return tok;
}

uword next_uword(std::istringstream &in, const char *what) {
    const std::string tok = next_token(in, what);
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(tok, &used);
        if (used != tok.size() || tok.front() == '-')
            throw std::invalid_argument(tok);
        return static_cast<uword>(v);
    } catch (const std::exception &) {
        throw std::invalid_argument(std::string("conic program parse: bad count for ") + what);
    }
}

double next_double(std::istringstream &in, const char *what) {
    const std::string tok = next_token(in, what);
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception &) {
        throw std::invalid_argument(std::string("conic program parse: bad number for ") + what);
    }
}

void expect(std::istringstream &in, const char *word) {
    const std::string tok = next_token(in, word);
    if (tok != word)
        throw std::invalid_argument(std::string("conic program parse: expected '") + word +
                                    "', got '" + tok + "'");
}

} // namespace

ConicProgram ConicProgram::parse(const std::string &text) {
    std::istringstream in(text);
    expect(in, "conic-program");
    expect(in, "v1");

    ConicProgram p;
    expect(in, "vars");
    p.num_vars = next_uword(in, "vars");
    p.objective = vec(p.num_vars, arma::fill::zeros);

    expect(in, "objective");
    const uword obj_nnz = next_uword(in, "objective nnz");
    for (uword i = 0; i < obj_nnz; ++i) {
        const uword idx = next_uword(in, "objective index");
        require(idx < p.num_vars, "conic program parse: objective index out of range");
        p.objective(idx) = next_double(in, "objective value");
    }

    expect(in, "cones");
    const uword n_cones = next_uword(in, "cone count");
    for (uword i = 0; i < n_cones; ++i) {
        const std::string kind = next_token(in, "cone kind");
        ConeBlock blk;
        if (kind == "nonneg")
            blk.kind = ConeKind::NonNegative;
        else if (kind == "soc")
            blk.kind = ConeKind::SecondOrder;
        else
            throw std::invalid_argument("conic program parse: unknown cone kind '" + kind + "'");
        blk.start = next_uword(in, "cone start");
        blk.len = next_uword(in, "cone length");
        p.cones.push_back(blk);
    }

    expect(in, "equalities");
    const uword rows = next_uword(in, "equality rows");
    const uword nnz = next_uword(in, "equality nnz");
    arma::umat locations(2, nnz);
    vec values(nnz);
    for (uword i = 0; i < nnz; ++i) {
        locations(0, i) = next_uword(in, "equality row");
        locations(1, i) = next_uword(in, "equality column");
        values(i) = next_double(in, "equality value");
        require(locations(0, i) < rows && locations(1, i) < p.num_vars,
                "conic program parse: equality entry out of range");
    }
    p.equality = nnz > 0 ? sp_mat(locations, values, rows, p.num_vars)
                         : sp_mat(rows, p.num_vars);

    expect(in, "rhs");
    p.rhs = vec(rows);
    for (uword r = 0; r < rows; ++r)
        p.rhs(r) = next_double(in, "rhs value");
    expect(in, "end");
    std::string extra;
    if (in >> extra)
        throw std::invalid_argument("conic program parse: trailing content after 'end'");

    p.validate();
    return p;
}

} // namespace mdprsma
