// Copyright 2026 The mgsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mgsim/pbc.hpp"
#include "support/dense_fock.hpp"
#include "support/random_circuits.hpp"

using namespace mgsim;
using namespace mgsim::testing;

namespace {

/// Worst deviation between the lowered circuit and the true wrap gate on the
/// chosen parity sector.
double sector_residual(const GateApplication& wrap, int n, int parity) {
    Circuit truth;
    truth.n = n;
    truth.pbc = true;
    truth.gates = {wrap};
    Mat ut = dense_circuit_unitary(truth);
    Circuit low;
    low.n = n;
    low.gates = pbc_substitute(wrap, parity, n);
    Mat ul = dense_circuit_unitary(low);
    const std::size_t dim = std::size_t{1} << n;
    double worst = 0;
    for (std::size_t col = 0; col < dim; ++col) {
        int p = (__builtin_popcountll(col) % 2 == 0) ? 1 : -1;
        if (p != parity) continue;
        worst = std::max(worst, (ut.col(col) - ul.col(col)).cwiseAbs().maxCoeff());
    }
    return worst;
}

Matchgate xx_rotation(double theta) {
    Eigen::Matrix2cd b;
    b << std::cos(theta), cd(0, std::sin(theta)), cd(0, std::sin(theta)), std::cos(theta);
    return validate_matchgate(b, b);
}

}  // namespace

TEST_CASE("identity wrap gates lower to nothing") {
    GateApplication wrap{identity_gate(), 4, true};
    REQUIRE(pbc_substitute(wrap, 1, 4).empty());
    REQUIRE(pbc_substitute(wrap, -1, 4).empty());
}

TEST_CASE("XX wrap rotation acts correctly on both parity sectors") {
    GateApplication wrap{xx_rotation(0.61), 3, true};
    REQUIRE(sector_residual(wrap, 3, 1) < 1e-10);
    REQUIRE(sector_residual(wrap, 3, -1) < 1e-10);
}

TEST_CASE("odd-parity lowering of an XX wrap equals the even lowering at -theta") {
    const double theta = 0.43;
    const int n = 4;
    Circuit odd_low;
    odd_low.n = n;
    odd_low.gates = pbc_substitute({xx_rotation(theta), n, true}, -1, n);
    Circuit even_neg;
    even_neg.n = n;
    even_neg.gates = pbc_substitute({xx_rotation(-theta), n, true}, 1, n);
    Mat a = dense_circuit_unitary(odd_low);
    Mat b = dense_circuit_unitary(even_neg);
    REQUIRE((a - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random wrap matchgates lower exactly on their parity sector") {
    std::mt19937_64 rng(61);
    for (int n = 3; n <= 5; ++n) {
        for (int t = 0; t < 6; ++t) {
            GateApplication wrap{random_matchgate(rng), n, true};
            REQUIRE(sector_residual(wrap, n, 1) < 1e-10);
            REQUIRE(sector_residual(wrap, n, -1) < 1e-10);
        }
    }
}

TEST_CASE("the lowered sequence stays linear in n") {
    std::mt19937_64 rng(62);
    for (int n : {3, 5, 8, 12}) {
        auto gates = pbc_substitute({random_matchgate(rng), n, true}, 1, n);
        REQUIRE(gates.size() <= static_cast<std::size_t>(2 * n));
        for (const auto& g : gates) {
            REQUIRE_FALSE(g.wrap);
            REQUIRE(g.pos >= 1);
            REQUIRE(g.pos < n);
        }
    }
}

TEST_CASE("lower_pbc splices wrap gates in place") {
    std::mt19937_64 rng(63);
    Circuit c;
    c.n = 4;
    c.pbc = true;
    c.gates.push_back({random_matchgate(rng), 2, false});
    c.gates.push_back({random_matchgate(rng), 4, true});
    c.gates.push_back({random_matchgate(rng), 1, false});
    Circuit low = lower_pbc(c, 1);
    REQUIRE_FALSE(has_wrap_gates(low));
    Mat a = dense_circuit_unitary(c);
    Mat b = dense_circuit_unitary(low);
    const std::size_t dim = 16;
    double worst = 0;
    for (std::size_t col = 0; col < dim; ++col) {
        if (__builtin_popcountll(col) % 2 != 0) continue;
        worst = std::max(worst, (a.col(col) - b.col(col)).cwiseAbs().maxCoeff());
    }
    REQUIRE(worst < 1e-10);
}

TEST_CASE("lowering demands a definite parity and a wrap gate") {
    GateApplication wrap{fswap_gate(), 3, true};
    REQUIRE_THROWS_AS(pbc_substitute(wrap, 0, 3), indefinite_parity_error);
    GateApplication linear{fswap_gate(), 1, false};
    REQUIRE_THROWS_AS(pbc_substitute(linear, 1, 3), validation_error);
}
