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

#include "mgsim/wick.hpp"
#include "support/dense_fock.hpp"
#include "support/random_circuits.hpp"

using namespace mgsim;
using namespace mgsim::testing;

namespace {

LinearFermionicOperator random_op(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    auto op = LinearFermionicOperator::zero(n);
    for (int p = 0; p < n; ++p) {
        op.alpha(p) = cd(nd(rng), nd(rng));
        op.beta(p) = cd(nd(rng), nd(rng));
    }
    return op;
}

}  // namespace

TEST_CASE("pair contractions on the vacuum") {
    auto a1 = LinearFermionicOperator::annihilation(2, 1);
    auto c1 = LinearFermionicOperator::creation(2, 1);
    REQUIRE(contract_pair(a1, c1) == cd(1.0, 0.0));
    REQUIRE(contract_pair(c1, a1) == cd(0.0, 0.0));

    auto f = LinearFermionicOperator::zero(2);
    f.alpha(0) = 1 / std::sqrt(2.0);
    f.beta(1) = 1 / std::sqrt(2.0);
    auto g = LinearFermionicOperator::zero(2);
    g.beta(0) = 1 / std::sqrt(2.0);
    g.alpha(1) = 1 / std::sqrt(2.0);
    REQUIRE(std::abs(contract_pair(f, g) - cd(0.5, 0.0)) < 1e-15);
}

TEST_CASE("ordered vacuum expectations and their signs") {
    const int n = 2;
    auto a = [&](int s) { return LinearFermionicOperator::annihilation(n, s); };
    auto c = [&](int s) { return LinearFermionicOperator::creation(n, s); };
    REQUIRE(std::abs(vacuum_expectation({a(1), c(1)}) - cd(1, 0)) < 1e-15);
    REQUIRE(std::abs(vacuum_expectation({a(1), a(2), c(2), c(1)}) - cd(1, 0)) < 1e-15);
    REQUIRE(std::abs(vacuum_expectation({a(1), a(2), c(1), c(2)}) - cd(-1, 0)) < 1e-15);
}

TEST_CASE("odd products vanish") {
    const int n = 2;
    std::vector<LinearFermionicOperator> ops = {LinearFermionicOperator::annihilation(n, 1),
                                                LinearFermionicOperator::creation(n, 1),
                                                LinearFermionicOperator::creation(n, 2)};
    REQUIRE(vacuum_expectation(ops) == cd(0.0, 0.0));
}

TEST_CASE("random operator products match the dense evaluation") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 25; ++t) {
        std::vector<LinearFermionicOperator> ops;
        for (int j = 0; j < 8; ++j) ops.push_back(random_op(rng, 4));
        cd got = vacuum_expectation(ops);
        cd want = dense_vacuum_expectation(4, ops);
        REQUIRE(std::abs(got - want) < 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("reordering a pair costs the anticommutator") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 25; ++t) {
        auto f = random_op(rng, 3);
        auto g = random_op(rng, 3);
        cd scalar = (f.alpha.cwiseProduct(g.beta) + f.beta.cwiseProduct(g.alpha)).sum();
        REQUIRE(std::abs(anticommutator_scalar(f, g) - scalar) < 1e-12 * (1.0 + std::abs(scalar)));
    }
}

TEST_CASE("mismatched registers are refused") {
    auto f = LinearFermionicOperator::annihilation(2, 1);
    auto g = LinearFermionicOperator::creation(3, 1);
    REQUIRE_THROWS_AS(contract_pair(f, g), dimension_mismatch_error);
}

TEST_CASE("determinant amplitudes: identity circuit") {
    ModeTransfer t = ModeTransfer::identity(4);
    REQUIRE(std::abs(determinant_amplitude(t, "0110", "0110") - cd(1, 0)) < 1e-14);
    REQUIRE(std::abs(determinant_amplitude(t, "0110", "0101")) < 1e-14);
    REQUIRE(determinant_amplitude(t, "0110", "0111") == cd(0.0, 0.0));  // weight mismatch
}

TEST_CASE("determinant amplitudes: f-SWAP exchanges occupation") {
    ModeTransfer t = gate_mode_action(fswap_gate(), 1, 2);
    cd amp = determinant_amplitude(t, "10", "01");
    REQUIRE(std::abs(std::abs(amp) - 1.0) < 1e-12);
    REQUIRE(std::norm(determinant_amplitude(t, "10", "10")) < 1e-24);
}

TEST_CASE("determinant amplitudes match dense amplitudes up to the vacuum phase") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 8; ++t) {
        Circuit c = random_circuit(rng, 5, 14, /*number_preserving=*/true);
        ModeTransfer tr = compose_transfer(c);
        REQUIRE(tr.number_preserving());
        Mat u = dense_circuit_unitary(c);
        cd vacuum = u(0, 0);
        REQUIRE(std::abs(std::abs(vacuum) - 1.0) < 1e-10);
        for (int xk = 0; xk < 32; ++xk) {
            std::string x;
            for (int i = 4; i >= 0; --i) x += ((xk >> i) & 1) ? '1' : '0';
            for (int yk = 0; yk < 32; ++yk) {
                if (__builtin_popcount(xk) != __builtin_popcount(yk)) continue;
                std::string y;
                for (int i = 4; i >= 0; --i) y += ((yk >> i) & 1) ? '1' : '0';
                cd got = determinant_amplitude(tr, x, y);
                cd want = u(yk, xk) / vacuum;
                REQUIRE(std::abs(got - want) < 1e-10);
            }
        }
    }
}

TEST_CASE("determinant path refuses circuits with R' != 0") {
    std::mt19937_64 rng(44);
    Circuit c = random_circuit(rng, 3, 10);
    ModeTransfer tr = compose_transfer(c);
    if (!tr.number_preserving()) {
        REQUIRE_THROWS_AS(determinant_amplitude(tr, "000", "000"), not_number_preserving_error);
    }
}

TEST_CASE("full-assignment determinant squares match projector expectations") {
    std::mt19937_64 rng(45);
    for (int t = 0; t < 5; ++t) {
        Circuit c = random_circuit(rng, 4, 12, /*number_preserving=*/true);
        ModeTransfer tr = compose_transfer(c);
        std::string x = random_bits(rng, 4);
        for (int yk = 0; yk < 16; ++yk) {
            std::string y;
            for (int i = 3; i >= 0; --i) y += ((yk >> i) & 1) ? '1' : '0';
            cd amp = determinant_amplitude(tr, x, y);
            // projector-string route
            std::vector<LinearFermionicOperator> ops;
            for (int q = 4; q >= 1; --q)
                if (x[q - 1] == '1') ops.push_back(LinearFermionicOperator::annihilation(4, q));
            for (int q = 1; q <= 4; ++q) {
                if (y[q - 1] == '1') {
                    ops.push_back(pull_back(tr, q, true));
                    ops.push_back(pull_back(tr, q, false));
                } else {
                    ops.push_back(pull_back(tr, q, false));
                    ops.push_back(pull_back(tr, q, true));
                }
            }
            for (int q = 1; q <= 4; ++q)
                if (x[q - 1] == '1') ops.push_back(LinearFermionicOperator::creation(4, q));
            cd prob = vacuum_expectation(ops);
            REQUIRE(std::abs(std::norm(amp) - prob.real()) < 1e-10);
        }
    }
}
