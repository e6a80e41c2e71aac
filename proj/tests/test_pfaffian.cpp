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

#include "mgsim/pfaffian.hpp"

using namespace mgsim;

namespace {

Eigen::MatrixXcd random_antisymmetric(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cd(nd(rng), nd(rng));
    return m - m.transpose().eval();
}

}  // namespace

TEST_CASE("2x2 pfaffian is the off-diagonal entry, exactly") {
    Eigen::MatrixXcd a(2, 2);
    a << 0.0, cd(1.25, -0.5), cd(-1.25, 0.5), 0.0;
    REQUIRE(pfaffian(a) == cd(1.25, -0.5));
}

TEST_CASE("odd dimensions give exactly zero") {
    std::mt19937_64 rng(5);
    for (int dim : {1, 3, 5, 7, 11}) {
        REQUIRE(pfaffian(random_antisymmetric(rng, dim)) == cd(0.0, 0.0));
    }
}

TEST_CASE("empty matrix has pfaffian one") {
    REQUIRE(pfaffian(Eigen::MatrixXcd::Zero(0, 0)) == cd(1.0, 0.0));
}

TEST_CASE("4x4 matches the cofactor expansion") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXcd a = random_antisymmetric(rng, 4);
        cd want = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
        REQUIRE(std::abs(pfaffian(a) - want) < 1e-12 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("pfaffian squares to the determinant") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dimd(1, 20);
    for (int t = 0; t < 120; ++t) {
        int dim = 2 * dimd(rng);
        Eigen::MatrixXcd a = random_antisymmetric(rng, dim);
        cd pf = pfaffian(a);
        cd det = a.determinant();
        double scale = std::max({std::abs(det), std::norm(pf), 1e-300});
        REQUIRE(std::abs(pf * pf - det) / scale < 1e-8);
    }
}

TEST_CASE("swapping an index pair flips the sign") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXcd a = random_antisymmetric(rng, 8);
        cd before = pfaffian(a);
        Eigen::MatrixXcd b = a;
        b.row(2).swap(b.row(5));
        b.col(2).swap(b.col(5));
        cd after = pfaffian(b);
        REQUIRE(std::abs(before + after) < 1e-10 * (1.0 + std::abs(before)));
    }
}

TEST_CASE("structurally singular matrices give zero") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4, 4);
    a(2, 3) = 1.0;
    a(3, 2) = -1.0;
    REQUIRE(pfaffian(a) == cd(0.0, 0.0));
}

TEST_CASE("non-antisymmetric input is refused") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(4, 4);
    REQUIRE_THROWS_AS(pfaffian(a), not_antisymmetric_error);
    REQUIRE_THROWS_AS(pfaffian(Eigen::MatrixXcd::Zero(2, 3)), not_antisymmetric_error);
}
