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

#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "mgsim/errors.hpp"
#include "mgsim/mode_transfer.hpp"
#include "mgsim/pfaffian.hpp"

namespace mgsim {

/// Operator linear in the mode operators: sum_p alpha_p a_p + beta_p a+_p.
/// The atom of Wick contraction.
struct LinearFermionicOperator {
    Eigen::VectorXcd alpha;
    Eigen::VectorXcd beta;

    int modes() const { return static_cast<int>(alpha.size()); }

    static LinearFermionicOperator zero(int n) {
        return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)};
    }
    /// a_site (1-based site).
    static LinearFermionicOperator annihilation(int n, int site) {
        auto op = zero(n);
        op.alpha(site - 1) = 1.0;
        return op;
    }
    /// a+_site (1-based site).
    static LinearFermionicOperator creation(int n, int site) {
        auto op = zero(n);
        op.beta(site - 1) = 1.0;
        return op;
    }

    /// Rebuilds (alpha, beta) from Majorana coefficients h (length 2n):
    /// operator = sum_b h_b c_b.
    static LinearFermionicOperator from_majorana(const Eigen::VectorXcd& h) {
        const int n = static_cast<int>(h.size() / 2);
        auto op = zero(n);
        for (int k = 0; k < n; ++k) {
            op.alpha(k) = h(2 * k) - cd(0, 1) * h(2 * k + 1);
            op.beta(k) = h(2 * k) + cd(0, 1) * h(2 * k + 1);
        }
        return op;
    }
};

/// Vacuum contraction <0| f g |0>. Only the annihilation part of f against
/// the creation part of g survives: sum_p alpha^f_p beta^g_p.
inline cd contract_pair(const LinearFermionicOperator& f, const LinearFermionicOperator& g) {
    if (f.modes() != g.modes()) throw dimension_mismatch_error("operators on different registers");
    return f.alpha.cwiseProduct(g.beta).sum();
}

/// Scalar part of the anticommutator {f, g}.
inline cd anticommutator_scalar(const LinearFermionicOperator& f, const LinearFermionicOperator& g) {
    return contract_pair(f, g) + contract_pair(g, f);
}

/// Antisymmetric matrix of pairwise contractions A_jk = <0| f_j f_k |0> for
/// j < k, mirrored with a sign below the diagonal.
inline Eigen::MatrixXcd contraction_matrix(std::span<const LinearFermionicOperator> ops) {
    const int m = static_cast<int>(ops.size());
    if (m == 0) return Eigen::MatrixXcd::Zero(0, 0);
    const int n = ops[0].modes();
    Eigen::MatrixXcd am(m, n), bm(m, n);
    for (int j = 0; j < m; ++j) {
        if (ops[j].modes() != n) throw dimension_mismatch_error("operators on different registers");
        am.row(j) = ops[j].alpha.transpose();
        bm.row(j) = ops[j].beta.transpose();
    }
    Eigen::MatrixXcd all = am * bm.transpose();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
            out(j, k) = all(j, k);
            out(k, j) = -all(j, k);
        }
    }
    return out;
}

/// <0| f_1 f_2 ... f_m |0> via Wick's theorem: the Pfaffian of the pairwise
/// contraction matrix. Odd-length products vanish on the vacuum.
inline cd vacuum_expectation(std::span<const LinearFermionicOperator> ops) {
    if (ops.size() % 2 == 1) return cd(0.0, 0.0);
    return pfaffian(contraction_matrix(ops));
}

inline cd vacuum_expectation(const std::vector<LinearFermionicOperator>& ops) {
    return vacuum_expectation(std::span<const LinearFermionicOperator>(ops));
}

/// Pulls an elementary operator back through a circuit: C+ (op) C, with C the
/// circuit whose transfer is `t`. Uses the transpose as the inverse, which is
/// exact up to the orthogonality drift of the transfer.
inline LinearFermionicOperator pull_back(const ModeTransfer& t, int site, bool dagger) {
    const int n = t.modes();
    const Eigen::MatrixXd& o = t.majorana_matrix();
    // a_site = (c_{2s-1} + i c_{2s})/2, a+_site = (c_{2s-1} - i c_{2s})/2.
    Eigen::VectorXcd h =
        0.5 * o.col(2 * site - 2).cast<cd>() +
        cd(0, dagger ? -0.5 : 0.5) * o.col(2 * site - 1).cast<cd>();
    return LinearFermionicOperator::from_majorana(h);
}

/// Submatrix determinant <y| M |x> for a number-preserving circuit, relative
/// to the circuit's vacuum amplitude (which has unit modulus). Rows of R are
/// selected by the ones of x, columns by the ones of y; mismatched Hamming
/// weights give 0.
inline cd determinant_submatrix(const Eigen::MatrixXcd& r, const std::string& x,
                                const std::string& y) {
    const int n = static_cast<int>(r.rows());
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw dimension_mismatch_error("bitstring length != modes");
    std::vector<int> rows, cols;
    for (int i = 0; i < n; ++i) {
        if (x[i] == '1') rows.push_back(i);
        if (y[i] == '1') cols.push_back(i);
    }
    if (rows.size() != cols.size()) return cd(0.0, 0.0);
    const int h = static_cast<int>(rows.size());
    if (h == 0) return cd(1.0, 0.0);
    Eigen::MatrixXcd sub(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) sub(i, j) = r(rows[i], cols[j]);
    return sub.determinant();
}

inline cd determinant_amplitude(const ModeTransfer& t, const std::string& x, const std::string& y) {
    if (!t.number_preserving())
        throw not_number_preserving_error("determinant amplitudes need R' = 0");
    auto [r, rp] = t.r_blocks();
    (void)rp;
    return determinant_submatrix(r, x, y);
}

}  // namespace mgsim
