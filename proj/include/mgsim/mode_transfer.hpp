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
#include <array>
#include <vector>

#include "mgsim/circuit.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/matchgate.hpp"
#include "mgsim/tolerances.hpp"

namespace mgsim {

// Operator conventions, fixed project-wide and checked against the dense
// oracle rather than asserted:
//   c_{2k-1} = (prod_{j<k} Z_j) X_k,   c_{2k} = (prod_{j<k} Z_j) Y_k,
//   a_k   = (c_{2k-1} + i c_{2k}) / 2,
//   a+_k  = (c_{2k-1} - i c_{2k}) / 2,
// with qubit 1 the high bit of basis indices |b_1 b_2 ... b_n>.

namespace detail {

inline const std::array<Eigen::Matrix2cd, 4>& pauli_table() {
    static const std::array<Eigen::Matrix2cd, 4> table = [] {
        std::array<Eigen::Matrix2cd, 4> t;
        t[0] = Eigen::Matrix2cd::Identity();
        t[1] << 0, 1, 1, 0;
        t[2] << 0, cd(0, -1), cd(0, 1), 0;
        t[3] << 1, 0, 0, -1;
        return t;
    }();
    return table;
}

inline Eigen::Matrix4cd two_qubit_pauli(int p_first, int p_second) {
    const auto& p = pauli_table();
    Eigen::Matrix4cd out;
    for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1)
            for (int r2 = 0; r2 < 2; ++r2)
                for (int c2 = 0; c2 < 2; ++c2)
                    out(2 * r1 + r2, 2 * c1 + c2) = p[p_first](r1, c1) * p[p_second](r2, c2);
    return out;
}

// Local images of the four Majorana operators touching a (i, i+1) pair:
// X(x)I, Y(x)I, Z(x)X, Z(x)Y. Strings over qubits below i factor out, and
// strings passing through the pair commute with any matchgate.
inline const std::array<Eigen::Matrix4cd, 4>& local_majoranas() {
    static const std::array<Eigen::Matrix4cd, 4> table = {
        two_qubit_pauli(1, 0), two_qubit_pauli(2, 0), two_qubit_pauli(3, 1), two_qubit_pauli(3, 2)};
    return table;
}

}  // namespace detail

/// Conjugates the four local Majorana operators by the gate and expands the
/// results in the two-qubit Pauli basis. The expansion must stay inside the
/// linear Majorana span; anything else means a non-matchgate slipped past
/// validation. Returns the real 4x4 rotation block.
inline Eigen::Matrix4d local_majorana_rotation(const Matchgate& g) {
    const Eigen::Matrix4cd u = g.assemble();
    const auto& majos = detail::local_majoranas();
    Eigen::Matrix4d block;
    double residual = 0.0;
    for (int a = 0; a < 4; ++a) {
        Eigen::Matrix4cd image = u * majos[a] * u.adjoint();
        for (int p1 = 0; p1 < 4; ++p1) {
            for (int p2 = 0; p2 < 4; ++p2) {
                cd coef = (detail::two_qubit_pauli(p1, p2) * image).trace() / 4.0;
                int slot = -1;
                if (p1 == 1 && p2 == 0) slot = 0;
                if (p1 == 2 && p2 == 0) slot = 1;
                if (p1 == 3 && p2 == 1) slot = 2;
                if (p1 == 3 && p2 == 2) slot = 3;
                if (slot >= 0) {
                    block(a, slot) = coef.real();
                    residual = std::max(residual, std::abs(coef.imag()));
                } else {
                    residual = std::max(residual, std::abs(coef));
                }
            }
        }
    }
    if (residual > tol::majorana_span)
        throw not_linearizable_error("gate action leaves the linear Majorana span");
    return block;
}

/// Linear Heisenberg action of a circuit on Majorana operators:
/// M c_a M+ = sum_b O_ab c_b with O real (and orthogonal up to float error).
/// The creation/annihilation blocks R, R' are derived views.
class ModeTransfer {
  public:
    static ModeTransfer identity(int modes) {
        ModeTransfer t;
        t.modes_ = modes;
        t.o_ = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
        return t;
    }

    static ModeTransfer from_majorana(Eigen::MatrixXd o) {
        if (o.rows() != o.cols() || o.rows() % 2 != 0)
            throw dimension_mismatch_error("majorana matrix must be 2n x 2n");
        ModeTransfer t;
        t.modes_ = static_cast<int>(o.rows() / 2);
        t.o_ = std::move(o);
        return t;
    }

    int modes() const { return modes_; }
    const Eigen::MatrixXd& majorana_matrix() const { return o_; }

    /// Appends a gate acting on the pair (pos, pos+1), 1-based. Only the four
    /// columns of the touched Majorana block change.
    void append_block(int pos, const Eigen::Matrix4d& block) {
        int base = 2 * (pos - 1);
        o_.middleCols(base, 4) = o_.middleCols(base, 4) * block;
    }

    void append_gate(const Matchgate& g, int pos) { append_block(pos, local_majorana_rotation(g)); }

    /// Appends another transfer (this circuit followed by the other).
    void append(const ModeTransfer& other) {
        if (other.modes_ != modes_) throw dimension_mismatch_error("mode count mismatch");
        o_ = o_ * other.o_;
    }

    double orthogonality_residual() const {
        return (o_ * o_.transpose() - Eigen::MatrixXd::Identity(2 * modes_, 2 * modes_))
            .cwiseAbs()
            .maxCoeff();
    }

    /// The 2n x 2n complex matrix T acting on the column (a_1..a_n, a+_1..a+_n).
    Eigen::MatrixXcd creation_annihilation() const {
        const int n = modes_;
        Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        Eigen::MatrixXcd winv = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        for (int k = 0; k < n; ++k) {
            // c_{2k-1} = a_k + a+_k ; c_{2k} = -i a_k + i a+_k
            w(2 * k, k) = 1;
            w(2 * k, n + k) = 1;
            w(2 * k + 1, k) = cd(0, -1);
            w(2 * k + 1, n + k) = cd(0, 1);
            // a_k = (c_{2k-1} + i c_{2k}) / 2 ; a+_k = (c_{2k-1} - i c_{2k}) / 2
            winv(k, 2 * k) = 0.5;
            winv(k, 2 * k + 1) = cd(0, 0.5);
            winv(n + k, 2 * k) = 0.5;
            winv(n + k, 2 * k + 1) = cd(0, -0.5);
        }
        return winv * o_.cast<cd>() * w;
    }

    /// Blocks of M a+_i M+ = sum_j R_ij a+_j + R'_ij a_j.
    std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> r_blocks() const {
        Eigen::MatrixXcd t = creation_annihilation();
        const int n = modes_;
        return {t.block(n, n, n, n), t.block(n, 0, n, n)};
    }

    bool number_preserving() const {
        auto [r, rp] = r_blocks();
        (void)r;
        return rp.cwiseAbs().maxCoeff() <= tol::number_preserving;
    }

    /// Embeds into a larger register; added modes are untouched.
    ModeTransfer extended(int total_modes) const {
        if (total_modes < modes_) throw dimension_mismatch_error("cannot shrink a transfer");
        ModeTransfer t = identity(total_modes);
        t.o_.topLeftCorner(2 * modes_, 2 * modes_) = o_;
        return t;
    }

  private:
    int modes_ = 0;
    Eigen::MatrixXd o_;
};

/// Transfer of a single placed gate: identity everywhere except the touched
/// Majorana block. 1 <= pos <= n-1.
inline ModeTransfer gate_mode_action(const Matchgate& g, int pos, int n) {
    if (pos < 1 || pos >= n) throw dimension_mismatch_error("gate position outside the line");
    ModeTransfer t = ModeTransfer::identity(n);
    t.append_gate(g, pos);
    return t;
}

/// Transfer of a whole circuit, composed gate by gate in circuit order.
/// Wrap gates must be lowered away before calling this.
inline ModeTransfer compose_transfer(const Circuit& c) {
    ModeTransfer t = ModeTransfer::identity(c.n);
    for (const auto& g : c.gates) {
        if (g.wrap)
            throw validation_error("wrap gate reached compose_transfer; lower pbc gates first");
        t.append_gate(g.gate, g.pos);
    }
    return t;
}

/// Transfer conjugated by a mode relabeling: the same linear action written
/// in relabeled mode indices (sigma[i] is the new 1-based label of mode i+1).
/// Input data (occupations, measured positions) relabel alongside; applying
/// sigma then its inverse returns the original transfer.
inline ModeTransfer permute_modes(const ModeTransfer& t, const std::vector<int>& sigma) {
    const int n = t.modes();
    if (static_cast<int>(sigma.size()) != n) throw dimension_mismatch_error("permutation size != modes");
    std::vector<bool> seen(n + 1, false);
    for (int v : sigma) {
        if (v < 1 || v > n || seen[v]) throw validation_error("not a permutation");
        seen[v] = true;
    }
    Eigen::MatrixXd m(2 * n, 2 * n);
    const Eigen::MatrixXd& src = t.majorana_matrix();
    for (int r = 0; r < n; ++r) {
        int rd = sigma[r] - 1;
        for (int c = 0; c < n; ++c) {
            int cdst = sigma[c] - 1;
            m.block(2 * rd, 2 * cdst, 2, 2) = src.block(2 * r, 2 * c, 2, 2);
        }
    }
    return ModeTransfer::from_majorana(std::move(m));
}

}  // namespace mgsim
