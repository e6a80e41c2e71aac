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

#include <vector>

#include "mgsim/circuit.hpp"
#include "mgsim/mode_transfer.hpp"

namespace mgsim {

// Lowering of wrap-around gates. On an input of definite parity p, the
// parity-string operator threading a wrap gate's generators collapses to the
// scalar p, leaving a quadratic Hamiltonian between modes 1 and n. The sign
// of every two-qubit generator flips with p; the single-qubit Z components do
// not. The quadratic gate is realized as an f-SWAP chain bringing mode 1 next
// to mode n, a local matchgate, and the reversed chain.

inline bool has_wrap_gates(const Circuit& c) {
    for (const auto& g : c.gates)
        if (g.wrap) return true;
    return false;
}

namespace detail {

/// H with exp(iH) = u for a 2x2 unitary, split as angle0 * I + v . sigma.
struct UnitaryLog {
    double angle0 = 0.0;
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
};

inline UnitaryLog log_unitary2(const Eigen::Matrix2cd& u) {
    UnitaryLog out;
    out.angle0 = std::arg(u.determinant()) / 2.0;
    Eigen::Matrix2cd s = u / std::polar(1.0, out.angle0);
    double cw = std::clamp(s.trace().real() / 2.0, -1.0, 1.0);
    double w = std::acos(cw);
    double sw = std::sin(w);
    if (std::abs(sw) < 1e-12) {
        if (cw < 0) out.v = Eigen::Vector3d(0, 0, M_PI);  // s = -I
        return out;
    }
    // s = cos(w) I + i sin(w) (n . sigma); tr(sigma_j s) = 2 i sin(w) n_j.
    cd i2(0, 2);
    out.v(0) = ((s(0, 1) + s(1, 0)) / i2).real() * w / sw;
    out.v(1) = (0.5 * (s(0, 1) - s(1, 0))).real() * w / sw;
    out.v(2) = ((s(0, 0) - s(1, 1)) / i2).real() * w / sw;
    return out;
}

}  // namespace detail

/// Replaces a wrap gate by an equivalent sequence of nearest-neighbour
/// matchgates, valid on inputs of parity `parity` (+1 even, -1 odd).
inline std::vector<GateApplication> pbc_substitute(const GateApplication& g, int parity, int n) {
    if (!g.wrap) throw validation_error("pbc_substitute expects a wrap gate");
    if (parity != 1 && parity != -1)
        throw indefinite_parity_error("pbc lowering needs an input of definite parity");
    const Eigen::Matrix4cd dense = g.gate.assemble();
    if ((dense - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <= 1e-12) return {};

    // Generator split of the wrap gate G(A, B) acting on (first, second) =
    // (qubit n, qubit 1):
    //   H = x XX + y YY + u X_f Y_s + v Y_f X_s + z1 Z_f + z2 Z_s + angle0.
    detail::UnitaryLog la = detail::log_unitary2(g.gate.a);
    detail::UnitaryLog lb = detail::log_unitary2(g.gate.b);
    // det A = det B fixes angle0 mod pi; realign the odd block's log branch
    // when the two halves landed pi apart.
    if (std::abs(wrap_angle(la.angle0 - lb.angle0)) > M_PI / 2) {
        Eigen::Vector3d axis = lb.v.norm() > 1e-12 ? lb.v.normalized() : Eigen::Vector3d(0, 0, 1);
        lb.angle0 = wrap_angle(lb.angle0 + M_PI);
        lb.v += M_PI * axis;
    }
    const double x = (la.v(0) + lb.v(0)) / 2;
    const double y = (lb.v(0) - la.v(0)) / 2;
    const double u = (la.v(1) - lb.v(1)) / 2;
    const double v = (la.v(1) + lb.v(1)) / 2;
    const double z1 = (la.v(2) + lb.v(2)) / 2;
    const double z2 = (la.v(2) - lb.v(2)) / 2;
    const double phase = la.angle0;

    // Quadratic coefficient matrix h (H = (i/4) c^T h c) over the Majorana
    // pairs of modes 1 and n, with the parity fold on the string generators.
    const double p = static_cast<double>(parity);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    auto put = [&](int a, int b, double w) {  // 1-based Majorana indices, a < b
        h(a - 1, b - 1) += 2 * w;
        h(b - 1, a - 1) -= 2 * w;
    };
    put(1, 2 * n, -p * x);
    put(2, 2 * n - 1, p * y);
    put(2, 2 * n, -p * u);
    put(1, 2 * n - 1, p * v);
    put(2 * n - 1, 2 * n, -z1);
    put(1, 2, -z2);

    // f-SWAP chain carrying mode 1 to the slot beside mode n.
    std::vector<GateApplication> chain;
    for (int pos = 1; pos <= n - 2; ++pos) chain.push_back({fswap_gate(), pos, false});
    ModeTransfer chain_transfer = ModeTransfer::identity(n);
    for (const auto& f : chain) chain_transfer.append_gate(f.gate, f.pos);
    const Eigen::MatrixXd& oc = chain_transfer.majorana_matrix();
    Eigen::MatrixXd hh = oc.transpose() * h * oc;

    // The conjugated Hamiltonian lives on the (n-1, n) block; build the local
    // 4x4 gate and split it back into matchgate form.
    Eigen::Matrix4d local_h = hh.block(2 * n - 4, 2 * n - 4, 4, 4);
    if ((hh.cwiseAbs().sum() - local_h.cwiseAbs().sum()) > 1e-9)
        throw integrity_error("pbc lowering left weight outside the local block");
    const auto& majos = detail::local_majoranas();
    Eigen::Matrix4cd ham = phase * Eigen::Matrix4cd::Identity();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (local_h(a, b) != 0.0) ham += cd(0, 0.25) * local_h(a, b) * majos[a] * majos[b];

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(ham);
    Eigen::Vector4d lam = es.eigenvalues();
    Eigen::Matrix4cd q = es.eigenvectors();
    Eigen::Matrix4cd expo = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) expo(i, i) = std::polar(1.0, lam(i));
    Eigen::Matrix4cd gate4 = q * expo * q.adjoint();

    Eigen::Matrix2cd ga, gb;
    ga << gate4(0, 0), gate4(0, 3), gate4(3, 0), gate4(3, 3);
    gb << gate4(1, 1), gate4(1, 2), gate4(2, 1), gate4(2, 2);
    double off = std::abs(gate4(0, 1)) + std::abs(gate4(0, 2)) + std::abs(gate4(1, 0)) +
                 std::abs(gate4(1, 3)) + std::abs(gate4(2, 0)) + std::abs(gate4(2, 3)) +
                 std::abs(gate4(3, 1)) + std::abs(gate4(3, 2));
    if (off > 1e-10) throw integrity_error("pbc local gate lost the matchgate block form");

    std::vector<GateApplication> out = chain;
    out.push_back({validate_matchgate(ga, gb), n - 1, false});
    out.insert(out.end(), chain.rbegin(), chain.rend());
    return out;
}

/// Copy of the circuit with every wrap gate lowered for the given parity.
inline Circuit lower_pbc(const Circuit& c, int parity) {
    if (!has_wrap_gates(c)) return c;
    Circuit out;
    out.n = c.n;
    out.pbc = false;
    for (const auto& g : c.gates) {
        if (!g.wrap) {
            out.gates.push_back(g);
            continue;
        }
        auto lowered = pbc_substitute(g, parity, c.n);
        out.gates.insert(out.gates.end(), lowered.begin(), lowered.end());
    }
    return out;
}

}  // namespace mgsim
