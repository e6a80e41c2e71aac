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

namespace mgsim {

// Product-input synthesis. Only two single-qubit primitives are reachable
// with matchgates: a Hadamard on the qubit next to a |+> catalyst (through
// G(H,H)) and Z rotations (matchgates outright). States are prepared one by
// one on the qubit beside the ancilla and carried to their slot by f-SWAPs
// across the qubits that are still |0>.

struct PrepStep {
    enum class Kind { H, Rz };
    Kind kind;
    double angle = 0.0;  // Rz only; exp(i * angle * Z)

    static PrepStep h() { return {Kind::H, 0.0}; }
    static PrepStep rz(double a) { return {Kind::Rz, wrap_angle(a)}; }
};

/// Z-X-Z Euler angles of a single-qubit unitary, up to global phase:
/// U ~ exp(i a Z) exp(i b X) exp(i c Z), with exp(i b X) = H exp(i b Z) H.
struct ZxzAngles {
    double a = 0.0, b = 0.0, c = 0.0;
};

inline ZxzAngles euler_zxz(const Eigen::Matrix2cd& u) {
    if (unitarity_residual(u) > 1e-9) throw validation_error("euler_zxz needs a unitary");
    cd det = u.determinant();
    cd phase = std::polar(1.0, std::arg(det) / 2.0);
    Eigen::Matrix2cd s = u / phase;  // special unitary
    double cb = std::abs(s(0, 0));
    double sb = std::abs(s(0, 1));
    ZxzAngles out;
    out.b = std::atan2(sb, cb);
    constexpr double eps = 1e-14;
    if (sb <= eps) {
        out.a = std::arg(s(0, 0));
        out.c = 0.0;
    } else if (cb <= eps) {
        out.a = std::arg(s(0, 1)) - M_PI / 2;
        out.c = 0.0;
    } else {
        double apc = std::arg(s(0, 0));
        double amc = std::arg(s(0, 1)) - M_PI / 2;
        out.a = (apc + amc) / 2;
        out.c = (apc - amc) / 2;
    }
    out.a = wrap_angle(out.a);
    out.c = wrap_angle(out.c);
    return out;
}

inline std::vector<PrepStep> steps_for_unitary(const Eigen::Matrix2cd& u) {
    ZxzAngles z = euler_zxz(u);
    std::vector<PrepStep> steps;
    constexpr double eps = 1e-14;
    auto push_rz = [&](double angle) {
        angle = wrap_angle(angle);
        // angle == pi is a global phase on exp(i*angle*Z) only when combined
        // with -I; keep it, only drop exact zeros.
        if (std::abs(angle) > eps && std::abs(std::abs(angle) - M_PI) > eps) steps.push_back(PrepStep::rz(angle));
    };
    push_rz(z.c);
    if (std::abs(z.b) > eps) {
        steps.push_back(PrepStep::h());
        push_rz(z.b);
        steps.push_back(PrepStep::h());
    }
    push_rz(z.a);
    return steps;
}

/// Steps taking |0> to the given state up to global phase. Degenerate angles
/// collapse to shorter patterns: |0> needs nothing, |+> a single H.
inline std::vector<PrepStep> euler_single_qubit(const SingleQubitState& psi) {
    constexpr double eps = 1e-14;
    if (std::abs(psi.theta) <= eps) return {};
    if (std::abs(psi.theta - M_PI / 2) <= eps && std::abs(wrap_angle(psi.phi)) <= eps)
        return {PrepStep::h()};
    std::vector<PrepStep> steps;
    steps.push_back(PrepStep::h());
    steps.push_back(PrepStep::rz(psi.theta / 2));
    steps.push_back(PrepStep::h());
    double final_angle = wrap_angle((M_PI / 2 - psi.phi) / 2);
    if (std::abs(final_angle) > eps && std::abs(std::abs(final_angle) - M_PI) > eps)
        steps.push_back(PrepStep::rz(final_angle));
    return steps;
}

/// Matchgate circuit on n+1 qubits carrying |0...0>|+> to |psi_1...psi_n>|+>.
struct PreparationCircuit {
    Circuit circuit;  // n+1 qubits
    int ancilla = 0;  // always n+1
};

inline PreparationCircuit synthesize_preparation(const std::vector<SingleQubitState>& input) {
    const int n = static_cast<int>(input.size());
    if (n < 1) throw validation_error("empty product input");
    PreparationCircuit prep;
    prep.circuit.n = n + 1;
    prep.circuit.pbc = false;
    prep.ancilla = n + 1;
    for (int slot = 1; slot <= n; ++slot) {
        for (const PrepStep& s : euler_single_qubit(input[slot - 1])) {
            if (s.kind == PrepStep::Kind::H)
                prep.circuit.gates.push_back({hadamard_pair_gate(), n, false});
            else
                prep.circuit.gates.push_back({phase_rotation_first(s.angle), n, false});
        }
        // Carry the fresh state from qubit n up to its slot across |0> qubits.
        for (int j = n - 1; j >= slot; --j)
            prep.circuit.gates.push_back({fswap_gate(), j, false});
    }
    return prep;
}

}  // namespace mgsim
