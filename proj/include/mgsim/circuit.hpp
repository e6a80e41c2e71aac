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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/matchgate.hpp"

namespace mgsim {

// Qubit indices are 1-based everywhere in this header, matching the file
// format and diagnostics.

/// A matchgate placed on the adjacent pair (pos, pos+1). A wrap application
/// (pos == n, wrap == true) acts on the pair (n, 1) and is only legal in a
/// circuit with periodic boundary conditions.
struct GateApplication {
    Matchgate gate;
    int pos = 1;
    bool wrap = false;
};

struct Circuit {
    int n = 2;
    bool pbc = false;
    std::vector<GateApplication> gates;
};

inline void validate_placement(const GateApplication& g, int n, bool pbc) {
    if (g.wrap) {
        if (!pbc) throw schema_error("wrap gate in a circuit without pbc enabled");
        if (g.pos != n) throw schema_error("wrap gate must sit at position n");
    } else if (g.pos < 1 || g.pos >= n) {
        throw schema_error("gate position " + std::to_string(g.pos) + " outside 1.." +
                           std::to_string(n - 1));
    }
}

inline void validate_circuit(const Circuit& c) {
    if (c.n < 2) throw schema_error("circuit needs at least 2 qubits");
    for (const auto& g : c.gates) validate_placement(g, c.n, c.pbc);
}

/// Single-qubit pure state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
/// The global phase is deliberately not representable.
struct SingleQubitState {
    double theta = 0.0;
    double phi = 0.0;

    Eigen::Vector2cd amplitudes() const {
        return {cd(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi)};
    }
};

inline void validate_state_angles(const SingleQubitState& s) {
    if (!(s.theta >= 0.0 && s.theta <= M_PI)) throw schema_error("theta outside [0, pi]");
    if (!(s.phi >= 0.0 && s.phi < 2 * M_PI)) throw schema_error("phi outside [0, 2*pi)");
}

struct InputSpec {
    enum class Kind { Basis, Product };
    Kind kind = Kind::Basis;
    std::string bits;                      // Kind::Basis, length n, chars '0'/'1'
    std::vector<SingleQubitState> qubits;  // Kind::Product, length n

    static InputSpec basis(std::string b) {
        InputSpec s;
        s.kind = Kind::Basis;
        s.bits = std::move(b);
        return s;
    }
    static InputSpec product(std::vector<SingleQubitState> q) {
        InputSpec s;
        s.kind = Kind::Product;
        s.qubits = std::move(q);
        return s;
    }
};

inline void validate_input(const InputSpec& in, int n) {
    if (in.kind == InputSpec::Kind::Basis) {
        if (static_cast<int>(in.bits.size()) != n) throw schema_error("input bits length != n");
        for (char c : in.bits)
            if (c != '0' && c != '1') throw schema_error("input bits must be 0/1");
    } else {
        if (static_cast<int>(in.qubits.size()) != n) throw schema_error("input qubits length != n");
        for (const auto& q : in.qubits) validate_state_angles(q);
    }
}

/// +1 for even Hamming weight, -1 for odd.
inline int bits_parity(const std::string& bits) {
    int ones = 0;
    for (char c : bits) ones += (c == '1');
    return (ones % 2 == 0) ? 1 : -1;
}

/// Measurement basis of one qubit: the computational basis, or the basis
/// {V|0>, V|1>} where V|0> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct MeasureBasis {
    bool computational = true;
    double theta = 0.0;
    double phi = 0.0;

    static MeasureBasis z() { return MeasureBasis{}; }
    static MeasureBasis rotated(double theta, double phi) { return MeasureBasis{false, theta, phi}; }

    Eigen::Matrix2cd unitary() const {
        Eigen::Matrix2cd v;
        if (computational) return Eigen::Matrix2cd::Identity();
        double c = std::cos(theta / 2), s = std::sin(theta / 2);
        v << cd(c, 0), cd(-s, 0), std::polar(s, phi), std::polar(c, phi);
        return v;
    }
};

struct MeasureSpec {
    int qubit = 1;
    MeasureBasis basis;
};

struct OutcomeEntry {
    int qubit = 1;
    int bit = 0;
    MeasureBasis basis;
};

/// Partial assignment of bits (and bases) to a subset of qubits.
using OutcomeAssignment = std::vector<OutcomeEntry>;

inline void validate_assignment(const OutcomeAssignment& y, int n) {
    if (y.empty()) throw schema_error("empty outcome assignment");
    std::vector<bool> seen(n + 1, false);
    for (const auto& e : y) {
        if (e.qubit < 1 || e.qubit > n) throw schema_error("assigned qubit outside 1..n");
        if (seen[e.qubit]) throw schema_error("qubit assigned twice");
        seen[e.qubit] = true;
        if (e.bit != 0 && e.bit != 1) throw schema_error("assigned bit must be 0 or 1");
    }
}

/// One adaptive round: a circuit segment, the subset measured after it, and
/// the branch table selecting the next round from the observed bits. A round
/// without branches is terminal.
struct AdaptiveRound {
    std::vector<GateApplication> gates;
    std::vector<MeasureSpec> measure;
    std::map<std::string, int> branches;  // bits -> round index; "default" allowed

    bool terminal() const { return branches.empty(); }
};

struct AdaptiveProgram {
    int n = 2;
    bool pbc = false;
    std::vector<AdaptiveRound> rounds;
};

inline void validate_program(const AdaptiveProgram& p) {
    if (p.n < 2) throw schema_error("program needs at least 2 qubits");
    if (p.rounds.empty()) throw schema_error("program needs at least one round");
    for (std::size_t r = 0; r < p.rounds.size(); ++r) {
        const auto& round = p.rounds[r];
        for (const auto& g : round.gates) validate_placement(g, p.n, p.pbc);
        if (round.measure.empty()) throw schema_error("round " + std::to_string(r) + " measures nothing");
        std::vector<bool> seen(p.n + 1, false);
        for (const auto& m : round.measure) {
            if (m.qubit < 1 || m.qubit > p.n) throw schema_error("measured qubit outside 1..n");
            if (seen[m.qubit]) throw schema_error("qubit measured twice in one round");
            seen[m.qubit] = true;
            if (!m.basis.computational)
                throw schema_error("adaptive rounds only support computational-basis measurements");
        }
        if (round.terminal()) continue;
        std::size_t k = round.measure.size();
        bool has_default = round.branches.count("default") > 0;
        std::size_t covered = 0;
        for (const auto& [key, target] : round.branches) {
            if (key != "default") {
                if (key.size() != k) throw schema_error("branch key length != round size");
                for (char c : key)
                    if (c != '0' && c != '1') throw schema_error("branch key must be bits");
                ++covered;
            }
            if (target < 0 || target >= static_cast<int>(p.rounds.size()))
                throw schema_error("branch target outside rounds");
            if (target <= static_cast<int>(r))
                throw schema_error("branch target must be a later round");
        }
        if (!has_default && covered < (std::size_t{1} << k))
            throw schema_error("round " + std::to_string(r) + " branch table incomplete");
    }
}

}  // namespace mgsim
