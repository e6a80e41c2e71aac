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

#include <json.hpp>
#include <optional>
#include <string>

#include "mgsim/circuit.hpp"

namespace mgsim {

// Circuit files are UTF-8 JSON. One file carries the circuit, the input and
// the measurement spec (or the rounds of an adaptive program):
//
//   { "n": 3, "pbc": false,
//     "gates": [ { "pos": 1, "pbc": false,
//                  "A": [[[re,im],[re,im]],[[re,im],[re,im]]], "B": [...] } ],
//     "input": { "type": "basis", "bits": "010" }
//            | { "type": "product", "qubits": [ {"theta": t, "phi": p}, ... ] },
//     "measure": [ { "qubit": 2, "basis": "Z" },
//                  { "qubit": 3, "basis": {"theta": t, "phi": p} } ] }
//
// Adaptive programs replace "gates"/"measure" by "rounds"; branch targets are
// 0-based indices into the rounds array and must point forward; a "default"
// branch may stand in for unlisted outcomes:
//
//   "rounds": [ { "gates": [...], "measure": [...],
//                 "branches": { "0": 1, "default": 2 } }, ... ]

struct CircuitFile {
    Circuit circuit;  // for adaptive files: n/pbc with no gates
    InputSpec input;
    std::vector<MeasureSpec> measure;
    std::optional<AdaptiveProgram> program;
};

namespace detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline const json& field(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw schema_error(path + ": missing field '" + key + "'");
    return *it;
}

inline Eigen::Matrix2cd parse_block(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw schema_error(path + ": expected 2x2 matrix");
    Eigen::Matrix2cd m;
    for (int r = 0; r < 2; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != 2) throw schema_error(path + ": expected 2x2 matrix");
        for (int c = 0; c < 2; ++c) {
            const json& e = row[c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw schema_error(path + ": matrix entries are [re, im] pairs");
            m(r, c) = cd(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

inline GateApplication parse_gate(const json& j, int n, bool pbc, const std::string& path) {
    if (!j.is_object()) throw schema_error(path + ": expected object");
    GateApplication g;
    const json& pos = field(j, "pos", path);
    if (!pos.is_number_integer()) throw schema_error(path + ".pos: expected integer");
    g.pos = pos.get<int>();
    g.wrap = j.value("pbc", false);
    Eigen::Matrix2cd a = parse_block(field(j, "A", path), path + ".A");
    Eigen::Matrix2cd b = parse_block(field(j, "B", path), path + ".B");
    try {
        g.gate = validate_matchgate(a, b);
    } catch (const not_unitary_error& e) {
        throw not_unitary_error(path + ": " + e.what());
    } catch (const determinant_mismatch_error& e) {
        throw determinant_mismatch_error(path + ": " + e.what());
    }
    try {
        validate_placement(g, n, pbc);
    } catch (const schema_error& e) {
        throw schema_error(path + ": " + e.what());
    }
    return g;
}

inline MeasureBasis parse_basis(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "Z") return MeasureBasis::z();
        throw schema_error(path + ": basis is \"Z\" or {theta, phi}");
    }
    if (j.is_object()) {
        const json& t = field(j, "theta", path);
        const json& p = field(j, "phi", path);
        if (!t.is_number() || !p.is_number()) throw schema_error(path + ": theta/phi must be numbers");
        return MeasureBasis::rotated(t.get<double>(), p.get<double>());
    }
    throw schema_error(path + ": basis is \"Z\" or {theta, phi}");
}

inline std::vector<MeasureSpec> parse_measure(const json& j, int n, const std::string& path) {
    if (!j.is_array()) throw schema_error(path + ": expected array");
    std::vector<MeasureSpec> out;
    std::vector<bool> seen(n + 1, false);
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = path + "[" + std::to_string(i) + "]";
        const json& e = j[i];
        if (!e.is_object()) throw schema_error(p + ": expected object");
        const json& q = field(e, "qubit", p);
        if (!q.is_number_integer()) throw schema_error(p + ".qubit: expected integer");
        MeasureSpec m;
        m.qubit = q.get<int>();
        if (m.qubit < 1 || m.qubit > n) throw schema_error(p + ".qubit: outside 1..n");
        if (seen[m.qubit]) throw schema_error(p + ".qubit: measured twice");
        seen[m.qubit] = true;
        m.basis = parse_basis(field(e, "basis", p), p + ".basis");
        out.push_back(m);
    }
    return out;
}

inline json basis_json(const MeasureBasis& b) {
    if (b.computational) return json("Z");
    return json{{"theta", b.theta}, {"phi", b.phi}};
}

inline ordered_json gate_json(const GateApplication& g) {
    auto block = [](const Eigen::Matrix2cd& m) {
        json rows = json::array();
        for (int r = 0; r < 2; ++r) {
            json row = json::array();
            for (int c = 0; c < 2; ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
            rows.push_back(row);
        }
        return rows;
    };
    ordered_json out;
    out["pos"] = g.pos;
    out["pbc"] = g.wrap;
    out["A"] = block(g.gate.a);
    out["B"] = block(g.gate.b);
    return out;
}

inline ordered_json measure_json(const std::vector<MeasureSpec>& measure) {
    ordered_json arr = ordered_json::array();
    for (const auto& m : measure) {
        ordered_json e;
        e["qubit"] = m.qubit;
        e["basis"] = basis_json(m.basis);
        arr.push_back(e);
    }
    return arr;
}

}  // namespace detail

/// Parses a circuit file. Throws schema_error with a field path on malformed
/// input; gate validation failures keep their own type.
inline CircuitFile parse_circuit(const std::string& text) {
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw schema_error(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw schema_error("top level must be an object");

    CircuitFile file;
    const detail::json& nj = detail::field(j, "n", "$");
    if (!nj.is_number_integer()) throw schema_error("$.n: expected integer");
    file.circuit.n = nj.get<int>();
    if (file.circuit.n < 2) throw schema_error("$.n: need at least 2 qubits");
    file.circuit.pbc = j.value("pbc", false);

    const detail::json& input = detail::field(j, "input", "$");
    std::string type = detail::field(input, "type", "$.input").get<std::string>();
    if (type == "basis") {
        file.input = InputSpec::basis(detail::field(input, "bits", "$.input").get<std::string>());
    } else if (type == "product") {
        const detail::json& qubits = detail::field(input, "qubits", "$.input");
        if (!qubits.is_array()) throw schema_error("$.input.qubits: expected array");
        std::vector<SingleQubitState> states;
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            std::string p = "$.input.qubits[" + std::to_string(i) + "]";
            const detail::json& t = detail::field(qubits[i], "theta", p);
            const detail::json& ph = detail::field(qubits[i], "phi", p);
            if (!t.is_number() || !ph.is_number()) throw schema_error(p + ": theta/phi must be numbers");
            states.push_back({t.get<double>(), ph.get<double>()});
        }
        file.input = InputSpec::product(std::move(states));
    } else {
        throw schema_error("$.input.type: expected \"basis\" or \"product\"");
    }
    try {
        validate_input(file.input, file.circuit.n);
    } catch (const schema_error& e) {
        throw schema_error(std::string("$.input: ") + e.what());
    }

    const bool adaptive = j.contains("rounds");
    if (adaptive && j.contains("gates"))
        throw schema_error("a file carries either gates or rounds, not both");

    if (!adaptive) {
        const detail::json& gates = detail::field(j, "gates", "$");
        if (!gates.is_array()) throw schema_error("$.gates: expected array");
        for (std::size_t i = 0; i < gates.size(); ++i)
            file.circuit.gates.push_back(detail::parse_gate(
                gates[i], file.circuit.n, file.circuit.pbc, "$.gates[" + std::to_string(i) + "]"));
        if (j.contains("measure"))
            file.measure = detail::parse_measure(j["measure"], file.circuit.n, "$.measure");
        return file;
    }

    AdaptiveProgram program;
    program.n = file.circuit.n;
    program.pbc = file.circuit.pbc;
    const detail::json& rounds = j["rounds"];
    if (!rounds.is_array() || rounds.empty()) throw schema_error("$.rounds: expected non-empty array");
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        std::string path = "$.rounds[" + std::to_string(r) + "]";
        const detail::json& rj = rounds[r];
        if (!rj.is_object()) throw schema_error(path + ": expected object");
        AdaptiveRound round;
        if (rj.contains("gates")) {
            const detail::json& gates = rj["gates"];
            if (!gates.is_array()) throw schema_error(path + ".gates: expected array");
            for (std::size_t i = 0; i < gates.size(); ++i)
                round.gates.push_back(detail::parse_gate(gates[i], program.n, program.pbc,
                                                         path + ".gates[" + std::to_string(i) + "]"));
        }
        round.measure =
            detail::parse_measure(detail::field(rj, "measure", path), program.n, path + ".measure");
        if (rj.contains("branches")) {
            const detail::json& branches = rj["branches"];
            if (!branches.is_object()) throw schema_error(path + ".branches: expected object");
            for (auto it = branches.begin(); it != branches.end(); ++it) {
                if (!it.value().is_number_integer())
                    throw schema_error(path + ".branches: targets are round indices");
                round.branches[it.key()] = it.value().get<int>();
            }
        }
        program.rounds.push_back(std::move(round));
    }
    try {
        validate_program(program);
    } catch (const schema_error& e) {
        throw schema_error(std::string("$.rounds: ") + e.what());
    }
    file.program = std::move(program);
    return file;
}

/// Canonical serialization. parse(serialize(f)) reproduces f, and
/// serialize(parse(text)) is idempotent.
inline std::string serialize_circuit(const CircuitFile& file) {
    detail::ordered_json out;
    out["n"] = file.circuit.n;
    out["pbc"] = file.circuit.pbc;
    if (!file.program) {
        detail::ordered_json gates = detail::ordered_json::array();
        for (const auto& g : file.circuit.gates) gates.push_back(detail::gate_json(g));
        out["gates"] = gates;
    }
    if (file.input.kind == InputSpec::Kind::Basis) {
        out["input"] = {{"type", "basis"}, {"bits", file.input.bits}};
    } else {
        detail::ordered_json qubits = detail::ordered_json::array();
        for (const auto& q : file.input.qubits)
            qubits.push_back(detail::ordered_json{{"theta", q.theta}, {"phi", q.phi}});
        out["input"] = detail::ordered_json{{"type", "product"}, {"qubits", qubits}};
    }
    if (!file.program) {
        if (!file.measure.empty()) out["measure"] = detail::measure_json(file.measure);
    } else {
        detail::ordered_json rounds = detail::ordered_json::array();
        for (const auto& r : file.program->rounds) {
            detail::ordered_json rj;
            detail::ordered_json gates = detail::ordered_json::array();
            for (const auto& g : r.gates) gates.push_back(detail::gate_json(g));
            rj["gates"] = gates;
            rj["measure"] = detail::measure_json(r.measure);
            if (!r.branches.empty()) {
                detail::ordered_json branches;
                for (const auto& [k, v] : r.branches) branches[k] = v;
                rj["branches"] = branches;
            }
            rounds.push_back(rj);
        }
        out["rounds"] = rounds;
    }
    return out.dump(2) + "\n";
}

}  // namespace mgsim
