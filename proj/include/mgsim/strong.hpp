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

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "mgsim/circuit.hpp"
#include "mgsim/mode_transfer.hpp"
#include "mgsim/pbc.hpp"
#include "mgsim/prepare.hpp"
#include "mgsim/wick.hpp"

namespace mgsim {

// Exact outcome probabilities for every input/output setting. Everything
// reduces to one evaluation: a product of measurement projectors, each pulled
// back through the circuit prefix it follows, sandwiched between the input's
// creation operators and evaluated on the vacuum by Wick's theorem. Product
// inputs contribute two parity branches whose Pfaffians average.

/// Input in operator form: creation sites for the occupied modes, plus an
/// optional |+> ancilla at the last mode that splits the evaluation into a
/// vacuum branch and a wrapped branch.
struct PreparedInput {
    int modes = 0;
    std::vector<int> occupied;  // ascending, 1-based
    bool plus_branch = false;   // ancilla (site == modes) held in |+>
};

/// One measurement stage: outcomes fixed after the circuit prefix whose
/// transfer is `transfer`. Stages nest: earlier stages wrap later ones.
struct Stage {
    ModeTransfer transfer;
    std::vector<std::pair<int, int>> outcomes;  // (qubit, bit)
};

namespace detail {

inline void append_projector_ops(std::vector<LinearFermionicOperator>& ops, const Stage& stage) {
    auto sorted = stage.outcomes;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [site, bit] : sorted) {
        if (bit == 1) {
            ops.push_back(pull_back(stage.transfer, site, true));
            ops.push_back(pull_back(stage.transfer, site, false));
        } else {
            ops.push_back(pull_back(stage.transfer, site, false));
            ops.push_back(pull_back(stage.transfer, site, true));
        }
    }
}

inline cd branch_expectation(const PreparedInput& in, const std::vector<const Stage*>& stages,
                             bool wrapped) {
    const int n = in.modes;
    std::vector<LinearFermionicOperator> ops;
    std::size_t fixed = 0;
    for (const auto* s : stages) fixed += s->outcomes.size();
    ops.reserve(2 * in.occupied.size() + 4 * fixed + 2);

    if (wrapped) ops.push_back(LinearFermionicOperator::annihilation(n, n));
    for (auto it = in.occupied.rbegin(); it != in.occupied.rend(); ++it)
        ops.push_back(LinearFermionicOperator::annihilation(n, *it));

    // P_1 ... P_{r-1} P_r P_{r-1} ... P_1, every projector pulled back
    // through its own prefix.
    for (std::size_t j = 0; j < stages.size(); ++j) append_projector_ops(ops, *stages[j]);
    for (std::size_t j = stages.size() - 1; j-- > 0;) append_projector_ops(ops, *stages[j]);

    for (int site : in.occupied) ops.push_back(LinearFermionicOperator::creation(n, site));
    if (wrapped) ops.push_back(LinearFermionicOperator::creation(n, n));

    return vacuum_expectation(ops);
}

}  // namespace detail

/// Joint probability of all fixed outcomes across the nested stages.
/// Complex-valued; callers gate the imaginary residual via
/// finalize_probability.
inline cd nested_joint_raw(const PreparedInput& in, const std::vector<const Stage*>& stages) {
    cd value = detail::branch_expectation(in, stages, false);
    if (in.plus_branch) {
        value += detail::branch_expectation(in, stages, true);
        value *= 0.5;
    }
    return value;
}

/// Integrity gate: the imaginary part must be noise, the real part must sit
/// in [0, 1] up to float slack. Tiny excursions clamp; larger ones throw.
inline double finalize_probability(cd value) {
    if (std::abs(value.imag()) > tol::imaginary_residual)
        throw imaginary_residual_error("probability has imaginary residual " +
                                       std::to_string(value.imag()));
    double p = value.real();
    if (p < -tol::probability_band || p > 1.0 + tol::probability_band)
        throw integrity_error("probability " + std::to_string(p) + " outside [0, 1] band");
    return std::clamp(p, 0.0, 1.0);
}

inline double nested_joint_prob(const PreparedInput& in, const std::vector<const Stage*>& stages) {
    return finalize_probability(nested_joint_raw(in, stages));
}

// ---------------------------------------------------------------------------
// Compiled circuit + input: reusable across many outcome queries.

class CompiledStrong {
  public:
    CompiledStrong(const Circuit& circuit, const InputSpec& input) {
        validate_circuit(circuit);
        validate_input(input, circuit.n);
        n_ = circuit.n;
        Circuit lowered = circuit;
        if (input.kind == InputSpec::Kind::Basis) {
            lowered = lower_pbc(circuit, bits_parity(input.bits));
            input_.modes = n_;
            input_.plus_branch = false;
            for (int q = 1; q <= n_; ++q)
                if (input.bits[q - 1] == '1') input_.occupied.push_back(q);
            full_ = compose_transfer(lowered);
        } else {
            if (has_wrap_gates(circuit))
                throw pbc_product_unsupported_error(
                    "periodic boundary gates cannot be combined with product inputs");
            input_.modes = n_ + 1;
            input_.plus_branch = true;
            PreparationCircuit prep = synthesize_preparation(input.qubits);
            full_ = compose_transfer(prep.circuit);
            for (const auto& g : lowered.gates) full_.append_gate(g.gate, g.pos);
        }
    }

    int qubits() const { return n_; }
    const PreparedInput& prepared_input() const { return input_; }
    const ModeTransfer& transfer() const { return full_; }
    bool number_preserving() const { return full_.number_preserving(); }

    /// Probability of a partial computational-basis assignment.
    double probability(const OutcomeAssignment& y) const {
        validate_assignment(y, n_);
        Stage stage{full_, {}};
        for (const auto& e : y) {
            if (!e.basis.computational)
                throw validation_error("strong simulation requires computational bases");
            stage.outcomes.emplace_back(e.qubit, e.bit);
        }
        std::vector<const Stage*> stages{&stage};
        return nested_joint_prob(input_, stages);
    }

  private:
    int n_ = 0;
    PreparedInput input_;
    ModeTransfer full_ = ModeTransfer::identity(2);
};

// ---------------------------------------------------------------------------
// Spec-level entry points.

/// Probability of a partial computational-basis outcome for a basis input.
inline double prob_partial_basis(const Circuit& circuit, const std::string& x,
                                 const OutcomeAssignment& y) {
    return CompiledStrong(circuit, InputSpec::basis(x)).probability(y);
}

/// Probability of a full assignment. Number-preserving circuits go through
/// the determinant amplitude; everything else falls back to the general
/// projector path.
inline double prob_full_basis(const Circuit& circuit, const std::string& x, const std::string& y) {
    CompiledStrong cs(circuit, InputSpec::basis(x));
    if (static_cast<int>(y.size()) != circuit.n)
        throw dimension_mismatch_error("full assignment length != n");
    if (cs.number_preserving()) {
        cd amp = determinant_amplitude(cs.transfer(), x, y);
        return finalize_probability(cd(std::norm(amp), 0.0));
    }
    OutcomeAssignment full;
    for (int q = 1; q <= circuit.n; ++q)
        full.push_back({q, y[q - 1] == '1' ? 1 : 0, MeasureBasis::z()});
    return cs.probability(full);
}

/// Probability of a partial computational-basis outcome for a product input,
/// through the preparation circuit and the two parity branches.
inline double prob_partial_product(const Circuit& circuit,
                                   const std::vector<SingleQubitState>& input,
                                   const OutcomeAssignment& y) {
    return CompiledStrong(circuit, InputSpec::product(input)).probability(y);
}

/// <Z_k> for a product input, evaluated through the quadratic expansion of
/// the evolved number operator; every quadratic term factors over the product
/// state into single-qubit expectations.
inline double expectation_z(const Circuit& circuit, const InputSpec& input, int k) {
    validate_circuit(circuit);
    validate_input(input, circuit.n);
    if (k < 1 || k > circuit.n) throw dimension_mismatch_error("qubit outside 1..n");

    std::vector<SingleQubitState> psi;
    if (input.kind == InputSpec::Kind::Product) {
        psi = input.qubits;
    } else {
        for (char c : input.bits) psi.push_back({c == '1' ? M_PI : 0.0, 0.0});
    }

    Circuit lowered = circuit;
    if (has_wrap_gates(circuit)) {
        if (input.kind != InputSpec::Kind::Basis)
            throw pbc_product_unsupported_error(
                "periodic boundary gates cannot be combined with product inputs");
        lowered = lower_pbc(circuit, bits_parity(input.bits));
    }
    const ModeTransfer t = compose_transfer(lowered);
    const int n = circuit.n;

    LinearFermionicOperator ev_creat = pull_back(t, k, true);
    LinearFermionicOperator ev_annih = pull_back(t, k, false);

    // Per-site 2x2 sandwiches and the Z-expectation prefix products used to
    // evaluate <psi| (string) |psi> in O(1) per operator pair.
    struct SiteData {
        cd p01, p10, p01_z, p10_z, z_p01, z_p10, n0, n1;
        double z;
    };
    std::vector<SiteData> site(n);
    std::vector<double> zprefix(n + 1, 1.0);  // product of nonzero z up to site
    std::vector<int> zzero(n + 1, 0);         // count of zero z up to site
    for (int q = 0; q < n; ++q) {
        Eigen::Vector2cd v = psi[q].amplitudes();
        cd a0 = v(0), a1 = v(1);
        SiteData& s = site[q];
        s.p01 = std::conj(a0) * a1;            // <psi|0><1|psi>
        s.p10 = std::conj(a1) * a0;            // <psi|1><0|psi>
        s.p01_z = -s.p01;                      // |0><1| Z = -|0><1|
        s.p10_z = s.p10;                       // |1><0| Z = |1><0|
        s.z_p01 = s.p01;                       // Z |0><1| = |0><1|
        s.z_p10 = -s.p10;                      // Z |1><0| = -|1><0|
        s.n0 = std::conj(a0) * a0;             // <|0><0|>
        s.n1 = std::conj(a1) * a1;             // <|1><1|>
        s.z = (s.n0 - s.n1).real();
        zprefix[q + 1] = zprefix[q] * (s.z == 0.0 ? 1.0 : s.z);
        zzero[q + 1] = zzero[q] + (s.z == 0.0 ? 1 : 0);
    }
    auto z_range = [&](int lo, int hi) {  // product of <Z> over sites lo..hi-1 (0-based)
        if (lo >= hi) return 1.0;
        if (zzero[hi] != zzero[lo]) return 0.0;
        return zprefix[hi] / zprefix[lo];
    };
    // <psi| op(t1 at s1) op(t2 at s2) |psi>, types: true = creation.
    auto pair_expectation = [&](bool t1, int s1, bool t2, int s2) -> cd {
        if (s1 == s2) {
            const SiteData& s = site[s1];
            if (t1 == t2) return cd(0, 0);    // aa or a+a+ on one site
            return t1 ? s.n1 : s.n0;          // a+a -> |1><1| ; aa+ -> |0><0|
        }
        int lo = std::min(s1, s2), hi = std::max(s1, s2);
        cd boundary_lo, boundary_hi;
        if (s1 < s2) {
            boundary_lo = t1 ? site[lo].p10_z : site[lo].p01_z;
            boundary_hi = t2 ? site[hi].p10 : site[hi].p01;
        } else {
            boundary_lo = t2 ? site[lo].z_p10 : site[lo].z_p01;
            boundary_hi = t1 ? site[hi].p10 : site[hi].p01;
        }
        return boundary_lo * boundary_hi * z_range(lo + 1, hi);
    };

    auto quadratic = [&](const LinearFermionicOperator& f, const LinearFermionicOperator& g) -> cd {
        cd acc(0, 0);
        for (int p = 0; p < n; ++p) {
            if (f.alpha(p) == cd(0, 0) && f.beta(p) == cd(0, 0)) continue;
            for (int q = 0; q < n; ++q) {
                if (f.alpha(p) != cd(0, 0)) {
                    if (g.alpha(q) != cd(0, 0))
                        acc += f.alpha(p) * g.alpha(q) * pair_expectation(false, p, false, q);
                    if (g.beta(q) != cd(0, 0))
                        acc += f.alpha(p) * g.beta(q) * pair_expectation(false, p, true, q);
                }
                if (f.beta(p) != cd(0, 0)) {
                    if (g.alpha(q) != cd(0, 0))
                        acc += f.beta(p) * g.alpha(q) * pair_expectation(true, p, false, q);
                    if (g.beta(q) != cd(0, 0))
                        acc += f.beta(p) * g.beta(q) * pair_expectation(true, p, true, q);
                }
            }
        }
        return acc;
    };

    // Z_k = a_k a+_k - a+_k a_k: +1 on the empty mode.
    cd z_value = quadratic(ev_annih, ev_creat) - quadratic(ev_creat, ev_annih);
    if (std::abs(z_value.imag()) > tol::imaginary_residual)
        throw imaginary_residual_error("expectation has imaginary residual " +
                                       std::to_string(z_value.imag()));
    return std::clamp(z_value.real(), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Adaptive programs.

using OutcomeTrace = std::vector<std::string>;

namespace detail {

/// Walks the branch tables along a trace. Returns the visited round indices;
/// throws branch_mismatch_error when the trace does not fit the program.
inline std::vector<int> rounds_for_trace(const AdaptiveProgram& p, const OutcomeTrace& trace) {
    std::vector<int> visited;
    int current = 0;
    for (std::size_t step = 0;; ++step) {
        visited.push_back(current);
        const AdaptiveRound& round = p.rounds[current];
        if (step >= trace.size()) throw branch_mismatch_error("trace shorter than the program path");
        const std::string& bits = trace[step];
        if (bits.size() != round.measure.size())
            throw branch_mismatch_error("trace round " + std::to_string(step) +
                                        " has wrong bit count");
        for (char c : bits)
            if (c != '0' && c != '1') throw branch_mismatch_error("trace bits must be 0/1");
        if (round.terminal()) {
            if (step + 1 != trace.size())
                throw branch_mismatch_error("trace longer than the program path");
            return visited;
        }
        auto it = round.branches.find(bits);
        if (it == round.branches.end()) it = round.branches.find("default");
        if (it == round.branches.end())
            throw branch_mismatch_error("no branch for observed bits " + bits);
        current = it->second;
    }
}

inline PreparedInput make_prepared_input(int n, const InputSpec& input, bool with_ancilla,
                                         ModeTransfer& base) {
    PreparedInput in;
    if (input.kind == InputSpec::Kind::Basis) {
        in.modes = with_ancilla ? n + 1 : n;
        in.plus_branch = with_ancilla;
        for (int q = 1; q <= n; ++q)
            if (input.bits[q - 1] == '1') in.occupied.push_back(q);
        base = ModeTransfer::identity(in.modes);
    } else {
        in.modes = n + 1;
        in.plus_branch = true;
        base = compose_transfer(synthesize_preparation(input.qubits).circuit);
    }
    return in;
}

}  // namespace detail

/// Joint probability of a full outcome trace through an adaptive program:
/// each intermediate projector is inserted on both sides of the later rounds,
/// every operator pulled back through its own circuit prefix. Product inputs
/// evaluate the two parity branches independently and average.
inline double adaptive_joint_prob(const AdaptiveProgram& program, const InputSpec& input,
                                  const OutcomeTrace& trace) {
    validate_program(program);
    validate_input(input, program.n);
    std::vector<int> visited = detail::rounds_for_trace(program, trace);

    const bool product = input.kind == InputSpec::Kind::Product;
    if (product && program.pbc)
        for (const auto& r : program.rounds)
            for (const auto& g : r.gates)
                if (g.wrap)
                    throw pbc_product_unsupported_error(
                        "periodic boundary gates cannot be combined with product inputs");
    const int parity = product ? 0 : bits_parity(input.bits);

    ModeTransfer base = ModeTransfer::identity(2);
    PreparedInput in = detail::make_prepared_input(program.n, input, product, base);

    std::vector<Stage> stages;
    stages.reserve(visited.size());
    ModeTransfer cumulative = base;
    for (std::size_t step = 0; step < visited.size(); ++step) {
        const AdaptiveRound& round = program.rounds[visited[step]];
        for (const auto& g : round.gates) {
            if (g.wrap) {
                for (const auto& lowered : pbc_substitute(g, parity, program.n))
                    cumulative.append_gate(lowered.gate, lowered.pos);
            } else {
                cumulative.append_gate(g.gate, g.pos);
            }
        }
        Stage stage{cumulative, {}};
        for (std::size_t i = 0; i < round.measure.size(); ++i)
            stage.outcomes.emplace_back(round.measure[i].qubit, trace[step][i] == '1' ? 1 : 0);
        stages.push_back(std::move(stage));
    }
    std::vector<const Stage*> ptrs;
    for (const auto& s : stages) ptrs.push_back(&s);
    return nested_joint_prob(in, ptrs);
}

}  // namespace mgsim
