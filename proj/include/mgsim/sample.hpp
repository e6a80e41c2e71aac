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

#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mgsim/parallel.hpp"
#include "mgsim/rng.hpp"
#include "mgsim/strong.hpp"

namespace mgsim {

// Weak simulation: outcomes are drawn bit by bit through the chain rule,
// every conditional a ratio of two joint probabilities from the strong
// engine. Joints are memoized per outcome prefix, so across many shots each
// distinct prefix costs one evaluation; shots then only consume randomness.
// Shots use split counter streams and may run on several threads without
// changing a single output bit.

namespace detail {

class JointMemo {
  public:
    template <typename Eval>
    double get(const std::string& key, Eval&& eval) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        double value = eval();
        std::lock_guard<std::mutex> lock(mu_);
        return map_.emplace(key, value).first->second;
    }

  private:
    std::mutex mu_;
    std::unordered_map<std::string, double> map_;
};

inline double conditional_of(double joint_parent, double joint_one) {
    if (joint_parent < tol::degenerate_conditional)
        throw degenerate_conditional_error("conditioning on a prefix of probability " +
                                           std::to_string(joint_parent));
    return std::clamp(joint_one / joint_parent, 0.0, 1.0);
}

}  // namespace detail

/// Samples computational-basis outcomes of `subset` (in the given order),
/// for basis or product inputs. Deterministic given the seed.
inline std::vector<std::string> sample_computational(const Circuit& circuit, const InputSpec& input,
                                                     const std::vector<int>& subset,
                                                     std::uint64_t seed, std::size_t shots) {
    validate_circuit(circuit);
    validate_input(input, circuit.n);
    if (subset.empty()) throw validation_error("empty measurement subset");
    {
        OutcomeAssignment probe;
        for (int q : subset) probe.push_back({q, 0, MeasureBasis::z()});
        validate_assignment(probe, circuit.n);
    }

    CompiledStrong compiled(circuit, input);
    const Stage base_stage{compiled.transfer(), {}};

    detail::JointMemo memo;
    auto joint = [&](const std::string& bits) {
        return memo.get(bits, [&]() {
            Stage stage = base_stage;
            for (std::size_t i = 0; i < bits.size(); ++i)
                stage.outcomes.emplace_back(subset[i], bits[i] == '1' ? 1 : 0);
            std::vector<const Stage*> stages{&stage};
            return nested_joint_prob(compiled.prepared_input(), stages);
        });
    };

    CounterRng base(seed);
    std::vector<std::string> out(shots);
    parallel_for_index(shots, [&](std::size_t shot) {
        CounterRng rng = base.split(shot);
        std::string bits;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            double p1 = detail::conditional_of(joint(bits), joint(bits + '1'));
            bits += (rng.uniform() < p1) ? '1' : '0';
        }
        out[shot] = bits;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Rotated single-qubit bases.

namespace detail {

// Arbitrary-basis measurements run down the line: the qubit beside the |+>
// ancilla has its basis rotated through the catalytic gadget, is measured
// and fixed as a projector, and the outcome-conditioned f-SWAP hands the
// ancilla to the next qubit. The loop walks from position n down to the
// lowest requested qubit; positions nobody asked about are measured in the
// computational basis along the way and their bits dropped (sampling a joint
// and discarding bits samples the marginal).

struct RotatedPlan {
    PreparedInput input;                    // always carries the |+> ancilla
    ModeTransfer base = ModeTransfer::identity(2);  // prep + circuit, n+1 modes
    std::vector<MeasureBasis> target_bases;  // for positions n, n-1, ..., stop
    std::vector<std::size_t> report;         // per requested qubit: index into targets
    int n = 0;
};

inline RotatedPlan make_rotated_plan(const Circuit& circuit, const InputSpec& input,
                                     const std::vector<MeasureSpec>& measure) {
    validate_circuit(circuit);
    validate_input(input, circuit.n);
    if (measure.empty()) throw validation_error("empty measurement list");
    {
        OutcomeAssignment probe;
        for (const auto& m : measure) probe.push_back({m.qubit, 0, m.basis});
        validate_assignment(probe, circuit.n);
    }

    RotatedPlan plan;
    plan.n = circuit.n;
    const int n = circuit.n;
    const int modes = n + 1;

    plan.input.modes = modes;
    plan.input.plus_branch = true;
    if (input.kind == InputSpec::Kind::Basis) {
        Circuit lowered = lower_pbc(circuit, bits_parity(input.bits));
        for (int q = 1; q <= n; ++q)
            if (input.bits[q - 1] == '1') plan.input.occupied.push_back(q);
        plan.base = compose_transfer(lowered).extended(modes);
    } else {
        if (has_wrap_gates(circuit))
            throw pbc_product_unsupported_error(
                "periodic boundary gates cannot be combined with product inputs");
        plan.base = compose_transfer(synthesize_preparation(input.qubits).circuit);
        for (const auto& g : circuit.gates) plan.base.append_gate(g.gate, g.pos);
    }

    int stop = n;
    for (const auto& m : measure) stop = std::min(stop, m.qubit);
    plan.target_bases.assign(n - stop + 1, MeasureBasis::z());
    for (const auto& m : measure) plan.target_bases[n - m.qubit] = m.basis;
    for (const auto& m : measure) plan.report.push_back(static_cast<std::size_t>(n - m.qubit));
    return plan;
}

/// Stages fixing a bit prefix of the measurement walk; bit i belongs to
/// position n - i.
inline std::vector<Stage> rotated_stages(const RotatedPlan& plan, const std::string& bits) {
    const int n = plan.n;
    std::vector<Stage> stages;
    ModeTransfer w = plan.base;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const int target = n - static_cast<int>(i);
        for (const PrepStep& s : steps_for_unitary(plan.target_bases[i].unitary().adjoint())) {
            if (s.kind == PrepStep::Kind::H)
                w.append_gate(hadamard_pair_gate(), target);
            else
                w.append_gate(phase_rotation_first(s.angle), target);
        }
        int bit = bits[i] == '1' ? 1 : 0;
        stages.push_back(Stage{w, {{target, bit}}});
        if (i + 1 < plan.target_bases.size()) w.append_gate(fswap_conditional_gate(bit), target);
    }
    if (stages.empty()) stages.push_back(Stage{w, {}});
    return stages;
}

}  // namespace detail

/// Samples qubits measured in arbitrary single-qubit bases (computational
/// bases are the theta = 0 case). Outcome string order follows `measure`.
inline std::vector<std::string> sample_rotated(const Circuit& circuit, const InputSpec& input,
                                               const std::vector<MeasureSpec>& measure,
                                               std::uint64_t seed, std::size_t shots) {
    detail::RotatedPlan plan = detail::make_rotated_plan(circuit, input, measure);

    detail::JointMemo memo;
    auto joint = [&](const std::string& bits) {
        return memo.get(bits, [&]() {
            std::vector<Stage> stages = detail::rotated_stages(plan, bits);
            std::vector<const Stage*> ptrs;
            for (const auto& s : stages) ptrs.push_back(&s);
            return nested_joint_prob(plan.input, ptrs);
        });
    };

    CounterRng base(seed);
    std::vector<std::string> out(shots);
    parallel_for_index(shots, [&](std::size_t shot) {
        CounterRng rng = base.split(shot);
        std::string bits;
        for (std::size_t i = 0; i < plan.target_bases.size(); ++i) {
            double p1 = detail::conditional_of(joint(bits), joint(bits + '1'));
            bits += (rng.uniform() < p1) ? '1' : '0';
        }
        std::string reported;
        for (std::size_t idx : plan.report) reported += bits[idx];
        out[shot] = reported;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Adaptive programs.

struct AdaptiveShot {
    std::vector<std::string> rounds;  // outcome bits per visited round
};

namespace detail {

struct AdaptivePrefix {
    std::vector<std::string> full_rounds;
    std::string partial;
};

inline std::string adaptive_key(const AdaptivePrefix& p) {
    std::string key;
    for (const auto& r : p.full_rounds) {
        key += r;
        key += '|';
    }
    key += p.partial;
    return key;
}

}  // namespace detail

class AdaptiveSampler {
  public:
    AdaptiveSampler(const AdaptiveProgram& program, const InputSpec& input)
        : program_(program), input_(input) {
        validate_program(program);
        validate_input(input, program.n);
        const bool product = input.kind == InputSpec::Kind::Product;
        if (product)
            for (const auto& r : program.rounds)
                for (const auto& g : r.gates)
                    if (g.wrap)
                        throw pbc_product_unsupported_error(
                            "periodic boundary gates cannot be combined with product inputs");
        parity_ = product ? 0 : bits_parity(input.bits);
        base_ = ModeTransfer::identity(2);
        prepared_ = detail::make_prepared_input(program.n, input, product, base_);
    }

    /// Joint probability of a (possibly partial) trace.
    double joint(const detail::AdaptivePrefix& prefix) {
        std::string key = detail::adaptive_key(prefix);
        return memo_.get(key, [&]() { return eval_joint(prefix); });
    }

    AdaptiveShot run_shot(CounterRng rng) {
        detail::AdaptivePrefix prefix;
        int round_index = 0;
        for (;;) {
            const AdaptiveRound& round = program_.rounds[round_index];
            prefix.partial.clear();
            for (std::size_t i = 0; i < round.measure.size(); ++i) {
                detail::AdaptivePrefix one = prefix;
                one.partial += '1';
                double p1 = detail::conditional_of(joint(prefix), joint(one));
                prefix.partial += (rng.uniform() < p1) ? '1' : '0';
            }
            prefix.full_rounds.push_back(prefix.partial);
            std::string done = prefix.partial;
            prefix.partial.clear();
            if (round.terminal()) break;
            auto it = round.branches.find(done);
            if (it == round.branches.end()) it = round.branches.find("default");
            round_index = it->second;
        }
        return AdaptiveShot{prefix.full_rounds};
    }

    /// Exact distribution of the terminal round reached by the intermediate
    /// trace, conditioned on it.
    std::vector<double> final_round_distribution(const std::vector<std::string>& intermediate) {
        int round_index = 0;
        for (const auto& bits : intermediate) {
            const AdaptiveRound& round = program_.rounds[round_index];
            if (round.terminal()) throw branch_mismatch_error("trace runs past a terminal round");
            if (bits.size() != round.measure.size())
                throw branch_mismatch_error("trace round has wrong bit count");
            auto it = round.branches.find(bits);
            if (it == round.branches.end()) it = round.branches.find("default");
            if (it == round.branches.end()) throw branch_mismatch_error("no branch for " + bits);
            round_index = it->second;
        }
        const AdaptiveRound& last = program_.rounds[round_index];
        if (!last.terminal()) throw branch_mismatch_error("trace does not reach a terminal round");
        const std::size_t k = last.measure.size();
        detail::AdaptivePrefix prefix{intermediate, ""};
        double denom = joint(prefix);
        std::vector<double> table(std::size_t{1} << k, 0.0);
        for (std::size_t key = 0; key < table.size(); ++key) {
            detail::AdaptivePrefix full = prefix;
            for (std::size_t i = 0; i < k; ++i)
                full.partial += ((key >> (k - 1 - i)) & 1) ? '1' : '0';
            table[key] = detail::conditional_of(denom, joint(full));
        }
        return table;
    }

    const AdaptiveProgram& program() const { return program_; }

  private:
    double eval_joint(const detail::AdaptivePrefix& prefix) {
        std::vector<Stage> stages;
        ModeTransfer cumulative = base_;
        int round_index = 0;
        auto append_round_gates = [&](const AdaptiveRound& round) {
            for (const auto& g : round.gates) {
                if (g.wrap) {
                    for (const auto& low : pbc_substitute(g, parity_, program_.n))
                        cumulative.append_gate(low.gate, low.pos);
                } else {
                    cumulative.append_gate(g.gate, g.pos);
                }
            }
        };
        for (const auto& bits : prefix.full_rounds) {
            const AdaptiveRound& round = program_.rounds[round_index];
            if (bits.size() != round.measure.size())
                throw branch_mismatch_error("prefix round has wrong bit count");
            append_round_gates(round);
            Stage stage{cumulative, {}};
            for (std::size_t i = 0; i < bits.size(); ++i)
                stage.outcomes.emplace_back(round.measure[i].qubit, bits[i] == '1' ? 1 : 0);
            stages.push_back(std::move(stage));
            if (!round.terminal()) {
                auto it = round.branches.find(bits);
                if (it == round.branches.end()) it = round.branches.find("default");
                if (it == round.branches.end()) throw branch_mismatch_error("no branch for " + bits);
                round_index = it->second;
            }
        }
        if (!prefix.partial.empty()) {
            const AdaptiveRound& round = program_.rounds[round_index];
            append_round_gates(round);
            Stage stage{cumulative, {}};
            for (std::size_t i = 0; i < prefix.partial.size(); ++i)
                stage.outcomes.emplace_back(round.measure[i].qubit,
                                            prefix.partial[i] == '1' ? 1 : 0);
            stages.push_back(std::move(stage));
        }
        if (stages.empty()) stages.push_back(Stage{cumulative, {}});
        std::vector<const Stage*> ptrs;
        for (const auto& s : stages) ptrs.push_back(&s);
        return nested_joint_prob(prepared_, ptrs);
    }

    AdaptiveProgram program_;
    InputSpec input_;
    int parity_ = 1;
    ModeTransfer base_ = ModeTransfer::identity(2);
    PreparedInput prepared_;
    detail::JointMemo memo_;
};

/// Samples full traces through an adaptive program; intermediate outcomes are
/// weakly simulated, the realized final round is exactly computable through
/// AdaptiveSampler::final_round_distribution.
inline std::vector<AdaptiveShot> run_adaptive(const AdaptiveProgram& program, const InputSpec& input,
                                              std::uint64_t seed, std::size_t shots) {
    AdaptiveSampler sampler(program, input);
    CounterRng base(seed);
    std::vector<AdaptiveShot> out(shots);
    parallel_for_index(shots,
                       [&](std::size_t shot) { out[shot] = sampler.run_shot(base.split(shot)); });
    return out;
}

}  // namespace mgsim
