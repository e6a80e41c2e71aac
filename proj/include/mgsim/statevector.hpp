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
#include <string>
#include <vector>

#include "mgsim/circuit.hpp"
#include "mgsim/errors.hpp"

namespace mgsim {

// Brute-force dense simulator. Ground truth for everything else, and
// deliberately capped: it must never silently become the workhorse.

inline constexpr int kOracleMaxQubits = 14;

class StateVector {
  public:
    explicit StateVector(int n) : n_(n) {
        guard(n);
        amp_ = Eigen::VectorXcd::Zero(std::size_t{1} << n);
    }

    static StateVector basis(int n, const std::string& bits) {
        StateVector sv(n);
        if (static_cast<int>(bits.size()) != n) throw dimension_mismatch_error("bits length != n");
        std::size_t idx = 0;
        for (char c : bits) idx = (idx << 1) | (c == '1' ? 1 : 0);
        sv.amp_(idx) = 1.0;
        return sv;
    }

    static StateVector product(const std::vector<SingleQubitState>& qubits) {
        const int n = static_cast<int>(qubits.size());
        StateVector sv(n);
        // Build by successive Kronecker products, qubit 1 as the high bit.
        Eigen::VectorXcd acc(1);
        acc(0) = 1.0;
        for (int q = 0; q < n; ++q) {
            Eigen::Vector2cd a = qubits[q].amplitudes();
            Eigen::VectorXcd next(acc.size() * 2);
            for (Eigen::Index i = 0; i < acc.size(); ++i) {
                next(2 * i) = acc(i) * a(0);
                next(2 * i + 1) = acc(i) * a(1);
            }
            acc.swap(next);
        }
        sv.amp_ = acc;
        return sv;
    }

    int qubits() const { return n_; }
    const Eigen::VectorXcd& amplitudes() const { return amp_; }
    Eigen::VectorXcd& amplitudes() { return amp_; }

    double norm() const { return amp_.norm(); }

    int bit_of(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (n_ - qubit)) & 1u);
    }

    void apply_single(int qubit, const Eigen::Matrix2cd& u) {
        check_qubit(qubit);
        const std::size_t stride = std::size_t{1} << (n_ - qubit);
        const std::size_t dim = amp_.size();
        for (std::size_t base = 0; base < dim; ++base) {
            if (base & stride) continue;
            cd a0 = amp_(base), a1 = amp_(base | stride);
            amp_(base) = u(0, 0) * a0 + u(0, 1) * a1;
            amp_(base | stride) = u(1, 0) * a0 + u(1, 1) * a1;
        }
    }

    /// Two-qubit gate on (qi, qj), qi as the high bit of the gate basis.
    void apply_two(int qi, int qj, const Eigen::Matrix4cd& u) {
        check_qubit(qi);
        check_qubit(qj);
        if (qi == qj) throw dimension_mismatch_error("two-qubit gate needs distinct qubits");
        const std::size_t si = std::size_t{1} << (n_ - qi);
        const std::size_t sj = std::size_t{1} << (n_ - qj);
        const std::size_t dim = amp_.size();
        for (std::size_t base = 0; base < dim; ++base) {
            if ((base & si) || (base & sj)) continue;
            std::size_t idx[4] = {base, base | sj, base | si, base | si | sj};
            Eigen::Vector4cd v;
            for (int t = 0; t < 4; ++t) v(t) = amp_(idx[t]);
            Eigen::Vector4cd w = u * v;
            for (int t = 0; t < 4; ++t) amp_(idx[t]) = w(t);
        }
    }

    /// Applies a placed gate; wrap gates act on the true (n, 1) pair.
    void apply_gate(const GateApplication& g) {
        if (g.wrap)
            apply_two(n_, 1, g.gate.assemble());
        else
            apply_two(g.pos, g.pos + 1, g.gate.assemble());
    }

    void apply_circuit(const Circuit& c) {
        if (c.n != n_) throw dimension_mismatch_error("circuit size != state size");
        for (const auto& g : c.gates) apply_gate(g);
    }

    /// Exact Born-rule table over the 2^k outcomes of the subset, rotated
    /// bases included. Outcome index: subset order, first listed qubit is the
    /// high bit.
    std::vector<double> exact_distribution(const std::vector<int>& subset,
                                           const std::vector<MeasureBasis>& bases) const {
        const int k = static_cast<int>(subset.size());
        if (bases.size() != subset.size()) throw dimension_mismatch_error("bases size != subset size");
        StateVector rotated = *this;
        for (int i = 0; i < k; ++i) {
            if (!bases[i].computational)
                rotated.apply_single(subset[i], bases[i].unitary().adjoint());
        }
        std::vector<double> table(std::size_t{1} << k, 0.0);
        const std::size_t dim = amp_.size();
        for (std::size_t idx = 0; idx < dim; ++idx) {
            std::size_t key = 0;
            for (int i = 0; i < k; ++i) key = (key << 1) | rotated.bit_of(idx, subset[i]);
            table[key] += std::norm(rotated.amp_(idx));
        }
        return table;
    }

    /// Post-measurement state and outcome probability for one qubit.
    std::pair<StateVector, double> project(int qubit, int bit, const MeasureBasis& basis) const {
        StateVector rotated = *this;
        if (!basis.computational) rotated.apply_single(qubit, basis.unitary().adjoint());
        double p = 0.0;
        const std::size_t dim = amp_.size();
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (rotated.bit_of(idx, qubit) == bit) p += std::norm(rotated.amp_(idx));
        }
        if (p < 1e-12) throw impossible_outcome_error("projection onto a zero-probability outcome");
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (rotated.bit_of(idx, qubit) != bit) rotated.amp_(idx) = 0.0;
        }
        rotated.amp_ /= std::sqrt(p);
        if (!basis.computational) rotated.apply_single(qubit, basis.unitary());
        return {rotated, p};
    }

  private:
    static void guard(int n) {
        if (n < 1) throw dimension_mismatch_error("state needs at least one qubit");
        if (n > kOracleMaxQubits)
            throw dimension_guard_error("dense oracle capped at " + std::to_string(kOracleMaxQubits) +
                                        " qubits");
    }
    void check_qubit(int q) const {
        if (q < 1 || q > n_) throw dimension_mismatch_error("qubit index outside 1..n");
    }

    int n_;
    Eigen::VectorXcd amp_;
};

}  // namespace mgsim
