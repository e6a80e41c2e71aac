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
#include <cmath>
#include <complex>
#include <sstream>

#include "mgsim/errors.hpp"
#include "mgsim/tolerances.hpp"

namespace mgsim {

using cd = std::complex<double>;

/// Two-qubit gate G(A, B) that acts as A on the even-parity subspace
/// span{|00>, |11>} and as B on the odd-parity subspace span{|01>, |10>},
/// with det A = det B. Values of this type are always validated.
struct Matchgate {
    Eigen::Matrix2cd a;  // even-parity block
    Eigen::Matrix2cd b;  // odd-parity block

    /// Dense 4x4 matrix in the basis |00>, |01>, |10>, |11| (first qubit is
    /// the high bit).
    Eigen::Matrix4cd assemble() const {
        Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
        g(0, 0) = a(0, 0);
        g(0, 3) = a(0, 1);
        g(3, 0) = a(1, 0);
        g(3, 3) = a(1, 1);
        g(1, 1) = b(0, 0);
        g(1, 2) = b(0, 1);
        g(2, 1) = b(1, 0);
        g(2, 2) = b(1, 1);
        return g;
    }
};

inline double unitarity_residual(const Eigen::Matrix2cd& u) {
    return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm();
}

/// Validates the pair (A, B) and returns the matchgate. Inputs are taken as
/// given; nothing is renormalized.
inline Matchgate validate_matchgate(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    double ra = unitarity_residual(a);
    double rb = unitarity_residual(b);
    if (ra > tol::unitarity || rb > tol::unitarity) {
        std::ostringstream msg;
        msg << "matchgate block not unitary (residuals " << ra << ", " << rb << ")";
        throw not_unitary_error(msg.str());
    }
    cd da = a.determinant();
    cd db = b.determinant();
    double mismatch = std::abs(da - db);
    if (mismatch > tol::determinant_match) {
        std::ostringstream msg;
        msg << "matchgate determinant mismatch |det A - det B| = " << mismatch;
        throw determinant_mismatch_error(msg.str());
    }
    return Matchgate{a, b};
}

// Fixed gates used by the preparation and measurement-rotation machinery.

/// G(Z, X): swaps the two qubits whenever one of them is |0>.
inline Matchgate fswap_gate() {
    Eigen::Matrix2cd z, x;
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    return validate_matchgate(z, x);
}

/// G(-Z, X): the |1>-conditioned swap variant.
inline Matchgate fswap_flipped_gate() {
    Eigen::Matrix2cd mz, x;
    mz << -1, 0, 0, 1;
    x << 0, 1, 1, 0;
    return validate_matchgate(mz, x);
}

inline Matchgate fswap_conditional_gate(int bit) {
    return bit == 0 ? fswap_gate() : fswap_flipped_gate();
}

/// G(H, H): applies a Hadamard to the first qubit when the second is |+>,
/// leaving the |+> untouched.
inline Matchgate hadamard_pair_gate() {
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    return validate_matchgate(h, h);
}

/// exp(i*theta*Z) on the first qubit of the pair, as a matchgate.
inline Matchgate phase_rotation_first(double theta) {
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
    d(0, 0) = std::polar(1.0, theta);
    d(1, 1) = std::polar(1.0, -theta);
    return validate_matchgate(d, d);
}

/// exp(i*theta*Z) on the second qubit of the pair.
inline Matchgate phase_rotation_second(double theta) {
    Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero(), b = Eigen::Matrix2cd::Zero();
    a(0, 0) = std::polar(1.0, theta);
    a(1, 1) = std::polar(1.0, -theta);
    b(0, 0) = std::polar(1.0, -theta);
    b(1, 1) = std::polar(1.0, theta);
    return validate_matchgate(a, b);
}

inline Matchgate identity_gate() {
    return Matchgate{Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Identity()};
}

/// Canonicalizes an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2 * M_PI);
    if (a <= -M_PI) a += 2 * M_PI;
    return a;
}

}  // namespace mgsim
