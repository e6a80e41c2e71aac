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
#include <complex>

#include "mgsim/errors.hpp"
#include "mgsim/tolerances.hpp"

namespace mgsim {

using cd = std::complex<double>;

inline double antisymmetry_residual(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) return 1.0;
    return (a + a.transpose()).cwiseAbs().maxCoeff();
}

/// Pfaffian of a complex antisymmetric matrix by skew-symmetric elimination
/// (Parlett-Reid LTL^T with partial pivoting). Each row/column swap flips the
/// sign; the product of the (k, k+1) pivots is the Pfaffian. O(m^3).
///
/// Returns 0 for odd dimension and 1 for the empty matrix. Throws if the
/// antisymmetry residual exceeds the gate.
inline cd pfaffian(Eigen::MatrixXcd a) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw not_antisymmetric_error("pfaffian needs a square matrix");
    if (n == 0) return cd(1.0, 0.0);
    if (n > 1 && antisymmetry_residual(a) > tol::antisymmetry)
        throw not_antisymmetric_error("matrix fails the antisymmetry gate");
    if (n % 2 == 1) return cd(0.0, 0.0);

    cd result(1.0, 0.0);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        // Largest |A(i, k)| below the diagonal becomes the pivot A(k+1, k).
        Eigen::Index piv = k + 1;
        double best = std::abs(a(k + 1, k));
        for (Eigen::Index i = k + 2; i < n; ++i) {
            double m = std::abs(a(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best == 0.0) return cd(0.0, 0.0);
        if (piv != k + 1) {
            a.row(k + 1).swap(a.row(piv));
            a.col(k + 1).swap(a.col(piv));
            result = -result;
        }
        cd pivot = a(k, k + 1);
        result *= pivot;
        if (k + 2 >= n) break;
        // Zero out column k below the pivot: the trailing block picks up
        // v * tau^T - tau * v^T with tau = A(k, k+2..) / pivot and
        // v = A(k+1, k+2..).
        Eigen::Index rest = n - (k + 2);
        Eigen::VectorXcd tau = a.row(k).segment(k + 2, rest).transpose() / pivot;
        Eigen::VectorXcd v = a.row(k + 1).segment(k + 2, rest).transpose();
        a.block(k + 2, k + 2, rest, rest).noalias() += v * tau.transpose();
        a.block(k + 2, k + 2, rest, rest).noalias() -= tau * v.transpose();
    }
    return result;
}

}  // namespace mgsim
