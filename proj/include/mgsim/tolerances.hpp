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

// Numerical gates used across the library. Values are part of the public
// contract: validation never silently normalizes, it accepts or rejects
// against these thresholds.

namespace mgsim::tol {

inline constexpr double unitarity = 1e-12;
inline constexpr double determinant_match = 1e-12;
inline constexpr double majorana_span = 1e-10;
inline constexpr double transfer_orthogonality = 1e-10;
inline constexpr double number_preserving = 1e-12;
inline constexpr double antisymmetry = 1e-10;
inline constexpr double imaginary_residual = 1e-9;
inline constexpr double probability_band = 1e-9;
inline constexpr double degenerate_conditional = 1e-12;
inline constexpr double state_norm = 1e-10;

}  // namespace mgsim::tol
