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

#include <stdexcept>
#include <string>

namespace mgsim {

// Problems with user-supplied data (files, matrices, flags). CLI exit code 2.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal numerical consistency failures. These indicate a bug or a broken
// precondition upstream, not a malformed input. CLI exit code 1.
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_unitary_error : validation_error {
    using validation_error::validation_error;
};
struct determinant_mismatch_error : validation_error {
    using validation_error::validation_error;
};
struct schema_error : validation_error {
    using validation_error::validation_error;
};
struct dimension_mismatch_error : validation_error {
    using validation_error::validation_error;
};
struct not_number_preserving_error : validation_error {
    using validation_error::validation_error;
};
struct indefinite_parity_error : validation_error {
    using validation_error::validation_error;
};
struct pbc_product_unsupported_error : validation_error {
    using validation_error::validation_error;
};
struct branch_mismatch_error : validation_error {
    using validation_error::validation_error;
};
struct dimension_guard_error : validation_error {
    using validation_error::validation_error;
};

struct not_linearizable_error : integrity_error {
    using integrity_error::integrity_error;
};
struct imaginary_residual_error : integrity_error {
    using integrity_error::integrity_error;
};
struct not_antisymmetric_error : integrity_error {
    using integrity_error::integrity_error;
};
struct degenerate_conditional_error : integrity_error {
    using integrity_error::integrity_error;
};
struct impossible_outcome_error : integrity_error {
    using integrity_error::integrity_error;
};

}  // namespace mgsim
