// Copyright 2026 The dynmap Authors
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


#ifndef DYNMAP_DILATION_HPP
#define DYNMAP_DILATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>

#include "dynmap/channel.hpp"
#include "dynmap/matcore.hpp"

namespace dynmap {

/// Weights in [−kWeightClampTol, 0) are eigensolver noise and are treated as zero.
inline constexpr double kWeightClampTol = 1e-12;
/// Largest ‖Σ λ L†L − I‖_max accepted before an isometry is refused.
inline constexpr double kTracePreservationTol = 1e-8;

/// Unitary on system ⊗ ancilla whose columns at composite index (r', 0) realize a
/// channel: U|r'>|0> = Σ_{r,α} √λ_α L_α(r, r') |r>|α>.
struct DilationUnitary {
    std::size_t sys_dim = 0;
    std::size_t anc_dim = 0;
    CMatrix u;
    CompositeIndex conv;
    std::size_t iso_cols = 0;
};

/// Which rule fills the columns (r', α ≠ 0) left free by the isometry.
struct Completion {
    /// Seeded random completion when set; the deterministic standard-basis rule otherwise.
    std::optional<std::uint64_t> random_seed;
};

struct DilationResult {
    CMatrix joint;    // U (ρ ⊗ |0><0|) U†
    CMatrix reduced;  // ancilla traced out
};

struct VerificationReport {
    std::size_t trials = 0;
    std::size_t anc_dim = 0;
    double max_error = 0.0;
    double unitarity_residual = 0.0;
};

/// Stacks Kraus terms into the (N·ν)×N isometry with entry √λ_α L_α(r, r') at
/// composite row (r, α) and column r'. Throws NotCompletelyPositive on a weight below
/// −kWeightClampTol, NotTracePreserving when Σ λ L†L differs from I by more than
/// kTracePreservationTol.
CMatrix build_dilation_isometry(const CanonicalDecomposition &dec);

/// Places the N isometry columns of an (N·d)×N isometry at composite columns (r', 0)
/// and fills every other column from the chosen completion, in order.
CMatrix embed_isometry(const CMatrix &isometry, std::size_t sys_dim, std::size_t anc_dim,
                       Completion completion = {});

DilationUnitary build_dilation_unitary(const CanonicalDecomposition &dec, Completion completion = {});

DilationResult simulate_via_dilation(const DilationUnitary &du, const DensityMatrix &rho);

/// ρ ⊗ |0><0| on the joint space, using the composite index rule.
CMatrix embed_state(const CMatrix &rho, std::size_t anc_dim);

/// Max entrywise deviation between the dilation route and apply_map, over `trials`
/// Ginibre-random states drawn from per-trial streams of `seed`.
VerificationReport verify_dilation(const DynamicalMap &map, std::size_t trials, std::uint64_t seed);

}  // namespace dynmap

#endif
