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


#ifndef DYNMAP_INSTRUMENT_HPP
#define DYNMAP_INSTRUMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynmap/channel.hpp"
#include "dynmap/dilation.hpp"
#include "dynmap/matcore.hpp"

namespace dynmap {

/// Tolerance for Σᵢ Eᵢ = I when an instrument's `complete` flag is computed.
inline constexpr double kCompletenessTol = 1e-8;
/// Smallest eigenvalue of I − Σᵢ Eᵢ tolerated by padding.
inline constexpr double kOverCompleteTol = 1e-9;
/// Outcomes at or below this probability get no post-selected state.
inline constexpr double kPostSelectThreshold = 1e-12;

struct LabeledMap {
    std::string label;
    DynamicalMap map;
};

/// Ordered set of CP maps, one per measurement outcome. Members need not be
/// trace-preserving; `complete()` says whether their sum is.
class Instrument {
  public:
    /// Throws DimensionMismatch, ValidationError (empty or duplicate labels) or
    /// NotCompletelyPositive (a member's dynamical matrix has an eigenvalue < −1e−10).
    explicit Instrument(std::vector<LabeledMap> maps, std::optional<std::size_t> padded_index = std::nullopt);

    std::size_t dim() const noexcept {
        return dim_;
    }
    std::size_t size() const noexcept {
        return maps_.size();
    }
    const std::vector<LabeledMap> &maps() const noexcept {
        return maps_;
    }
    bool complete() const noexcept {
        return complete_;
    }
    /// Index of the discard outcome appended by pad_to_complete, if any.
    std::optional<std::size_t> padded_index() const noexcept {
        return padded_index_;
    }

  private:
    std::size_t dim_ = 0;
    std::vector<LabeledMap> maps_;
    bool complete_ = false;
    std::optional<std::size_t> padded_index_;
};

struct Completeness {
    bool complete = false;
    CMatrix defect;  // I − Σᵢ Eᵢ
};

/// Ancilla slice [begin, end) read out as one outcome.
struct Sector {
    std::string label;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept {
        return end - begin;
    }
};

/// One unitary on system ⊗ ancilla realizing a whole instrument. The ancilla basis
/// (i, α) is laid out sector by sector in outcome order; within a sector, eigen-terms
/// in descending weight. The ancilla starts in its index-0 state.
struct InstrumentDilation {
    std::size_t sys_dim = 0;
    std::size_t anc_dim = 0;
    std::size_t num_maps = 0;
    CMatrix u;
    std::vector<Sector> sectors;
    CompositeIndex conv;
    std::optional<std::size_t> padded_index;
};

struct OutcomeResult {
    std::string label;
    double probability = 0.0;
    std::optional<DensityMatrix> post_state;  // set when probability > threshold
    CMatrix raw_unnormalized;                 // Λ⁽ⁱ⁾ρ
};

struct HistogramEntry {
    std::string label;
    std::uint64_t count = 0;
};

Completeness check_completeness(const Instrument &inst, double tol = kCompletenessTol);

/// Appends a discard outcome with the single Kraus operator √(I − Σᵢ Eᵢ) when the
/// instrument is incomplete at `tol`; returns the input unchanged otherwise. Throws
/// OverComplete if I − Σᵢ Eᵢ has an eigenvalue below −kOverCompleteTol.
Instrument pad_to_complete(const Instrument &inst, double tol = kDefaultTol);

/// Throws Incomplete unless check_completeness passes, NotCompletelyPositive if a
/// member decomposes with a weight below −kWeightClampTol.
InstrumentDilation build_instrument_dilation(const Instrument &inst, Completion completion = {});

/// Evolves ρ ⊗ |0><0| by the dilation unitary and projects onto each sector.
std::vector<OutcomeResult> measure_via_dilation(const InstrumentDilation &dil, const DensityMatrix &rho,
                                                double threshold = kPostSelectThreshold);

/// Direct route: raw_unnormalized = apply_map(Λ⁽ⁱ⁾, ρ).
std::vector<OutcomeResult> outcome_statistics(const Instrument &inst, const DensityMatrix &rho,
                                              double threshold = kPostSelectThreshold);

/// `shots` independent outcomes drawn by inverse CDF from the dilation's outcome
/// probabilities. One entry per sector, in sector order.
std::vector<HistogramEntry> sample_outcomes(const InstrumentDilation &dil, const DensityMatrix &rho,
                                            std::uint64_t shots, std::uint64_t seed);

/// Random complete instrument with `outcomes` members on a `dim`-level system. Even
/// seeds split the Kraus operators of a random CPTP map round-robin across outcomes;
/// odd seeds with outcomes ≤ dim give a rotated projective measurement.
Instrument random_instrument(std::size_t dim, std::size_t outcomes, std::uint64_t seed);

}  // namespace dynmap

#endif
