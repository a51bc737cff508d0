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


#ifndef DYNMAP_CHANNEL_HPP
#define DYNMAP_CHANNEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynmap/matcore.hpp"
#include "dynmap/random.hpp"

namespace dynmap {

/// An N×N Hermitian, PSD, unit-trace matrix. Validated on construction.
class DensityMatrix {
  public:
    explicit DensityMatrix(CMatrix mat, double tol = kDefaultTol);

    /// Wraps `mat` without validation. For states produced by exact renormalization
    /// of a valid unnormalized state, where tiny probabilities amplify round-off.
    static DensityMatrix assume_valid(CMatrix mat);

    std::size_t dim() const noexcept {
        return static_cast<std::size_t>(mat_.rows());
    }
    const CMatrix &matrix() const noexcept {
        return mat_;
    }

    /// Mixed state from the Ginibre ensemble: G G† / tr(G G†).
    static DensityMatrix random(std::size_t dim, Rng &rng);
    /// |ψ><ψ| for a Haar-random unit vector ψ.
    static DensityMatrix random_pure(std::size_t dim, Rng &rng);

  private:
    struct Unchecked {};
    DensityMatrix(CMatrix mat, Unchecked) : mat_(std::move(mat)) {
    }
    CMatrix mat_;
};

/// A (weight, operator) pair of the operator-sum form ρ → Σ w L ρ L†. Operators from
/// canonical_decompose have unit Hilbert–Schmidt norm and the weight carries the
/// magnitude; negative weights mark a map that is not completely positive.
struct KrausTerm {
    double weight = 0.0;
    CMatrix op;
};

/// Linear map on N×N matrices stored as its N²×N² dynamical matrix:
/// bmat((r*N + r'), (s*N + s')) = Λ_{rr',ss'}, so that
/// (Λρ)(r,s) = Σ_{r',s'} Λ_{rr',ss'} ρ(r',s').
/// Hermitian bmat is equivalent to the map preserving Hermiticity; it is checked on
/// construction.
class DynamicalMap {
  public:
    DynamicalMap(std::size_t dim, CMatrix bmat, double tol = kDefaultTol);

    std::size_t dim() const noexcept {
        return dim_;
    }
    const CMatrix &bmat() const noexcept {
        return bmat_;
    }

  private:
    std::size_t dim_;
    CMatrix bmat_;
};

struct CanonicalDecomposition {
    std::size_t dim = 0;
    std::vector<KrausTerm> terms;  // descending weight

    std::size_t rank() const noexcept {
        return terms.size();
    }
};

struct MapProperties {
    bool hermiticity_preserving = false;
    bool trace_preserving = false;
    bool completely_positive = false;
    double min_eigenvalue = 0.0;
    /// ‖Σ_r Λ_{rr',rs'} − δ_{r's'}‖_max
    double trace_defect = 0.0;
};

/// Row-major flattening: vec(L)(r*N + r') = L(r, r').
CVector vec(const CMatrix &op);
/// Inverse of vec for an N×N operator.
CMatrix unvec(const CVector &v, std::size_t dim);

DynamicalMap map_from_kraus(std::span<const KrausTerm> terms, std::size_t dim);

/// Λρ for a state or any N×N matrix. The result need not have unit trace.
CMatrix apply_map(const DynamicalMap &map, const CMatrix &rho);
CMatrix apply_map(const DynamicalMap &map, const DensityMatrix &rho);

/// The operator E = Σ_α λ_α L_α† L_α, read straight off the dynamical matrix as
/// E(a, b) = Σ_r bmat((r,b),(r,a)). Tr[Λρ] = Tr[Eρ]; the map is trace-preserving
/// iff E = I.
CMatrix effect_operator(const DynamicalMap &map);

/// Eigen-expansion of the dynamical matrix. Eigenvalues with
/// |λ| ≤ trunc_tol · max|λ| are dropped; each kept eigenvector is reshaped by unvec
/// into an HS-normalized operator.
CanonicalDecomposition canonical_decompose(const DynamicalMap &map, double trunc_tol = kTruncationTol);

/// Reports the map axioms; never throws on physics.
MapProperties check_properties(const DynamicalMap &map, double tol = kDefaultTol);

/// Kraus operators of a random CPTP map: a dim → dim*kraus_rank isometry drawn from
/// seeded Gaussians, sliced into kraus_rank row blocks. Throws BadRank unless
/// 1 ≤ kraus_rank ≤ dim².
std::vector<CMatrix> random_cptp_kraus(std::size_t dim, std::size_t kraus_rank, std::uint64_t seed);
DynamicalMap random_cptp(std::size_t dim, std::size_t kraus_rank, std::uint64_t seed);

}  // namespace dynmap

#endif
