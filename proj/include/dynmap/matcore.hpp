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


#ifndef DYNMAP_MATCORE_HPP
#define DYNMAP_MATCORE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace dynmap {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Default tolerance for Hermiticity and orthonormality checks.
inline constexpr double kDefaultTol = 1e-10;
/// Relative cutoff below which eigenvalues are treated as zero in decompositions.
inline constexpr double kTruncationTol = 1e-12;
/// Residual norm a candidate direction must keep to be accepted during unitary completion.
inline constexpr double kCompletionAcceptNorm = 1e-8;

/// Layout of the joint space A (system) x B (ancilla). The basis state |r>|a> lives
/// at composite index r * dim_b + a: system index slow, ancilla index fast. kron,
/// partial_trace_b and every dilation use this one rule.
struct CompositeIndex {
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;

    constexpr std::size_t operator()(std::size_t r, std::size_t a) const noexcept {
        return r * dim_b + a;
    }
    constexpr std::size_t size() const noexcept {
        return dim_a * dim_b;
    }
    constexpr std::size_t system_of(std::size_t index) const noexcept {
        return index / dim_b;
    }
    constexpr std::size_t ancilla_of(std::size_t index) const noexcept {
        return index % dim_b;
    }
};

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const CMatrix &m, const char *what);

/// Largest absolute entry, ‖m‖_max.
double max_abs(const CMatrix &m);

/// ‖m − m†‖_max.
double hermiticity_residual(const CMatrix &m);

/// ‖m†m − I‖_max; zero for an isometry.
double isometry_residual(const CMatrix &m);

CMatrix dagger(const CMatrix &m);

/// Kronecker product with (i*rows_b + k, j*cols_b + l) = a(i,j) * b(k,l).
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Traces out the fast (ancilla) factor: result(r,s) = Σ_a m((r,a),(s,a)).
CMatrix partial_trace_b(const CMatrix &m, CompositeIndex conv);

struct HermitianEigen {
    RVector values;   // descending
    CMatrix vectors;  // orthonormal columns, matching values
};

/// Eigendecomposition of a Hermitian matrix with a reproducible eigenbasis.
///
/// Eigenvalues come out in descending order. Each eigenvector is phase-fixed so its
/// largest-magnitude component (first one, on ties) is real and positive. Within a
/// cluster of degenerate eigenvalues the vectors are ordered lexicographically by
/// their components, comparing real then imaginary parts, larger first.
///
/// Throws NotHermitian if ‖h − h†‖_max > tol.
HermitianEigen hermitian_eig(const CMatrix &h, double tol = kDefaultTol);

/// Principal square root of a PSD matrix. Eigenvalues in [−tol, tol] are clamped to
/// zero before the root is taken. Throws NotPSD for eigenvalues below −tol.
CMatrix psd_sqrt(const CMatrix &m, double tol = kDefaultTol);

/// Extends the D×k isometry `columns` to a D×D unitary whose first k columns are the
/// input, unchanged. The remaining columns come from the standard basis vectors
/// e0, e1, ... in order: each is orthogonalized against every accepted column with two
/// passes of modified Gram–Schmidt and kept when its residual norm exceeds
/// kCompletionAcceptNorm.
///
/// Throws NotIsometry if ‖columns†columns − I‖_max > tol, RankDeficient if the
/// candidates run out first.
CMatrix complete_to_unitary(const CMatrix &columns, double tol = kDefaultTol);

/// Same contract as complete_to_unitary, except the candidate directions are complex
/// Gaussian vectors drawn from a generator seeded with `seed`. Exists so callers can
/// check that nothing downstream depends on which completion was chosen.
CMatrix complete_to_unitary_random(const CMatrix &columns, std::uint64_t seed,
                                   double tol = kDefaultTol);

}  // namespace dynmap

#endif
