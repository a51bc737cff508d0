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


#include "dynmap/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynmap/errors.hpp"
#include "dynmap/random.hpp"

namespace dynmap {

namespace {

Eigen::Index idx(std::size_t i) {
    return static_cast<Eigen::Index>(i);
}

}  // namespace

CMatrix build_dilation_isometry(const CanonicalDecomposition &dec) {
    std::size_t n = dec.dim;
    std::size_t nu = dec.rank();
    if (nu == 0) {
        throw Error(ErrorCode::NotTracePreserving, "zero map has no dilation");
    }
    CMatrix effect = CMatrix::Zero(idx(n), idx(n));
    for (const KrausTerm &t : dec.terms) {
        if (t.weight < -kWeightClampTol) {
            throw Error(ErrorCode::NotCompletelyPositive,
                        "weight " + std::to_string(t.weight) + " has no real square root");
        }
        effect += std::max(t.weight, 0.0) * (t.op.adjoint() * t.op);
    }
    double defect = max_abs(effect - CMatrix::Identity(idx(n), idx(n)));
    if (defect > kTracePreservationTol) {
        throw Error(ErrorCode::NotTracePreserving,
                    "max |sum w L^dagger L - I| = " + std::to_string(defect));
    }

    CompositeIndex conv{n, nu};
    CMatrix w = CMatrix::Zero(idx(conv.size()), idx(n));
    for (std::size_t a = 0; a < nu; ++a) {
        const KrausTerm &t = dec.terms[a];
        double amp = std::sqrt(std::max(t.weight, 0.0));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t rp = 0; rp < n; ++rp) {
                w(idx(conv(r, a)), idx(rp)) = amp * t.op(idx(r), idx(rp));
            }
        }
    }
    return w;
}

CMatrix embed_isometry(const CMatrix &isometry, std::size_t sys_dim, std::size_t anc_dim,
                       Completion completion) {
    CompositeIndex conv{sys_dim, anc_dim};
    if (isometry.rows() != idx(conv.size()) || isometry.cols() != idx(sys_dim)) {
        throw Error(ErrorCode::DimensionMismatch, "isometry shape does not match system x ancilla");
    }
    CMatrix q = completion.random_seed ? complete_to_unitary_random(isometry, *completion.random_seed, kTracePreservationTol)
                                       : complete_to_unitary(isometry, kTracePreservationTol);
    CMatrix u(q.rows(), q.cols());
    Eigen::Index next_free = idx(sys_dim);
    for (std::size_t r = 0; r < sys_dim; ++r) {
        for (std::size_t a = 0; a < anc_dim; ++a) {
            Eigen::Index col = idx(conv(r, a));
            u.col(col) = a == 0 ? q.col(idx(r)) : q.col(next_free++);
        }
    }
    return u;
}

DilationUnitary build_dilation_unitary(const CanonicalDecomposition &dec, Completion completion) {
    CMatrix w = build_dilation_isometry(dec);
    DilationUnitary du;
    du.sys_dim = dec.dim;
    du.anc_dim = dec.rank();
    du.conv = CompositeIndex{du.sys_dim, du.anc_dim};
    du.iso_cols = du.sys_dim;
    du.u = embed_isometry(w, du.sys_dim, du.anc_dim, completion);
    return du;
}

CMatrix embed_state(const CMatrix &rho, std::size_t anc_dim) {
    CMatrix anc = CMatrix::Zero(idx(anc_dim), idx(anc_dim));
    anc(0, 0) = 1.0;
    return kron(rho, anc);
}

DilationResult simulate_via_dilation(const DilationUnitary &du, const DensityMatrix &rho) {
    if (rho.dim() != du.sys_dim) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension does not match dilation");
    }
    DilationResult out;
    out.joint = du.u * embed_state(rho.matrix(), du.anc_dim) * du.u.adjoint();
    out.reduced = partial_trace_b(out.joint, du.conv);
    return out;
}

VerificationReport verify_dilation(const DynamicalMap &map, std::size_t trials, std::uint64_t seed) {
    DilationUnitary du = build_dilation_unitary(canonical_decompose(map));
    VerificationReport report;
    report.trials = trials;
    report.anc_dim = du.anc_dim;
    report.unitarity_residual = isometry_residual(du.u);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(seed, t);
        DensityMatrix rho = DensityMatrix::random(map.dim(), rng);
        CMatrix reduced = simulate_via_dilation(du, rho).reduced;
        report.max_error = std::max(report.max_error, max_abs(reduced - apply_map(map, rho)));
    }
    return report;
}

}  // namespace dynmap
