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


#include "dynmap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynmap/errors.hpp"

namespace dynmap {

namespace {

Eigen::Index idx(std::size_t i) {
    return static_cast<Eigen::Index>(i);
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix mat, double tol) : mat_(std::move(mat)) {
    if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "density matrix must be square and non-empty");
    }
    require_finite(mat_, "density matrix");
    double herm = hermiticity_residual(mat_);
    if (herm > tol) {
        throw Error(ErrorCode::InvalidState, "not Hermitian (residual " + std::to_string(herm) + ")");
    }
    double trace_err = std::abs(mat_.trace() - Complex(1.0, 0.0));
    if (trace_err > tol) {
        throw Error(ErrorCode::InvalidState, "trace differs from 1 by " + std::to_string(trace_err));
    }
    double min_eig = hermitian_eig(mat_, tol).values.minCoeff();
    if (min_eig < -tol) {
        throw Error(ErrorCode::InvalidState, "negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::assume_valid(CMatrix mat) {
    return DensityMatrix(std::move(mat), Unchecked{});
}

DensityMatrix DensityMatrix::random(std::size_t dim, Rng &rng) {
    CMatrix g = gaussian_matrix(rng, idx(dim), idx(dim));
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::random_pure(std::size_t dim, Rng &rng) {
    CVector psi = gaussian_matrix(rng, idx(dim), 1).col(0);
    psi.normalize();
    return DensityMatrix(psi * psi.adjoint());
}

DynamicalMap::DynamicalMap(std::size_t dim, CMatrix bmat, double tol) : dim_(dim), bmat_(std::move(bmat)) {
    if (dim == 0) {
        throw Error(ErrorCode::DimensionMismatch, "map dimension must be positive");
    }
    if (bmat_.rows() != idx(dim * dim) || bmat_.cols() != idx(dim * dim)) {
        throw Error(ErrorCode::DimensionMismatch, "dynamical matrix of a dim-" + std::to_string(dim) +
                                                      " map must be " + std::to_string(dim * dim) +
                                                      " square");
    }
    require_finite(bmat_, "dynamical matrix");
    double herm = hermiticity_residual(bmat_);
    if (herm > tol) {
        throw Error(ErrorCode::NotHermitian,
                    "dynamical matrix violates bmat((r,r'),(s,s')) = conj(bmat((s,s'),(r,r'))); residual " +
                        std::to_string(herm));
    }
}

CVector vec(const CMatrix &op) {
    CVector v(op.size());
    for (Eigen::Index r = 0; r < op.rows(); ++r) {
        for (Eigen::Index c = 0; c < op.cols(); ++c) {
            v(r * op.cols() + c) = op(r, c);
        }
    }
    return v;
}

CMatrix unvec(const CVector &v, std::size_t dim) {
    if (v.size() != idx(dim * dim)) {
        throw Error(ErrorCode::DimensionMismatch, "vector length is not dim^2");
    }
    CMatrix op(idx(dim), idx(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            op(idx(r), idx(c)) = v(idx(r * dim + c));
        }
    }
    return op;
}

DynamicalMap map_from_kraus(std::span<const KrausTerm> terms, std::size_t dim) {
    CMatrix bmat = CMatrix::Zero(idx(dim * dim), idx(dim * dim));
    for (const KrausTerm &t : terms) {
        if (t.op.rows() != idx(dim) || t.op.cols() != idx(dim)) {
            throw Error(ErrorCode::DimensionMismatch, "Kraus operator is not " + std::to_string(dim) + "x" +
                                                          std::to_string(dim));
        }
        require_finite(t.op, "Kraus operator");
        if (!std::isfinite(t.weight)) {
            throw Error(ErrorCode::NonFinite, "Kraus weight is not finite");
        }
        CVector v = vec(t.op);
        bmat.noalias() += t.weight * (v * v.adjoint());
    }
    return DynamicalMap(dim, std::move(bmat));
}

CMatrix apply_map(const DynamicalMap &map, const CMatrix &rho) {
    if (rho.rows() != idx(map.dim()) || rho.cols() != idx(map.dim())) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension does not match map");
    }
    // (Λρ)(r,s) = Σ_{r',s'} bmat((r,r'),(s,s')) ρ(r',s')
    std::size_t n = map.dim();
    const CMatrix &b = map.bmat();
    CMatrix out = CMatrix::Zero(idx(n), idx(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            Complex acc = 0.0;
            for (std::size_t rp = 0; rp < n; ++rp) {
                for (std::size_t sp = 0; sp < n; ++sp) {
                    acc += b(idx(r * n + rp), idx(s * n + sp)) * rho(idx(rp), idx(sp));
                }
            }
            out(idx(r), idx(s)) = acc;
        }
    }
    return out;
}

CMatrix apply_map(const DynamicalMap &map, const DensityMatrix &rho) {
    return apply_map(map, rho.matrix());
}

CMatrix effect_operator(const DynamicalMap &map) {
    std::size_t n = map.dim();
    const CMatrix &b = map.bmat();
    CMatrix e = CMatrix::Zero(idx(n), idx(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = 0; c < n; ++c) {
            Complex acc = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                acc += b(idx(r * n + c), idx(r * n + a));
            }
            e(idx(a), idx(c)) = acc;
        }
    }
    return e;
}

CanonicalDecomposition canonical_decompose(const DynamicalMap &map, double trunc_tol) {
    // Construction already enforced Hermiticity at kDefaultTol or looser (file loads);
    // symmetrize so the eigensolver sees an exactly Hermitian input.
    CMatrix h = 0.5 * (map.bmat() + map.bmat().adjoint());
    HermitianEigen eig = hermitian_eig(h, kDefaultTol);
    CanonicalDecomposition dec;
    dec.dim = map.dim();
    double largest = eig.values.size() == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
    if (largest == 0.0) {
        return dec;
    }
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        double lambda = eig.values(j);
        if (std::abs(lambda) > trunc_tol * largest) {
            dec.terms.push_back({lambda, unvec(eig.vectors.col(j), map.dim())});
        }
    }
    return dec;
}

MapProperties check_properties(const DynamicalMap &map, double tol) {
    MapProperties p;
    p.hermiticity_preserving = hermiticity_residual(map.bmat()) <= tol;
    CMatrix h = 0.5 * (map.bmat() + map.bmat().adjoint());
    p.min_eigenvalue = hermitian_eig(h, kDefaultTol).values.minCoeff();
    p.completely_positive = p.min_eigenvalue >= -tol;
    // Σ_r Λ_{rr',rs'} is the transpose of the effect operator.
    CMatrix partial = effect_operator(map).transpose();
    p.trace_defect = max_abs(partial - CMatrix::Identity(idx(map.dim()), idx(map.dim())));
    p.trace_preserving = p.trace_defect <= tol;
    return p;
}

std::vector<CMatrix> random_cptp_kraus(std::size_t dim, std::size_t kraus_rank, std::uint64_t seed) {
    if (dim == 0) {
        throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
    }
    if (kraus_rank < 1 || kraus_rank > dim * dim) {
        throw Error(ErrorCode::BadRank, "Kraus rank " + std::to_string(kraus_rank) + " outside [1, " +
                                            std::to_string(dim * dim) + "]");
    }
    Rng rng = make_rng(seed);
    CMatrix w = random_isometry(rng, idx(dim * kraus_rank), idx(dim));
    std::vector<CMatrix> ops;
    ops.reserve(kraus_rank);
    for (std::size_t j = 0; j < kraus_rank; ++j) {
        ops.push_back(w.middleRows(idx(j * dim), idx(dim)));
    }
    return ops;
}

DynamicalMap random_cptp(std::size_t dim, std::size_t kraus_rank, std::uint64_t seed) {
    std::vector<KrausTerm> terms;
    for (CMatrix &op : random_cptp_kraus(dim, kraus_rank, seed)) {
        terms.push_back({1.0, std::move(op)});
    }
    return map_from_kraus(terms, dim);
}

}  // namespace dynmap
