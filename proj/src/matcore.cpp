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


#include "dynmap/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dynmap/errors.hpp"
#include "dynmap/random.hpp"

namespace dynmap {

std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::NotIsometry: return "NotIsometry";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::BadRank: return "BadRank";
        case ErrorCode::NotCompletelyPositive: return "NotCompletelyPositive";
        case ErrorCode::NotTracePreserving: return "NotTracePreserving";
        case ErrorCode::Incomplete: return "Incomplete";
        case ErrorCode::OverComplete: return "OverComplete";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::UsageError: return "UsageError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

void require_finite(const CMatrix &m, const char *what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN or infinite entries");
    }
}

double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "hermiticity check on a non-square matrix");
    }
    return max_abs(m - m.adjoint());
}

double isometry_residual(const CMatrix &m) {
    return max_abs(m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols()));
}

CMatrix dagger(const CMatrix &m) {
    return m.adjoint();
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix partial_trace_b(const CMatrix &m, CompositeIndex conv) {
    auto side = static_cast<Eigen::Index>(conv.size());
    if (m.rows() != side || m.cols() != side) {
        throw Error(ErrorCode::DimensionMismatch,
                    "partial trace expects a " + std::to_string(side) + "x" + std::to_string(side) +
                        " matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    auto n = static_cast<Eigen::Index>(conv.dim_a);
    CMatrix out = CMatrix::Zero(n, n);
    for (std::size_t r = 0; r < conv.dim_a; ++r) {
        for (std::size_t s = 0; s < conv.dim_a; ++s) {
            Complex acc = 0.0;
            for (std::size_t a = 0; a < conv.dim_b; ++a) {
                acc += m(static_cast<Eigen::Index>(conv(r, a)), static_cast<Eigen::Index>(conv(s, a)));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = acc;
        }
    }
    return out;
}

namespace {

void fix_phase(Eigen::Ref<CVector> v) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // Near-equal magnitudes resolve to the earliest index.
        double a = std::abs(v(i));
        if (a > best_abs + 1e-12) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs > 0.0) {
        v *= std::conj(v(best)) / best_abs;
        v(best) = Complex(best_abs, 0.0);
    }
}

// True if a should precede b: first component whose real or imaginary part differs
// by more than eps decides, larger first.
bool lex_before(const CVector &a, const CVector &b, double eps) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double dr = a(i).real() - b(i).real();
        if (std::abs(dr) > eps) {
            return dr > 0.0;
        }
        double di = a(i).imag() - b(i).imag();
        if (std::abs(di) > eps) {
            return di > 0.0;
        }
    }
    return false;
}

}  // namespace

HermitianEigen hermitian_eig(const CMatrix &h, double tol) {
    require_finite(h, "hermitian_eig input");
    double residual = hermiticity_residual(h);
    if (residual > tol) {
        throw Error(ErrorCode::NotHermitian,
                    "max |h - h^dagger| = " + std::to_string(residual) + " exceeds tol");
    }
    Eigen::Index n = h.rows();
    HermitianEigen out;
    if (n == 0) {
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::RankDeficient, "Hermitian eigensolver did not converge");
    }
    RVector values = solver.eigenvalues();
    CMatrix vectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < n; ++j) {
        fix_phase(vectors.col(j));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });

    // Degenerate clusters: consecutive values closer than this are reordered by vector.
    double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    double cluster_eps = 1e-9 * scale;
    std::size_t begin = 0;
    while (begin < order.size()) {
        std::size_t end = begin + 1;
        while (end < order.size() && values(order[end - 1]) - values(order[end]) <= cluster_eps) {
            ++end;
        }
        if (end - begin > 1) {
            std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                             order.begin() + static_cast<std::ptrdiff_t>(end),
                             [&](Eigen::Index a, Eigen::Index b) {
                                 return lex_before(vectors.col(a), vectors.col(b), 1e-9);
                             });
        }
        begin = end;
    }

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values(j) = values(order[static_cast<std::size_t>(j)]);
        out.vectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
    }
    return out;
}

CMatrix psd_sqrt(const CMatrix &m, double tol) {
    HermitianEigen eig = hermitian_eig(m, tol);
    RVector roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double v = eig.values(i);
        if (v < -tol) {
            throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(v) + " below -tol");
        }
        roots(i) = v <= tol ? 0.0 : std::sqrt(v);
    }
    return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

namespace {

template <typename NextCandidate>
CMatrix complete_with(const CMatrix &columns, double tol, NextCandidate next, std::size_t max_candidates) {
    require_finite(columns, "isometry");
    Eigen::Index d = columns.rows();
    Eigen::Index k = columns.cols();
    if (k > d) {
        throw Error(ErrorCode::NotIsometry, "more columns than rows");
    }
    double residual = isometry_residual(columns);
    if (residual > tol) {
        throw Error(ErrorCode::NotIsometry,
                    "max |W^dagger W - I| = " + std::to_string(residual) + " exceeds tol");
    }
    CMatrix out(d, d);
    out.leftCols(k) = columns;
    Eigen::Index accepted = k;
    for (std::size_t c = 0; c < max_candidates && accepted < d; ++c) {
        CVector v = next(c);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < accepted; ++j) {
                v -= out.col(j).dot(v) * out.col(j);
            }
        }
        double norm = v.norm();
        if (norm > kCompletionAcceptNorm) {
            out.col(accepted++) = v / norm;
        }
    }
    if (accepted < d) {
        throw Error(ErrorCode::RankDeficient,
                    "found " + std::to_string(accepted) + " of " + std::to_string(d) + " directions");
    }
    return out;
}

}  // namespace

CMatrix complete_to_unitary(const CMatrix &columns, double tol) {
    Eigen::Index d = columns.rows();
    return complete_with(
        columns, tol, [d](std::size_t c) { return CVector(CVector::Unit(d, static_cast<Eigen::Index>(c))); },
        static_cast<std::size_t>(d));
}

CMatrix complete_to_unitary_random(const CMatrix &columns, std::uint64_t seed, double tol) {
    Eigen::Index d = columns.rows();
    Rng rng = make_rng(seed);
    return complete_with(
        columns, tol, [&](std::size_t) { return CVector(gaussian_matrix(rng, d, 1).col(0)); },
        static_cast<std::size_t>(4 * d + 16));
}

}  // namespace dynmap
