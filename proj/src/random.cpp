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


#include "dynmap/random.hpp"

#include <cmath>

#include "dynmap/errors.hpp"

namespace dynmap {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

CMatrix gaussian_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = normal(rng);
            double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

CMatrix random_isometry(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    if (cols > rows) {
        throw Error(ErrorCode::DimensionMismatch, "isometry needs cols <= rows");
    }
    CMatrix q = gaussian_matrix(rng, rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index k = 0; k < j; ++k) {
                q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
            }
        }
        double norm = q.col(j).norm();
        if (norm < kCompletionAcceptNorm) {
            throw Error(ErrorCode::RankDeficient, "degenerate Gaussian draw");
        }
        q.col(j) /= norm;
    }
    return q;
}

}  // namespace dynmap
