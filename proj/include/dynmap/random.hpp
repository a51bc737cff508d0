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


#ifndef DYNMAP_RANDOM_HPP
#define DYNMAP_RANDOM_HPP

#include <cstdint>
#include <random>

#include "dynmap/matcore.hpp"

namespace dynmap {

using Rng = std::mt19937_64;

/// Independent generator for the (seed, stream) pair. Per-trial streams derive from
/// the stream index so results never depend on evaluation order.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Matrix of i.i.d. standard complex Gaussians (real and imaginary parts N(0, 1/2)).
CMatrix gaussian_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols);

/// D×k matrix with orthonormal columns, from Gram–Schmidt on Gaussian columns.
CMatrix random_isometry(Rng &rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace dynmap

#endif
