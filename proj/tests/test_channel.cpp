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

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "test_util.hpp"

using namespace dynmap;
using dynmap::testing::expect_code;
namespace o = dynmap::oracle;

namespace {

CMatrix swap_bmat(std::size_t n) {
    CMatrix b = CMatrix::Zero(Eigen::Index(n * n), Eigen::Index(n * n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
            // Λ_{rr',ss'} = δ_{rs'} δ_{r's}
            b(Eigen::Index(r * n + s), Eigen::Index(s * n + r)) = 1.0;
        }
    }
    return b;
}

std::vector<KrausTerm> matrix_unit_depolarizer() {
    std::vector<KrausTerm> terms;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CMatrix e = CMatrix::Zero(2, 2);
            e(i, j) = 1.0;
            terms.push_back({0.5, e});
        }
    }
    return terms;
}

std::vector<KrausTerm> single(double w, const CMatrix &op) {
    return {{w, op}};
}

}  // namespace

TEST(channel, identity_channel_bmat_is_rank_one) {
    DynamicalMap id = map_from_kraus(single(1.0, CMatrix::Identity(2, 2)), 2);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
    EXPECT_EQ(id.bmat(), expected);
    EXPECT_NEAR(o::min_eigenvalue(-id.bmat()), -2.0, 1e-14);  // top eigenvalue 2
}

TEST(channel, zero_weight_term_contributes_nothing) {
    DynamicalMap z = map_from_kraus(single(0.0, o::pauli_x()), 2);
    EXPECT_EQ(z.bmat(), CMatrix(CMatrix::Zero(4, 4)));
}

TEST(channel, matrix_unit_depolarizer_is_half_identity) {
    DynamicalMap dep = map_from_kraus(matrix_unit_depolarizer(), 2);
    EXPECT_LE(o::max_abs(dep.bmat() - 0.5 * CMatrix::Identity(4, 4)), 0.0);
}

TEST(channel, map_from_kraus_dimension_mismatch) {
    expect_code(ErrorCode::DimensionMismatch,
                [] { map_from_kraus(single(1.0, CMatrix::Identity(3, 3)), 2); });
}

TEST(channel, apply_map_examples) {
    DensityMatrix ground(o::proj0());
    DensityMatrix excited(o::proj1());

    DynamicalMap id = map_from_kraus(single(1.0, CMatrix::Identity(2, 2)), 2);
    DensityMatrix plus(o::plus_state());
    EXPECT_LE(o::max_abs(apply_map(id, plus) - o::plus_state()), 0.0);

    DynamicalMap flip = map_from_kraus(single(1.0, o::pauli_x()), 2);
    EXPECT_LE(o::max_abs(apply_map(flip, ground) - o::proj1()), 0.0);

    DynamicalMap damp = map_from_kraus(o::amplitude_damping_half(), 2);
    EXPECT_LE(o::max_abs(apply_map(damp, excited) - o::diag({0.5, 0.5})), 1e-15);
}

TEST(channel, apply_map_matches_operator_sum_oracle) {
    Rng rng = make_rng(21);
    for (int k = 0; k < 30; ++k) {
        std::size_t n = 1 + k % 4;
        std::vector<KrausTerm> terms;
        for (int j = 0; j < 3; ++j) {
            terms.push_back({(j == 2 ? -0.3 : 0.7), o::random_matrix(rng, Eigen::Index(n), Eigen::Index(n))});
        }
        DynamicalMap map = map_from_kraus(terms, n);
        CMatrix rho = o::random_matrix(rng, Eigen::Index(n), Eigen::Index(n));
        EXPECT_LE(o::max_abs(apply_map(map, rho) - o::kraus_apply(terms, rho)), 1e-12);
    }
}

TEST(channel, apply_map_dimension_mismatch) {
    DynamicalMap id = map_from_kraus(single(1.0, CMatrix::Identity(2, 2)), 2);
    expect_code(ErrorCode::DimensionMismatch, [&] { apply_map(id, CMatrix(CMatrix::Identity(3, 3))); });
}

TEST(channel, effect_operator_matches_sum_of_kraus_products) {
    Rng rng = make_rng(22);
    for (int k = 0; k < 20; ++k) {
        std::size_t n = 1 + k % 4;
        std::vector<KrausTerm> terms{{0.4, o::random_matrix(rng, Eigen::Index(n), Eigen::Index(n))},
                                     {1.3, o::random_matrix(rng, Eigen::Index(n), Eigen::Index(n))}};
        CMatrix expected = CMatrix::Zero(Eigen::Index(n), Eigen::Index(n));
        for (const KrausTerm &t : terms) {
            expected += t.weight * t.op.adjoint() * t.op;
        }
        EXPECT_LE(o::max_abs(effect_operator(map_from_kraus(terms, n)) - expected), 1e-12);
    }
}

TEST(channel, decompose_identity_channel) {
    CanonicalDecomposition dec = canonical_decompose(map_from_kraus(single(1.0, CMatrix::Identity(2, 2)), 2));
    ASSERT_EQ(dec.rank(), 1u);
    EXPECT_NEAR(dec.terms[0].weight, 2.0, 1e-14);
    EXPECT_LE(o::max_abs(dec.terms[0].op - CMatrix::Identity(2, 2) / std::sqrt(2.0)), 1e-15);
}

TEST(channel, decompose_degenerate_depolarizer) {
    DynamicalMap dep = map_from_kraus(matrix_unit_depolarizer(), 2);
    CanonicalDecomposition dec = canonical_decompose(dep);
    ASSERT_EQ(dec.rank(), 4u);
    for (const KrausTerm &t : dec.terms) {
        EXPECT_NEAR(t.weight, 0.5, 1e-14);
    }
    EXPECT_LE(o::max_abs(map_from_kraus(dec.terms, 2).bmat() - dep.bmat()), 1e-14);
}

TEST(channel, decompose_transpose_exposes_negative_weight) {
    CanonicalDecomposition dec = canonical_decompose(DynamicalMap(2, swap_bmat(2)));
    ASSERT_EQ(dec.rank(), 4u);
    EXPECT_NEAR(dec.terms[0].weight, 1.0, 1e-14);
    EXPECT_NEAR(dec.terms[1].weight, 1.0, 1e-14);
    EXPECT_NEAR(dec.terms[2].weight, 1.0, 1e-14);
    EXPECT_NEAR(dec.terms[3].weight, -1.0, 1e-14);
}

TEST(channel, decomposition_operators_are_hs_orthonormal_and_round_trip) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::size_t n = 2 + seed % 3;
        std::size_t rank = 1 + seed % (n * n);
        DynamicalMap map = random_cptp(n, rank, seed);
        CanonicalDecomposition dec = canonical_decompose(map);
        EXPECT_LE(dec.rank(), n * n);
        EXPECT_EQ(dec.rank(), rank);
        for (std::size_t a = 0; a < dec.rank(); ++a) {
            for (std::size_t b = 0; b < dec.rank(); ++b) {
                Complex ip = (dec.terms[a].op.adjoint() * dec.terms[b].op).trace();
                EXPECT_LE(std::abs(ip - Complex(a == b ? 1.0 : 0.0)), 1e-9);
            }
            if (a > 0) {
                EXPECT_GE(dec.terms[a - 1].weight, dec.terms[a].weight);
            }
        }
        EXPECT_LE(o::max_abs(map_from_kraus(dec.terms, n).bmat() - map.bmat()), 1e-9);
    }
}

TEST(channel, check_properties_identity) {
    MapProperties p = check_properties(map_from_kraus(single(1.0, CMatrix::Identity(2, 2)), 2));
    EXPECT_TRUE(p.hermiticity_preserving);
    EXPECT_TRUE(p.trace_preserving);
    EXPECT_TRUE(p.completely_positive);
    EXPECT_LE(p.trace_defect, 1e-15);
}

TEST(channel, check_properties_transpose) {
    MapProperties p = check_properties(DynamicalMap(2, swap_bmat(2)));
    EXPECT_TRUE(p.hermiticity_preserving);
    EXPECT_TRUE(p.trace_preserving);
    EXPECT_FALSE(p.completely_positive);
    EXPECT_NEAR(p.min_eigenvalue, -1.0, 1e-12);
}

TEST(channel, check_properties_projection_is_not_trace_preserving) {
    MapProperties p = check_properties(map_from_kraus(single(1.0, o::proj0()), 2));
    EXPECT_FALSE(p.trace_preserving);
    EXPECT_TRUE(p.completely_positive);
    EXPECT_NEAR(p.trace_defect, 1.0, 1e-15);
}

TEST(channel, hermiticity_is_enforced_at_construction) {
    CMatrix b = CMatrix::Zero(4, 4);
    b(0, 1) = 1.0;
    expect_code(ErrorCode::NotHermitian, [&] { DynamicalMap(2, b); });
    expect_code(ErrorCode::DimensionMismatch, [&] { DynamicalMap(3, b); });
}

TEST(channel, random_cptp_rank_one_is_unitary_conjugation) {
    Rng rng = make_rng(23);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DynamicalMap u = random_cptp(3, 1, seed);
        DensityMatrix rho = DensityMatrix::random(3, rng);
        Eigen::SelfAdjointEigenSolver<CMatrix> before(rho.matrix());
        Eigen::SelfAdjointEigenSolver<CMatrix> after(apply_map(u, rho));
        EXPECT_LE((before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(channel, random_cptp_is_cptp_and_deterministic) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        MapProperties p = check_properties(random_cptp(2, 4, seed));
        EXPECT_TRUE(p.hermiticity_preserving && p.trace_preserving && p.completely_positive) << seed;
        std::vector<CMatrix> ks = random_cptp_kraus(2, 4, seed);
        CMatrix total = CMatrix::Zero(2, 2);
        for (const CMatrix &k : ks) {
            total += k.adjoint() * k;
        }
        EXPECT_LE(o::max_abs(total - CMatrix::Identity(2, 2)), 1e-10);
    }
    EXPECT_EQ(random_cptp(3, 5, 99).bmat(), random_cptp(3, 5, 99).bmat());
    EXPECT_NE(random_cptp(3, 5, 99).bmat(), random_cptp(3, 5, 100).bmat());
}

TEST(channel, random_cptp_rejects_bad_rank) {
    expect_code(ErrorCode::BadRank, [] { random_cptp(2, 0, 1); });
    expect_code(ErrorCode::BadRank, [] { random_cptp(2, 5, 1); });
}

TEST(channel, cptp_output_stays_a_density_matrix) {
    Rng rng = make_rng(24);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::size_t n = 2 + seed % 3;
        DynamicalMap map = random_cptp(n, 1 + seed % (n * n), 500 + seed);
        DensityMatrix rho = DensityMatrix::random(n, rng);
        CMatrix out = apply_map(map, rho);
        EXPECT_LE(o::max_abs(out - out.adjoint()), 1e-10);
        EXPECT_LE(std::abs(out.trace() - Complex(1.0)), 1e-10);
        EXPECT_GE(o::min_eigenvalue(out), -1e-9);
    }
}

TEST(channel, density_matrix_validation) {
    expect_code(ErrorCode::InvalidState, [] { DensityMatrix(o::diag({1, 1})); });
    expect_code(ErrorCode::InvalidState, [] { DensityMatrix(o::diag({1.5, -0.5})); });
    expect_code(ErrorCode::InvalidState, [] { DensityMatrix(o::mat2(0.5, 0.5, 0, 0.5)); });
    expect_code(ErrorCode::DimensionMismatch, [] { DensityMatrix(CMatrix::Zero(2, 3)); });
}

TEST(channel, vec_and_unvec_are_inverse) {
    Rng rng = make_rng(25);
    CMatrix m = o::random_matrix(rng, 3, 3);
    CVector v = vec(m);
    EXPECT_EQ(v(1), m(0, 1));
    EXPECT_EQ(v(3), m(1, 0));
    EXPECT_EQ(unvec(v, 3), m);
}
