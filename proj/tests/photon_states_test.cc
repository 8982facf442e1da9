// Copyright 2026 The hinterf Authors
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


#include "hinterf/photon_states.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace hinterf {
namespace {

CVector vec(std::initializer_list<Complex> v) {
    CVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (Complex x : v) {
        out[k++] = x;
    }
    return out;
}

// Independent route to tr(rho_1 rho_2) through explicit density matrices.
double trace_product(const PhotonMixture &a, const PhotonMixture &b) {
    return (a.density_matrix() * b.density_matrix()).trace().real();
}

TEST(InternalState, NormChecked) {
    EXPECT_NO_THROW(InternalState(vec({1.0, 0.0})));
    EXPECT_THROW(InternalState(vec({1.0, 1.0})), std::invalid_argument);
    InternalState s = InternalState::normalized(vec({3.0, Complex(0.0, 4.0)}));
    EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
    EXPECT_THROW(InternalState::normalized(vec({0.0, 0.0})), std::invalid_argument);
}

TEST(PhotonMixture, Validation) {
    InternalState e0(vec({1.0, 0.0}));
    InternalState e1(vec({0.0, 1.0}));
    EXPECT_NO_THROW(PhotonMixture({{0.25, e0}, {0.75, e1}}));
    EXPECT_THROW(PhotonMixture({{0.25, e0}, {0.7, e1}}), std::invalid_argument);
    EXPECT_THROW(PhotonMixture({{0.5, e0}, {0.25, e1}, {0.25, e0}}), std::invalid_argument);
    EXPECT_THROW(PhotonMixture({{1.2, e0}, {-0.2, e1}}), std::invalid_argument);
    PhotonMixture m({{0.25, e0}, {0.75, e1}});
    EXPECT_NEAR(m.purity(), 0.625, 1e-15);
}

TEST(DistinguishabilityMatrix, Invariants) {
    EXPECT_NO_THROW(DistinguishabilityMatrix::indistinguishable(3));
    EXPECT_NO_THROW(DistinguishabilityMatrix::distinguishable(3));
    CMatrix bad_diag = CMatrix::Identity(2, 2);
    bad_diag(1, 1) = 0.9;
    EXPECT_THROW(DistinguishabilityMatrix{bad_diag}, std::invalid_argument);
    CMatrix not_hermitian = CMatrix::Identity(2, 2);
    not_hermitian(0, 1) = 0.5;
    EXPECT_THROW(DistinguishabilityMatrix{not_hermitian}, std::invalid_argument);
    CMatrix not_psd = CMatrix::Ones(3, 3);
    not_psd(0, 1) = not_psd(1, 0) = -1.0;
    EXPECT_THROW(DistinguishabilityMatrix{not_psd}, std::invalid_argument);
}

TEST(SMatrix, IdenticalAndOrthogonal) {
    AssignmentList d{{0, 1, 2}};
    std::vector<InternalState> same(3, InternalState(vec({1.0, 0.0})));
    EXPECT_LT((s_matrix(same, d).matrix() - CMatrix::Ones(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
    std::vector<InternalState> basis{InternalState(vec({1.0, 0.0, 0.0})), InternalState(vec({0.0, 1.0, 0.0})),
                                     InternalState(vec({0.0, 0.0, 1.0}))};
    EXPECT_LT((s_matrix(basis, d).matrix() - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
    AssignmentList missing{{0, 3}};
    EXPECT_THROW(s_matrix(basis, missing), std::invalid_argument);
}

TEST(SMatrix, TwoAngleFamilyDominantTerm) {
    auto family = two_angle_family(0.97, 0.98, 0.98);
    std::vector<InternalState> dominant;
    for (const auto &m : family) {
        auto best = std::max_element(m.terms().begin(), m.terms().end(),
                                     [](const auto &a, const auto &b) { return a.probability < b.probability; });
        dominant.push_back(best->state);
    }
    CMatrix s = s_matrix(dominant, AssignmentList{{0, 1, 2}}).matrix();
    EXPECT_NEAR(std::norm(s(0, 1)), 0.98, 1e-12);
    EXPECT_NEAR(std::norm(s(0, 2)), 0.98, 1e-12);
}

TEST(PurityToP, Examples) {
    EXPECT_NEAR(purity_to_p(1.0), 1.0, 1e-15);
    EXPECT_NEAR(purity_to_p(0.5), 0.5, 1e-15);
    double p = purity_to_p(0.97);
    EXPECT_NEAR(2.0 * p * p - 2.0 * p + 1.0, 0.97, 1e-14);
    EXPECT_NEAR(p, 0.984767985741633, 1e-12);
    EXPECT_THROW(purity_to_p(0.4), std::invalid_argument);
    EXPECT_THROW(purity_to_p(1.1), std::invalid_argument);
}

TEST(TwoAngleFamily, Corners) {
    auto pure = two_angle_family(1.0, 1.0, 1.0);
    for (const auto &m : pure) {
        ASSERT_EQ(m.size(), 1u);
    }
    std::vector<InternalState> states{pure[0].terms()[0].state, pure[1].terms()[0].state, pure[2].terms()[0].state};
    EXPECT_LT((s_matrix(states, AssignmentList{{0, 1, 2}}).matrix() - CMatrix::Ones(3, 3)).cwiseAbs().maxCoeff(),
              1e-15);
    auto orth = two_angle_family(1.0, 0.0, 0.0);
    EXPECT_NEAR(pairwise_visibility(orth[0], orth[1]), 0.0, 1e-15);
    EXPECT_NEAR(pairwise_visibility(orth[0], orth[2]), 0.0, 1e-15);
    EXPECT_NEAR(pairwise_visibility(orth[1], orth[2]), 1.0, 1e-15);
    EXPECT_THROW(two_angle_family(0.97, 1.2, 0.9), std::invalid_argument);
}

TEST(PairwiseVisibility, NominalMixtures) {
    auto family = two_angle_family(0.97, 0.98, 0.98);
    double v = pairwise_visibility(family[0], family[1]);
    // Closed form c^2 P + (1 - P) s^2 for the two-term decomposition.
    EXPECT_NEAR(v, 0.98 * 0.97 + 0.03 * 0.02, 1e-12);
    EXPECT_NEAR(v, trace_product(family[0], family[1]), 1e-12);
    EXPECT_NEAR(pairwise_visibility(family[1], family[2]), 0.97, 1e-12);
}

TEST(OverlapFromVisibility, InvertsTheFamily) {
    EXPECT_NEAR(overlap_from_visibility(0.98 * 0.97 + 0.03 * 0.02, 0.97), 0.98, 1e-12);
    double c2 = overlap_from_visibility(0.957, 0.97);
    EXPECT_NEAR(c2, (0.957 - 0.03) / 0.94, 1e-12);
    auto family = two_angle_family(0.97, c2, c2);
    EXPECT_NEAR(pairwise_visibility(family[0], family[1]), 0.957, 1e-12);
    EXPECT_THROW(overlap_from_visibility(0.99, 0.97), std::invalid_argument);
}

TEST(Properties, VisibilityIdentities) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double purity = 0.5 + 0.5 * u(rng);
        double o12 = u(rng);
        double o13 = u(rng);
        auto f = two_angle_family(purity, o12, o13);
        for (int a = 0; a < 3; ++a) {
            EXPECT_NEAR(pairwise_visibility(f[a], f[a]), purity, 1e-12);
            EXPECT_NEAR(f[a].purity(), purity, 1e-12);
            for (int b = 0; b < 3; ++b) {
                EXPECT_NEAR(pairwise_visibility(f[a], f[b]), pairwise_visibility(f[b], f[a]), 1e-14);
                EXPECT_NEAR(pairwise_visibility(f[a], f[b]), trace_product(f[a], f[b]), 1e-12);
            }
        }
        auto pure = two_angle_family(1.0, o12, o13);
        EXPECT_NEAR(pairwise_visibility(pure[0], pure[1]), o12, 1e-12);
        EXPECT_NEAR(pairwise_visibility(pure[0], pure[2]), o13, 1e-12);
    }
}

TEST(Properties, SMatrixOfRandomStatesIsValid) {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<InternalState> states;
        for (int k = 0; k < 4; ++k) {
            states.push_back(InternalState::normalized(vec({{n(rng), n(rng)}, {n(rng), n(rng)}})));
        }
        EXPECT_NO_THROW(s_matrix(states, AssignmentList{{0, 1, 1, 3}}));
    }
}

TEST(DelayOverlap, GaussianClosedForm) {
    const double sigma = 2.0e13;
    SpectralDensity g = gaussian_spectrum(2.3e15, sigma, 801);
    EXPECT_NEAR(std::abs(delay_overlap(g, 0.0) - Complex(1.0, 0.0)), 0.0, 1e-12);
    double previous = 1.0;
    for (double tau : {1e-14, 3e-14, 5e-14, 1e-13, 2e-13}) {
        double mag = std::abs(delay_overlap(g, tau));
        EXPECT_NEAR(mag, std::exp(-sigma * sigma * tau * tau / 2.0), 1e-9) << tau;
        EXPECT_NEAR(mag, std::abs(delay_overlap(g, -tau)), 1e-14);
        EXPECT_LE(mag, previous);
        previous = mag;
    }
    EXPECT_LT(std::abs(delay_overlap(g, 1e-12)), 1e-9);
    EXPECT_THROW(delay_overlap(g, std::numeric_limits<double>::infinity()), std::invalid_argument);
    SpectralDensity bad = g;
    bad.intensity[0] += 0.1;
    EXPECT_THROW(delay_overlap(bad, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace hinterf
