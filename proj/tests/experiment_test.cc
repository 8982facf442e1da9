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


#include "hinterf/experiment.h"

#include <cmath>

#include <gtest/gtest.h>

#include "hinterf/oracle.h"

namespace hinterf {
namespace {

PhotonMixture pure_photon() {
    CVector e0(2);
    e0 << 1.0, 0.0;
    return PhotonMixture::pure(InternalState(e0));
}

// Lossless tritter with one pair per source and identical pure photons.
ExperimentModel ideal_tritter(bool binary_with_resolver) {
    ExperimentModel m = reference_tritter_model();
    for (auto &s : m.sources) {
        s = HeraldedSourceModel{0.0, 1.0, 1.0, 1.0};
    }
    m.photons.assign(3, pure_photon());
    m.truncation = Truncation{3, 3};
    m.detection = DetectionConfig{};
    if (binary_with_resolver) {
        m.detection.resolver_mode = 0;
    } else {
        m.detection.binary = false;
    }
    return m;
}

CMatrix ones(Eigen::Index n) { return CMatrix::Ones(n, n); }

// Coherence with source k cut off from every other source.
CMatrix cut(Eigen::Index n, Eigen::Index k) {
    CMatrix g = ones(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j != k) {
            g(j, k) = g(k, j) = 0.0;
        }
    }
    return g;
}

const std::vector<OccupationPattern> &tritter_patterns() {
    static const std::vector<OccupationPattern> p{OccupationPattern({1, 1, 1}), OccupationPattern({2, 1, 0}),
                                                  OccupationPattern({3, 0, 0})};
    return p;
}

TEST(MixedEventProbability, PureMixturesReduceToPureEngine) {
    auto u = make_tritter();
    OccupationPattern r({1, 1, 1});
    std::vector<PhotonMixture> same(3, pure_photon());
    for (const auto &s : {OccupationPattern({1, 1, 1}), OccupationPattern({2, 1, 0}), OccupationPattern({0, 0, 3})}) {
        EXPECT_NEAR(mixed_event_probability(u, r, s, same),
                    event_probability_pure(u, r, s, DistinguishabilityMatrix::indistinguishable(3).matrix()), 1e-14);
    }
}

TEST(MixedEventProbability, HongOuMandel) {
    auto u = make_balanced_splitter();
    OccupationPattern r({1, 1});
    for (double purity : {1.0, 0.97, 0.8}) {
        for (double overlap : {1.0, 0.98, 0.5, 0.0}) {
            std::array<double, 1> o{overlap};
            auto mix = angle_family(purity, o);
            double tr = pairwise_visibility(mix[0], mix[1]);
            double p = mixed_event_probability(u, r, r, mix);
            EXPECT_NEAR(p, (1.0 - tr) / 2.0, 1e-12);
            EXPECT_NEAR(p, oracle::oracle_event_probability(u, r, r, mix), 1e-12);
        }
    }
}

TEST(MixedEventProbability, TritterSuppressionWithMixedPhotons) {
    auto u = make_tritter();
    auto family = two_angle_family(0.97, 0.98, 0.98);
    std::vector<PhotonMixture> mix(family.begin(), family.end());
    OccupationPattern r({1, 1, 1});
    OccupationPattern s({2, 1, 0});
    double p = mixed_event_probability(u, r, s, mix);
    EXPECT_LT(p, 0.01);
    EXPECT_GT(p, 0.0);
    EXPECT_NEAR(p, oracle::oracle_event_probability(u, r, s, mix), 1e-12);
}

TEST(DetectorLayout, ExpandAndResponse) {
    DetectionConfig binary;
    binary.resolver_mode = 0;
    DetectorLayout layout(make_tritter(), binary);
    EXPECT_EQ(layout.detectors(), 5u);
    EXPECT_EQ(layout.expand(OccupationPattern({1, 1, 1})).size(), 3u);
    EXPECT_EQ(layout.expand(OccupationPattern({2, 1, 0})).size(), 3u);
    EXPECT_EQ(layout.expand(OccupationPattern({3, 0, 0})).size(), 1u);
    EXPECT_THROW(layout.expand(OccupationPattern({0, 2, 1})), std::invalid_argument);
    DetectionConfig pnr;
    pnr.resolver_mode = 0;
    pnr.binary = false;
    EXPECT_EQ(DetectorLayout(make_tritter(), pnr).expand(OccupationPattern({2, 1, 0})).size(), 6u);

    DetectionConfig lossy;
    lossy.efficiencies = {0.5, 0.8, 1.0};
    DetectorLayout b(make_tritter(), lossy);
    std::vector<int> click{1, 0, 0};
    EXPECT_NEAR(b.response(click, OccupationPattern({2, 0, 0})), 0.75, 1e-15);
    lossy.binary = false;
    DetectorLayout n(make_tritter(), lossy);
    std::vector<int> one{1, 1, 0};
    EXPECT_NEAR(n.response(one, OccupationPattern({2, 1, 0})), 0.5 * 0.8, 1e-15);
    std::vector<int> zero{0, 0, 0};
    EXPECT_NEAR(n.response(zero, OccupationPattern({2, 1, 0})), 0.25 * 0.2, 1e-15);
    lossy.efficiencies = {0.5, 0.8};
    EXPECT_THROW(DetectorLayout(make_tritter(), lossy), std::invalid_argument);
}

TEST(DetectorLayout, ResolverPhaseConventionDoesNotMatter) {
    auto family = two_angle_family(0.97, 0.98, 0.98);
    std::vector<PhotonMixture> mix(family.begin(), family.end());
    mix.push_back(family[0]);
    mix.push_back(family[0]);
    DetectionConfig config;
    config.resolver_mode = 0;
    DetectorLayout layout(make_tritter(), config);
    CMatrix in_phase = CMatrix::Identity(3, 3);
    CMatrix out_phase = CMatrix::Identity(3, 3);
    in_phase(1, 1) = std::polar(1.0, 0.7);
    in_phase(0, 0) = std::polar(1.0, -1.9);
    out_phase(2, 2) = std::polar(1.0, 2.3);
    out_phase(1, 1) = std::polar(1.0, 0.4);
    UnitaryNetwork rephased(out_phase * make_tritter().matrix() * in_phase);
    std::array<std::size_t, 3> targets{0, 3, 4};
    UnitaryNetwork other = compose(make_tritter(), rephased, targets);
    OccupationPattern r({1, 1, 1, 0, 0});
    for (const auto &logical : {OccupationPattern({1, 1, 1}), OccupationPattern({2, 1, 0}), OccupationPattern({3, 0, 0})}) {
        double a = 0.0;
        double b = 0.0;
        for (const auto &o : layout.expand(logical)) {
            OccupationPattern s(o);
            a += mixed_event_probability(layout.network(), r, s, mix);
            b += mixed_event_probability(other, r, s, mix);
        }
        EXPECT_NEAR(a, b, 1e-12) << logical.str();
    }
}

TEST(Detection, NumberResolvingOutcomesSumToOne) {
    ExperimentModel m = ideal_tritter(false);
    auto family = two_angle_family(0.97, 0.7, 0.4);
    m.photons.assign(family.begin(), family.end());
    std::vector<OccupationPattern> all;
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; a + b <= 3; ++b) {
            all.push_back(OccupationPattern({a, b, 3 - a - b}));
        }
    }
    auto eval = OutcomeEvaluator::for_patterns(m, all);
    for (const CMatrix &g : {ones(3), cut(3, 0), CMatrix(CMatrix::Identity(3, 3))}) {
        double total = 0.0;
        for (double p : eval.probabilities(g)) {
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Detection, BinaryClickPatternsSumToOne) {
    ExperimentModel m = ideal_tritter(false);
    m.detection.binary = true;
    m.detection.efficiencies = {0.9, 0.7, 0.8};
    std::vector<std::vector<std::vector<int>>> sets;
    for (int mask = 0; mask < 8; ++mask) {
        sets.push_back({{mask & 1, (mask >> 1) & 1, (mask >> 2) & 1}});
    }
    OutcomeEvaluator eval(m, sets);
    double total = 0.0;
    for (double p : eval.probabilities(ones(3))) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(LogicalProbability, IdealTritter) {
    std::array<double, 3> zero{0.0, 0.0, 0.0};
    for (bool resolver : {false, true}) {
        ExperimentModel m = ideal_tritter(resolver);
        EXPECT_NEAR(logical_outcome_probability(m, OccupationPattern({1, 1, 1}), zero), 1.0 / 3.0, 1e-12);
        EXPECT_NEAR(logical_outcome_probability(m, OccupationPattern({2, 1, 0}), zero), 0.0, 1e-12);
    }
    ExperimentModel pnr = ideal_tritter(false);
    EXPECT_NEAR(logical_outcome_probability(pnr, OccupationPattern({3, 0, 0}), zero), 2.0 / 9.0, 1e-12);
}

TEST(LogicalProbability, FullModelMatchesFockEvolution) {
    ExperimentModel m = reference_tritter_model();
    DetectorLayout layout(m.network, m.detection);
    const UnitaryNetwork &u = layout.network();
    std::vector<PhotonMixture> mixtures(u.dim(), m.photons[0]);
    for (std::size_t j = 0; j < m.sources.size(); ++j) {
        mixtures[m.input_mode(j)] = m.photons[j];
    }
    std::vector<double> eff(u.dim(), 1.0);
    auto outcomes = layout.expand(OccupationPattern({1, 1, 1}));
    double reference = 0.0;
    for (const auto &term : enumerate_inputs(m.sources, m.truncation)) {
        std::vector<int> r(u.dim(), 0);
        for (std::size_t j = 0; j < m.sources.size(); ++j) {
            r[m.input_mode(j)] = term.occupation[j];
        }
        for (const auto &o : outcomes) {
            reference += term.weight *
                         oracle::oracle_lossy_outcome_probability(u, OccupationPattern(r), mixtures, eff, o, true);
        }
    }
    std::array<double, 3> zero{0.0, 0.0, 0.0};
    EXPECT_NEAR(logical_outcome_probability(m, OccupationPattern({1, 1, 1}), zero), reference, 1e-12);
}

TEST(CoherenceFromDelays, Structure) {
    auto m = reference_tritter_model();
    const double inf = std::numeric_limits<double>::infinity();
    std::array<double, 3> zero{0.0, 0.0, 0.0};
    EXPECT_LT((coherence_from_delays(m.spectrum, zero) - ones(3)).cwiseAbs().maxCoeff(), 1e-15);
    std::array<double, 3> far{inf, 0.0, 0.0};
    EXPECT_LT((coherence_from_delays(m.spectrum, far) - cut(3, 0)).cwiseAbs().maxCoeff(), 1e-15);
    double tc = coherence_time(m.spectrum);
    std::array<double, 3> one{tc, 0.0, 0.0};
    EXPECT_NEAR(std::abs(coherence_from_delays(m.spectrum, one)(0, 1)), std::exp(-0.5), 1e-6);
    std::array<double, 3> nan{std::nan(""), 0.0, 0.0};
    EXPECT_THROW(coherence_from_delays(m.spectrum, nan), std::invalid_argument);
}

TEST(SuppressionLaw, InvariantWhileOnePhotonIsDistinguishable) {
    for (bool mixed_photons : {false, true}) {
        ExperimentModel m = ideal_tritter(false);
        if (mixed_photons) {
            auto family = two_angle_family(0.97, 0.98, 0.98);
            m.photons.assign(family.begin(), family.end());
        }
        std::array<OccupationPattern, 1> p{OccupationPattern({2, 1, 0})};
        auto eval = OutcomeEvaluator::for_patterns(m, p);
        double first = eval.probabilities(cut(3, 0))[0];
        for (double x = 0.0; x <= 1.0; x += 0.05) {
            CMatrix g = cut(3, 0);
            g(1, 2) = g(2, 1) = x;
            EXPECT_NEAR(eval.probabilities(g)[0], first, 1e-12) << x;
        }
    }
}

TEST(Landscape, Properties) {
    ExperimentModel m = reference_tritter_model();
    double tc = coherence_time(m.spectrum);
    std::vector<double> grid{-40.0 * tc, -tc, -0.5 * tc, 0.0, 0.5 * tc, tc, 40.0 * tc};
    LandscapeSpec spec{grid, grid, 1, 2};
    auto land = landscape(m, spec, tritter_patterns());
    const std::size_t n = grid.size();
    auto at = [&](std::size_t p, std::size_t i, std::size_t j) { return land.values[p][i * n + j]; };
    std::array<double, 3> zero{0.0, 0.0, 0.0};
    for (std::size_t p = 0; p < 3; ++p) {
        EXPECT_NEAR(at(p, 3, 3), logical_outcome_probability(m, tritter_patterns()[p], zero), 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_NEAR(at(p, i, j), at(p, n - 1 - i, n - 1 - j), 1e-12);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_NEAR(at(0, i, j), at(0, j, i), 1e-12);
        }
    }
    auto eval = OutcomeEvaluator::for_patterns(m, tritter_patterns());
    auto distinguishable = eval.probabilities(CMatrix::Identity(3, 3));
    for (std::size_t p = 0; p < 3; ++p) {
        for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, n - 1}, {n - 1, 0}}) {
            EXPECT_NEAR(at(p, i, j), distinguishable[p], 1e-6);
        }
    }
    ExperimentModel ideal = ideal_tritter(true);
    auto ideal_land = landscape(ideal, spec, tritter_patterns());
    EXPECT_NEAR(ideal_land.values[1][3 * n + 3], 0.0, 1e-12);
}

TEST(Landscape, ParallelMatchesSerial) {
    ExperimentModel m = reference_tritter_model();
    auto grid = default_delay_grid(m.spectrum, 9, 3.0);
    LandscapeSpec spec{grid, grid, 1, 2};
    auto serial = landscape(m, spec, tritter_patterns(), 1);
    auto parallel = landscape(m, spec, tritter_patterns(), 4);
    EXPECT_EQ(serial.values, parallel.values);
}

TEST(Visibility, Definition) {
    EXPECT_NEAR(visibility(2.0, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(visibility(1.0 / 9.0, 1.0 / 3.0), -2.0, 1e-12);
    EXPECT_THROW(visibility(0.0, 0.1), std::invalid_argument);
}

TEST(Visibility, IdealTritter) {
    ExperimentModel m = ideal_tritter(true);
    std::array<OccupationPattern, 1> p{OccupationPattern({1, 1, 1})};
    for (std::size_t delayed = 0; delayed < 3; ++delayed) {
        EXPECT_NEAR(visibilities(m, p, delayed)[0].visibility, -2.0, 1e-12);
    }
}

TEST(Visibility, HongOuMandelModel) {
    ExperimentModel m = hom_pair_model();
    std::array<OccupationPattern, 1> p{OccupationPattern({1, 1})};
    auto v = visibilities(m, p, 1)[0];
    EXPECT_GT(v.visibility, 0.5);
    EXPECT_LT(v.visibility, pairwise_visibility(m.photons[0], m.photons[1]));
}

TEST(Classical, HongOuMandelBound) {
    ExperimentModel m = hom_pair_model();
    EXPECT_NEAR(classical_bound(m, OccupationPattern({1, 1}), 1), 0.5, 0.01);
}

TEST(Classical, SingleSourceHasNoVisibility) {
    ExperimentModel m = hom_pair_model();
    m.sources.resize(1);
    m.photons.pop_back();
    m.truncation = Truncation{1, 1};
    EXPECT_NEAR(classical_bound(m, OccupationPattern({1, 1}), 0), 0.0, 1e-12);
}

TEST(Classical, QuadratureMatchesMonteCarlo) {
    ExperimentModel m = reference_tritter_model();
    ClassicalOptions mc;
    mc.method = PhaseAverage::kMonteCarlo;
    mc.samples = 200000;
    mc.seed = 7;
    for (const auto &p : tritter_patterns()) {
        EXPECT_NEAR(classical_bound(m, p, 0), classical_bound(m, p, 0, mc), 0.02) << p.str();
    }
}

TEST(Classical, MatchesCoherentPulseSimulation) {
    ExperimentModel m = reference_tritter_model();
    DetectorLayout layout(m.network, m.detection);
    const UnitaryNetwork &u = layout.network();
    const double mu = 1e-4;
    std::vector<double> intensity(u.dim(), 0.0);
    for (std::size_t j = 0; j < m.sources.size(); ++j) {
        intensity[m.input_mode(j)] = mu;
    }
    std::vector<char> coherent(u.dim(), 0);
    std::vector<char> delayed(u.dim(), 0);
    delayed[m.input_mode(0)] = 1;
    std::vector<double> eff(u.dim(), 1.0);
    auto zero = oracle::coherent_click_simulation(u, intensity, coherent, eff, 2000000, 11);
    auto inf = oracle::coherent_click_simulation(u, intensity, delayed, eff, 2000000, 12);
    for (const auto &p : tritter_patterns()) {
        double m0 = 0.0, se0 = 0.0, minf = 0.0, seinf = 0.0;
        for (const auto &o : layout.expand(p)) {
            std::size_t mask = 0;
            for (std::size_t d = 0; d < o.size(); ++d) {
                mask |= static_cast<std::size_t>(o[d] > 0) << d;
            }
            m0 += zero.mean[mask];
            se0 += zero.standard_error[mask] * zero.standard_error[mask];
            minf += inf.mean[mask];
            seinf += inf.standard_error[mask] * inf.standard_error[mask];
        }
        double ratio = m0 / minf;
        double se = ratio * std::sqrt(se0 / (m0 * m0) + seinf / (minf * minf));
        double bound = classical_bound(m, p, 0);
        EXPECT_NEAR(1.0 - ratio, bound, 2.0 * se + 10.0 * mu) << p.str();
    }
}

TEST(Attribution, Stages) {
    ExperimentModel m = reference_tritter_model();
    auto a = attribute_visibility_loss(m, OccupationPattern({1, 1, 1}), 0);
    EXPECT_NEAR(a.v_ideal, -2.0, 1e-12);
    EXPECT_NEAR(a.multi_pair_fraction + a.distinguishability_fraction, 1.0, 1e-12);
    EXPECT_GT(a.multi_pair_fraction, a.distinguishability_fraction);

    ExperimentModel no_pairs = m;
    for (auto &s : no_pairs.sources) {
        s.lambda_sq = 0.0;
    }
    EXPECT_NEAR(attribute_visibility_loss(no_pairs, OccupationPattern({1, 1, 1}), 0).multi_pair_fraction, 0.0,
                1e-12);
    ExperimentModel pure = m;
    pure.photons.assign(3, pure_photon());
    EXPECT_NEAR(attribute_visibility_loss(pure, OccupationPattern({1, 1, 1}), 0).distinguishability_fraction, 0.0,
                1e-12);
}

TEST(MonteCarlo, ZeroSpreadReproducesTheNominalPoint) {
    ExperimentModel m = reference_tritter_model();
    auto s = monte_carlo_visibility(m, tritter_patterns(), ParameterUncertainty{0.0, 0.0, 0.0}, 20, 3);
    auto nominal = visibilities(m, tritter_patterns(), 0);
    for (std::size_t p = 0; p < 3; ++p) {
        EXPECT_NEAR(s.point[p], nominal[p].visibility, 1e-12);
        EXPECT_NEAR(s.mean[p], nominal[p].visibility, 1e-12);
        EXPECT_NEAR(s.stddev[p], 0.0, 1e-12);
    }
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    ExperimentModel m = reference_tritter_model();
    ParameterUncertainty sigma;
    auto a = monte_carlo_visibility(m, tritter_patterns(), sigma, 64, 99, 0, 1, true);
    auto b = monte_carlo_visibility(m, tritter_patterns(), sigma, 64, 99, 0, 4, true);
    auto c = monte_carlo_visibility(m, tritter_patterns(), sigma, 64, 100, 0, 4, true);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.stddev, b.stddev);
    EXPECT_NE(a.samples, c.samples);
    for (std::size_t p = 0; p < 3; ++p) {
        EXPECT_GT(a.stddev[p], 0.0);
    }
}

}  // namespace
}  // namespace hinterf
