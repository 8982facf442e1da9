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

#ifndef HINTERF_EXPERIMENT_H
#define HINTERF_EXPERIMENT_H

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hinterf/network.h"
#include "hinterf/permanents.h"
#include "hinterf/photon_states.h"
#include "hinterf/source.h"

namespace hinterf {

/// Event probability for photons drawn independently from per-mode mixtures.
///
/// Each photon in input mode j draws a decomposition term of mixtures[j]; the
/// result sums prod p over all draws times the event probability for the
/// drawn states' S-matrix. `coherence`, when non-empty, is an input-mode by
/// input-mode matrix multiplying S[a][b] for photons from modes a and b (the
/// delay factor); it must be a Gram matrix so S stays positive semidefinite.
double mixed_event_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s,
    std::span<const PhotonMixture> mixtures, const CMatrix &coherence = CMatrix());

/// Physical detection stage after the interferometer.
struct DetectionConfig {
    /// Base output mode split by a second tritter into three detectors.
    std::optional<std::size_t> resolver_mode;
    /// Efficiency per physical detector; empty means all 1.
    std::vector<double> efficiencies;
    /// Threshold detectors when true, number-resolving otherwise.
    bool binary = true;
};

/// Physical detectors behind a base network and the map from base output
/// modes to detector groups.
class DetectorLayout {
   public:
    DetectorLayout(const UnitaryNetwork &base, const DetectionConfig &config);

    /// Base network with the resolver composed in.
    const UnitaryNetwork &network() const { return network_; }
    std::size_t detectors() const { return network_.dim(); }
    const std::vector<std::size_t> &group(std::size_t base_mode) const { return groups_[base_mode]; }
    std::size_t base_modes() const { return groups_.size(); }
    const std::vector<double> &efficiencies() const { return efficiencies_; }
    bool binary() const { return binary_; }

    /// Physical outcomes realizing a logical pattern over base modes: on a
    /// resolved mode with count c, every choice of c distinct clicking
    /// detectors (binary) or every split of c counts (number-resolving).
    /// Throws if an unresolved binary mode is asked for more than one photon.
    std::vector<std::vector<int>> expand(const OccupationPattern &logical) const;

    /// Probability that detectors report `outcome` when the output modes hold
    /// `s` photons, with independent per-photon detection.
    double response(std::span<const int> outcome, const OccupationPattern &s) const;

   private:
    UnitaryNetwork network_;
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<double> efficiencies_;
    bool binary_;
};

/// Full heralded multi-source experiment.
struct ExperimentModel {
    UnitaryNetwork network = make_tritter();
    std::vector<HeraldedSourceModel> sources;
    std::vector<std::size_t> input_modes;  ///< base input mode per source; empty = 0, 1, ...
    std::vector<PhotonMixture> photons;    ///< internal state per source
    DetectionConfig detection;
    Truncation truncation;
    SpectralDensity spectrum;  ///< heralded-photon spectrum for delay overlaps

    void validate() const;
    std::size_t input_mode(std::size_t source) const;
};

/// Reference configuration: three sources with lambda^2 = 0.025, eta_s = 0.31,
/// eta_i = 0.55, purity 0.97, cos^2 = 0.98 overlaps, tritter with a resolver
/// on output 0 and 22-term truncation.
ExperimentModel reference_tritter_model();

/// Two-source HOM configuration on the balanced splitter.
ExperimentModel hom_pair_model();

/// Source-by-source coherence factors for the given delays (seconds):
/// G[a][b] = delay_overlap(tau_b - tau_a); an infinite delay zeroes every
/// entry pairing that source with another.
CMatrix coherence_from_delays(const SpectralDensity &spectrum, std::span<const double> delays);

/// Precomputed detection probabilities for a fixed model and set of outcome
/// sets, evaluated at many source-coherence matrices.
class OutcomeEvaluator {
   public:
    /// Each outcome set is a list of physical outcomes whose probabilities add.
    OutcomeEvaluator(const ExperimentModel &model, std::vector<std::vector<std::vector<int>>> outcome_sets);

    /// Convenience: one outcome set per logical pattern.
    static OutcomeEvaluator for_patterns(const ExperimentModel &model, std::span<const OccupationPattern> patterns);

    const std::vector<InputTerm> &terms() const { return terms_; }
    std::size_t outcome_count() const { return outcome_count_; }

    /// Probability of each outcome set given each input term (rows: terms).
    Eigen::MatrixXd conditional(const CMatrix &coherence) const;

    /// Term-weighted probabilities.
    std::vector<double> probabilities(const CMatrix &coherence) const;
    std::vector<double> probabilities(const CMatrix &coherence, std::span<const double> term_weights) const;

   private:
    struct Term;
    std::vector<InputTerm> terms_;
    std::vector<std::shared_ptr<const Term>> compiled_;
    std::size_t outcome_count_ = 0;
    std::size_t sources_ = 0;
};

/// Probability of one physical outcome for the model at the given delays.
double detection_outcome_probability(
    const ExperimentModel &model, std::span<const int> outcome, std::span<const double> delays);

/// Probability of a logical pattern (summed over its physical expansions).
double logical_outcome_probability(
    const ExperimentModel &model, const OccupationPattern &pattern, std::span<const double> delays);

/// (P_infinity - P_zero) / P_infinity; throws if P_infinity <= 0.
double visibility(double p_infinity, double p_zero);

struct VisibilityResult {
    OccupationPattern pattern;
    double p_zero = 0.0;
    double p_infinity = 0.0;
    double visibility = 0.0;
    double uncertainty = 0.0;
};

/// One-dimensional scan endpoint: all delays zero versus `delayed_source`
/// moved to infinite delay (its overlaps with every other source zeroed).
std::vector<VisibilityResult> visibilities(
    const ExperimentModel &model, std::span<const OccupationPattern> patterns, std::size_t delayed_source = 0);

struct LandscapeSpec {
    std::vector<double> tau1;  ///< seconds
    std::vector<double> tau2;
    std::size_t source1 = 1;  ///< source delayed by tau1
    std::size_t source2 = 2;  ///< source delayed by tau2
};

struct Landscape {
    std::vector<double> tau1;
    std::vector<double> tau2;
    std::vector<OccupationPattern> patterns;
    /// values[p][i * tau2.size() + j] at (tau1[i], tau2[j]).
    std::vector<std::vector<double>> values;
};

/// RMS angular-frequency width inverse: |delay_overlap| falls to e^{-1/2} at one coherence time.
double coherence_time(const SpectralDensity &spectrum);

/// `points` delays spanning +- span coherence times.
std::vector<double> default_delay_grid(const SpectralDensity &spectrum, std::size_t points = 41, double span = 3.0);

Landscape landscape(
    const ExperimentModel &model, const LandscapeSpec &spec, std::span<const OccupationPattern> patterns,
    std::size_t threads = 0);

enum class PhaseAverage {
    kQuadrature,
    kMonteCarlo,
};

struct ClassicalOptions {
    PhaseAverage method = PhaseAverage::kQuadrature;
    std::size_t phase_points = 16;  ///< per independent phase, quadrature
    std::size_t samples = 100000;   ///< Monte-Carlo
    std::uint64_t seed = 1;
};

/// Weak-limit detection moments of phase-randomized, equal-intensity coherent
/// inputs for an outcome set: sum over outcomes of prod over clicking
/// detectors of eta_d I_d (binary) or prod (eta_d I_d)^c / c! (number-resolving).
/// Sources with `incoherent[j]` true add intensity without interfering.
double classical_moment(
    const DetectorLayout &layout, std::span<const std::size_t> input_modes, std::span<const char> incoherent,
    std::span<const std::vector<int>> outcomes, const ClassicalOptions &options);

/// Classical visibility of the same delay scan as visibilities().
double classical_bound(
    const ExperimentModel &model, const OccupationPattern &pattern, std::size_t delayed_source = 0,
    const ClassicalOptions &options = {});

struct Attribution {
    double v_ideal = 0.0;
    double v_pairs = 0.0;
    double v_full = 0.0;
    double multi_pair_fraction = 0.0;
    double distinguishability_fraction = 0.0;
};

/// Splits V_ideal - V_full into the multi-pair stage (lambda^2 -> 0 versus the
/// model's lambda^2, pure identical photons) and the distinguishability stage.
Attribution attribute_visibility_loss(
    const ExperimentModel &model, const OccupationPattern &pattern, std::size_t delayed_source = 0);

struct ParameterUncertainty {
    double lambda_sq = 0.002;
    double eta_signal = 0.02;
    double eta_idler = 0.05;
};

struct MonteCarloSummary {
    std::vector<OccupationPattern> patterns;
    std::vector<double> point;  ///< visibility at nominal parameters
    std::vector<double> mean;
    std::vector<double> stddev;
    /// samples[p][k], kept when requested.
    std::vector<std::vector<double>> samples;
};

/// Samples lambda^2, eta_s, eta_i from independent Gaussians truncated to
/// their valid ranges (one draw per sample, applied to every source as a
/// common shift) and reports visibility statistics. Each sample seeds its own
/// generator from (seed, index), so results do not depend on `threads`.
MonteCarloSummary monte_carlo_visibility(
    const ExperimentModel &model, std::span<const OccupationPattern> patterns, const ParameterUncertainty &sigma,
    std::size_t n_samples, std::uint64_t seed, std::size_t delayed_source = 0, std::size_t threads = 0,
    bool keep_samples = false);

}  // namespace hinterf

#endif
