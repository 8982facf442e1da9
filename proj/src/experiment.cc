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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hinterf/errors.h"
#include "hinterf/parallel.h"

namespace hinterf {

namespace {

constexpr double kNegativeTolerance = 1e-9;
constexpr double kImaginaryTolerance = 1e-8;

// One joint draw of decomposition terms for every photon.
struct Draw {
    double weight;
    std::vector<const InternalState *> states;
};

std::vector<Draw> mixture_draws(const std::vector<const PhotonMixture *> &per_photon) {
    std::vector<Draw> draws{{1.0, {}}};
    for (const PhotonMixture *mix : per_photon) {
        std::vector<Draw> next;
        next.reserve(draws.size() * mix->size());
        for (const Draw &d : draws) {
            for (const auto &term : mix->terms()) {
                if (term.probability == 0.0) {
                    continue;
                }
                Draw e = d;
                e.weight *= term.probability;
                e.states.push_back(&term.state);
                next.push_back(std::move(e));
            }
        }
        draws = std::move(next);
    }
    return draws;
}

// S[j][k] = <phi_j|phi_k> G[label_j][label_k].
CMatrix draw_s_matrix(const Draw &draw, std::span<const std::size_t> labels, const CMatrix &coherence) {
    const auto n = static_cast<Eigen::Index>(draw.states.size());
    CMatrix s(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            Complex v = draw.states[static_cast<std::size_t>(j)]->overlap(*draw.states[static_cast<std::size_t>(k)]);
            if (coherence.size() != 0) {
                v *= coherence(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(j)]),
                               static_cast<Eigen::Index>(labels[static_cast<std::size_t>(k)]));
            }
            s(j, k) = v;
        }
    }
    return s;
}

void check_coherence(const CMatrix &coherence, std::size_t size, const char *who) {
    if (coherence.size() == 0) {
        return;
    }
    if (static_cast<std::size_t>(coherence.rows()) != size || coherence.rows() != coherence.cols()) {
        throw std::invalid_argument(std::string(who) + ": coherence matrix has the wrong size");
    }
}

double checked_real(Complex v, const char *who) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError(std::string(who) + ": non-finite tensor permanent");
    }
    if (std::abs(v.imag()) > kImaginaryTolerance * std::max(1.0, std::abs(v.real()))) {
        throw NumericalError(std::string(who) + ": tensor permanent has a large imaginary part");
    }
    return v.real();
}

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double c = 1.0;
    for (int j = 1; j <= k; ++j) {
        c = c * (n - k + j) / j;
    }
    return c;
}

}  // namespace

double mixed_event_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s,
    std::span<const PhotonMixture> mixtures, const CMatrix &coherence) {
    CMatrix m = effective_scattering_matrix(u, r, s);
    check_coherence(coherence, u.dim(), "mixed_event_probability");
    AssignmentList d = assignment_list(r);
    std::vector<const PhotonMixture *> per_photon;
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] >= mixtures.size()) {
            throw std::invalid_argument("mixed_event_probability: no mixture for an occupied input mode");
        }
        per_photon.push_back(&mixtures[d[j]]);
    }
    FactoredTensorPermanent kernel(m);
    double total = 0.0;
    for (const Draw &draw : mixture_draws(per_photon)) {
        CMatrix dist = draw_s_matrix(draw, d.modes, coherence);
        double norm = input_normalization(d, dist) * s.factorial_product();
        if (!(norm > 0.0)) {
            throw std::invalid_argument("mixed_event_probability: input state has zero norm");
        }
        total += draw.weight * checked_real(kernel.evaluate(dist), "mixed_event_probability") / norm;
    }
    return total;
}

DetectorLayout::DetectorLayout(const UnitaryNetwork &base, const DetectionConfig &config)
    : network_(base), binary_(config.binary) {
    const std::size_t m = base.dim();
    groups_.resize(m);
    for (std::size_t b = 0; b < m; ++b) {
        groups_[b] = {b};
    }
    if (config.resolver_mode) {
        std::size_t mode = *config.resolver_mode;
        if (mode >= m) {
            throw std::out_of_range("DetectionConfig: resolver mode outside the network");
        }
        std::array<std::size_t, 3> targets{mode, m, m + 1};
        network_ = compose(base, make_tritter(), targets);
        groups_[mode] = {mode, m, m + 1};
    }
    efficiencies_ = config.efficiencies;
    if (efficiencies_.empty()) {
        efficiencies_.assign(network_.dim(), 1.0);
    }
    if (efficiencies_.size() != network_.dim()) {
        throw std::invalid_argument("DetectionConfig: need one efficiency per physical detector");
    }
    for (double eta : efficiencies_) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw std::invalid_argument("DetectionConfig: detector efficiency must lie in [0, 1]");
        }
    }
}

namespace {

// Every way to place `count` clicks (binary) or counts (resolving) on `group`.
std::vector<std::vector<std::pair<std::size_t, int>>> group_outcomes(
    const std::vector<std::size_t> &group, int count, bool binary) {
    std::vector<std::vector<std::pair<std::size_t, int>>> out;
    std::vector<int> current(group.size(), 0);
    auto emit = [&] {
        std::vector<std::pair<std::size_t, int>> o;
        for (std::size_t g = 0; g < group.size(); ++g) {
            o.emplace_back(group[g], current[g]);
        }
        out.push_back(std::move(o));
    };
    auto fill = [&](auto &&self, std::size_t g, int remaining) -> void {
        if (g + 1 == group.size()) {
            if (binary && remaining > 1) {
                return;
            }
            current[g] = remaining;
            emit();
            return;
        }
        int top = binary ? std::min(remaining, 1) : remaining;
        for (int c = top; c >= 0; --c) {
            current[g] = c;
            self(self, g + 1, remaining - c);
        }
    };
    fill(fill, 0, count);
    return out;
}

}  // namespace

std::vector<std::vector<int>> DetectorLayout::expand(const OccupationPattern &logical) const {
    if (logical.modes() != groups_.size()) {
        throw std::invalid_argument("DetectorLayout::expand: pattern length differs from the network dimension");
    }
    std::vector<std::vector<int>> outcomes{std::vector<int>(detectors(), 0)};
    for (std::size_t b = 0; b < groups_.size(); ++b) {
        int count = logical[b];
        if (binary_ && count > static_cast<int>(groups_[b].size())) {
            throw std::invalid_argument(
                "DetectorLayout::expand: " + logical.str() + " needs more clicks on mode " + std::to_string(b + 1) +
                " than it has detectors");
        }
        auto choices = group_outcomes(groups_[b], count, binary_);
        std::vector<std::vector<int>> next;
        for (const auto &partial : outcomes) {
            for (const auto &choice : choices) {
                std::vector<int> o = partial;
                for (const auto &[det, c] : choice) {
                    o[det] = c;
                }
                next.push_back(std::move(o));
            }
        }
        outcomes = std::move(next);
    }
    return outcomes;
}

double DetectorLayout::response(std::span<const int> outcome, const OccupationPattern &s) const {
    if (outcome.size() != detectors() || s.modes() != detectors()) {
        throw std::invalid_argument("DetectorLayout::response: outcome refers to unknown detectors");
    }
    double p = 1.0;
    for (std::size_t d = 0; d < outcome.size(); ++d) {
        double eta = efficiencies_[d];
        int photons = s[d];
        int seen = outcome[d];
        if (binary_) {
            if (seen != 0 && seen != 1) {
                throw std::invalid_argument("DetectorLayout::response: binary outcome entries must be 0 or 1");
            }
            double miss = std::pow(1.0 - eta, photons);
            p *= seen ? 1.0 - miss : miss;
        } else {
            if (seen < 0 || seen > photons) {
                return 0.0;
            }
            p *= binomial(photons, seen) * std::pow(eta, seen) * std::pow(1.0 - eta, photons - seen);
        }
        if (p == 0.0) {
            return 0.0;
        }
    }
    return p;
}

void ExperimentModel::validate() const {
    if (sources.empty()) {
        throw std::invalid_argument("ExperimentModel: no sources");
    }
    if (photons.size() != sources.size()) {
        throw std::invalid_argument("ExperimentModel: need one photon mixture per source");
    }
    if (!input_modes.empty() && input_modes.size() != sources.size()) {
        throw std::invalid_argument("ExperimentModel: need one input mode per source");
    }
    std::vector<std::size_t> used;
    for (std::size_t j = 0; j < sources.size(); ++j) {
        sources[j].validate();
        std::size_t mode = input_mode(j);
        if (mode >= network.dim()) {
            throw std::out_of_range("ExperimentModel: source input mode outside the network");
        }
        used.push_back(mode);
    }
    std::sort(used.begin(), used.end());
    if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
        throw std::invalid_argument("ExperimentModel: two sources share an input mode");
    }
    for (const auto &p : photons) {
        if (p.internal_dim() != photons.front().internal_dim()) {
            throw std::invalid_argument("ExperimentModel: photon mixtures use different internal dimensions");
        }
    }
    if (truncation.max_total_pairs < static_cast<int>(sources.size()) ||
        truncation.max_total_photons < static_cast<int>(sources.size())) {
        throw std::invalid_argument("ExperimentModel: truncation bounds below the number of sources");
    }
    DetectorLayout check(network, detection);
    (void)check;
}

std::size_t ExperimentModel::input_mode(std::size_t source) const {
    return input_modes.empty() ? source : input_modes.at(source);
}

namespace {

SpectralDensity default_spectrum() {
    // Heralded photon near 817 nm with a 5.5 nm intensity FWHM.
    constexpr double c = 299792458.0;
    constexpr double lambda = 817e-9;
    constexpr double fwhm = 5.5e-9;
    double omega = 2.0 * std::numbers::pi * c / lambda;
    double width = 2.0 * std::numbers::pi * c * fwhm / (lambda * lambda);
    double sigma = width / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    return gaussian_spectrum(omega, sigma, 401, 8.0);
}

HeraldedSourceModel reference_source() {
    HeraldedSourceModel s;
    s.lambda_sq = 0.025;
    s.eta_signal = 0.31;
    s.eta_idler = 0.55;
    s.purity = 0.97;
    return s;
}

}  // namespace

ExperimentModel reference_tritter_model() {
    ExperimentModel m;
    m.network = make_tritter();
    m.sources.assign(3, reference_source());
    auto family = two_angle_family(0.97, 0.98, 0.98);
    m.photons.assign(family.begin(), family.end());
    m.detection.resolver_mode = 0;
    m.truncation = Truncation{5, 4};
    m.spectrum = default_spectrum();
    return m;
}

ExperimentModel hom_pair_model() {
    ExperimentModel m;
    m.network = make_balanced_splitter();
    m.sources.assign(2, reference_source());
    std::array<double, 1> overlaps{0.98};
    m.photons = angle_family(0.97, overlaps);
    m.truncation = Truncation{4, 4};
    m.spectrum = default_spectrum();
    return m;
}

CMatrix coherence_from_delays(const SpectralDensity &spectrum, std::span<const double> delays) {
    const auto n = static_cast<Eigen::Index>(delays.size());
    CMatrix g = CMatrix::Ones(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            if (a == b) {
                continue;
            }
            double ta = delays[static_cast<std::size_t>(a)];
            double tb = delays[static_cast<std::size_t>(b)];
            if (std::isnan(ta) || std::isnan(tb)) {
                throw std::invalid_argument("coherence_from_delays: NaN delay");
            }
            if (std::isinf(ta) || std::isinf(tb)) {
                g(a, b) = 0.0;
            } else if (ta != tb) {
                g(a, b) = delay_overlap(spectrum, tb - ta);
            }
        }
    }
    return g;
}

struct OutcomeEvaluator::Term {
    struct DrawData {
        double weight;
        CMatrix overlaps;  // internal-state Gram matrix before coherence factors
        double norm;       // input normalization (delay independent: one source per mode)
    };
    struct Output {
        FactoredTensorPermanent kernel;
        double factorial;
        std::vector<std::pair<std::size_t, double>> response;  // (outcome set, probability)
    };
    std::vector<std::size_t> photon_source;
    std::vector<DrawData> draws;
    std::vector<Output> outputs;
};

OutcomeEvaluator::OutcomeEvaluator(const ExperimentModel &model, std::vector<std::vector<std::vector<int>>> outcome_sets)
    : outcome_count_(outcome_sets.size()), sources_(model.sources.size()) {
    model.validate();
    DetectorLayout layout(model.network, model.detection);
    for (const auto &set : outcome_sets) {
        for (const auto &o : set) {
            if (o.size() != layout.detectors()) {
                throw std::invalid_argument("OutcomeEvaluator: outcome refers to unknown detectors");
            }
        }
    }
    terms_ = enumerate_inputs(model.sources, model.truncation);
    const UnitaryNetwork &u = layout.network();
    const std::size_t dim = u.dim();

    std::vector<std::size_t> source_of_mode(dim, sources_);
    for (std::size_t j = 0; j < sources_; ++j) {
        source_of_mode[model.input_mode(j)] = j;
    }

    for (const InputTerm &term : terms_) {
        auto compiled = std::make_shared<Term>();
        std::vector<int> r_counts(dim, 0);
        for (std::size_t j = 0; j < sources_; ++j) {
            r_counts[model.input_mode(j)] = term.occupation[j];
        }
        OccupationPattern r(r_counts);
        AssignmentList d = assignment_list(r);
        std::vector<const PhotonMixture *> per_photon;
        for (std::size_t mode : d.modes) {
            compiled->photon_source.push_back(source_of_mode[mode]);
            per_photon.push_back(&model.photons[source_of_mode[mode]]);
        }
        for (const Draw &draw : mixture_draws(per_photon)) {
            CMatrix overlaps = draw_s_matrix(draw, compiled->photon_source, CMatrix());
            double norm = input_normalization(d, overlaps);
            if (!(norm > 0.0)) {
                throw NumericalError("OutcomeEvaluator: input state has zero norm");
            }
            compiled->draws.push_back({draw.weight, std::move(overlaps), norm});
        }
        for (const OccupationPattern &s : all_patterns(dim, r.total())) {
            std::vector<std::pair<std::size_t, double>> response;
            for (std::size_t k = 0; k < outcome_sets.size(); ++k) {
                double p = 0.0;
                for (const auto &o : outcome_sets[k]) {
                    p += layout.response(o, s);
                }
                if (p > 0.0) {
                    response.emplace_back(k, p);
                }
            }
            if (response.empty()) {
                continue;
            }
            compiled->outputs.push_back(
                {FactoredTensorPermanent(effective_scattering_matrix(u, r, s)), s.factorial_product(),
                 std::move(response)});
        }
        compiled_.push_back(std::move(compiled));
    }
}

OutcomeEvaluator OutcomeEvaluator::for_patterns(const ExperimentModel &model, std::span<const OccupationPattern> patterns) {
    DetectorLayout layout(model.network, model.detection);
    std::vector<std::vector<std::vector<int>>> sets;
    for (const auto &p : patterns) {
        sets.push_back(layout.expand(p));
    }
    return OutcomeEvaluator(model, std::move(sets));
}

Eigen::MatrixXd OutcomeEvaluator::conditional(const CMatrix &coherence) const {
    check_coherence(coherence, sources_, "OutcomeEvaluator");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(terms_.size()),
                                                static_cast<Eigen::Index>(outcome_count_));
    for (std::size_t t = 0; t < compiled_.size(); ++t) {
        const Term &term = *compiled_[t];
        const auto n = static_cast<Eigen::Index>(term.photon_source.size());
        CMatrix factors = CMatrix::Ones(n, n);
        if (coherence.size() != 0) {
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index k = 0; k < n; ++k) {
                    factors(j, k) = coherence(static_cast<Eigen::Index>(term.photon_source[static_cast<std::size_t>(j)]),
                                              static_cast<Eigen::Index>(term.photon_source[static_cast<std::size_t>(k)]));
                }
            }
        }
        for (const auto &draw : term.draws) {
            CMatrix dist = draw.overlaps.cwiseProduct(factors);
            for (const auto &output : term.outputs) {
                double p = draw.weight * checked_real(output.kernel.evaluate(dist), "OutcomeEvaluator") /
                           (draw.norm * output.factorial);
                for (const auto &[k, resp] : output.response) {
                    out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) += p * resp;
                }
            }
        }
    }
    if (!out.allFinite() || (out.size() > 0 && out.minCoeff() < -kNegativeTolerance)) {
        throw NumericalError("OutcomeEvaluator: negative or non-finite detection probability");
    }
    return out;
}

std::vector<double> OutcomeEvaluator::probabilities(const CMatrix &coherence) const {
    std::vector<double> weights;
    weights.reserve(terms_.size());
    for (const auto &t : terms_) {
        weights.push_back(t.weight);
    }
    return probabilities(coherence, weights);
}

std::vector<double> OutcomeEvaluator::probabilities(const CMatrix &coherence, std::span<const double> term_weights) const {
    if (term_weights.size() != terms_.size()) {
        throw std::invalid_argument("OutcomeEvaluator: one weight per input term required");
    }
    Eigen::MatrixXd cond = conditional(coherence);
    std::vector<double> out(outcome_count_, 0.0);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        for (std::size_t k = 0; k < outcome_count_; ++k) {
            out[k] += term_weights[t] * cond(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
        }
    }
    return out;
}

namespace {

void check_delays(const ExperimentModel &model, std::span<const double> delays) {
    if (delays.size() != model.sources.size()) {
        throw std::invalid_argument("need one delay per source");
    }
}

}  // namespace

double detection_outcome_probability(
    const ExperimentModel &model, std::span<const int> outcome, std::span<const double> delays) {
    check_delays(model, delays);
    std::vector<std::vector<std::vector<int>>> sets{{std::vector<int>(outcome.begin(), outcome.end())}};
    OutcomeEvaluator eval(model, std::move(sets));
    return eval.probabilities(coherence_from_delays(model.spectrum, delays))[0];
}

double logical_outcome_probability(
    const ExperimentModel &model, const OccupationPattern &pattern, std::span<const double> delays) {
    check_delays(model, delays);
    std::array<OccupationPattern, 1> patterns{pattern};
    OutcomeEvaluator eval = OutcomeEvaluator::for_patterns(model, patterns);
    return eval.probabilities(coherence_from_delays(model.spectrum, delays))[0];
}

double visibility(double p_infinity, double p_zero) {
    if (!(p_infinity > 0.0)) {
        throw std::invalid_argument("visibility: P_infinity must be positive");
    }
    return (p_infinity - p_zero) / p_infinity;
}

namespace {

CMatrix delayed_coherence(std::size_t sources, std::size_t delayed) {
    if (delayed >= sources) {
        throw std::out_of_range("delayed source index outside the source list");
    }
    const auto n = static_cast<Eigen::Index>(sources);
    const auto k = static_cast<Eigen::Index>(delayed);
    CMatrix g = CMatrix::Ones(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j != k) {
            g(j, k) = 0.0;
            g(k, j) = 0.0;
        }
    }
    return g;
}

std::vector<double> term_weights(const std::vector<InputTerm> &terms) {
    std::vector<double> w;
    for (const auto &t : terms) {
        w.push_back(t.weight);
    }
    return w;
}

}  // namespace

std::vector<VisibilityResult> visibilities(
    const ExperimentModel &model, std::span<const OccupationPattern> patterns, std::size_t delayed_source) {
    OutcomeEvaluator eval = OutcomeEvaluator::for_patterns(model, patterns);
    const std::size_t n = model.sources.size();
    auto p0 = eval.probabilities(CMatrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    auto pinf = eval.probabilities(delayed_coherence(n, delayed_source));
    std::vector<VisibilityResult> out;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        if (!(pinf[k] > 0.0)) {
            throw NumericalError("visibilities: pattern " + patterns[k].str() +
                                 " never occurs at infinite delay; visibility undefined");
        }
        out.push_back({patterns[k], p0[k], pinf[k], visibility(pinf[k], p0[k]), 0.0});
    }
    return out;
}

double coherence_time(const SpectralDensity &spectrum) {
    spectrum.validate();
    double c = spectrum.centroid();
    double var = 0.0;
    for (std::size_t k = 0; k < spectrum.omega.size(); ++k) {
        double d = spectrum.omega[k] - c;
        var += spectrum.intensity[k] * d * d;
    }
    if (!(var > 0.0)) {
        throw std::invalid_argument("coherence_time: spectrum has zero width");
    }
    return 1.0 / std::sqrt(var);
}

std::vector<double> default_delay_grid(const SpectralDensity &spectrum, std::size_t points, double span) {
    if (points < 2 || !(span > 0.0)) {
        throw std::invalid_argument("default_delay_grid: need >= 2 points and a positive span");
    }
    double half = span * coherence_time(spectrum);
    std::vector<double> out(points);
    for (std::size_t k = 0; k < points; ++k) {
        out[k] = -half + 2.0 * half * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return out;
}

Landscape landscape(
    const ExperimentModel &model, const LandscapeSpec &spec, std::span<const OccupationPattern> patterns,
    std::size_t threads) {
    const std::size_t n = model.sources.size();
    if (spec.source1 >= n || spec.source2 >= n || spec.source1 == spec.source2) {
        throw std::out_of_range("landscape: delayed sources must be two distinct valid sources");
    }
    for (double t : spec.tau1) {
        if (!std::isfinite(t)) {
            throw std::invalid_argument("landscape: delays must be finite");
        }
    }
    for (double t : spec.tau2) {
        if (!std::isfinite(t)) {
            throw std::invalid_argument("landscape: delays must be finite");
        }
    }
    OutcomeEvaluator eval = OutcomeEvaluator::for_patterns(model, patterns);
    Landscape out{spec.tau1, spec.tau2, std::vector<OccupationPattern>(patterns.begin(), patterns.end()), {}};
    const std::size_t n2 = spec.tau2.size();
    const std::size_t points = spec.tau1.size() * n2;
    out.values.assign(patterns.size(), std::vector<double>(points, 0.0));
    parallel_for(points, threads, [&](std::size_t idx) {
        std::vector<double> delays(n, 0.0);
        delays[spec.source1] = spec.tau1[idx / n2];
        delays[spec.source2] = spec.tau2[idx % n2];
        auto p = eval.probabilities(coherence_from_delays(model.spectrum, delays));
        for (std::size_t k = 0; k < p.size(); ++k) {
            out.values[k][idx] = p[k];
        }
    });
    return out;
}

double classical_moment(
    const DetectorLayout &layout, std::span<const std::size_t> input_modes, std::span<const char> incoherent,
    std::span<const std::vector<int>> outcomes, const ClassicalOptions &options) {
    if (incoherent.size() != input_modes.size()) {
        throw std::invalid_argument("classical_moment: one coherence flag per source");
    }
    const CMatrix &u = layout.network().matrix();
    const std::size_t detectors = layout.detectors();
    for (const auto &o : outcomes) {
        if (o.size() != detectors) {
            throw std::invalid_argument("classical_moment: outcome refers to unknown detectors");
        }
    }
    std::vector<std::size_t> coherent;
    std::vector<double> background(detectors, 0.0);
    for (std::size_t j = 0; j < input_modes.size(); ++j) {
        if (input_modes[j] >= layout.base_modes()) {
            throw std::out_of_range("classical_moment: input mode outside the network");
        }
        if (incoherent[j]) {
            for (std::size_t d = 0; d < detectors; ++d) {
                background[d] += std::norm(u(static_cast<Eigen::Index>(input_modes[j]), static_cast<Eigen::Index>(d)));
            }
        } else {
            coherent.push_back(input_modes[j]);
        }
    }
    const auto &eta = layout.efficiencies();
    std::vector<double> intensity(detectors);
    auto moment_at = [&](std::span<const double> phases) {
        for (std::size_t d = 0; d < detectors; ++d) {
            Complex field{0.0, 0.0};
            for (std::size_t c = 0; c < coherent.size(); ++c) {
                field += u(static_cast<Eigen::Index>(coherent[c]), static_cast<Eigen::Index>(d)) *
                         std::polar(1.0, phases[c]);
            }
            intensity[d] = eta[d] * (std::norm(field) + background[d]);
        }
        double total = 0.0;
        for (const auto &o : outcomes) {
            double p = 1.0;
            for (std::size_t d = 0; d < detectors; ++d) {
                if (o[d] == 0) {
                    continue;
                }
                if (layout.binary()) {
                    p *= intensity[d];
                } else {
                    p *= std::pow(intensity[d], o[d]) / std::tgamma(o[d] + 1.0);
                }
            }
            total += p;
        }
        return total;
    };

    // The first coherent source sets the reference phase.
    const std::size_t free = coherent.empty() ? 0 : coherent.size() - 1;
    std::vector<double> phases(coherent.size(), 0.0);
    if (options.method == PhaseAverage::kQuadrature) {
        const std::size_t q = options.phase_points;
        if (q < 2) {
            throw std::invalid_argument("classical_moment: need >= 2 phase points");
        }
        std::size_t count = 1;
        for (std::size_t f = 0; f < free; ++f) {
            count *= q;
        }
        double total = 0.0;
        for (std::size_t idx = 0; idx < count; ++idx) {
            std::size_t rest = idx;
            for (std::size_t f = 0; f < free; ++f) {
                phases[f + 1] = 2.0 * std::numbers::pi * static_cast<double>(rest % q) / static_cast<double>(q);
                rest /= q;
            }
            total += moment_at(phases);
        }
        return total / static_cast<double>(count);
    }
    if (options.samples < 1) {
        throw std::invalid_argument("classical_moment: need >= 1 sample");
    }
    std::mt19937_64 rng(task_seed(options.seed, 0));
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    double total = 0.0;
    for (std::size_t k = 0; k < options.samples; ++k) {
        for (std::size_t f = 0; f < free; ++f) {
            phases[f + 1] = uniform(rng);
        }
        total += moment_at(phases);
    }
    return total / static_cast<double>(options.samples);
}

double classical_bound(
    const ExperimentModel &model, const OccupationPattern &pattern, std::size_t delayed_source,
    const ClassicalOptions &options) {
    model.validate();
    const std::size_t n = model.sources.size();
    if (delayed_source >= n) {
        throw std::out_of_range("classical_bound: delayed source index outside the source list");
    }
    DetectorLayout layout(model.network, model.detection);
    auto outcomes = layout.expand(pattern);
    std::vector<std::size_t> modes;
    for (std::size_t j = 0; j < n; ++j) {
        modes.push_back(model.input_mode(j));
    }
    std::vector<char> none(n, 0);
    std::vector<char> delayed(n, 0);
    delayed[delayed_source] = 1;
    double m0 = classical_moment(layout, modes, none, outcomes, options);
    double minf = classical_moment(layout, modes, delayed, outcomes, options);
    if (!(minf > 0.0)) {
        throw NumericalError("classical_bound: pattern " + pattern.str() + " has no classical signal; visibility undefined");
    }
    return visibility(minf, m0);
}

Attribution attribute_visibility_loss(
    const ExperimentModel &model, const OccupationPattern &pattern, std::size_t delayed_source) {
    model.validate();
    std::array<OccupationPattern, 1> patterns{pattern};
    ExperimentModel pure = model;
    CVector basis = CVector::Zero(static_cast<Eigen::Index>(model.photons.front().internal_dim()));
    basis[0] = 1.0;
    pure.photons.assign(model.sources.size(), PhotonMixture::pure(InternalState(basis)));
    ExperimentModel ideal = pure;
    for (auto &s : ideal.sources) {
        s.lambda_sq = 0.0;
    }
    Attribution a;
    a.v_ideal = visibilities(ideal, patterns, delayed_source)[0].visibility;
    a.v_pairs = visibilities(pure, patterns, delayed_source)[0].visibility;
    a.v_full = visibilities(model, patterns, delayed_source)[0].visibility;
    if (a.v_ideal == 0.0) {
        throw std::invalid_argument("attribute_visibility_loss: ideal visibility is zero");
    }
    double loss = a.v_ideal - a.v_full;
    if (loss == 0.0) {
        return a;
    }
    a.multi_pair_fraction = (a.v_ideal - a.v_pairs) / loss;
    a.distinguishability_fraction = (a.v_pairs - a.v_full) / loss;
    return a;
}

namespace {

double truncated_normal(std::mt19937_64 &rng, double sigma, double lo, double hi, std::span<const double> nominal) {
    // One shift z applied to every nominal value; redraw until all stay in range.
    if (sigma == 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> normal(0.0, sigma);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        double z = normal(rng);
        bool ok = true;
        for (double v : nominal) {
            double x = v + z;
            if (!(x >= lo && x <= hi)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return z;
        }
    }
    throw NumericalError("monte_carlo_visibility: truncated Gaussian rejection failed");
}

}  // namespace

MonteCarloSummary monte_carlo_visibility(
    const ExperimentModel &model, std::span<const OccupationPattern> patterns, const ParameterUncertainty &sigma,
    std::size_t n_samples, std::uint64_t seed, std::size_t delayed_source, std::size_t threads, bool keep_samples) {
    if (n_samples < 2) {
        throw std::invalid_argument("monte_carlo_visibility: need at least 2 samples");
    }
    if (!(sigma.lambda_sq >= 0.0) || !(sigma.eta_signal >= 0.0) || !(sigma.eta_idler >= 0.0)) {
        throw std::invalid_argument("monte_carlo_visibility: uncertainties must be non-negative");
    }
    OutcomeEvaluator eval = OutcomeEvaluator::for_patterns(model, patterns);
    const std::size_t n = model.sources.size();
    Eigen::MatrixXd c0 = eval.conditional(CMatrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    Eigen::MatrixXd cinf = eval.conditional(delayed_coherence(n, delayed_source));
    const auto &terms = eval.terms();

    auto visibilities_for = [&](std::span<const double> weights) {
        std::vector<double> v(patterns.size());
        for (std::size_t k = 0; k < patterns.size(); ++k) {
            double p0 = 0.0;
            double pinf = 0.0;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                p0 += weights[t] * c0(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
                pinf += weights[t] * cinf(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
            }
            v[k] = visibility(pinf, p0);
        }
        return v;
    };

    MonteCarloSummary out;
    out.patterns.assign(patterns.begin(), patterns.end());
    out.point = visibilities_for(term_weights(terms));

    std::vector<double> l2, es, ei;
    for (const auto &s : model.sources) {
        l2.push_back(s.lambda_sq);
        es.push_back(s.eta_signal);
        ei.push_back(s.eta_idler);
    }
    const double below_one = std::nextafter(1.0, 0.0);
    std::vector<std::vector<double>> samples(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        std::mt19937_64 rng(task_seed(seed, i));
        double dl = truncated_normal(rng, sigma.lambda_sq, 0.0, below_one, l2);
        double ds = truncated_normal(rng, sigma.eta_signal, std::numeric_limits<double>::min(), 1.0, es);
        double di = truncated_normal(rng, sigma.eta_idler, 0.0, 1.0, ei);
        std::vector<HeraldedSourceModel> sources = model.sources;
        for (auto &s : sources) {
            s.lambda_sq += dl;
            s.eta_signal += ds;
            s.eta_idler += di;
        }
        std::vector<double> weights;
        weights.reserve(terms.size());
        for (const auto &t : terms) {
            weights.push_back(input_term_weight(sources, t.occupation, model.truncation));
        }
        samples[i] = visibilities_for(weights);
    });

    out.mean.assign(patterns.size(), 0.0);
    out.stddev.assign(patterns.size(), 0.0);
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        double mean = 0.0;
        for (const auto &s : samples) {
            mean += s[k];
        }
        mean /= static_cast<double>(n_samples);
        double var = 0.0;
        for (const auto &s : samples) {
            var += (s[k] - mean) * (s[k] - mean);
        }
        out.mean[k] = mean;
        out.stddev[k] = std::sqrt(var / static_cast<double>(n_samples - 1));
    }
    if (keep_samples) {
        out.samples.assign(patterns.size(), std::vector<double>(n_samples));
        for (std::size_t i = 0; i < n_samples; ++i) {
            for (std::size_t k = 0; k < patterns.size(); ++k) {
                out.samples[k][i] = samples[i][k];
            }
        }
    }
    return out;
}

}  // namespace hinterf
