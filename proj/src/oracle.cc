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

#include "hinterf/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "hinterf/experiment.h"
#include "hinterf/parallel.h"

namespace hinterf::oracle {

LabeledFockState::LabeledFockState(
    std::size_t spatial_modes, std::size_t internal_dim, std::vector<std::vector<int>> basis, CVector amplitudes)
    : spatial_modes_(spatial_modes), internal_dim_(internal_dim), basis_(std::move(basis)),
      amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_.size()) {
        throw std::invalid_argument("LabeledFockState: one amplitude per basis state required");
    }
}

std::vector<int> LabeledFockState::spatial_counts(std::size_t index) const {
    std::vector<int> counts(spatial_modes_, 0);
    const auto &occ = basis_[index];
    for (std::size_t x = 0; x < spatial_modes_; ++x) {
        for (std::size_t i = 0; i < internal_dim_; ++i) {
            counts[x] += occ[x * internal_dim_ + i];
        }
    }
    return counts;
}

double LabeledFockState::spatial_probability(const OccupationPattern &s) const {
    if (s.modes() != spatial_modes_) {
        throw std::invalid_argument("spatial_probability: pattern length differs from the mode count");
    }
    double p = 0.0;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        if (spatial_counts(k) == s.counts) {
            p += std::norm(amplitudes_[static_cast<Eigen::Index>(k)]);
        }
    }
    return p;
}

LabeledFockState evolve(const UnitaryNetwork &u, std::span<const LabeledPhoton> photons) {
    const std::size_t m = u.dim();
    if (photons.empty() || photons.size() > kMaxPhotons) {
        throw std::invalid_argument("oracle::evolve: photon count outside [1, 5]");
    }
    if (m > kMaxSpatialModes) {
        throw std::invalid_argument("oracle::evolve: too many spatial modes");
    }
    const std::size_t r = static_cast<std::size_t>(photons.front().state.size());
    if (r == 0 || r > kMaxInternalDim) {
        throw std::invalid_argument("oracle::evolve: internal dimension outside the supported range");
    }
    for (const auto &p : photons) {
        if (p.mode >= m) {
            throw std::out_of_range("oracle::evolve: photon mode outside the network");
        }
        if (static_cast<std::size_t>(p.state.size()) != r) {
            throw std::invalid_argument("oracle::evolve: photons use different internal dimensions");
        }
        if (std::abs(p.state.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("oracle::evolve: internal state not normalized");
        }
    }
    const std::size_t labeled = m * r;

    // Apply each evolved creation operator sum_{y,i} U[x][y] phi[i] a^dagger_{y,i}.
    std::map<std::vector<int>, Complex> state;
    state[std::vector<int>(labeled, 0)] = 1.0;
    for (const auto &p : photons) {
        std::map<std::vector<int>, Complex> next;
        for (const auto &[occ, amp] : state) {
            for (std::size_t y = 0; y < m; ++y) {
                Complex uy = u(p.mode, y);
                if (uy == Complex{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t i = 0; i < r; ++i) {
                    Complex c = uy * p.state[static_cast<Eigen::Index>(i)];
                    if (c == Complex{0.0, 0.0}) {
                        continue;
                    }
                    std::vector<int> raised = occ;
                    std::size_t mode = y * r + i;
                    raised[mode] += 1;
                    next[raised] += amp * c * std::sqrt(static_cast<double>(raised[mode]));
                }
            }
        }
        if (next.size() > kMaxBasisSize) {
            throw std::invalid_argument("oracle::evolve: Fock basis too large");
        }
        state = std::move(next);
    }

    std::vector<std::vector<int>> basis;
    CVector amps(static_cast<Eigen::Index>(state.size()));
    Eigen::Index k = 0;
    for (auto &[occ, amp] : state) {
        basis.push_back(occ);
        amps[k++] = amp;
    }
    double norm = amps.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("oracle::evolve: input state has zero norm");
    }
    amps /= norm;
    return LabeledFockState(m, r, std::move(basis), std::move(amps));
}

namespace {

// Columns are vectors t_a with <t_a|t_b> = G[a][b].
CMatrix gram_factor(const CMatrix &g) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(g);
    const auto &values = solver.eigenvalues();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values[k] < -1e-10) {
            throw std::invalid_argument("oracle: coherence matrix is not positive semidefinite");
        }
        if (values[k] > 1e-12) {
            keep.push_back(k);
        }
    }
    CMatrix factor(static_cast<Eigen::Index>(keep.size()), g.cols());
    for (std::size_t row = 0; row < keep.size(); ++row) {
        Eigen::Index k = keep[row];
        factor.row(static_cast<Eigen::Index>(row)) = std::sqrt(values[k]) * solver.eigenvectors().col(k).adjoint();
    }
    return factor;
}

CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

// Every joint draw of mixture terms for the photons of r.
template <typename Fn>
void for_each_draw(const OccupationPattern &r, std::span<const PhotonMixture> mixtures, Fn &&fn) {
    std::vector<std::size_t> modes;
    for (std::size_t x = 0; x < r.modes(); ++x) {
        for (int c = 0; c < r[x]; ++c) {
            if (x >= mixtures.size()) {
                throw std::invalid_argument("oracle: no mixture for an occupied input mode");
            }
            modes.push_back(x);
        }
    }
    std::vector<std::size_t> choice(modes.size(), 0);
    for (;;) {
        double weight = 1.0;
        std::vector<std::pair<std::size_t, const CVector *>> drawn;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const auto &term = mixtures[modes[j]].terms()[choice[j]];
            weight *= term.probability;
            drawn.emplace_back(modes[j], &term.state.amplitudes());
        }
        if (weight > 0.0) {
            fn(weight, drawn);
        }
        std::size_t j = 0;
        while (j < modes.size()) {
            if (++choice[j] < mixtures[modes[j]].size()) {
                break;
            }
            choice[j] = 0;
            ++j;
        }
        if (j == modes.size()) {
            return;
        }
    }
}

}  // namespace

double oracle_event_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s,
    std::span<const PhotonMixture> mixtures, const CMatrix &coherence) {
    if (r.modes() != u.dim() || s.modes() != u.dim()) {
        throw std::invalid_argument("oracle_event_probability: pattern length differs from the network dimension");
    }
    if (r.total() != s.total()) {
        return 0.0;
    }
    CMatrix time_bins;
    if (coherence.size() != 0) {
        if (static_cast<std::size_t>(coherence.rows()) != u.dim() || coherence.rows() != coherence.cols()) {
            throw std::invalid_argument("oracle_event_probability: coherence matrix has the wrong size");
        }
        time_bins = gram_factor(coherence);
    }
    double total = 0.0;
    for_each_draw(r, mixtures, [&](double weight, const auto &drawn) {
        std::vector<LabeledPhoton> photons;
        for (const auto &[mode, state] : drawn) {
            CVector internal = *state;
            if (time_bins.size() != 0) {
                internal = kron(internal, time_bins.col(static_cast<Eigen::Index>(mode)));
            }
            photons.push_back({mode, internal});
        }
        total += weight * evolve(u, photons).spatial_probability(s);
    });
    return total;
}

UnitaryNetwork loss_network(const UnitaryNetwork &u, std::span<const double> efficiencies) {
    const std::size_t m = u.dim();
    if (efficiencies.size() != m) {
        throw std::invalid_argument("loss_network: one efficiency per output mode required");
    }
    CMatrix wide = CMatrix::Identity(2 * m, 2 * m);
    wide.topLeftCorner(m, m) = u.matrix();
    CMatrix split = CMatrix::Identity(2 * m, 2 * m);
    for (std::size_t d = 0; d < m; ++d) {
        double eta = efficiencies[d];
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw std::invalid_argument("loss_network: efficiency must lie in [0, 1]");
        }
        double t = std::sqrt(eta);
        double l = std::sqrt(1.0 - eta);
        split(d, d) = t;
        split(d, m + d) = l;
        split(m + d, d) = l;
        split(m + d, m + d) = -t;
    }
    return UnitaryNetwork(wide * split);
}

double oracle_lossy_outcome_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, std::span<const PhotonMixture> mixtures,
    std::span<const double> efficiencies, std::span<const int> outcome, bool binary) {
    const std::size_t m = u.dim();
    if (outcome.size() != m || r.modes() != m) {
        throw std::invalid_argument("oracle_lossy_outcome_probability: size mismatch");
    }
    UnitaryNetwork wide = loss_network(u, efficiencies);
    std::vector<int> padded = r.counts;
    padded.resize(2 * m, 0);
    OccupationPattern r_wide(padded);
    double total = 0.0;
    for_each_draw(r_wide, mixtures, [&](double weight, const auto &drawn) {
        std::vector<LabeledPhoton> photons;
        for (const auto &[mode, state] : drawn) {
            photons.push_back({mode, *state});
        }
        LabeledFockState out = evolve(wide, photons);
        for (std::size_t k = 0; k < out.basis().size(); ++k) {
            std::vector<int> counts = out.spatial_counts(k);
            bool match = true;
            for (std::size_t d = 0; d < m && match; ++d) {
                match = binary ? ((counts[d] > 0) == (outcome[d] != 0)) : counts[d] == outcome[d];
            }
            if (match) {
                total += weight * std::norm(out.amplitudes()[static_cast<Eigen::Index>(k)]);
            }
        }
    });
    return total;
}

ClickStatistics coherent_click_simulation(
    const UnitaryNetwork &u, std::span<const double> intensities, std::span<const char> incoherent,
    std::span<const double> efficiencies, std::size_t n_phase_samples, std::uint64_t seed) {
    const std::size_t m = u.dim();
    if (intensities.size() != m || incoherent.size() != m || efficiencies.size() != m) {
        throw std::invalid_argument("coherent_click_simulation: one intensity, flag and efficiency per mode");
    }
    if (n_phase_samples < 10000) {
        throw std::invalid_argument("coherent_click_simulation: need at least 1e4 phase samples");
    }
    if (m > 16) {
        throw std::invalid_argument("coherent_click_simulation: too many detectors");
    }
    const std::size_t patterns = std::size_t{1} << m;
    std::vector<double> sum(patterns, 0.0);
    std::vector<double> sum_sq(patterns, 0.0);
    std::mt19937_64 rng(task_seed(seed, 0));
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<double> click(m);
    for (std::size_t sample = 0; sample < n_phase_samples; ++sample) {
        CVector field = CVector::Zero(static_cast<Eigen::Index>(m));
        std::vector<double> background(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            double phase = uniform(rng);
            double amplitude = std::sqrt(intensities[j]);
            for (std::size_t d = 0; d < m; ++d) {
                Complex e = amplitude * u(j, d);
                if (incoherent[j]) {
                    background[d] += std::norm(e);
                } else {
                    field[static_cast<Eigen::Index>(d)] += e * std::polar(1.0, phase);
                }
            }
        }
        for (std::size_t d = 0; d < m; ++d) {
            double mu = efficiencies[d] * (std::norm(field[static_cast<Eigen::Index>(d)]) + background[d]);
            click[d] = -std::expm1(-mu);
        }
        for (std::size_t mask = 0; mask < patterns; ++mask) {
            double p = 1.0;
            for (std::size_t d = 0; d < m; ++d) {
                p *= (mask >> d) & 1U ? click[d] : 1.0 - click[d];
            }
            sum[mask] += p;
            sum_sq[mask] += p * p;
        }
    }
    ClickStatistics out;
    out.detectors = m;
    out.mean.resize(patterns);
    out.standard_error.resize(patterns);
    const double n = static_cast<double>(n_phase_samples);
    for (std::size_t mask = 0; mask < patterns; ++mask) {
        double mean = sum[mask] / n;
        double var = std::max(0.0, sum_sq[mask] / n - mean * mean);
        out.mean[mask] = mean;
        out.standard_error[mask] = std::sqrt(var / (n - 1.0));
    }
    return out;
}

}  // namespace hinterf::oracle

namespace hinterf::oracle {

CMatrix random_unitary(std::size_t m, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(m);
    CMatrix z(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            z(a, b) = Complex(normal(rng), normal(rng));
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex d = r(k, k);
        q.col(k) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex{1.0, 0.0};
    }
    return q;
}

namespace {

CVector random_state(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(static_cast<Eigen::Index>(dim));
    for (auto &x : v) {
        x = Complex(normal(rng), normal(rng));
    }
    return v / v.norm();
}

std::vector<PhotonMixture> random_mixtures(std::size_t modes, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    std::vector<PhotonMixture> out;
    for (std::size_t x = 0; x < modes; ++x) {
        std::size_t terms = 1 + rng() % 2;
        std::vector<double> p(terms);
        double sum = 0.0;
        for (auto &v : p) {
            v = uniform(rng);
            sum += v;
        }
        std::vector<PhotonMixture::Term> ts;
        for (std::size_t t = 0; t < terms; ++t) {
            ts.push_back({p[t] / sum, InternalState(random_state(2, rng))});
        }
        out.emplace_back(std::move(ts));
    }
    return out;
}

std::vector<int> random_placement(std::size_t modes, int photons, std::mt19937_64 &rng) {
    std::vector<int> counts(modes, 0);
    for (int k = 0; k < photons; ++k) {
        counts[rng() % modes] += 1;
    }
    return counts;
}

SuiteReport run_suite(std::size_t cases, std::uint64_t seed, std::size_t threads, double tolerance,
                      const std::function<double(std::mt19937_64 &)> &one_case) {
    std::vector<double> deviation(cases, 0.0);
    parallel_for(cases, threads, [&](std::size_t i) {
        std::mt19937_64 rng(task_seed(seed, i));
        deviation[i] = one_case(rng);
    });
    SuiteReport report;
    report.cases = cases;
    report.tolerance = tolerance;
    for (double d : deviation) {
        report.max_deviation = std::max(report.max_deviation, d);
    }
    return report;
}

}  // namespace

SuiteReport engine_equivalence_suite(std::size_t cases, std::uint64_t seed, std::size_t threads) {
    return run_suite(cases, seed, threads, 1e-9, [](std::mt19937_64 &rng) {
        std::size_t m = 2 + rng() % 4;
        int n = 1 + static_cast<int>(rng() % 4);
        UnitaryNetwork u(random_unitary(m, rng));
        OccupationPattern r(random_placement(m, n, rng));
        OccupationPattern s(random_placement(m, n, rng));
        auto mixtures = random_mixtures(m, rng);
        CMatrix g;
        if (rng() % 2 == 0) {
            CMatrix vectors(2, static_cast<Eigen::Index>(m));
            for (std::size_t x = 0; x < m; ++x) {
                vectors.col(static_cast<Eigen::Index>(x)) = random_state(2, rng);
            }
            g = vectors.adjoint() * vectors;
            g.diagonal().setOnes();
        }
        double engine = mixed_event_probability(u, r, s, mixtures, g);
        double reference = oracle_event_probability(u, r, s, mixtures, g);
        return std::abs(engine - reference);
    });
}

SuiteReport loss_equivalence_suite(std::size_t cases, std::uint64_t seed, std::size_t threads) {
    return run_suite(cases, seed, threads, 1e-9, [](std::mt19937_64 &rng) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::size_t m = 2 + rng() % 3;
        int n = 1 + static_cast<int>(rng() % 3);
        bool binary = rng() % 2 == 0;
        UnitaryNetwork u(random_unitary(m, rng));
        OccupationPattern r(random_placement(m, n, rng));
        auto mixtures = random_mixtures(m, rng);
        std::vector<double> eff(m);
        for (auto &e : eff) {
            e = uniform(rng);
        }
        std::vector<int> outcome;
        if (binary) {
            for (std::size_t d = 0; d < m; ++d) {
                outcome.push_back(static_cast<int>(rng() % 2));
            }
        } else {
            outcome = random_placement(m, static_cast<int>(rng() % (n + 1)), rng);
        }
        DetectorLayout layout(u, DetectionConfig{std::nullopt, eff, binary});
        double engine = 0.0;
        for (const auto &s : all_patterns(m, n)) {
            double response = layout.response(outcome, s);
            if (response != 0.0) {
                engine += response * mixed_event_probability(u, r, s, mixtures);
            }
        }
        double reference = oracle_lossy_outcome_probability(u, r, mixtures, eff, outcome, binary);
        return std::abs(engine - reference);
    });
}

}  // namespace hinterf::oracle
