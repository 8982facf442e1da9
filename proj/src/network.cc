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

#include "hinterf/network.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hinterf {

UnitaryNetwork::UnitaryNetwork(CMatrix entries, double tolerance) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("UnitaryNetwork: matrix must be square with dim >= 1");
    }
    double residual = unitarity_residual();
    if (!(residual < tolerance)) {
        std::ostringstream msg;
        msg << "UnitaryNetwork: not unitary (residual " << residual << ")";
        throw std::invalid_argument(msg.str());
    }
}

UnitaryNetwork UnitaryNetwork::identity(std::size_t dim) {
    if (dim < 1) {
        throw std::invalid_argument("UnitaryNetwork::identity: dim must be >= 1");
    }
    return UnitaryNetwork(CMatrix::Identity(dim, dim));
}

double UnitaryNetwork::unitarity_residual() const {
    CMatrix g = entries_.adjoint() * entries_;
    g -= CMatrix::Identity(g.rows(), g.cols());
    return g.cwiseAbs().maxCoeff();
}

UnitaryNetwork make_tritter() {
    CMatrix u(3, 3);
    double scale = 1.0 / std::sqrt(3.0);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            // Reduce the exponent mod 3 so entries hit the exact cube roots.
            double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % 3) / 3.0;
            u(j, k) = std::polar(scale, angle);
        }
    }
    return UnitaryNetwork(std::move(u));
}

UnitaryNetwork make_balanced_splitter() {
    CMatrix u(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return UnitaryNetwork(std::move(u));
}

UnitaryNetwork compose(
    const UnitaryNetwork &first, const UnitaryNetwork &second, std::span<const std::size_t> target_modes) {
    if (target_modes.size() != second.dim()) {
        throw std::invalid_argument("compose: number of target modes must equal inner network dimension");
    }
    std::vector<std::size_t> sorted(target_modes.begin(), target_modes.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("compose: target modes must be distinct");
    }
    // Targets may reach past first.dim() by at most the number of new modes needed
    // to host them; anything further would leave unexplained gaps.
    std::size_t dim = first.dim();
    std::size_t beyond = 0;
    for (std::size_t t : sorted) {
        if (t >= dim) {
            ++beyond;
        }
    }
    std::size_t result_dim = std::max(dim, sorted.back() + 1);
    if (result_dim - dim > beyond) {
        throw std::out_of_range("compose: target mode index out of range");
    }

    CMatrix a = CMatrix::Identity(result_dim, result_dim);
    a.topLeftCorner(dim, dim) = first.matrix();
    CMatrix b = CMatrix::Identity(result_dim, result_dim);
    for (std::size_t j = 0; j < target_modes.size(); ++j) {
        for (std::size_t k = 0; k < target_modes.size(); ++k) {
            b(target_modes[j], target_modes[k]) = second(j, k);
        }
    }
    return UnitaryNetwork(a * b);
}

UnitaryNetwork direct_sum(const UnitaryNetwork &a, const UnitaryNetwork &b) {
    std::size_t n = a.dim() + b.dim();
    CMatrix m = CMatrix::Zero(n, n);
    m.topLeftCorner(a.dim(), a.dim()) = a.matrix();
    m.bottomRightCorner(b.dim(), b.dim()) = b.matrix();
    return UnitaryNetwork(std::move(m));
}

OccupationPattern::OccupationPattern(std::vector<int> c) : counts(std::move(c)) {
    for (int v : counts) {
        if (v < 0) {
            throw std::invalid_argument("OccupationPattern: negative count");
        }
    }
}

int OccupationPattern::total() const {
    int t = 0;
    for (int v : counts) {
        t += v;
    }
    return t;
}

double OccupationPattern::factorial_product() const {
    double p = 1.0;
    for (int v : counts) {
        p *= std::tgamma(static_cast<double>(v) + 1.0);
    }
    return p;
}

std::string OccupationPattern::str() const {
    std::string out = "(";
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (k) {
            out += ",";
        }
        out += std::to_string(counts[k]);
    }
    out += ")";
    return out;
}

AssignmentList assignment_list(const OccupationPattern &r) {
    AssignmentList d;
    d.modes.reserve(static_cast<std::size_t>(r.total()));
    for (std::size_t mode = 0; mode < r.modes(); ++mode) {
        for (int c = 0; c < r[mode]; ++c) {
            d.modes.push_back(mode);
        }
    }
    return d;
}

OccupationPattern occupation_from_assignment(const AssignmentList &d, std::size_t num_modes) {
    std::vector<int> counts(num_modes, 0);
    for (std::size_t mode : d.modes) {
        if (mode >= num_modes) {
            throw std::out_of_range("occupation_from_assignment: mode index out of range");
        }
        ++counts[mode];
    }
    return OccupationPattern(std::move(counts));
}

CMatrix effective_scattering_matrix(const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s) {
    if (r.modes() != u.dim() || s.modes() != u.dim()) {
        throw std::invalid_argument("effective_scattering_matrix: pattern length differs from network dimension");
    }
    if (r.total() != s.total()) {
        throw std::invalid_argument("effective_scattering_matrix: photon-number mismatch between r and s");
    }
    AssignmentList dr = assignment_list(r);
    AssignmentList ds = assignment_list(s);
    std::size_t n = dr.size();
    CMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            m(j, k) = u(dr[j], ds[k]);
        }
    }
    return m;
}

namespace {

void fill_patterns(
    std::size_t mode, int remaining, std::vector<int> &current, std::vector<OccupationPattern> &out) {
    if (mode + 1 == current.size()) {
        current[mode] = remaining;
        out.emplace_back(current);
        return;
    }
    for (int c = remaining; c >= 0; --c) {
        current[mode] = c;
        fill_patterns(mode + 1, remaining - c, current, out);
    }
}

}  // namespace

std::vector<OccupationPattern> all_patterns(std::size_t modes, int photons) {
    if (modes == 0 || photons < 0) {
        throw std::invalid_argument("all_patterns: need modes >= 1 and photons >= 0");
    }
    std::vector<OccupationPattern> out;
    std::vector<int> current(modes, 0);
    fill_patterns(0, photons, current, out);
    return out;
}

}  // namespace hinterf
