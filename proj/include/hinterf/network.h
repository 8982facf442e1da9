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

#ifndef HINTERF_NETWORK_H
#define HINTERF_NETWORK_H

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hinterf {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Residual tolerance used when checking U^dagger U = I.
inline constexpr double kUnitarityTolerance = 1e-10;

/// Lossless linear-optical network on `dim()` spatial modes.
///
/// Entry (in, out) is the amplitude for a photon entering mode `in` to leave
/// through mode `out`. Rows are inputs, columns are outputs; the effective
/// scattering matrix of a (r, s) event is the row/column selection of this
/// matrix. Indices are 0-based in code and 1-based in serialized formats.
class UnitaryNetwork {
   public:
    /// Validates unitarity; throws std::invalid_argument on failure.
    explicit UnitaryNetwork(CMatrix entries, double tolerance = kUnitarityTolerance);

    static UnitaryNetwork identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix &matrix() const { return entries_; }
    Complex operator()(std::size_t in, std::size_t out) const { return entries_(in, out); }

    /// max |(U^dagger U - I)_{jk}|.
    double unitarity_residual() const;

   private:
    CMatrix entries_;
};

/// Balanced three-port splitter, entries exp(i 2 pi j k / 3) / sqrt(3).
UnitaryNetwork make_tritter();

/// Balanced two-port splitter, (1/sqrt2) [[1, 1], [1, -1]].
UnitaryNetwork make_balanced_splitter();

/// Photons traverse `first`, then `second` acting on `target_modes` of
/// `first`'s outputs. If a target index is >= first.dim(), `first` is padded
/// with identity modes up to that size. `second.dim()` must equal the number
/// of targets. Throws std::out_of_range / std::invalid_argument.
UnitaryNetwork compose(
    const UnitaryNetwork &first, const UnitaryNetwork &second, std::span<const std::size_t> target_modes);

/// Block-diagonal direct sum a (+) b.
UnitaryNetwork direct_sum(const UnitaryNetwork &a, const UnitaryNetwork &b);

/// Photon count per mode (the r or s vector).
struct OccupationPattern {
    std::vector<int> counts;

    OccupationPattern() = default;
    explicit OccupationPattern(std::vector<int> c);

    std::size_t modes() const { return counts.size(); }
    int total() const;
    int operator[](std::size_t mode) const { return counts[mode]; }
    bool operator==(const OccupationPattern &other) const = default;
    auto operator<=>(const OccupationPattern &other) const = default;

    /// Product of factorials of the counts.
    double factorial_product() const;
    /// e.g. "(2,1,0)".
    std::string str() const;
};

/// Mode of each photon, sorted non-decreasing (the d vector), 0-based.
struct AssignmentList {
    std::vector<std::size_t> modes;

    std::size_t size() const { return modes.size(); }
    std::size_t operator[](std::size_t photon) const { return modes[photon]; }
    bool operator==(const AssignmentList &other) const = default;
};

AssignmentList assignment_list(const OccupationPattern &r);

/// Inverse of assignment_list for a network with `num_modes` modes.
OccupationPattern occupation_from_assignment(const AssignmentList &d, std::size_t num_modes);

/// M[j][k] = U[d_j(r)][d_k(s)]. Throws if r and s carry different photon numbers
/// or do not match the network dimension.
CMatrix effective_scattering_matrix(const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s);

/// Every pattern of `photons` photons over `modes` modes, in lexicographically
/// descending order, e.g. (2,0), (1,1), (0,2).
std::vector<OccupationPattern> all_patterns(std::size_t modes, int photons);

}  // namespace hinterf

#endif
