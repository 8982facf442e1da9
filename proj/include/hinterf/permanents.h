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

#ifndef HINTERF_PERMANENTS_H
#define HINTERF_PERMANENTS_H

#include <cstdint>
#include <vector>

#include "hinterf/network.h"

namespace hinterf {

enum class Summation {
    kPlain,
    kKahan,
};

/// Ryser's formula with Gray-code subset iteration, O(2^n n).
Complex permanent(const CMatrix &a, Summation mode = Summation::kPlain);

/// Sum over all n! permutations. Reference for cross-checking.
Complex permanent_naive(const CMatrix &a);

/// W[k][l][j] = M[k][j] conj(M[l][j]) S[l][k], stored flat.
class WTensor {
   public:
    WTensor(std::size_t n, std::vector<Complex> values);

    std::size_t n() const { return n_; }
    Complex operator()(std::size_t k, std::size_t l, std::size_t j) const { return values_[(k * n_ + l) * n_ + j]; }

   private:
    std::size_t n_;
    std::vector<Complex> values_;
};

WTensor build_w_tensor(const CMatrix &m, const CMatrix &s);

/// sum_{sigma, rho} prod_j W[sigma_j][rho_j][j], full complex accumulation.
Complex tensor_permanent_complex(const WTensor &w, Summation mode = Summation::kPlain);

/// Real part of tensor_permanent_complex. The imaginary part is rounding noise
/// for any W built from a hermitian S.
double tensor_permanent(const WTensor &w, Summation mode = Summation::kPlain);

/// Literal double loop over (sigma, rho) with no factoring. Reference only.
Complex tensor_permanent_naive(const WTensor &w);

/// Event probability with the textbook normalization 1 / prod_j (s_j! r_j!).
/// Valid when photons sharing an input mode are identical (S is built per mode).
double event_probability_pure(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s, const CMatrix &dist);

/// Event probability for photons with arbitrary internal states, including
/// non-identical photons sharing an input mode. The input normalization is the
/// product over input modes of perm(S restricted to that mode's photons); it
/// reduces to prod r_j! when those photons are identical.
double event_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s, const CMatrix &dist);

/// prod over input modes of perm(S restricted to the photons in that mode).
/// `input_modes` is sorted, so each mode's photons are contiguous.
double input_normalization(const AssignmentList &input_modes, const CMatrix &dist);

/// Same as event_probability for a precomputed effective scattering matrix.
/// `input_modes` is the assignment list of r.
double event_probability_from_m(
    const CMatrix &m, const AssignmentList &input_modes, const OccupationPattern &s, const CMatrix &dist);

/// All n! permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> all_permutations(std::size_t n);

/// Permutations of n elements with a precomputed composition table.
struct PermutationTable {
    std::size_t n = 0;
    std::vector<std::vector<int>> perms;
    /// compose[p * perms.size() + q] is the index of p o q, i.e. i -> p[q[i]].
    std::vector<std::uint32_t> compose;
};

/// Shared table for small n (n <= kMaxTabulatedPhotons).
const PermutationTable &permutation_table(std::size_t n);

inline constexpr std::size_t kMaxTabulatedPhotons = 6;

/// Tensor permanent of W(M, S) for one M and many S.
///
/// With a_sigma = prod_j M[sigma_j][j] the double sum factors as
/// sum_pi c_pi prod_i S[pi(i)][i] where c_pi = sum_sigma a_sigma conj(a_{pi o sigma}),
/// so each S costs O(n! n) once c is known.
class FactoredTensorPermanent {
   public:
    explicit FactoredTensorPermanent(const CMatrix &m);

    std::size_t n() const { return n_; }
    Complex evaluate(const CMatrix &dist) const;

   private:
    std::size_t n_;
    CMatrix m_;
    const PermutationTable *table_ = nullptr;
    std::vector<Complex> correlations_;
};

}  // namespace hinterf

#endif
