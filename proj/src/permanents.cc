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

#include "hinterf/permanents.h"

#include <algorithm>
#include <bit>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace hinterf {

namespace {

class Accumulator {
   public:
    explicit Accumulator(Summation mode) : kahan_(mode == Summation::kKahan) {}

    void add(Complex v) {
        if (!kahan_) {
            sum_ += v;
            return;
        }
        Complex y = v - carry_;
        Complex t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }

    Complex value() const { return sum_; }

   private:
    bool kahan_;
    Complex sum_{0.0, 0.0};
    Complex carry_{0.0, 0.0};
};

void require_square(const CMatrix &a, const char *who) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
    }
}

}  // namespace

Complex permanent(const CMatrix &a, Summation mode) {
    require_square(a, "permanent");
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return {1.0, 0.0};
    }
    if (n > 30) {
        throw std::invalid_argument("permanent: matrix too large");
    }
    // Ryser: perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} A_ij,
    // walking subsets in Gray-code order so each step toggles one column.
    std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex{0.0, 0.0});
    Accumulator total(mode);
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    int subset_size = 0;
    for (std::uint64_t step = 1; step < count; ++step) {
        int column = std::countr_zero(step);
        std::uint64_t bit = std::uint64_t{1} << column;
        gray ^= bit;
        double sign_toggle = (gray & bit) ? 1.0 : -1.0;
        subset_size += (gray & bit) ? 1 : -1;
        for (int i = 0; i < n; ++i) {
            row_sums[static_cast<std::size_t>(i)] += sign_toggle * a(i, column);
        }
        Complex prod{1.0, 0.0};
        for (const Complex &v : row_sums) {
            prod *= v;
        }
        total.add(((n - subset_size) % 2 == 0) ? prod : -prod);
    }
    return total.value();
}

Complex permanent_naive(const CMatrix &a) {
    require_square(a, "permanent_naive");
    const std::size_t n = static_cast<std::size_t>(a.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex total{0.0, 0.0};
    do {
        Complex prod{1.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            prod *= a(static_cast<Eigen::Index>(j), perm[j]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

std::vector<std::vector<int>> all_permutations(std::size_t n) {
    std::vector<std::vector<int>> out;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

const PermutationTable &permutation_table(std::size_t n) {
    if (n > kMaxTabulatedPhotons) {
        throw std::invalid_argument("permutation_table: n too large");
    }
    static std::once_flag flags[kMaxTabulatedPhotons + 1];
    static std::unique_ptr<PermutationTable> tables[kMaxTabulatedPhotons + 1];
    std::call_once(flags[n], [n] {
        auto t = std::make_unique<PermutationTable>();
        t->n = n;
        t->perms = all_permutations(n);
        std::size_t count = t->perms.size();
        t->compose.resize(count * count);
        // Lexicographic rank of a permutation gives its index in perms.
        auto rank = [n](const std::vector<int> &p) {
            std::size_t r = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t smaller = 0;
                for (std::size_t k = i + 1; k < n; ++k) {
                    if (p[k] < p[i]) {
                        ++smaller;
                    }
                }
                r = r * (n - i) + smaller;
            }
            return r;
        };
        std::vector<int> composed(n);
        for (std::size_t a = 0; a < count; ++a) {
            for (std::size_t b = 0; b < count; ++b) {
                for (std::size_t i = 0; i < n; ++i) {
                    composed[i] = t->perms[a][static_cast<std::size_t>(t->perms[b][i])];
                }
                t->compose[a * count + b] = static_cast<std::uint32_t>(rank(composed));
            }
        }
        tables[n] = std::move(t);
    });
    return *tables[n];
}

FactoredTensorPermanent::FactoredTensorPermanent(const CMatrix &m) : n_(static_cast<std::size_t>(m.rows())), m_(m) {
    require_square(m, "FactoredTensorPermanent");
    if (n_ > kMaxTabulatedPhotons) {
        return;
    }
    table_ = &permutation_table(n_);
    const std::size_t count = table_->perms.size();
    std::vector<Complex> a(count);
    for (std::size_t p = 0; p < count; ++p) {
        Complex prod{1.0, 0.0};
        for (std::size_t j = 0; j < n_; ++j) {
            prod *= m(table_->perms[p][j], static_cast<Eigen::Index>(j));
        }
        a[p] = prod;
    }
    correlations_.assign(count, Complex{0.0, 0.0});
    for (std::size_t pi = 0; pi < count; ++pi) {
        Complex acc{0.0, 0.0};
        for (std::size_t sigma = 0; sigma < count; ++sigma) {
            acc += a[sigma] * std::conj(a[table_->compose[pi * count + sigma]]);
        }
        correlations_[pi] = acc;
    }
}

Complex FactoredTensorPermanent::evaluate(const CMatrix &dist) const {
    if (static_cast<std::size_t>(dist.rows()) != n_ || static_cast<std::size_t>(dist.cols()) != n_) {
        throw std::invalid_argument("FactoredTensorPermanent: S must be n x n");
    }
    if (table_ == nullptr) {
        return tensor_permanent_complex(build_w_tensor(m_, dist));
    }
    Complex total{0.0, 0.0};
    const std::size_t count = table_->perms.size();
    for (std::size_t pi = 0; pi < count; ++pi) {
        if (correlations_[pi] == Complex{0.0, 0.0}) {
            continue;
        }
        Complex prod{1.0, 0.0};
        const auto &p = table_->perms[pi];
        for (std::size_t i = 0; i < n_; ++i) {
            prod *= dist(p[i], static_cast<Eigen::Index>(i));
        }
        total += correlations_[pi] * prod;
    }
    return total;
}

WTensor::WTensor(std::size_t n, std::vector<Complex> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_ * n_) {
        throw std::invalid_argument("WTensor: expected n^3 values");
    }
}

WTensor build_w_tensor(const CMatrix &m, const CMatrix &s) {
    require_square(m, "build_w_tensor");
    require_square(s, "build_w_tensor");
    if (m.rows() != s.rows()) {
        throw std::invalid_argument("build_w_tensor: M and S dimensions differ");
    }
    const std::size_t n = static_cast<std::size_t>(m.rows());
    std::vector<Complex> values(n * n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            for (std::size_t j = 0; j < n; ++j) {
                auto ki = static_cast<Eigen::Index>(k);
                auto li = static_cast<Eigen::Index>(l);
                auto ji = static_cast<Eigen::Index>(j);
                values[(k * n + l) * n + j] = m(ki, ji) * std::conj(m(li, ji)) * s(li, ki);
            }
        }
    }
    return WTensor(n, std::move(values));
}

namespace {

// Depth-first walk over partial (sigma, rho) assignments for output photon j.
void tensor_walk(
    const WTensor &w, std::size_t j, std::uint32_t used_sigma, std::uint32_t used_rho, Complex partial,
    Accumulator &acc) {
    const std::size_t n = w.n();
    if (j == n) {
        acc.add(partial);
        return;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (used_sigma & (1u << k)) {
            continue;
        }
        for (std::size_t l = 0; l < n; ++l) {
            if (used_rho & (1u << l)) {
                continue;
            }
            Complex v = w(k, l, j);
            if (v == Complex{0.0, 0.0}) {
                continue;
            }
            tensor_walk(w, j + 1, used_sigma | (1u << k), used_rho | (1u << l), partial * v, acc);
        }
    }
}

}  // namespace

Complex tensor_permanent_complex(const WTensor &w, Summation mode) {
    if (w.n() > 16) {
        throw std::invalid_argument("tensor_permanent: n too large");
    }
    Accumulator acc(mode);
    tensor_walk(w, 0, 0, 0, Complex{1.0, 0.0}, acc);
    return acc.value();
}

double tensor_permanent(const WTensor &w, Summation mode) { return tensor_permanent_complex(w, mode).real(); }

Complex tensor_permanent_naive(const WTensor &w) {
    auto perms = all_permutations(w.n());
    Complex total{0.0, 0.0};
    for (const auto &sigma : perms) {
        for (const auto &rho : perms) {
            Complex prod{1.0, 0.0};
            for (std::size_t j = 0; j < w.n(); ++j) {
                prod *= w(static_cast<std::size_t>(sigma[j]), static_cast<std::size_t>(rho[j]), j);
            }
            total += prod;
        }
    }
    return total;
}

double event_probability_pure(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s, const CMatrix &dist) {
    CMatrix m = effective_scattering_matrix(u, r, s);
    if (dist.rows() != m.rows() || dist.cols() != m.cols()) {
        throw std::invalid_argument("event_probability_pure: S must be n x n");
    }
    double norm = 1.0 / (r.factorial_product() * s.factorial_product());
    return norm * tensor_permanent(build_w_tensor(m, dist));
}

double input_normalization(const AssignmentList &d, const CMatrix &dist) {
    if (static_cast<std::size_t>(dist.rows()) != d.size() || dist.rows() != dist.cols()) {
        throw std::invalid_argument("input_normalization: S must be n x n");
    }
    double norm = 1.0;
    std::size_t start = 0;
    while (start < d.size()) {
        std::size_t end = start;
        while (end < d.size() && d[end] == d[start]) {
            ++end;
        }
        std::size_t len = end - start;
        if (len > 1) {
            auto b = static_cast<Eigen::Index>(start);
            auto l = static_cast<Eigen::Index>(len);
            norm *= permanent(dist.block(b, b, l, l)).real();
        }
        start = end;
    }
    return norm;
}

double event_probability_from_m(
    const CMatrix &m, const AssignmentList &input_modes, const OccupationPattern &s, const CMatrix &dist) {
    if (dist.rows() != m.rows() || dist.cols() != m.cols()) {
        throw std::invalid_argument("event_probability: S must be n x n");
    }
    double in_norm = input_normalization(input_modes, dist);
    if (!(in_norm > 0.0)) {
        throw std::invalid_argument("event_probability: input state has zero norm");
    }
    FactoredTensorPermanent kernel(m);
    return kernel.evaluate(dist).real() / (in_norm * s.factorial_product());
}

double event_probability(
    const UnitaryNetwork &u, const OccupationPattern &r, const OccupationPattern &s, const CMatrix &dist) {
    CMatrix m = effective_scattering_matrix(u, r, s);
    return event_probability_from_m(m, assignment_list(r), s, dist);
}

}  // namespace hinterf
