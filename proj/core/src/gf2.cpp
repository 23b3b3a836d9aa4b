// Copyright 2026 The stabex Authors
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

#include "stabex/gf2.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace stabex {

namespace {

std::uint64_t low_mask(int bits) {
    return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

void check_dims(int rows, int cols) {
    if (rows < 0 || cols < 0 || rows > kMaxGf2Dim || cols > kMaxGf2Dim) {
        throw std::invalid_argument("GF2 dimensions must lie in [0, 64]");
    }
}

}  // namespace

GF2Vector::GF2Vector(int len, std::uint64_t bits) : len_(len), bits_(bits) {
    if (len < 0 || len > kMaxGf2Dim) {
        throw std::invalid_argument("GF2Vector length must lie in [0, 64]");
    }
    if (bits & ~low_mask(len)) {
        throw std::invalid_argument("GF2Vector bits exceed its length");
    }
}

void GF2Vector::set(int i, bool v) {
    if (v) {
        bits_ |= std::uint64_t{1} << i;
    } else {
        bits_ &= ~(std::uint64_t{1} << i);
    }
}

GF2Matrix::GF2Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(static_cast<std::size_t>(rows), 0);
}

GF2Matrix GF2Matrix::identity(int n) {
    GF2Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m.data_[i] = std::uint64_t{1} << i;
    }
    return m;
}

GF2Matrix GF2Matrix::from_columns(int rows, std::span<const std::uint64_t> columns) {
    GF2Matrix m(rows, static_cast<int>(columns.size()));
    for (int j = 0; j < m.cols_; ++j) {
        if (columns[j] & ~low_mask(rows)) {
            throw std::invalid_argument("column word exceeds row count");
        }
        for (int i = 0; i < rows; ++i) {
            if ((columns[j] >> i) & 1U) {
                m.data_[i] |= std::uint64_t{1} << j;
            }
        }
    }
    return m;
}

void GF2Matrix::set(int i, int j, bool v) {
    if (v) {
        data_[i] |= std::uint64_t{1} << j;
    } else {
        data_[i] &= ~(std::uint64_t{1} << j);
    }
}

std::uint64_t GF2Matrix::column(int j) const {
    std::uint64_t col = 0;
    for (int i = 0; i < rows_; ++i) {
        col |= ((data_[i] >> j) & 1U) << i;
    }
    return col;
}

std::vector<std::uint64_t> GF2Matrix::columns() const {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(cols_));
    for (int j = 0; j < cols_; ++j) {
        out[j] = column(j);
    }
    return out;
}

std::uint64_t GF2Matrix::apply(std::uint64_t x) const {
    std::uint64_t out = 0;
    for (int i = 0; i < rows_; ++i) {
        out |= static_cast<std::uint64_t>(std::popcount(data_[i] & x) & 1) << i;
    }
    return out;
}

int rank(const GF2Matrix& m) {
    std::vector<std::uint64_t> rows;
    rows.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        rows.push_back(m.row(i));
    }
    int r = 0;
    for (int col = 0; col < m.cols() && r < m.rows(); ++col) {
        const std::uint64_t bit = std::uint64_t{1} << col;
        int pivot = -1;
        for (int i = r; i < m.rows(); ++i) {
            if (rows[i] & bit) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) {
            continue;
        }
        std::swap(rows[r], rows[pivot]);
        for (int i = 0; i < m.rows(); ++i) {
            if (i != r && (rows[i] & bit)) {
                rows[i] ^= rows[r];
            }
        }
        ++r;
    }
    return r;
}

bool is_rcef(const GF2Matrix& m) {
    const auto cols = m.columns();
    std::uint64_t pivots = 0;
    int last = -1;
    for (std::uint64_t c : cols) {
        if (c == 0) {
            return false;
        }
        const int p = std::countr_zero(c);
        if (p <= last) {
            return false;
        }
        last = p;
        pivots |= std::uint64_t{1} << p;
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const std::uint64_t own = std::uint64_t{1} << std::countr_zero(cols[j]);
        if (cols[j] & (pivots & ~own)) {
            return false;
        }
    }
    return true;
}

std::uint64_t pivot_mask(const GF2Matrix& m) {
    if (!is_rcef(m)) {
        throw std::invalid_argument("matrix is not in reduced column echelon form");
    }
    std::uint64_t mask = 0;
    for (std::uint64_t c : m.columns()) {
        mask |= std::uint64_t{1} << std::countr_zero(c);
    }
    return mask;
}

BigInt qbinom(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        throw std::invalid_argument("qbinom requires 0 <= k <= n");
    }
    BigInt num = 1;
    BigInt den = 1;
    for (int i = 0; i < k; ++i) {
        num *= (BigInt(1) << (n - i)) - 1;
        den *= (BigInt(1) << (k - i)) - 1;
    }
    return num / den;
}

RcefEnumerator::RcefEnumerator(int n, int k) : n_(n), k_(k) {
    if (k < 1 || k > n || n > kMaxGf2Dim) {
        throw std::invalid_argument("enumerate_rcef requires 0 < k <= n <= 64, got n=" +
                                    std::to_string(n) + " k=" + std::to_string(k));
    }
    for (int j = 0; j < k_; ++j) {
        pivots_[j] = j;
    }
    load_pivot_set();
}

void RcefEnumerator::load_pivot_set() {
    std::uint64_t pivot_rows = 0;
    for (int j = 0; j < k_; ++j) {
        pivot_rows |= std::uint64_t{1} << pivots_[j];
    }
    free_slots_.clear();
    for (int j = 0; j < k_; ++j) {
        for (int row = pivots_[j] + 1; row < n_; ++row) {
            if (!((pivot_rows >> row) & 1U)) {
                free_slots_.emplace_back(j, row);
            }
        }
    }
    if (free_slots_.size() >= 64) {
        throw std::length_error("too many free RCEF entries to enumerate");
    }
    free_index_ = 0;
    free_count_ = std::uint64_t{1} << free_slots_.size();
}

bool RcefEnumerator::advance_pivot_set() {
    int j = k_ - 1;
    while (j >= 0 && pivots_[j] == n_ - k_ + j) {
        --j;
    }
    if (j < 0) {
        return false;
    }
    ++pivots_[j];
    for (int i = j + 1; i < k_; ++i) {
        pivots_[i] = pivots_[i - 1] + 1;
    }
    load_pivot_set();
    return true;
}

bool RcefEnumerator::next_columns(std::span<std::uint64_t> columns) {
    if (done_) {
        return false;
    }
    if (free_index_ == free_count_) {
        if (!advance_pivot_set()) {
            done_ = true;
            return false;
        }
    }
    for (int j = 0; j < k_; ++j) {
        columns[j] = std::uint64_t{1} << pivots_[j];
    }
    for (std::size_t f = 0; f < free_slots_.size(); ++f) {
        if ((free_index_ >> f) & 1U) {
            columns[free_slots_[f].first] |= std::uint64_t{1} << free_slots_[f].second;
        }
    }
    ++free_index_;
    return true;
}

std::optional<GF2Matrix> RcefEnumerator::next() {
    std::array<std::uint64_t, kMaxGf2Dim> cols{};
    if (!next_columns(std::span(cols.data(), static_cast<std::size_t>(k_)))) {
        return std::nullopt;
    }
    return GF2Matrix::from_columns(n_, std::span(cols.data(), static_cast<std::size_t>(k_)));
}

std::vector<GF2Matrix> enumerate_rcef(int n, int k) {
    RcefEnumerator it(n, k);
    std::vector<GF2Matrix> out;
    while (auto m = it.next()) {
        out.push_back(std::move(*m));
    }
    return out;
}

std::uint64_t quotient_rep_bits(int n, std::uint64_t pivot_rows, std::uint64_t index) {
    std::uint64_t out = 0;
    int src = 0;
    for (int row = 0; row < n; ++row) {
        if ((pivot_rows >> row) & 1U) {
            continue;
        }
        out |= ((index >> src) & 1U) << row;
        ++src;
    }
    return out;
}

std::uint64_t quotient_rep_index(int n, std::uint64_t pivot_rows, std::uint64_t rep) {
    std::uint64_t out = 0;
    int dst = 0;
    for (int row = 0; row < n; ++row) {
        if ((pivot_rows >> row) & 1U) {
            continue;
        }
        out |= ((rep >> row) & 1U) << dst;
        ++dst;
    }
    return out;
}

std::vector<GF2Vector> quotient_reps(const GF2Matrix& r) {
    const std::uint64_t pivots = pivot_mask(r);
    const int n = r.rows();
    const int free = n - r.cols();
    if (free >= 64) {
        throw std::length_error("too many coset representatives");
    }
    std::vector<GF2Vector> out;
    out.reserve(std::size_t{1} << free);
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << free); ++idx) {
        out.emplace_back(n, quotient_rep_bits(n, pivots, idx));
    }
    return out;
}

}  // namespace stabex
