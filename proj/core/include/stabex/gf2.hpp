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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace stabex {

using BigInt = boost::multiprecision::cpp_int;
__extension__ typedef unsigned __int128 u128;

inline constexpr int kMaxGf2Dim = 64;

/// A vector over F2. Coordinate i is bit i of the packed word, so the vector
/// (x_0, ..., x_{len-1}) is identified with the integer sum x_i 2^i.
class GF2Vector {
   public:
    GF2Vector() = default;
    explicit GF2Vector(int len, std::uint64_t bits = 0);

    int len() const { return len_; }
    std::uint64_t bits() const { return bits_; }
    bool get(int i) const { return (bits_ >> i) & 1U; }
    void set(int i, bool v);

    bool operator==(const GF2Vector&) const = default;

   private:
    int len_ = 0;
    std::uint64_t bits_ = 0;
};

/// Dense F2 matrix with at most 64 rows and 64 columns. Rows are stored as
/// machine words; bit j of row i is entry (i, j).
class GF2Matrix {
   public:
    GF2Matrix() = default;
    GF2Matrix(int rows, int cols);

    static GF2Matrix identity(int n);
    /// Builds a rows x cols matrix from column words (bit i of columns[j] is
    /// entry (i, j)).
    static GF2Matrix from_columns(int rows, std::span<const std::uint64_t> columns);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool get(int i, int j) const { return (data_[i] >> j) & 1U; }
    void set(int i, int j, bool v);
    std::uint64_t row(int i) const { return data_[i]; }
    std::uint64_t column(int j) const;
    std::vector<std::uint64_t> columns() const;

    /// Computes M x for x packed into a word (bit j = x_j); result bit i = row i.
    std::uint64_t apply(std::uint64_t x) const;

    bool operator==(const GF2Matrix&) const = default;

   private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint64_t> data_;
};

int rank(const GF2Matrix& m);

/// Reduced column echelon form: every column is nonzero, the pivot of a column
/// is its lowest-index nonzero row, pivots strictly increase left to right, and
/// each pivot row is zero in every other column.
bool is_rcef(const GF2Matrix& m);

/// Bitmask of the pivot rows of an RCEF matrix. Throws std::invalid_argument
/// when m is not in RCEF.
std::uint64_t pivot_mask(const GF2Matrix& m);

/// Gaussian binomial coefficient [n choose k]_2, exact.
BigInt qbinom(int n, int k);

/// Streams every n x k RCEF matrix of rank k, ordered lexicographically by the
/// pivot-row set and then by the free entries read as an integer.
class RcefEnumerator {
   public:
    RcefEnumerator(int n, int k);

    /// Next matrix in order, or nullopt once exhausted.
    std::optional<GF2Matrix> next();

    /// Same as next() but writes the column words of the matrix into `columns`
    /// (size k). Returns false once exhausted.
    bool next_columns(std::span<std::uint64_t> columns);

    int n() const { return n_; }
    int k() const { return k_; }

   private:
    void load_pivot_set();
    bool advance_pivot_set();

    int n_;
    int k_;
    std::array<int, kMaxGf2Dim> pivots_{};
    // (column, row) of each free entry, in the order used to number them.
    std::vector<std::pair<int, int>> free_slots_;
    std::uint64_t free_index_ = 0;
    std::uint64_t free_count_ = 0;
    bool done_ = false;
};

std::vector<GF2Matrix> enumerate_rcef(int n, int k);

/// Places the bits of `index` (lowest first) into the rows outside
/// `pivot_rows`, ascending. This is the canonical coset representative number
/// `index` for a subspace with those pivot rows.
std::uint64_t quotient_rep_bits(int n, std::uint64_t pivot_rows, std::uint64_t index);

/// Inverse of quotient_rep_bits for a canonical representative.
std::uint64_t quotient_rep_index(int n, std::uint64_t pivot_rows, std::uint64_t rep);

/// The 2^(n-k) canonical representatives of F2^n / Im(R): zero at every pivot
/// row of R, all assignments on the remaining rows.
std::vector<GF2Vector> quotient_reps(const GF2Matrix& r);

}  // namespace stabex
