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

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

using namespace stabex;

namespace {

// Span of the columns as a sorted set of words.
std::set<std::uint64_t> span_of(const GF2Matrix& m) {
    std::set<std::uint64_t> out;
    const auto cols = m.columns();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << cols.size()); ++x) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if ((x >> j) & 1) v ^= cols[j];
        }
        out.insert(v);
    }
    return out;
}

// Number of k-dimensional subspaces of F2^n by brute force over column sets.
std::size_t subspaces_brute(int n, int k) {
    std::set<std::set<std::uint64_t>> seen;
    const std::uint64_t vectors = std::uint64_t{1} << n;
    std::vector<std::uint64_t> cols(k);
    std::function<void(int)> rec = [&](int j) {
        if (j == k) {
            GF2Matrix m = GF2Matrix::from_columns(n, cols);
            if (rank(m) == k) seen.insert(span_of(m));
            return;
        }
        for (std::uint64_t v = 1; v < vectors; ++v) {
            cols[j] = v;
            rec(j + 1);
        }
    };
    rec(0);
    return seen.size();
}

}  // namespace

TEST(GF2Vector, BitsAreLittleEndian) {
    GF2Vector v(5);
    v.set(0, true);
    v.set(3, true);
    EXPECT_EQ(v.bits(), 0b01001u);
    EXPECT_TRUE(v.get(3));
    v.set(3, false);
    EXPECT_EQ(v.bits(), 1u);
}

TEST(GF2Matrix, ApplyAndColumns) {
    const std::vector<std::uint64_t> cols = {0b101, 0b011};
    const GF2Matrix m = GF2Matrix::from_columns(3, cols);
    EXPECT_EQ(m.rows(), 3);
    EXPECT_EQ(m.cols(), 2);
    EXPECT_TRUE(m.get(0, 0));
    EXPECT_FALSE(m.get(1, 0));
    EXPECT_EQ(m.column(1), 0b011u);
    EXPECT_EQ(m.apply(0b11), 0b110u);
    EXPECT_EQ(m.columns(), cols);
}

TEST(GF2Matrix, Rank) {
    EXPECT_EQ(rank(GF2Matrix::identity(7)), 7);
    const std::vector<std::uint64_t> dep = {0b011, 0b110, 0b101};
    EXPECT_EQ(rank(GF2Matrix::from_columns(3, dep)), 2);
    EXPECT_EQ(rank(GF2Matrix(4, 3)), 0);
}

TEST(Rcef, Predicate) {
    const std::vector<std::uint64_t> good = {0b0101, 0b1010};
    EXPECT_TRUE(is_rcef(GF2Matrix::from_columns(4, good)));
    EXPECT_EQ(pivot_mask(GF2Matrix::from_columns(4, good)), 0b0011u);
    // Pivot row 0 is not cleared in column 1.
    const std::vector<std::uint64_t> uncleared = {0b0001, 0b0011};
    EXPECT_FALSE(is_rcef(GF2Matrix::from_columns(4, uncleared)));
    // Pivots out of order.
    const std::vector<std::uint64_t> order = {0b0010, 0b0001};
    EXPECT_FALSE(is_rcef(GF2Matrix::from_columns(4, order)));
    EXPECT_THROW(pivot_mask(GF2Matrix::from_columns(4, order)), std::invalid_argument);
}

TEST(Qbinom, KnownValues) {
    EXPECT_EQ(qbinom(4, 2), 35);
    EXPECT_EQ(qbinom(5, 2), 155);
    EXPECT_EQ(qbinom(6, 3), 1395);
    EXPECT_EQ(qbinom(7, 0), 1);
    EXPECT_EQ(qbinom(7, 7), 1);
    EXPECT_EQ(qbinom(2, 1), 3);
    EXPECT_THROW(qbinom(3, 4), std::invalid_argument);
}

TEST(Qbinom, MatchesSubspaceBruteForce) {
    for (int n = 1; n <= 4; ++n) {
        for (int k = 0; k <= n; ++k) {
            EXPECT_EQ(qbinom(n, k), BigInt(subspaces_brute(n, k))) << n << "," << k;
        }
    }
}

TEST(Rcef, EnumerationIsCompleteAndCanonical) {
    for (int n = 1; n <= 6; ++n) {
        for (int k = 1; k <= n; ++k) {
            const auto all = enumerate_rcef(n, k);
            ASSERT_EQ(BigInt(all.size()), qbinom(n, k)) << n << "," << k;
            std::set<std::set<std::uint64_t>> spans;
            for (const GF2Matrix& m : all) {
                EXPECT_TRUE(is_rcef(m));
                EXPECT_EQ(rank(m), k);
                spans.insert(span_of(m));
            }
            EXPECT_EQ(spans.size(), all.size());
        }
    }
}

TEST(Rcef, SmallCasesAndBadArguments) {
    EXPECT_EQ(enumerate_rcef(2, 2), std::vector<GF2Matrix>{GF2Matrix::identity(2)});
    EXPECT_EQ(enumerate_rcef(2, 1).size(), 3u);
    EXPECT_EQ(enumerate_rcef(4, 2).size(), 35u);
    EXPECT_THROW(enumerate_rcef(3, 0), std::invalid_argument);
    EXPECT_THROW(enumerate_rcef(2, 3), std::invalid_argument);
}

TEST(Rcef, OrderIsPivotSetThenFreeEntries) {
    const auto all = enumerate_rcef(3, 1);
    std::vector<std::uint64_t> cols;
    for (const auto& m : all) cols.push_back(m.column(0));
    // Pivot {0}: free rows 1, 2; then pivot {1}: free row 2; then pivot {2}.
    const std::vector<std::uint64_t> expected = {0b001, 0b011, 0b101, 0b111, 0b010, 0b110, 0b100};
    EXPECT_EQ(cols, expected);
}

TEST(Rcef, NextColumnsAgreesWithNext) {
    RcefEnumerator a(5, 2);
    RcefEnumerator b(5, 2);
    std::array<std::uint64_t, 2> cols{};
    while (auto m = a.next()) {
        ASSERT_TRUE(b.next_columns(cols));
        EXPECT_EQ(m->column(0), cols[0]);
        EXPECT_EQ(m->column(1), cols[1]);
    }
    EXPECT_FALSE(b.next_columns(cols));
}

TEST(QuotientReps, PartitionTheSpace) {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 6; ++n) {
        for (int k = 1; k <= n; ++k) {
            const auto all = enumerate_rcef(n, k);
            const GF2Matrix& r = all[rng() % all.size()];
            const auto span = span_of(r);
            const auto reps = quotient_reps(r);
            ASSERT_EQ(reps.size(), std::size_t{1} << (n - k));
            std::set<std::uint64_t> covered;
            for (std::size_t i = 0; i < reps.size(); ++i) {
                EXPECT_EQ(reps[i].bits() & pivot_mask(r), 0u);
                EXPECT_EQ(quotient_rep_index(n, pivot_mask(r), reps[i].bits()), i);
                for (std::uint64_t v : span) covered.insert(v ^ reps[i].bits());
            }
            EXPECT_EQ(covered.size(), std::size_t{1} << n);
        }
    }
}
