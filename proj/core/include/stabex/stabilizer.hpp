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
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabex/gf2.hpp"

namespace stabex {

using cplx = std::complex<double>;

/// Largest register for which stabilizer states are enumerated or synthesized.
inline constexpr int kMaxQubits = 10;

/// Norm tolerance applied to state vectors that must be normalized.
inline constexpr double kNormTolerance = 1e-9;

/// Dense amplitudes of an n-qubit pure state. Amplitude i belongs to the basis
/// state whose bit j is qubit j (little endian).
struct StateVector {
    int n = 0;
    std::vector<cplx> amps;

    StateVector() = default;
    StateVector(int qubits, std::vector<cplx> amplitudes);
    static StateVector zero(int qubits);

    std::size_t dim() const { return amps.size(); }
    double norm() const;
    double max_abs_imag() const;
    bool is_normalized(double tol = kNormTolerance) const;
};

/// One stabilizer state named by (k, Q, c, R, t):
///
///   2^{-k/2} sum_x (-1)^{x^T Q x} i^{c^T x} |R x + t>
///
/// with Q upper triangular (k x k), R an n x k RCEF matrix of rank k and t the
/// canonical coset representative (zero on every pivot row of R). The phase is
/// evaluated with integer arithmetic: x^T Q x is taken mod 2 and c^T x is the
/// integer count of positions where both bits are set, taken mod 4.
///
/// Storage is packed: `q` holds the upper triangle row by row (Q_00, Q_01, ...,
/// Q_0(k-1), Q_11, ...), bit i of `c` is c_i, `r[j]` is column j of R and bit i
/// of `t` is t_i.
struct CanonicalForm {
    int n = 0;
    int k = 0;
    std::uint64_t q = 0;
    std::uint32_t c = 0;
    std::array<std::uint16_t, kMaxQubits> r{};
    std::uint32_t t = 0;

    GF2Matrix q_matrix() const;
    GF2Vector c_vector() const;
    GF2Matrix r_matrix() const;
    GF2Vector t_vector() const;
    std::uint64_t pivot_rows() const;
    bool is_real() const { return c == 0; }

    /// Validated construction from matrix components. k is R.cols().
    static CanonicalForm from_parts(int n, const GF2Matrix& q, const GF2Vector& c,
                                    const GF2Matrix& r, const GF2Vector& t);
    static CanonicalForm basis_state(int n, std::uint32_t t);

    bool operator==(const CanonicalForm&) const = default;
};

constexpr int q_bit_count(int k) { return k * (k + 1) / 2; }
/// Offset of Q_ii in the packed upper triangle; row i occupies the next k - i bits.
constexpr int q_row_offset(int k, int i) { return i * k - i * (i - 1) / 2; }

/// Throws std::invalid_argument describing the first broken invariant.
void validate(const CanonicalForm& f);

/// Row masks of Q over the bit positions of x: bit j of the result for row i is
/// Q_ij (j >= i).
std::array<std::uint32_t, kMaxQubits> q_row_masks(const CanonicalForm& f);

/// (-1)^{x^T Q x} i^{c^T x} as an exponent of i in [0, 4).
int phase_exponent(const CanonicalForm& f, std::uint32_t x);

StateVector synthesize(const CanonicalForm& f);

/// <phi_f | b> by direct summation over the 2^k support points.
cplx inner_product(const CanonicalForm& f, std::span<const cplx> b);

struct StateCounts {
    BigInt total;
    std::vector<BigInt> per_k;
};

/// Number of n-qubit stabilizer states, total and split by k.
StateCounts count_states(int n);
/// Number of forms with c = 0 (including every k = 0 form).
BigInt count_real_forms(int n);

/// Dense bijection between the forms of one register size and the integers
/// [0, |S_n|), in enumeration order: ascending k, then R in RcefEnumerator
/// order, then t, then Q, then c.
class FormIndex {
   public:
    explicit FormIndex(int n);

    int n() const { return n_; }
    u128 size() const { return total_; }
    u128 rank(const CanonicalForm& f) const;
    CanonicalForm unrank(u128 index) const;

   private:
    struct PivotSet {
        std::uint32_t mask = 0;
        int k = 0;
        u128 offset = 0;
        u128 count = 0;
        std::vector<std::pair<int, int>> free_slots;
    };
    int n_;
    u128 total_ = 0;
    std::vector<PivotSet> sets_;       // in enumeration order
    std::vector<int> set_of_mask_;     // pivot mask -> position in sets_
};

/// Strict weak order matching enumeration order; used for deterministic
/// tie-breaking.
bool form_less(const CanonicalForm& a, const CanonicalForm& b);

/// Lazily streams every form (or only the c = 0 and k = 0 forms when
/// real_only) in enumeration order.
class FormEnumerator {
   public:
    FormEnumerator(int n, bool real_only);

    bool next(CanonicalForm& out);
    std::optional<CanonicalForm> next();

   private:
    bool start_k(int k);
    bool next_r();

    int n_;
    bool real_only_;
    CanonicalForm cur_;
    std::optional<RcefEnumerator> rcef_;
    std::uint64_t pivots_ = 0;
    std::uint32_t t_index_ = 0;
    bool started_ = false;
    bool done_ = false;
};

std::vector<CanonicalForm> enumerate_forms(int n, bool real_only);

/// "k=<k>;Q=<hex>;c=<hex>;R=<hex>;t=<hex>". R packs entry (i, j) at bit j*n + i.
std::string to_token(const CanonicalForm& f);
CanonicalForm parse_token(std::string_view token, int n);

/// Recovers (form, phase) with v = phase * synthesize(form). Throws
/// std::invalid_argument when v is not a scaled stabilizer state.
std::pair<CanonicalForm, cplx> form_from_vector(std::span<const cplx> v, int n,
                                                double tol = 1e-9);

}  // namespace stabex
