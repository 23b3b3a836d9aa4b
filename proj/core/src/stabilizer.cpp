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

#include "stabex/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace stabex {

namespace {

constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::uint32_t span_of(const CanonicalForm& f, std::uint32_t x) {
    std::uint32_t v = f.t;
    for (int j = 0; j < f.k; ++j) {
        if ((x >> j) & 1U) {
            v ^= f.r[j];
        }
    }
    return v;
}

std::string to_hex(u128 v) {
    if (v == 0) {
        return "0";
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    while (v != 0) {
        out.push_back(kDigits[static_cast<int>(v & 0xF)]);
        v >>= 4;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

u128 parse_hex(std::string_view s) {
    if (s.empty() || s.size() > 32) {
        throw std::invalid_argument("bad hex field in form token");
    }
    u128 v = 0;
    for (char ch : s) {
        int d;
        if (ch >= '0' && ch <= '9') {
            d = ch - '0';
        } else if (ch >= 'a' && ch <= 'f') {
            d = ch - 'a' + 10;
        } else if (ch >= 'A' && ch <= 'F') {
            d = ch - 'A' + 10;
        } else {
            throw std::invalid_argument("bad hex digit in form token");
        }
        v = (v << 4) | static_cast<u128>(d);
    }
    return v;
}

std::vector<std::pair<int, int>> free_slots_for(int n, std::span<const int> pivots) {
    std::uint32_t mask = 0;
    for (int p : pivots) {
        mask |= 1U << p;
    }
    std::vector<std::pair<int, int>> slots;
    for (std::size_t j = 0; j < pivots.size(); ++j) {
        for (int row = pivots[j] + 1; row < n; ++row) {
            if (!((mask >> row) & 1U)) {
                slots.emplace_back(static_cast<int>(j), row);
            }
        }
    }
    return slots;
}

std::uint64_t free_index_of(const CanonicalForm& f,
                            const std::vector<std::pair<int, int>>& slots) {
    std::uint64_t idx = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if ((f.r[slots[s].first] >> slots[s].second) & 1U) {
            idx |= std::uint64_t{1} << s;
        }
    }
    return idx;
}

std::vector<int> pivots_of(const CanonicalForm& f) {
    std::vector<int> p(static_cast<std::size_t>(f.k));
    for (int j = 0; j < f.k; ++j) {
        p[j] = std::countr_zero(static_cast<std::uint32_t>(f.r[j]));
    }
    return p;
}

}  // namespace

StateVector::StateVector(int qubits, std::vector<cplx> amplitudes)
    : n(qubits), amps(std::move(amplitudes)) {
    if (qubits < 0 || qubits > 30 || amps.size() != (std::size_t{1} << qubits)) {
        throw std::invalid_argument("state vector length must be 2^n");
    }
}

StateVector StateVector::zero(int qubits) {
    return StateVector(qubits, std::vector<cplx>(std::size_t{1} << qubits));
}

double StateVector::norm() const {
    double s = 0;
    for (const cplx& a : amps) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

double StateVector::max_abs_imag() const {
    double m = 0;
    for (const cplx& a : amps) {
        m = std::max(m, std::abs(a.imag()));
    }
    return m;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

GF2Matrix CanonicalForm::q_matrix() const {
    GF2Matrix m(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            m.set(i, j, (q >> (q_row_offset(k, i) + (j - i))) & 1U);
        }
    }
    return m;
}

GF2Vector CanonicalForm::c_vector() const { return GF2Vector(k, c); }

GF2Matrix CanonicalForm::r_matrix() const {
    std::array<std::uint64_t, kMaxQubits> cols{};
    for (int j = 0; j < k; ++j) {
        cols[j] = r[j];
    }
    return GF2Matrix::from_columns(n, std::span(cols.data(), static_cast<std::size_t>(k)));
}

GF2Vector CanonicalForm::t_vector() const { return GF2Vector(n, t); }

std::uint64_t CanonicalForm::pivot_rows() const {
    std::uint64_t m = 0;
    for (int j = 0; j < k; ++j) {
        m |= std::uint64_t{1} << std::countr_zero(static_cast<std::uint32_t>(r[j]));
    }
    return m;
}

CanonicalForm CanonicalForm::from_parts(int n, const GF2Matrix& qm, const GF2Vector& cv,
                                        const GF2Matrix& rm, const GF2Vector& tv) {
    CanonicalForm f;
    f.n = n;
    f.k = rm.cols();
    if (rm.rows() != n || qm.rows() != f.k || qm.cols() != f.k || cv.len() != f.k ||
        tv.len() != n) {
        throw std::invalid_argument("canonical form component shapes disagree");
    }
    if (n > kMaxQubits) {
        throw std::invalid_argument("canonical forms support at most 10 qubits");
    }
    for (int i = 0; i < f.k; ++i) {
        for (int j = 0; j < f.k; ++j) {
            if (qm.get(i, j)) {
                if (j < i) {
                    throw std::invalid_argument("Q must be upper triangular");
                }
                f.q |= std::uint64_t{1} << (q_row_offset(f.k, i) + (j - i));
            }
        }
    }
    f.c = static_cast<std::uint32_t>(cv.bits());
    for (int j = 0; j < f.k; ++j) {
        f.r[j] = static_cast<std::uint16_t>(rm.column(j));
    }
    f.t = static_cast<std::uint32_t>(tv.bits());
    validate(f);
    return f;
}

CanonicalForm CanonicalForm::basis_state(int n, std::uint32_t t) {
    CanonicalForm f;
    f.n = n;
    f.t = t;
    validate(f);
    return f;
}

void validate(const CanonicalForm& f) {
    if (f.n < 1 || f.n > kMaxQubits) {
        throw std::invalid_argument("form qubit count must lie in [1, 10]");
    }
    if (f.k < 0 || f.k > f.n) {
        throw std::invalid_argument("form dimension k must lie in [0, n]");
    }
    if (f.t >> f.n) {
        throw std::invalid_argument("t has bits beyond n");
    }
    if (f.k == 0) {
        if (f.q != 0 || f.c != 0 || std::any_of(f.r.begin(), f.r.end(), [](auto v) { return v; })) {
            throw std::invalid_argument("k=0 forms carry only t");
        }
        return;
    }
    if (f.q >> q_bit_count(f.k)) {
        throw std::invalid_argument("Q has bits beyond its upper triangle");
    }
    if (f.c >> f.k) {
        throw std::invalid_argument("c has bits beyond k");
    }
    for (int j = f.k; j < kMaxQubits; ++j) {
        if (f.r[j] != 0) {
            throw std::invalid_argument("R has columns beyond k");
        }
    }
    const GF2Matrix rm = f.r_matrix();
    if (!is_rcef(rm)) {
        throw std::invalid_argument("R is not in reduced column echelon form");
    }
    if (f.t & f.pivot_rows()) {
        throw std::invalid_argument("t is not the canonical coset representative");
    }
}

std::array<std::uint32_t, kMaxQubits> q_row_masks(const CanonicalForm& f) {
    std::array<std::uint32_t, kMaxQubits> rows{};
    for (int i = 0; i < f.k; ++i) {
        const int width = f.k - i;
        const std::uint64_t bits = (f.q >> q_row_offset(f.k, i)) & ((std::uint64_t{1} << width) - 1);
        rows[i] = static_cast<std::uint32_t>(bits << i);
    }
    return rows;
}

int phase_exponent(const CanonicalForm& f, std::uint32_t x) {
    const auto rows = q_row_masks(f);
    int quad = 0;
    for (int i = 0; i < f.k; ++i) {
        if ((x >> i) & 1U) {
            quad ^= std::popcount(rows[i] & x) & 1;
        }
    }
    return (2 * quad + std::popcount(f.c & x)) & 3;
}

StateVector synthesize(const CanonicalForm& f) {
    validate(f);
    StateVector out = StateVector::zero(f.n);
    const double scale = std::pow(2.0, -0.5 * f.k);
    const auto rows = q_row_masks(f);
    for (std::uint32_t x = 0; x < (1U << f.k); ++x) {
        int quad = 0;
        for (int i = 0; i < f.k; ++i) {
            if ((x >> i) & 1U) {
                quad ^= std::popcount(rows[i] & x) & 1;
            }
        }
        const int e = (2 * quad + std::popcount(f.c & x)) & 3;
        out.amps[span_of(f, x)] = scale * kIPowers[e];
    }
    return out;
}

cplx inner_product(const CanonicalForm& f, std::span<const cplx> b) {
    if (b.size() != (std::size_t{1} << f.n)) {
        throw std::invalid_argument("vector length does not match form");
    }
    const auto rows = q_row_masks(f);
    cplx acc = 0;
    for (std::uint32_t x = 0; x < (1U << f.k); ++x) {
        int quad = 0;
        for (int i = 0; i < f.k; ++i) {
            if ((x >> i) & 1U) {
                quad ^= std::popcount(rows[i] & x) & 1;
            }
        }
        const int e = (2 * quad + std::popcount(f.c & x)) & 3;
        acc += std::conj(kIPowers[e]) * b[span_of(f, x)];
    }
    return acc * std::pow(2.0, -0.5 * f.k);
}

StateCounts count_states(int n) {
    if (n < 1) {
        throw std::invalid_argument("count_states requires n >= 1");
    }
    StateCounts out;
    out.per_k.resize(static_cast<std::size_t>(n) + 1);
    out.per_k[0] = BigInt(1) << n;
    for (int k = 1; k <= n; ++k) {
        out.per_k[k] = (BigInt(1) << (q_bit_count(k) + k + (n - k))) * qbinom(n, k);
    }
    out.total = 0;
    for (const BigInt& v : out.per_k) {
        out.total += v;
    }
    return out;
}

BigInt count_real_forms(int n) {
    BigInt total = BigInt(1) << n;
    for (int k = 1; k <= n; ++k) {
        total += (BigInt(1) << (q_bit_count(k) + (n - k))) * qbinom(n, k);
    }
    return total;
}

FormIndex::FormIndex(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("FormIndex supports 1 <= n <= 10");
    }
    set_of_mask_.assign(std::size_t{1} << n, -1);
    // k = 0 block: the basis states.
    sets_.push_back(PivotSet{0, 0, 0, u128{1} << n, {}});
    set_of_mask_[0] = 0;
    u128 offset = u128{1} << n;
    for (int k = 1; k <= n; ++k) {
        std::vector<int> pivots(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            pivots[j] = j;
        }
        while (true) {
            PivotSet ps;
            ps.k = k;
            for (int p : pivots) {
                ps.mask |= 1U << p;
            }
            ps.free_slots = free_slots_for(n, pivots);
            ps.offset = offset;
            ps.count = u128{1} << (ps.free_slots.size() + (n - k) + q_bit_count(k) + k);
            offset += ps.count;
            set_of_mask_[ps.mask] = static_cast<int>(sets_.size());
            sets_.push_back(std::move(ps));

            int j = k - 1;
            while (j >= 0 && pivots[j] == n - k + j) {
                --j;
            }
            if (j < 0) {
                break;
            }
            ++pivots[j];
            for (int i = j + 1; i < k; ++i) {
                pivots[i] = pivots[i - 1] + 1;
            }
        }
    }
    total_ = offset;
}

u128 FormIndex::rank(const CanonicalForm& f) const {
    if (f.n != n_) {
        throw std::invalid_argument("form register size does not match index");
    }
    if (f.k == 0) {
        return f.t;
    }
    const PivotSet& ps = sets_[set_of_mask_[f.pivot_rows()]];
    const std::uint64_t free_idx = free_index_of(f, ps.free_slots);
    const std::uint64_t t_idx = quotient_rep_index(n_, ps.mask, f.t);
    u128 local = (static_cast<u128>(free_idx) << (n_ - f.k)) | t_idx;
    local = (local << q_bit_count(f.k)) | f.q;
    local = (local << f.k) | f.c;
    return ps.offset + local;
}

CanonicalForm FormIndex::unrank(u128 index) const {
    if (index >= total_) {
        throw std::out_of_range("form index out of range");
    }
    CanonicalForm f;
    f.n = n_;
    if (index < (u128{1} << n_)) {
        f.t = static_cast<std::uint32_t>(index);
        return f;
    }
    const auto it = std::upper_bound(sets_.begin(), sets_.end(), index,
                                     [](u128 v, const PivotSet& ps) { return v < ps.offset; });
    const PivotSet& ps = *(it - 1);
    u128 local = index - ps.offset;
    f.k = ps.k;
    f.c = static_cast<std::uint32_t>(local & ((u128{1} << f.k) - 1));
    local >>= f.k;
    f.q = static_cast<std::uint64_t>(local & ((u128{1} << q_bit_count(f.k)) - 1));
    local >>= q_bit_count(f.k);
    const auto t_idx = static_cast<std::uint64_t>(local & ((u128{1} << (n_ - f.k)) - 1));
    local >>= (n_ - f.k);
    const auto free_idx = static_cast<std::uint64_t>(local);
    f.t = static_cast<std::uint32_t>(quotient_rep_bits(n_, ps.mask, t_idx));
    int j = 0;
    for (int row = 0; row < n_; ++row) {
        if ((ps.mask >> row) & 1U) {
            f.r[j++] = static_cast<std::uint16_t>(1U << row);
        }
    }
    for (std::size_t s = 0; s < ps.free_slots.size(); ++s) {
        if ((free_idx >> s) & 1U) {
            f.r[ps.free_slots[s].first] |= static_cast<std::uint16_t>(1U << ps.free_slots[s].second);
        }
    }
    return f;
}

bool form_less(const CanonicalForm& a, const CanonicalForm& b) {
    if (a.k != b.k) {
        return a.k < b.k;
    }
    const auto pa = pivots_of(a);
    const auto pb = pivots_of(b);
    if (pa != pb) {
        return pa < pb;
    }
    if (a.k > 0) {
        const auto slots = free_slots_for(a.n, pa);
        const auto fa = free_index_of(a, slots);
        const auto fb = free_index_of(b, slots);
        if (fa != fb) {
            return fa < fb;
        }
    }
    if (a.t != b.t) {
        return a.t < b.t;
    }
    if (a.q != b.q) {
        return a.q < b.q;
    }
    return a.c < b.c;
}

FormEnumerator::FormEnumerator(int n, bool real_only) : n_(n), real_only_(real_only) {
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("enumerate_forms requires 1 <= n <= 10");
    }
}

bool FormEnumerator::next_r() {
    std::array<std::uint64_t, kMaxQubits> cols{};
    if (!rcef_->next_columns(std::span(cols.data(), static_cast<std::size_t>(cur_.k)))) {
        return false;
    }
    pivots_ = 0;
    for (int j = 0; j < cur_.k; ++j) {
        cur_.r[j] = static_cast<std::uint16_t>(cols[j]);
        pivots_ |= std::uint64_t{1} << std::countr_zero(cols[j]);
    }
    cur_.q = 0;
    cur_.c = 0;
    cur_.t = 0;
    t_index_ = 0;
    return true;
}

bool FormEnumerator::start_k(int k) {
    if (k > n_) {
        done_ = true;
        return false;
    }
    cur_ = CanonicalForm{};
    cur_.n = n_;
    cur_.k = k;
    if (k == 0) {
        return true;
    }
    rcef_.emplace(n_, k);
    return next_r();
}

bool FormEnumerator::next(CanonicalForm& out) {
    if (done_) {
        return false;
    }
    if (!started_) {
        started_ = true;
        start_k(0);
        out = cur_;
        return true;
    }
    if (cur_.k == 0) {
        if (cur_.t + 1 < (1U << n_)) {
            ++cur_.t;
        } else if (!start_k(1)) {
            return false;
        }
        out = cur_;
        return true;
    }
    const int k = cur_.k;
    if (!real_only_ && cur_.c + 1 < (1U << k)) {
        ++cur_.c;
    } else if (cur_.c = 0; cur_.q + 1 < (std::uint64_t{1} << q_bit_count(k))) {
        ++cur_.q;
    } else if (cur_.q = 0; t_index_ + 1 < (1U << (n_ - k))) {
        ++t_index_;
        cur_.t = static_cast<std::uint32_t>(quotient_rep_bits(n_, pivots_, t_index_));
    } else if (!next_r()) {
        if (!start_k(k + 1)) {
            return false;
        }
    }
    out = cur_;
    return true;
}

std::optional<CanonicalForm> FormEnumerator::next() {
    CanonicalForm f;
    if (!next(f)) {
        return std::nullopt;
    }
    return f;
}

std::vector<CanonicalForm> enumerate_forms(int n, bool real_only) {
    FormEnumerator it(n, real_only);
    std::vector<CanonicalForm> out;
    CanonicalForm f;
    while (it.next(f)) {
        out.push_back(f);
    }
    return out;
}

std::string to_token(const CanonicalForm& f) {
    u128 rbits = 0;
    for (int j = 0; j < f.k; ++j) {
        rbits |= static_cast<u128>(f.r[j]) << (j * f.n);
    }
    return "k=" + std::to_string(f.k) + ";Q=" + to_hex(f.q) + ";c=" + to_hex(f.c) +
           ";R=" + to_hex(rbits) + ";t=" + to_hex(f.t);
}

CanonicalForm parse_token(std::string_view token, int n) {
    static constexpr std::string_view kKeys[5] = {"k=", "Q=", "c=", "R=", "t="};
    std::string_view fields[5];
    std::string_view rest = token;
    for (int i = 0; i < 5; ++i) {
        const std::size_t semi = rest.find(';');
        std::string_view part = rest.substr(0, semi);
        if (!part.starts_with(kKeys[i])) {
            throw std::invalid_argument("malformed form token: " + std::string(token));
        }
        fields[i] = part.substr(2);
        if (i < 4) {
            if (semi == std::string_view::npos) {
                throw std::invalid_argument("malformed form token: " + std::string(token));
            }
            rest = rest.substr(semi + 1);
        } else if (semi != std::string_view::npos) {
            throw std::invalid_argument("trailing data in form token");
        }
    }
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("form tokens require 1 <= n <= 10");
    }
    CanonicalForm f;
    f.n = n;
    int k = 0;
    for (char ch : fields[0]) {
        if (ch < '0' || ch > '9' || k > n) {
            throw std::invalid_argument("bad k in form token");
        }
        k = 10 * k + (ch - '0');
    }
    if (fields[0].empty() || k > n) {
        throw std::invalid_argument("bad k in form token");
    }
    f.k = k;
    const u128 q = parse_hex(fields[1]);
    const u128 c = parse_hex(fields[2]);
    const u128 r = parse_hex(fields[3]);
    const u128 t = parse_hex(fields[4]);
    if (q >> 64 || c >> 32 || t >> 32 || (k * n < 128 && (r >> (k * n)) != 0)) {
        throw std::invalid_argument("form token field out of range");
    }
    f.q = static_cast<std::uint64_t>(q);
    f.c = static_cast<std::uint32_t>(c);
    f.t = static_cast<std::uint32_t>(t);
    for (int j = 0; j < k; ++j) {
        f.r[j] = static_cast<std::uint16_t>((r >> (j * n)) & ((u128{1} << n) - 1));
    }
    validate(f);
    return f;
}

std::pair<CanonicalForm, cplx> form_from_vector(std::span<const cplx> v, int n, double tol) {
    if (n < 1 || n > kMaxQubits || v.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("form_from_vector: bad register size");
    }
    std::vector<std::uint32_t> support;
    for (std::uint32_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > tol) {
            support.push_back(i);
        }
    }
    if (support.empty() || !std::has_single_bit(support.size())) {
        throw std::invalid_argument("vector support is not an affine subspace");
    }
    const std::uint32_t origin = support.front();
    // Echelon basis of the linear part, keyed by lowest set bit.
    std::array<std::uint32_t, kMaxQubits> by_pivot{};
    for (std::uint32_t s : support) {
        std::uint32_t w = s ^ origin;
        while (w != 0) {
            const int p = std::countr_zero(w);
            if (by_pivot[p] == 0) {
                by_pivot[p] = w;
                break;
            }
            w ^= by_pivot[p];
        }
    }
    // Clear every pivot row from the other basis vectors.
    for (int p = 0; p < n; ++p) {
        if (by_pivot[p] == 0) {
            continue;
        }
        for (int o = 0; o < n; ++o) {
            if (o != p && by_pivot[o] != 0 && ((by_pivot[o] >> p) & 1U)) {
                by_pivot[o] ^= by_pivot[p];
            }
        }
    }
    CanonicalForm f;
    f.n = n;
    for (int p = 0; p < n; ++p) {
        if (by_pivot[p] != 0) {
            f.r[f.k++] = static_cast<std::uint16_t>(by_pivot[p]);
        }
    }
    if ((std::size_t{1} << f.k) != support.size()) {
        throw std::invalid_argument("vector support is not an affine subspace");
    }
    std::uint32_t t = origin;
    for (int j = 0; j < f.k; ++j) {
        const int p = std::countr_zero(static_cast<std::uint32_t>(f.r[j]));
        if ((t >> p) & 1U) {
            t ^= f.r[j];
        }
    }
    f.t = t;

    const double scale = std::pow(2.0, -0.5 * f.k);
    const cplx phase = v[f.t] / scale;
    auto ratio_exponent = [&](std::uint32_t x) -> int {
        const cplx ratio = v[span_of(f, x)] / v[f.t];
        for (int e = 0; e < 4; ++e) {
            if (std::abs(ratio - kIPowers[e]) <= 1e-6) {
                return e;
            }
        }
        throw std::invalid_argument("vector phases are not powers of i");
    };
    std::array<int, kMaxQubits> unit{};
    for (int i = 0; i < f.k; ++i) {
        unit[i] = ratio_exponent(1U << i);
        // exponent 0: Q=0,c=0; 1: Q=0,c=1; 2: Q=1,c=0; 3: Q=1,c=1
        if (unit[i] >= 2) {
            f.q |= std::uint64_t{1} << q_row_offset(f.k, i);
        }
        if (unit[i] & 1) {
            f.c |= 1U << i;
        }
    }
    for (int i = 0; i < f.k; ++i) {
        for (int j = i + 1; j < f.k; ++j) {
            const int e = ratio_exponent((1U << i) | (1U << j));
            const int ci = (f.c >> i) & 1U;
            const int cj = (f.c >> j) & 1U;
            const int qi = unit[i] >= 2;
            const int qj = unit[j] >= 2;
            const int expected = (2 * (qi ^ qj) + ci + cj) & 3;
            if (e == ((expected + 2) & 3)) {
                f.q |= std::uint64_t{1} << (q_row_offset(f.k, i) + (j - i));
            } else if (e != expected) {
                throw std::invalid_argument("vector phases are not a quadratic form");
            }
        }
    }
    validate(f);
    const StateVector s = synthesize(f);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i] - phase * s.amps[i]) > tol * std::max(1.0, std::abs(phase))) {
            throw std::invalid_argument("vector is not a stabilizer state");
        }
    }
    return {f, phase};
}

}  // namespace stabex
