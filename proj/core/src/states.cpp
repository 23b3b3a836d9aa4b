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

#include "stabex/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stabex {

namespace {

void check_n(int n) {
    if (n < 1 || n > 24) {
        throw std::invalid_argument("state generators support 1 <= n <= 24");
    }
}

void normalize(StateVector& s) {
    const double nrm = s.norm();
    for (cplx& a : s.amps) {
        a /= nrm;
    }
}

}  // namespace

StateVector haar_state(int n, Rng& rng) {
    check_n(n);
    std::normal_distribution<double> gauss;
    StateVector s = StateVector::zero(n);
    for (cplx& a : s.amps) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = {re, im};
    }
    normalize(s);
    return s;
}

StateVector real_gaussian_state(int n, Rng& rng) {
    check_n(n);
    std::normal_distribution<double> gauss;
    StateVector s = StateVector::zero(n);
    for (cplx& a : s.amps) {
        a = {gauss(rng), 0.0};
    }
    normalize(s);
    return s;
}

StateVector ghz_state(int n) {
    check_n(n);
    StateVector s = StateVector::zero(n);
    s.amps.front() = std::numbers::sqrt2 / 2;
    s.amps.back() = std::numbers::sqrt2 / 2;
    return s;
}

StateVector w_state(int n) {
    check_n(n);
    StateVector s = StateVector::zero(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (int q = 0; q < n; ++q) {
        s.amps[std::size_t{1} << q] = a;
    }
    return s;
}

StateVector t_tensor_state(int n) {
    check_n(n);
    const StateVector t(1, {std::numbers::sqrt2 / 2,
                            std::polar(std::numbers::sqrt2 / 2, std::numbers::pi / 4)});
    StateVector s = t;
    for (int q = 1; q < n; ++q) {
        s = tensor(s, t);
    }
    return s;
}

CanonicalForm random_form(const FormIndex& index, Rng& rng) {
    const u128 size = index.size();
    // Rejection sampling on the smallest power of two covering |S_n|.
    int bits = 0;
    while (bits < 128 && (u128{1} << bits) < size) {
        ++bits;
    }
    while (true) {
        u128 draw = (static_cast<u128>(rng()) << 64) | rng();
        if (bits < 128) {
            draw &= (u128{1} << bits) - 1;
        }
        if (draw < size) {
            return index.unrank(draw);
        }
    }
}

CanonicalForm random_form(int n, Rng& rng) { return random_form(FormIndex(n), rng); }

StateVector tensor(const StateVector& low, const StateVector& high) {
    StateVector out = StateVector::zero(low.n + high.n);
    for (std::size_t hi = 0; hi < high.dim(); ++hi) {
        for (std::size_t lo = 0; lo < low.dim(); ++lo) {
            out.amps[(hi << low.n) | lo] = low.amps[lo] * high.amps[hi];
        }
    }
    return out;
}

StateVector flip_bits(const StateVector& s, std::uint32_t mask) {
    if (mask >> s.n) {
        throw std::invalid_argument("flip mask exceeds register");
    }
    StateVector out = StateVector::zero(s.n);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        out.amps[i ^ mask] = s.amps[i];
    }
    return out;
}

}  // namespace stabex
