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

#include <random>
#include <span>

#include "stabex/stabilizer.hpp"

namespace stabex {

using Rng = std::mt19937_64;

/// Normalized i.i.d. complex Gaussian amplitudes (Haar-random pure state).
StateVector haar_state(int n, Rng& rng);
/// Normalized i.i.d. real Gaussian amplitudes.
StateVector real_gaussian_state(int n, Rng& rng);
StateVector ghz_state(int n);
StateVector w_state(int n);
/// (|0> + e^{i pi/4} |1>) / sqrt(2) on every qubit.
StateVector t_tensor_state(int n);

/// Uniformly random stabilizer state form.
CanonicalForm random_form(int n, Rng& rng);
CanonicalForm random_form(const FormIndex& index, Rng& rng);

/// Amplitude of basis index i0 + 2^{n0} i1 is low[i0] * high[i1]: `low`
/// occupies the least significant qubits.
StateVector tensor(const StateVector& low, const StateVector& high);

/// Applies X on every qubit set in `mask`: amplitude i moves to i ^ mask.
StateVector flip_bits(const StateVector& s, std::uint32_t mask);

}  // namespace stabex
