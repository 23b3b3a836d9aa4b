#!/usr/bin/env python3
# Copyright 2026 The stabex Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates frozen_values.hpp.

Stabilizer states are enumerated by breadth-first search over H, S and CNOT
applied to |0...0>, which shares no code with the canonical-form machinery in
the library. Extents come from the full basis-pursuit SOCP solved by cvxpy.

    python3 tests/oracles/gen_oracles.py > tests/oracles/frozen_values.hpp
"""

import itertools
import sys

import cvxpy as cp
import numpy as np


def apply_1q(vec, n, q, g):
    v = vec.reshape([2] * n)  # axis 0 is the most significant qubit
    ax = n - 1 - q
    v = np.moveaxis(np.tensordot(g, np.moveaxis(v, ax, 0), axes=1), 0, ax)
    return v.reshape(-1)


def apply_cnot(vec, n, ctrl, tgt):
    out = vec.copy()
    for i in range(len(vec)):
        if (i >> ctrl) & 1:
            out[i ^ (1 << tgt)] = vec[i]
    return out


def key_of(vec):
    j = np.flatnonzero(np.abs(vec) > 1e-9)[0]
    v = vec * (abs(vec[j]) / vec[j])
    return tuple(np.round(np.concatenate([v.real, v.imag]), 8))


def stabilizer_states(n):
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    s = np.diag([1, 1j])
    start = np.zeros(2 ** n, dtype=complex)
    start[0] = 1
    seen = {key_of(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            cands = []
            for q in range(n):
                cands.append(apply_1q(v, n, q, h))
                cands.append(apply_1q(v, n, q, s))
            for a, b in itertools.permutations(range(n), 2):
                cands.append(apply_cnot(v, n, a, b))
            for w in cands:
                k = key_of(w)
                if k not in seen:
                    seen[k] = w
                    nxt.append(w)
        frontier = nxt
    return np.array(list(seen.values())).T  # columns


def extent(a, b):
    x = cp.Variable(a.shape[1], complex=True)
    prob = cp.Problem(cp.Minimize(cp.norm1(x)), [a @ x == b])
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return prob.value ** 2


def fidelity(a, b):
    return float(np.max(np.abs(a.conj().T @ b)) ** 2)


def emit_state(name, b):
    rows = ",\n".join(f"    {{{z.real:.17g}, {z.imag:.17g}}}" for z in b)
    print(f"inline const std::vector<cplx> {name} = {{\n{rows}}};")


def main():
    rng = np.random.default_rng(20260101)
    dicts = {n: stabilizer_states(n) for n in (1, 2, 3, 4)}
    print("// Generated by tests/oracles/gen_oracles.py; do not edit.")
    print("#pragma once\n\n#include <complex>\n#include <vector>\n")
    print("namespace stabex::oracle {\n\nusing cplx = std::complex<double>;\n")
    for n, a in dicts.items():
        print(f"inline constexpr std::size_t kBfsCount{n} = {a.shape[1]};")
    print()

    t = np.array([1, np.exp(1j * np.pi / 4)]) / np.sqrt(2)
    print(f"inline constexpr double kExtentT = {extent(dicts[1], t):.17g};")
    print(f"inline constexpr double kFidelityT = {fidelity(dicts[1], t):.17g};\n")

    cases = []
    for n, count, real in ((2, 3, False), (3, 3, False), (3, 2, True), (4, 2, False), (4, 1, True)):
        for _ in range(count):
            b = rng.normal(size=2 ** n) + (0 if real else 1j * rng.normal(size=2 ** n))
            b = b / np.linalg.norm(b)
            cases.append((n, b))
    print("struct Case {\n    int n;\n    const std::vector<cplx>* amps;\n"
          "    double extent;\n    double fidelity;\n};\n")
    for i, (n, b) in enumerate(cases):
        emit_state(f"kState{i}", b)
    print("\ninline const std::vector<Case> kCases = {")
    for i, (n, b) in enumerate(cases):
        a = dicts[n]
        print(f"    {{{n}, &kState{i}, {extent(a, b):.17g}, {fidelity(a, b):.17g}}},")
    print("};\n\n}  // namespace stabex::oracle")


if __name__ == "__main__":
    sys.exit(main())
