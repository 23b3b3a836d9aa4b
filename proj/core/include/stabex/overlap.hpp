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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "stabex/stabilizer.hpp"

namespace stabex {

/// A stabilizer state together with <phi|psi> for the searched vector.
struct OverlapHit {
    CanonicalForm form;
    cplx overlap;
};

struct SearchBudget {
    std::size_t top_m = 1;
    /// Only overlaps with modulus strictly above this are retained.
    double threshold = 0.0;
    bool real_only = false;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
    std::uint64_t cuts = 0;
};

struct SearchOptions {
    int threads = 1;
    /// Disables branch-and-bound cuts; every leaf is evaluated.
    bool prune = true;
    /// Optional sink for aggregated search counters.
    SearchStats* stats = nullptr;
};

/// P_x = conj(b[R x + t]) / 2^{k/2} for x in [0, 2^k).
std::vector<cplx> build_p(std::span<const cplx> b, int k, const GF2Matrix& r, const GF2Vector& t);

/// Upper bound on max_{Q,c} |sum_x (-1)^{x^T Q x} i^{c^T x} P_x| obtained by
/// letting every term pick its own power of i. Each nonzero term is rotated
/// into [0, pi/2), terms are swept in argument order and each step advances
/// one term by a quarter turn; the largest partial-sum modulus is returned.
double bound(std::span<const cplx> p);
double bound(std::span<const cplx> p, std::vector<cplx>& scratch);

/// Pruning floors for the phase search. A node is cut when its upper bound is
/// <= `threshold`, or when it is < `*dynamic` by more than `kTieSlack`.
struct PruneFloor {
    double threshold = -1.0;
    const std::atomic<double>* dynamic = nullptr;

    static constexpr double kTieSlack = 1e-12;
};

/// Receives (packed Q bits, c bits, leaf value) for every surviving leaf. The
/// leaf value is sum_x phase(x) P_x, the complex conjugate of the overlap.
using LeafFn = std::function<void(std::uint64_t, std::uint32_t, cplx)>;

/// Depth-first search over the (Q, c) phase tree of one P array. Row i of Q
/// and bit i of c are fixed at depth i by folding the array in half:
///
///   P'_y = P_{2y} + (-1)^{Q_ii + Q_i . y} i^{c_i} P_{2y+1}
///
/// Each depth owns one buffer of half the parent size, so the scratch
/// footprint is O(2^k).
class PhaseSearch {
   public:
    explicit PhaseSearch(int max_k);

    /// Returns the largest leaf modulus reached (0 when every leaf was cut).
    double run(std::span<const cplx> p, const PruneFloor& floor, bool real_only,
               const LeafFn& on_leaf, bool prune = true);

    const SearchStats& stats() const { return stats_; }
    /// Complex slots held across all depth buffers.
    std::size_t scratch_size() const;

   private:
    void descend(int depth, const cplx* p, int bits, std::uint64_t q_acc, std::uint32_t c_acc);
    void emit(std::uint64_t q, std::uint32_t c, cplx v);
    bool cut(double ub) const;

    int max_k_;
    int k_ = 0;
    bool real_only_ = false;
    bool prune_ = true;
    PruneFloor floor_;
    const LeafFn* on_leaf_ = nullptr;
    double best_ = 0;
    std::vector<std::vector<cplx>> level_;  // folded array at each depth
    std::vector<std::vector<cplx>> odd_;    // rotated odd half at each depth
    std::vector<cplx> sort_scratch_;
    SearchStats stats_;
};

/// max over (Q, c) of |sum_x (-1)^{x^T Q x} i^{c^T x} P_x|, cutting subtrees
/// whose bound is <= prune_floor. Every leaf above the floor is passed to
/// `collector` when one is given.
double max_over_qc(std::span<const cplx> p, double prune_floor, const LeafFn* collector,
                   bool real_only);

/// Branch-parallel search over every stabilizer state of an n-qubit register
/// against an arbitrary vector v. Retains the top_m overlaps above threshold,
/// recomputes each overlap by direct summation and sorts by modulus
/// (descending, ties in enumeration order).
std::vector<OverlapHit> search_overlaps(std::span<const cplx> v, int n, const SearchBudget& budget,
                                        const SearchOptions& options = {});

/// search_overlaps on a normalized state; unnormalized input is rejected.
std::vector<OverlapHit> scan(const StateVector& b, const SearchBudget& budget,
                             const SearchOptions& options = {});

struct FidelityResult {
    double fidelity = 0;
    CanonicalForm form;
    cplx overlap;
};

/// Largest |<phi|psi>|^2 over stabilizer states. With real_only the search is
/// restricted to real stabilizer states, which attains the same maximum for
/// real input; complex input is rejected in that mode.
FidelityResult fidelity(const StateVector& b, bool real_only, const SearchOptions& options = {});

inline constexpr std::size_t kDefaultViolationCap = 1'000'000;

/// Every stabilizer state with |<phi|y>| > 1 + eps (at most `cap`, largest
/// first).
std::vector<OverlapHit> violations(const StateVector& y, double eps, bool real_only,
                                   std::size_t cap = kDefaultViolationCap,
                                   const SearchOptions& options = {});

}  // namespace stabex
