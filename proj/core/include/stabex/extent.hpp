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

#include <Eigen/Dense>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabex/overlap.hpp"
#include "stabex/socp.hpp"
#include "stabex/stabilizer.hpp"

namespace stabex {

enum class RealMode { Auto, On, Off };

const char* to_string(RealMode m);
RealMode parse_real_mode(std::string_view s);

struct CGConfig {
    std::size_t init_size = 10000;
    double eps_violation = 1e-8;
    int max_iters = 50;
    double feas_tol = 1e-8;
    double dual_tol = 1e-8;
    double gap_tol = 1e-8;
    RealMode real_mode = RealMode::Auto;
    std::size_t violation_cap = kDefaultViolationCap;
    int threads = 1;

    /// init_size is 10000 up to 8 qubits and 100000 beyond.
    static CGConfig defaults_for(int n);
    void validate() const;
};

/// Growing set of distinct stabilizer columns of one register size. The dense
/// column matrix is extended on demand.
class ColumnSet {
   public:
    explicit ColumnSet(int n) : n_(n) {}

    int n() const { return n_; }
    std::size_t size() const { return forms_.size(); }
    bool empty() const { return forms_.empty(); }
    const std::vector<CanonicalForm>& forms() const { return forms_; }

    /// False when the form is already present.
    bool add(const CanonicalForm& f);
    bool contains(const CanonicalForm& f) const { return seen_.count(f) != 0; }

    const Eigen::MatrixXcd& matrix();

   private:
    struct Less {
        bool operator()(const CanonicalForm& a, const CanonicalForm& b) const {
            return form_less(a, b);
        }
    };
    int n_;
    std::vector<CanonicalForm> forms_;
    std::set<CanonicalForm, Less> seen_;
    Eigen::MatrixXcd matrix_;
    std::size_t materialized_ = 0;
};

struct RestrictedSolution {
    Eigen::VectorXcd x;
    Eigen::VectorXcd y;
    double primal_value = 0;  // ||x||_1
    double dual_value = 0;    // Re(b^H y)
    double primal_residual = 0;
    double max_dual_constraint = 0;
    int solver_iterations = 0;
};

/// The column set does not span b.
class InfeasibleError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct IterationRecord {
    int iteration = 0;
    std::size_t columns = 0;
    double xi_hat = 0;
    std::size_t violations = 0;
    double seconds = 0;
};

/// The conic solver missed the requested tolerances. Carries what it reached
/// and, when raised from compute_extent, the iterations completed so far.
class SolverError : public std::runtime_error {
   public:
    SolverError(const std::string& what, double residual, double gap)
        : std::runtime_error(what), primal_residual(residual), dual_gap(gap) {}

    double primal_residual;
    double dual_gap;
    std::vector<IterationRecord> trace;
};

/// min ||x||_1 subject to sum_j x_j a_j = b over the columns of `columns`.
RestrictedSolution solve_restricted(ColumnSet& columns, const StateVector& b,
                                    const CGConfig& cfg = {});

struct Term {
    CanonicalForm form;
    cplx coefficient;
};

struct ExtentResult {
    int n = 0;
    double extent = 0;
    double sqrt_extent = 0;
    bool certified = false;
    bool real_path = false;
    /// "certified", "max_iters" or "stalled".
    std::string status;
    std::vector<Term> decomposition;
    /// Final column set, in insertion order.
    std::vector<CanonicalForm> columns;
    std::vector<cplx> y;
    /// Global max |a^H y| over the searched dictionary (certified runs only).
    double max_abs_ay = 0;
    double dual_gap = 0;
    double primal_residual = 0;
    std::vector<IterationRecord> trace;
    double total_seconds = 0;
};

/// Columns and coefficients built from tensor products of factor
/// decompositions.
struct WarmStart {
    int n = 0;
    std::vector<Term> terms;
    /// Product of the factor extents.
    double value = 0;
    /// Every factor is certified and acts on at most 3 qubits, so `value` is
    /// the extent of the product.
    bool optimal = false;
};

/// Factor 0 occupies the least significant qubits. Product columns are
/// brought back to canonical form; the global phase moves into the
/// coefficient.
WarmStart product_warm_start(std::span<const ExtentResult> factors);

/// Column generation: restricted solve, violation scan on the dual vector,
/// grow the column set until no stabilizer state violates |a^H y| <= 1.
ExtentResult compute_extent(const StateVector& b, const CGConfig& cfg,
                            const WarmStart* warm = nullptr);

}  // namespace stabex
