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

namespace stabex {

struct SocpOptions {
    int max_iterations = 120;
    /// Relative stopping tolerance on residuals and duality gap.
    double tolerance = 1e-12;
    /// The polished solution is reported optimal when its equality residual
    /// and duality gap are within this relative bound.
    double certificate_tolerance = 1e-10;
    double step_fraction = 0.99;
};

enum class SocpStatus { Optimal, Infeasible, NotConverged };

const char* to_string(SocpStatus s);

struct SocpSolution {
    SocpStatus status = SocpStatus::NotConverged;
    Eigen::VectorXcd x;  // one coefficient per column
    Eigen::VectorXcd y;  // dual vector, same length as b
    double primal_value = 0;        // sum |x_j|
    double dual_value = 0;          // Re(b^H y)
    double primal_residual = 0;     // ||A x - b||_2
    double max_dual_constraint = 0; // max_j |a_j^H y|
    int iterations = 0;
};

/// Complex basis pursuit
///
///   min ||x||_1  s.t.  A x = b,          max Re(b^H y)  s.t.  |a_j^H y| <= 1,
///
/// written as a second-order cone program with one 3-dimensional cone
/// (t_j, Re x_j, Im x_j) per column and the real and imaginary parts of
/// A x = b as equality rows. Solved by a Mehrotra predictor-corrector
/// interior-point method with Nesterov-Todd scaling; y is read off the
/// equality multipliers. When b is outside the column span the status is
/// Infeasible. Columns that do not span C^d are handled by restricting to
/// their range.
SocpSolution solve_complex_l1(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                              const SocpOptions& options = {});

}  // namespace stabex
