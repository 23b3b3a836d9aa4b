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

#include "stabex/socp.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "naive.hpp"
#include "oracles/frozen_values.hpp"
#include "stabex/states.hpp"

using namespace stabex;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

VectorXcd vec(const std::vector<cplx>& v) {
    return Eigen::Map<const VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void expect_certificate(const MatrixXcd& a, const VectorXcd& b, const SocpSolution& s, double tol) {
    EXPECT_EQ(s.status, SocpStatus::Optimal);
    EXPECT_LE((a * s.x - b).norm(), tol);
    EXPECT_LE((a.adjoint() * s.y).cwiseAbs().maxCoeff(), 1.0 + tol);
    EXPECT_NEAR(s.x.cwiseAbs().sum(), s.primal_value, 1e-14);
    EXPECT_NEAR(s.primal_value, s.dual_value, tol);
    EXPECT_NEAR(s.dual_value, b.dot(s.y).real(), 1e-12);
}

}  // namespace

TEST(Socp, TStateOverSixStates) {
    const MatrixXcd a = naive::all_columns(1);
    ASSERT_EQ(a.cols(), 6);
    const VectorXcd b = vec(t_tensor_state(1).amps);
    const SocpSolution s = solve_complex_l1(a, b);
    expect_certificate(a, b, s, 1e-10);
    EXPECT_NEAR(s.primal_value * s.primal_value, oracle::kExtentT, 1e-10);
    EXPECT_NEAR(s.primal_value * s.primal_value, 4 - 2 * std::numbers::sqrt2, 1e-10);
}

TEST(Socp, TargetInColumnSet) {
    Rng rng(1);
    const StateVector b = synthesize(random_form(3, rng));
    MatrixXcd a(8, 1);
    a.col(0) = vec(b.amps);
    const SocpSolution s = solve_complex_l1(a, vec(b.amps));
    EXPECT_EQ(s.status, SocpStatus::Optimal);
    EXPECT_NEAR(std::abs(s.x(0) - 1.0), 0.0, 1e-10);
    EXPECT_NEAR(s.dual_value, 1.0, 1e-10);
}

TEST(Socp, PlusStateSelectsItsOwnColumn) {
    const double h = std::numbers::sqrt2 / 2;
    MatrixXcd a(2, 3);
    a << 1, 0, h, 0, 1, h;
    VectorXcd b(2);
    b << h, h;
    const SocpSolution s = solve_complex_l1(a, b);
    expect_certificate(a, b, s, 1e-10);
    EXPECT_NEAR(std::abs(s.x(0)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(s.x(1)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(s.x(2) - 1.0), 0.0, 1e-9);
    EXPECT_NEAR(s.primal_value, 1.0, 1e-10);
}

TEST(Socp, DetectsTargetOutsideSpan) {
    MatrixXcd a(2, 1);
    a << 1, 0;
    VectorXcd b(2);
    b << 0, 1;
    EXPECT_EQ(solve_complex_l1(a, b).status, SocpStatus::Infeasible);
}

TEST(Socp, RankDeficientColumnsThatSpanTarget) {
    // Columns confined to span{|00>, |01>} while b also lies there.
    const double h = std::numbers::sqrt2 / 2;
    MatrixXcd a = MatrixXcd::Zero(4, 3);
    a(0, 0) = 1;
    a(1, 1) = 1;
    a(0, 2) = h;
    a(1, 2) = cplx(0, h);
    VectorXcd b = VectorXcd::Zero(4);
    b(0) = 0.6;
    b(1) = cplx(0, 0.8);
    const SocpSolution s = solve_complex_l1(a, b);
    expect_certificate(a, b, s, 1e-9);
    // 0.6 sqrt2 |+i> + 0.2i |1>.
    EXPECT_NEAR(s.primal_value, 0.2 + 0.6 * std::numbers::sqrt2, 1e-9);
}

TEST(Socp, RandomProblemsCertifyStrongDuality) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 2 + trial % 7;
        const int cols = rows + 3 + trial * 5;
        MatrixXcd a(rows, cols);
        for (int j = 0; j < cols; ++j) {
            for (int i = 0; i < rows; ++i) a(i, j) = cplx(g(rng), g(rng));
            a.col(j).normalize();
        }
        VectorXcd b(rows);
        for (int i = 0; i < rows; ++i) b(i) = cplx(g(rng), g(rng));
        b.normalize();
        const SocpSolution s = solve_complex_l1(a, b);
        expect_certificate(a, b, s, 1e-9);
        EXPECT_GE(s.primal_value, 1.0 - 1e-9);
    }
}

TEST(Socp, FullDictionaryMatchesFrozenOracle) {
    for (const auto& c : oracle::kCases) {
        if (c.n > 3) continue;
        const MatrixXcd a = naive::all_columns(c.n);
        const VectorXcd b = vec(*c.amps);
        const SocpSolution s = solve_complex_l1(a, b);
        expect_certificate(a, b, s, 1e-9);
        EXPECT_NEAR(s.primal_value * s.primal_value, c.extent, 1e-7 * c.extent);
    }
}

TEST(Socp, RejectsShapeMismatch) {
    EXPECT_THROW(solve_complex_l1(MatrixXcd(2, 2), VectorXcd(3)), std::invalid_argument);
    EXPECT_THROW(solve_complex_l1(MatrixXcd(2, 0), VectorXcd(2)), std::invalid_argument);
}

TEST(Socp, StatusNames) {
    EXPECT_STREQ(to_string(SocpStatus::Optimal), "optimal");
    EXPECT_STREQ(to_string(SocpStatus::Infeasible), "infeasible");
    EXPECT_STREQ(to_string(SocpStatus::NotConverged), "not_converged");
}
