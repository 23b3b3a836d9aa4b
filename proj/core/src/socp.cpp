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

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stabex {

namespace {

using Eigen::Index;
using Eigen::Matrix3Xd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hyperbolic reflection M(w) for w with w0^2 - |w1|^2 = 1.
Vector3d apply_m(const Vector3d& w, const Vector3d& z) {
    const double w1z1 = w(1) * z(1) + w(2) * z(2);
    const double coef = z(0) + w1z1 / (1.0 + w(0));
    return {w(0) * z(0) + w1z1, z(1) + coef * w(1), z(2) + coef * w(2)};
}

double soc_det(const Vector3d& v) { return v(0) * v(0) - v(1) * v(1) - v(2) * v(2); }

Vector3d jordan(const Vector3d& u, const Vector3d& v) {
    return {u.dot(v), u(0) * v(1) + v(0) * u(1), u(0) * v(2) + v(0) * u(2)};
}

// Solves lambda o z = r.
Vector3d jordan_solve(const Vector3d& lambda, const Vector3d& r) {
    const double det = soc_det(lambda);
    const double z0 = (lambda(0) * r(0) - lambda(1) * r(1) - lambda(2) * r(2)) / det;
    return {z0, (r(1) - z0 * lambda(1)) / lambda(0), (r(2) - z0 * lambda(2)) / lambda(0)};
}

// Largest alpha >= 0 keeping x + alpha d inside the cone (x interior).
double max_step(const Vector3d& x, const Vector3d& d) {
    const double qa = soc_det(d);
    const double qb = 2.0 * (x(0) * d(0) - x(1) * d(1) - x(2) * d(2));
    const double qc = soc_det(x);
    double alpha = kInf;
    if (d(0) < 0) {
        alpha = -x(0) / d(0);
    }
    const double scale = std::max({std::abs(qa), std::abs(qb), qc});
    if (std::abs(qa) <= 1e-14 * scale) {
        if (qb < 0) {
            alpha = std::min(alpha, -qc / qb);
        }
        return alpha;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0) {
        return alpha;
    }
    const double root = std::sqrt(disc);
    const double qq = -0.5 * (qb + (qb >= 0 ? root : -root));
    double r1 = qq / qa;
    double r2 = qq != 0 ? qc / qq : kInf;
    for (double r : {r1, r2}) {
        if (r > 0) {
            alpha = std::min(alpha, r);
        }
    }
    return alpha;
}

struct Scaling {
    Matrix3Xd wbar;  // NT scaling point per cone
    VectorXd eta;
    Matrix3Xd lambda;

    Vector3d w(Index j, const Vector3d& z) const { return eta(j) * apply_m(wbar.col(j), z); }
    Vector3d w_inv(Index j, const Vector3d& z) const {
        const Vector3d jw(wbar(0, j), -wbar(1, j), -wbar(2, j));
        return apply_m(jw, z) / eta(j);
    }
    Vector3d h(Index j, const Vector3d& z) const { return w_inv(j, w_inv(j, z)); }
};

Scaling compute_scaling(const Matrix3Xd& x, const Matrix3Xd& s) {
    const Index n = x.cols();
    Scaling sc;
    sc.wbar.resize(3, n);
    sc.eta.resize(n);
    sc.lambda.resize(3, n);
    for (Index j = 0; j < n; ++j) {
        const double gx = std::sqrt(soc_det(x.col(j)));
        const double gs = std::sqrt(soc_det(s.col(j)));
        const Vector3d xb = x.col(j) / gx;
        const Vector3d sb = s.col(j) / gs;
        const double gamma = std::sqrt((1.0 + xb.dot(sb)) / 2.0);
        Vector3d wb = (sb + Vector3d(xb(0), -xb(1), -xb(2))) / (2.0 * gamma);
        // Re-impose w0^2 - |w1|^2 = 1 against rounding.
        wb(0) = std::sqrt(1.0 + wb(1) * wb(1) + wb(2) * wb(2));
        sc.wbar.col(j) = wb;
        sc.eta(j) = std::sqrt(gs / gx);
        sc.lambda.col(j) = sc.w(j, x.col(j));
    }
    return sc;
}

// A (u + i v) over the cone blocks of z.
VectorXcd apply_a(const MatrixXcd& a, const Matrix3Xd& z) {
    VectorXcd coef(z.cols());
    for (Index j = 0; j < z.cols(); ++j) {
        coef(j) = {z(1, j), z(2, j)};
    }
    return a * coef;
}

VectorXd realify(const VectorXcd& z) {
    VectorXd out(2 * z.size());
    out.head(z.size()) = z.real();
    out.tail(z.size()) = z.imag();
    return out;
}

VectorXcd complexify(const VectorXd& v) {
    const Index r = v.size() / 2;
    VectorXcd out(r);
    for (Index i = 0; i < r; ++i) {
        out(i) = {v(i), v(r + i)};
    }
    return out;
}

class NormalSolver {
   public:
    void factor(const MatrixXcd& a, const Scaling& sc) {
        const Index r = a.rows();
        const Index n = a.cols();
        MatrixXd v(2 * r, 2 * n);
        for (Index j = 0; j < n; ++j) {
            const Vector3d hu = sc.h(j, Vector3d(0, 1, 0));
            const Vector3d hv = sc.h(j, Vector3d(0, 0, 1));
            const double l00 = std::sqrt(std::max(hu(1), 0.0));
            const double l10 = l00 > 0 ? hu(2) / l00 : 0.0;
            const double l11 = std::sqrt(std::max(hv(2) - l10 * l10, 0.0));
            const auto col = a.col(j);
            const std::complex<double> f1(l00, l10);
            const std::complex<double> f2(0.0, l11);
            for (Index i = 0; i < r; ++i) {
                const auto p1 = f1 * col(i);
                const auto p2 = f2 * col(i);
                v(i, 2 * j) = p1.real();
                v(r + i, 2 * j) = p1.imag();
                v(i, 2 * j + 1) = p2.real();
                v(r + i, 2 * j + 1) = p2.imag();
            }
        }
        m_.setZero(2 * r, 2 * r);
        m_.selfadjointView<Eigen::Lower>().rankUpdate(v);
        m_ = m_.selfadjointView<Eigen::Lower>();
        const double reg = 1e-15 * std::max(1.0, m_.diagonal().maxCoeff());
        m_.diagonal().array() += reg;
        llt_.compute(m_);
        use_ldlt_ = llt_.info() != Eigen::Success;
        if (use_ldlt_) {
            ldlt_.compute(m_);
        }
    }

    VectorXd solve(const VectorXd& rhs) const {
        VectorXd sol = use_ldlt_ ? VectorXd(ldlt_.solve(rhs)) : VectorXd(llt_.solve(rhs));
        const VectorXd res = rhs - m_ * sol;
        sol += use_ldlt_ ? VectorXd(ldlt_.solve(res)) : VectorXd(llt_.solve(res));
        return sol;
    }

   private:
    MatrixXd m_;
    Eigen::LLT<MatrixXd> llt_;
    Eigen::LDLT<MatrixXd> ldlt_;
    bool use_ldlt_ = false;
};

struct Direction {
    Matrix3Xd dx;
    Matrix3Xd ds;
    VectorXcd dy;
};

Direction solve_newton(const MatrixXcd& a, const Scaling& sc, const NormalSolver& ns,
                       const VectorXcd& rp, const Matrix3Xd& rd, const Matrix3Xd& rc) {
    const Index n = a.cols();
    Matrix3Xd zq(3, n);
    Matrix3Xd hrd(3, n);
    for (Index j = 0; j < n; ++j) {
        zq.col(j) = sc.w_inv(j, jordan_solve(sc.lambda.col(j), rc.col(j)));
        hrd.col(j) = sc.h(j, rd.col(j));
    }
    const VectorXcd rhs = rp - apply_a(a, zq) + apply_a(a, hrd);
    Direction d;
    d.dy = complexify(ns.solve(realify(rhs)));
    const VectorXcd aty = a.adjoint() * d.dy;
    d.ds.resize(3, n);
    d.dx.resize(3, n);
    for (Index j = 0; j < n; ++j) {
        d.ds.col(j) = rd.col(j) - Vector3d(0, aty(j).real(), aty(j).imag());
        d.dx.col(j) = zq.col(j) - sc.h(j, d.ds.col(j));
    }
    return d;
}

double step_to_boundary(const Matrix3Xd& x, const Matrix3Xd& dx, const Matrix3Xd& s,
                        const Matrix3Xd& ds) {
    double alpha = kInf;
    for (Index j = 0; j < x.cols(); ++j) {
        alpha = std::min(alpha, max_step(x.col(j), dx.col(j)));
        alpha = std::min(alpha, max_step(s.col(j), ds.col(j)));
    }
    return alpha;
}

struct IpmResult {
    VectorXcd x;
    VectorXcd y;
    int iterations = 0;
    bool converged = false;
};

IpmResult run_ipm(const MatrixXcd& a, const VectorXcd& b, const SocpOptions& opt) {
    const Index n = a.cols();
    Matrix3Xd x = Matrix3Xd::Zero(3, n);
    Matrix3Xd s = Matrix3Xd::Zero(3, n);
    x.row(0).setOnes();
    s.row(0).setOnes();
    VectorXcd y = VectorXcd::Zero(a.rows());
    const double bnorm = b.norm();

    IpmResult out;
    NormalSolver ns;
    double best_merit = kInf;
    Matrix3Xd best_x = x;
    VectorXcd best_y = y;
    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = it;
        const VectorXcd rp = b - apply_a(a, x);
        const VectorXcd aty = a.adjoint() * y;
        Matrix3Xd rd(3, n);
        for (Index j = 0; j < n; ++j) {
            rd.col(j) = Vector3d(1.0, -aty(j).real(), -aty(j).imag()) - s.col(j);
        }
        const double pobj = x.row(0).sum();
        const double dobj = b.dot(y).real();  // Re(b^H y)
        const double gap = (x.array() * s.array()).sum();
        const double mu = gap / static_cast<double>(n);
        const double pres = rp.norm() / (1.0 + bnorm);
        const double dres = rd.norm() / (1.0 + std::sqrt(static_cast<double>(n)));
        const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
        const double merit = std::max({pres, dres, rel_gap, gap / (1.0 + std::abs(pobj))});
        if (merit < best_merit) {
            best_merit = merit;
            best_x = x;
            best_y = y;
        }
        if (pres <= opt.tolerance && dres <= opt.tolerance && rel_gap <= opt.tolerance &&
            gap <= opt.tolerance * (1.0 + std::abs(pobj))) {
            out.converged = true;
            break;
        }

        const Scaling sc = compute_scaling(x, s);
        ns.factor(a, sc);

        Matrix3Xd rc(3, n);
        for (Index j = 0; j < n; ++j) {
            rc.col(j) = -jordan(sc.lambda.col(j), sc.lambda.col(j));
        }
        const Direction aff = solve_newton(a, sc, ns, rp, rd, rc);
        const double alpha_aff = std::min(1.0, step_to_boundary(x, aff.dx, s, aff.ds));
        const double mu_aff = ((x + alpha_aff * aff.dx).array() * (s + alpha_aff * aff.ds).array()).sum() /
                              static_cast<double>(n);
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        for (Index j = 0; j < n; ++j) {
            const Vector3d dxt = sc.w(j, aff.dx.col(j));
            const Vector3d dst = sc.w_inv(j, aff.ds.col(j));
            rc.col(j) += -jordan(dxt, dst) + Vector3d(sigma * mu, 0, 0);
        }
        const Direction dir = solve_newton(a, sc, ns, rp, rd, rc);
        const double alpha = std::min(1.0, opt.step_fraction * step_to_boundary(x, dir.dx, s, dir.ds));
        if (!(alpha > 0) || !std::isfinite(alpha)) {
            break;
        }
        x += alpha * dir.dx;
        s += alpha * dir.ds;
        y += alpha * dir.dy;
        if (!x.allFinite() || !s.allFinite() || !y.allFinite()) {
            x = best_x;
            y = best_y;
            break;
        }
    }
    if (!out.converged) {
        x = best_x;
        y = best_y;
    }
    out.x.resize(n);
    for (Index j = 0; j < n; ++j) {
        out.x(j) = {x(1, j), x(2, j)};
    }
    out.y = y;
    return out;
}

}  // namespace

const char* to_string(SocpStatus s) {
    switch (s) {
        case SocpStatus::Optimal:
            return "optimal";
        case SocpStatus::Infeasible:
            return "infeasible";
        case SocpStatus::NotConverged:
            return "not_converged";
    }
    return "unknown";
}

SocpSolution solve_complex_l1(const MatrixXcd& a, const VectorXcd& b, const SocpOptions& options) {
    if (a.rows() != b.size() || a.cols() == 0) {
        throw std::invalid_argument("solve_complex_l1: need a nonempty column set matching b");
    }
    SocpSolution sol;

    // Range of the columns; restrict the problem when they do not span C^d.
    const MatrixXcd gram = a * a.adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram);
    const VectorXd evals = eig.eigenvalues();
    const double top = std::max(evals.maxCoeff(), 0.0);
    Index rank = 0;
    for (Index i = 0; i < evals.size(); ++i) {
        rank += evals(i) > 1e-10 * std::max(top, 1e-300) ? 1 : 0;
    }
    const bool full = rank == a.rows();
    MatrixXcd basis;
    if (!full) {
        basis = eig.eigenvectors().rightCols(rank);
        const VectorXcd residual = b - basis * (basis.adjoint() * b);
        if (rank == 0 || residual.norm() > 1e-9 * std::max(1.0, b.norm())) {
            sol.status = SocpStatus::Infeasible;
            sol.x = VectorXcd::Zero(a.cols());
            sol.y = VectorXcd::Zero(b.size());
            sol.primal_residual = residual.norm();
            return sol;
        }
    }
    const MatrixXcd ar = full ? a : MatrixXcd(basis.adjoint() * a);
    const VectorXcd br = full ? b : VectorXcd(basis.adjoint() * b);

    const IpmResult ipm = run_ipm(ar, br, options);
    sol.iterations = ipm.iterations;
    sol.x = ipm.x;
    sol.y = full ? ipm.y : VectorXcd(basis * ipm.y);

    // Remove the remaining equality residual on the support of x.
    const double xmax = sol.x.cwiseAbs().maxCoeff();
    std::vector<Index> support;
    for (Index j = 0; j < sol.x.size(); ++j) {
        if (std::abs(sol.x(j)) > 1e-9 * std::max(xmax, 1e-300)) {
            support.push_back(j);
        }
    }
    VectorXcd sparse = VectorXcd::Zero(sol.x.size());
    for (Index j : support) {
        sparse(j) = sol.x(j);
    }
    sol.x = sparse;
    for (int pass = 0; pass < 2 && !support.empty(); ++pass) {
        const VectorXcd residual = b - a * sol.x;
        MatrixXcd as(a.rows(), static_cast<Index>(support.size()));
        for (std::size_t c = 0; c < support.size(); ++c) {
            as.col(static_cast<Index>(c)) = a.col(support[c]);
        }
        const VectorXcd delta = as.completeOrthogonalDecomposition().solve(residual);
        for (std::size_t c = 0; c < support.size(); ++c) {
            sol.x(support[c]) += delta(static_cast<Index>(c));
        }
    }

    const VectorXd ay = (a.adjoint() * sol.y).cwiseAbs();
    const double ay_max = ay.size() ? ay.maxCoeff() : 0.0;
    if (ay_max > 1.0) {
        sol.y /= ay_max;
    }
    sol.max_dual_constraint = std::min(ay_max, 1.0);
    sol.primal_value = sol.x.cwiseAbs().sum();
    sol.dual_value = b.dot(sol.y).real();
    sol.primal_residual = (a * sol.x - b).norm();
    const double scale = 1.0 + sol.primal_value;
    const bool certified = sol.primal_residual <= options.certificate_tolerance * (1.0 + b.norm()) &&
                           std::abs(sol.primal_value - sol.dual_value) <= options.certificate_tolerance * scale;
    sol.status = ipm.converged || certified ? SocpStatus::Optimal : SocpStatus::NotConverged;
    return sol;
}

}  // namespace stabex
