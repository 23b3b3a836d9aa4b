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

#include "stabex/extent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "stabex/states.hpp"

namespace stabex {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_normalized(const StateVector& b) {
    if (b.norm() == 0.0) {
        throw std::invalid_argument("target state is zero");
    }
    if (!b.is_normalized()) {
        throw std::invalid_argument("target state is not normalized");
    }
}

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Number of forms available to the initial scan.
std::size_t dictionary_size(int n, bool real_only) {
    const BigInt total = real_only ? count_real_forms(n) : count_states(n).total;
    const BigInt cap = std::numeric_limits<std::size_t>::max();
    return total > cap ? std::numeric_limits<std::size_t>::max()
                       : static_cast<std::size_t>(total);
}

}  // namespace

const char* to_string(RealMode m) {
    switch (m) {
        case RealMode::Auto:
            return "auto";
        case RealMode::On:
            return "on";
        case RealMode::Off:
            return "off";
    }
    return "auto";
}

RealMode parse_real_mode(std::string_view s) {
    if (s == "auto") return RealMode::Auto;
    if (s == "on") return RealMode::On;
    if (s == "off") return RealMode::Off;
    throw std::invalid_argument("real mode must be auto, on or off");
}

CGConfig CGConfig::defaults_for(int n) {
    CGConfig cfg;
    cfg.init_size = n <= 8 ? 10000 : 100000;
    return cfg;
}

void CGConfig::validate() const {
    if (!(eps_violation > 0) || !(feas_tol > 0) || !(dual_tol > 0) || !(gap_tol > 0)) {
        throw std::invalid_argument("CG tolerances must be positive");
    }
    if (max_iters < 0) {
        throw std::invalid_argument("max_iters must be non-negative");
    }
    if (violation_cap == 0) {
        throw std::invalid_argument("violation_cap must be positive");
    }
    if (threads < 1) {
        throw std::invalid_argument("threads must be at least 1");
    }
}

bool ColumnSet::add(const CanonicalForm& f) {
    if (f.n != n_) {
        throw std::invalid_argument("column register size differs from the set");
    }
    if (!seen_.insert(f).second) {
        return false;
    }
    forms_.push_back(f);
    return true;
}

const Eigen::MatrixXcd& ColumnSet::matrix() {
    if (materialized_ == forms_.size() && matrix_.cols() == static_cast<Eigen::Index>(forms_.size())) {
        return matrix_;
    }
    const auto dim = Eigen::Index{1} << n_;
    matrix_.conservativeResize(dim, static_cast<Eigen::Index>(forms_.size()));
    for (std::size_t j = materialized_; j < forms_.size(); ++j) {
        matrix_.col(static_cast<Eigen::Index>(j)) = to_eigen(synthesize(forms_[j]).amps);
    }
    materialized_ = forms_.size();
    return matrix_;
}

RestrictedSolution solve_restricted(ColumnSet& columns, const StateVector& b, const CGConfig& cfg) {
    if (columns.empty()) {
        throw std::invalid_argument("restricted problem needs at least one column");
    }
    if (columns.n() != b.n) {
        throw std::invalid_argument("column set and target have different register sizes");
    }
    require_normalized(b);
    const SocpSolution s = solve_complex_l1(columns.matrix(), to_eigen(b.amps));
    if (s.status == SocpStatus::Infeasible) {
        throw InfeasibleError("column set does not span the target state");
    }
    RestrictedSolution out;
    out.x = s.x;
    out.y = s.y;
    out.primal_value = s.primal_value;
    out.dual_value = s.dual_value;
    out.primal_residual = s.primal_residual;
    out.max_dual_constraint = s.max_dual_constraint;
    out.solver_iterations = s.iterations;
    const double gap = std::abs(out.primal_value - out.dual_value);
    if (out.primal_residual > cfg.feas_tol || gap > cfg.gap_tol ||
        out.max_dual_constraint > 1.0 + cfg.dual_tol) {
        throw SolverError("conic solver stopped at residual " + std::to_string(out.primal_residual) +
                              ", gap " + std::to_string(gap) + " (" + to_string(s.status) + ")",
                          out.primal_residual, gap);
    }
    return out;
}

WarmStart product_warm_start(std::span<const ExtentResult> factors) {
    if (factors.empty()) {
        throw std::invalid_argument("warm start needs at least one factor");
    }
    WarmStart ws;
    ws.value = 1.0;
    ws.optimal = true;
    for (const ExtentResult& f : factors) {
        if (f.n < 1 || f.decomposition.empty()) {
            throw std::invalid_argument("warm-start factor has no decomposition");
        }
        for (const Term& t : f.decomposition) {
            if (t.form.n != f.n) {
                throw std::invalid_argument("warm-start factor mixes register sizes");
            }
        }
        ws.n += f.n;
        ws.value *= f.extent;
        ws.optimal = ws.optimal && f.certified && f.n <= 3;
    }
    if (ws.n > kMaxQubits) {
        throw std::invalid_argument("warm-start product exceeds the supported register size");
    }

    // Running product as explicit (vector, coefficient) pairs.
    std::vector<std::pair<StateVector, cplx>> acc;
    for (const Term& t : factors.front().decomposition) {
        acc.emplace_back(synthesize(t.form), t.coefficient);
    }
    for (std::size_t i = 1; i < factors.size(); ++i) {
        std::vector<std::pair<StateVector, cplx>> next;
        next.reserve(acc.size() * factors[i].decomposition.size());
        for (const Term& t : factors[i].decomposition) {
            const StateVector high = synthesize(t.form);
            for (const auto& [low, coef] : acc) {
                next.emplace_back(tensor(low, high), coef * t.coefficient);
            }
        }
        acc = std::move(next);
    }
    ws.terms.reserve(acc.size());
    for (const auto& [vec, coef] : acc) {
        const auto [form, phase] = form_from_vector(vec.amps, ws.n);
        ws.terms.push_back({form, coef * phase});
    }
    return ws;
}

ExtentResult compute_extent(const StateVector& b_in, const CGConfig& cfg, const WarmStart* warm) {
    const auto start = Clock::now();
    cfg.validate();
    require_normalized(b_in);
    const int n = b_in.n;
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("extent supports 1 to 10 qubits");
    }
    if (warm != nullptr && warm->n != n) {
        throw std::invalid_argument("warm start register size differs from the target");
    }

    const bool is_real = b_in.max_abs_imag() < 1e-12;
    if (cfg.real_mode == RealMode::On && !is_real) {
        throw std::invalid_argument("real mode requested for a state with complex amplitudes");
    }
    const bool real_path = cfg.real_mode == RealMode::On || (cfg.real_mode == RealMode::Auto && is_real);
    StateVector b = b_in;
    if (real_path) {
        for (cplx& a : b.amps) {
            a = {a.real(), 0.0};
        }
    }
    const SearchOptions search{cfg.threads, true, nullptr};

    ExtentResult result;
    result.n = n;
    result.real_path = real_path;

    ColumnSet columns(n);
    if (warm != nullptr) {
        for (const Term& t : warm->terms) {
            if (!real_path || t.form.is_real()) {
                columns.add(t.form);
            }
        }
    }
    const std::size_t init = std::min(cfg.init_size, dictionary_size(n, real_path));
    if (init > 0) {
        for (const OverlapHit& h : scan(b, SearchBudget{init, 0.0, real_path}, search)) {
            columns.add(h.form);
        }
    }
    auto add_basis_support = [&] {
        bool added = false;
        for (std::size_t i = 0; i < b.dim(); ++i) {
            if (b.amps[i] != cplx{}) {
                added = columns.add(CanonicalForm::basis_state(n, static_cast<std::uint32_t>(i))) || added;
            }
        }
        return added;
    };
    if (columns.empty()) {
        add_basis_support();
    }

    RestrictedSolution best;
    bool have_best = false;
    for (int iter = 0;; ++iter) {
        const auto iter_start = Clock::now();
        RestrictedSolution sol;
        try {
            try {
                sol = solve_restricted(columns, b, cfg);
            } catch (const InfeasibleError&) {
                // Computational basis states always span the target.
                if (!add_basis_support()) {
                    throw;
                }
                sol = solve_restricted(columns, b, cfg);
            }
        } catch (SolverError& e) {
            e.trace = result.trace;
            throw;
        }
        if (real_path) {
            sol.y = sol.y.real().cast<cplx>();
            sol.dual_value = to_eigen(b.amps).dot(sol.y).real();
        }
        if (!have_best || sol.primal_value <= best.primal_value) {
            best = sol;
            have_best = true;
        }

        const std::vector<cplx> yv(sol.y.data(), sol.y.data() + sol.y.size());
        const StateVector y(n, yv);
        const std::vector<OverlapHit> viol = violations(y, cfg.eps_violation, real_path, cfg.violation_cap, search);

        IterationRecord rec;
        rec.iteration = iter;
        rec.columns = columns.size();
        rec.xi_hat = sol.primal_value * sol.primal_value;
        rec.violations = viol.size();

        bool grew = false;
        for (const OverlapHit& h : viol) {
            grew = columns.add(h.form) || grew;
        }
        rec.seconds = seconds_since(iter_start);
        result.trace.push_back(rec);

        if (viol.empty()) {
            result.certified = true;
            result.status = "certified";
            best = sol;
            const auto top = search_overlaps(yv, n, SearchBudget{1, 0.0, real_path}, search);
            result.max_abs_ay = top.empty() ? 0.0 : std::abs(top.front().overlap);
            break;
        }
        if (!grew) {
            result.status = "stalled";
            break;
        }
        if (iter + 1 > cfg.max_iters) {
            result.status = "max_iters";
            break;
        }
    }

    result.sqrt_extent = best.primal_value;
    result.extent = best.primal_value * best.primal_value;
    result.dual_gap = std::abs(best.primal_value - best.dual_value);
    result.primal_residual = best.primal_residual;
    result.y.assign(best.y.data(), best.y.data() + best.y.size());
    const auto& forms = columns.forms();
    for (Eigen::Index j = 0; j < best.x.size(); ++j) {
        if (best.x(j) != cplx{}) {
            result.decomposition.push_back({forms[static_cast<std::size_t>(j)], best.x(j)});
        }
    }
    result.columns = forms;
    result.total_seconds = seconds_since(start);
    return result;
}

}  // namespace stabex
