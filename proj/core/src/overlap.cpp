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

#include "stabex/overlap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace stabex {

namespace {

inline cplx mul_ipow(cplx z, int e) {
    switch (e & 3) {
        case 0:
            return z;
        case 1:
            return {-z.imag(), z.real()};
        case 2:
            return -z;
        default:
            return {z.imag(), -z.real()};
    }
}

inline double sum_abs(const cplx* p, std::size_t m) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) {
        s += std::abs(p[i]);
    }
    return s;
}

double bound_impl(const cplx* p, std::size_t m, std::vector<cplx>& rotated) {
    rotated.clear();
    double total = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const cplx z = p[i];
        const double a = std::abs(z);
        total += a;
        if (a < 1e-15) {
            continue;
        }
        // Quarter-turn rotation into arg in [0, pi/2).
        if (z.real() > 0 && z.imag() >= 0) {
            rotated.push_back(z);
        } else if (z.real() <= 0 && z.imag() > 0) {
            rotated.push_back(mul_ipow(z, 3));
        } else if (z.real() < 0 && z.imag() <= 0) {
            rotated.push_back(-z);
        } else {
            rotated.push_back(mul_ipow(z, 1));
        }
    }
    std::sort(rotated.begin(), rotated.end(), [](const cplx& a, const cplx& b) {
        return a.real() * b.imag() - a.imag() * b.real() > 0;
    });
    cplx s = 0;
    for (const cplx& z : rotated) {
        s += z;
    }
    double best = std::abs(s);
    for (const cplx& z : rotated) {
        s += cplx(-z.real() - z.imag(), z.real() - z.imag());  // (i - 1) z
        best = std::max(best, std::abs(s));
    }
    return std::min(best, total);
}

// Size-capped collection of the best hits keyed by (|overlap|, enumeration
// rank). The modulus of the worst retained hit is published once full.
class TopCollector {
   public:
    TopCollector(std::size_t capacity, const FormIndex& index)
        : capacity_(capacity), index_(index) {}

    void offer(const CanonicalForm& f, double modulus) {
        Entry e{modulus, index_.rank(f), f};
        std::lock_guard lock(mu_);
        if (heap_.size() < capacity_) {
            heap_.push_back(e);
            std::push_heap(heap_.begin(), heap_.end(), Better{});
            if (heap_.size() == capacity_) {
                floor_.store(heap_.front().modulus, std::memory_order_relaxed);
            }
            return;
        }
        if (!Better{}(e, heap_.front())) {
            return;
        }
        std::pop_heap(heap_.begin(), heap_.end(), Better{});
        heap_.back() = e;
        std::push_heap(heap_.begin(), heap_.end(), Better{});
        floor_.store(heap_.front().modulus, std::memory_order_relaxed);
    }

    const std::atomic<double>& floor() const { return floor_; }

    struct Entry {
        double modulus;
        u128 rank;
        CanonicalForm form;
    };

    std::vector<Entry> take() { return std::move(heap_); }

   private:
    // Heap ordering: the root is the worst retained entry.
    struct Better {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.modulus != b.modulus) {
                return a.modulus > b.modulus;
            }
            return a.rank < b.rank;
        }
    };

    std::size_t capacity_;
    const FormIndex& index_;
    std::mutex mu_;
    std::vector<Entry> heap_;
    std::atomic<double> floor_{-1.0};
};

struct BranchTask {
    int k = 0;
    std::array<std::uint64_t, kMaxQubits> cols{};
};

// Hands out (k, R) branches in enumeration order.
class BranchSource {
   public:
    explicit BranchSource(int n) : n_(n) {}

    bool next_batch(std::vector<BranchTask>& out, std::size_t max_batch) {
        out.clear();
        std::lock_guard lock(mu_);
        while (out.size() < max_batch) {
            if (!rcef_) {
                if (k_ > n_) {
                    break;
                }
                rcef_.emplace(n_, k_);
            }
            BranchTask task;
            task.k = k_;
            if (rcef_->next_columns(std::span(task.cols.data(), static_cast<std::size_t>(k_)))) {
                out.push_back(task);
            } else {
                rcef_.reset();
                ++k_;
            }
        }
        return !out.empty();
    }

   private:
    int n_;
    int k_ = 1;
    std::optional<RcefEnumerator> rcef_;
    std::mutex mu_;
};

}  // namespace

std::vector<cplx> build_p(std::span<const cplx> b, int k, const GF2Matrix& r, const GF2Vector& t) {
    const int n = r.rows();
    if (b.size() != (std::size_t{1} << n) || r.cols() != k || t.len() != n) {
        throw std::invalid_argument("build_p: shapes disagree");
    }
    const auto cols = r.columns();
    const double scale = std::pow(2.0, -0.5 * k);
    std::vector<cplx> p(std::size_t{1} << k);
    std::vector<std::uint64_t> idx(p.size());
    idx[0] = t.bits();
    for (std::size_t x = 1; x < p.size(); ++x) {
        idx[x] = idx[x & (x - 1)] ^ cols[std::countr_zero(x)];
    }
    for (std::size_t x = 0; x < p.size(); ++x) {
        p[x] = std::conj(b[idx[x]]) * scale;
    }
    return p;
}

double bound(std::span<const cplx> p) {
    std::vector<cplx> scratch;
    return bound_impl(p.data(), p.size(), scratch);
}

double bound(std::span<const cplx> p, std::vector<cplx>& scratch) {
    return bound_impl(p.data(), p.size(), scratch);
}

PhaseSearch::PhaseSearch(int max_k) : max_k_(max_k) {
    if (max_k < 0 || max_k > kMaxQubits) {
        throw std::invalid_argument("PhaseSearch supports k <= 10");
    }
    level_.resize(static_cast<std::size_t>(max_k) + 1);
    odd_.resize(static_cast<std::size_t>(max_k) + 1);
    for (int d = 1; d <= max_k; ++d) {
        level_[d].resize(std::size_t{1} << (max_k - d));
        odd_[d].resize(std::size_t{1} << (max_k - d));
    }
    sort_scratch_.reserve(std::size_t{1} << max_k);
}

std::size_t PhaseSearch::scratch_size() const {
    std::size_t total = sort_scratch_.capacity();
    for (std::size_t d = 0; d < level_.size(); ++d) {
        total += level_[d].size() + odd_[d].size();
    }
    return total;
}

bool PhaseSearch::cut(double ub) const {
    if (ub <= floor_.threshold) {
        return true;
    }
    if (floor_.dynamic != nullptr) {
        const double d = floor_.dynamic->load(std::memory_order_relaxed);
        if (ub < d - PruneFloor::kTieSlack) {
            return true;
        }
    }
    return false;
}

void PhaseSearch::emit(std::uint64_t q, std::uint32_t c, cplx v) {
    ++stats_.leaves;
    const double a = std::abs(v);
    best_ = std::max(best_, a);
    if (a <= floor_.threshold) {
        return;
    }
    if (floor_.dynamic != nullptr &&
        a < floor_.dynamic->load(std::memory_order_relaxed) - PruneFloor::kTieSlack) {
        return;
    }
    if (on_leaf_ != nullptr && *on_leaf_) {
        (*on_leaf_)(q, c, v);
    }
}

double PhaseSearch::run(std::span<const cplx> p, const PruneFloor& floor, bool real_only,
                        const LeafFn& on_leaf, bool prune) {
    if (p.empty() || !std::has_single_bit(p.size())) {
        throw std::invalid_argument("P array length must be a power of two");
    }
    k_ = std::countr_zero(p.size());
    if (k_ > max_k_) {
        throw std::invalid_argument("P array larger than the search was sized for");
    }
    floor_ = floor;
    real_only_ = real_only;
    prune_ = prune;
    on_leaf_ = &on_leaf;
    best_ = 0;
    descend(0, p.data(), k_, 0, 0);
    on_leaf_ = nullptr;
    return best_;
}

void PhaseSearch::descend(int depth, const cplx* p, int bits, std::uint64_t q_acc,
                          std::uint32_t c_acc) {
    ++stats_.nodes;
    if (bits == 0) {
        emit(q_acc, c_acc, p[0]);
        return;
    }
    const std::size_t m = std::size_t{1} << bits;
    if (prune_) {
        const double ub = m >= 8 ? bound_impl(p, m, sort_scratch_) : sum_abs(p, m);
        if (cut(ub)) {
            ++stats_.cuts;
            return;
        }
    }
    const int offset = q_row_offset(k_, depth);
    const int c_max = real_only_ ? 0 : 1;
    if (bits == 1) {
        for (int c0 = 0; c0 <= c_max; ++c0) {
            for (int q00 = 0; q00 <= 1; ++q00) {
                emit(q_acc | (std::uint64_t(q00) << offset), c_acc | (std::uint32_t(c0) << depth),
                     p[0] + mul_ipow(p[1], 2 * q00 + c0));
            }
        }
        return;
    }
    const std::size_t half = m / 2;
    cplx* child = level_[depth + 1].data();
    cplx* odd = odd_[depth + 1].data();
    for (int c0 = 0; c0 <= c_max; ++c0) {
        for (int q00 = 0; q00 <= 1; ++q00) {
            const int e = 2 * q00 + c0;
            for (std::size_t y = 0; y < half; ++y) {
                odd[y] = mul_ipow(p[2 * y + 1], e);
            }
            const std::uint32_t c_next = c_acc | (std::uint32_t(c0) << depth);
            for (std::size_t q0 = 0; q0 < half; ++q0) {
                for (std::size_t y = 0; y < half; ++y) {
                    child[y] = __builtin_parityll(q0 & y) ? p[2 * y] - odd[y] : p[2 * y] + odd[y];
                }
                const std::uint64_t row = std::uint64_t(q00) | (std::uint64_t(q0) << 1);
                descend(depth + 1, child, bits - 1, q_acc | (row << offset), c_next);
            }
        }
    }
}

double max_over_qc(std::span<const cplx> p, double prune_floor, const LeafFn* collector,
                   bool real_only) {
    PhaseSearch search(std::countr_zero(std::max<std::size_t>(p.size(), 1)));
    PruneFloor floor{prune_floor, nullptr};
    static const LeafFn kNone;
    return search.run(p, floor, real_only, collector != nullptr ? *collector : kNone);
}

std::vector<OverlapHit> search_overlaps(std::span<const cplx> v, int n, const SearchBudget& budget,
                                        const SearchOptions& options) {
    if (n < 1 || n > kMaxQubits || v.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("search_overlaps: vector length must be 2^n with 1 <= n <= 10");
    }
    if (budget.top_m < 1) {
        throw std::invalid_argument("search budget top_m must be >= 1");
    }
    const FormIndex index(n);
    TopCollector collector(budget.top_m, index);

    for (std::uint32_t t = 0; t < v.size(); ++t) {
        const double a = std::abs(v[t]);
        if (a > budget.threshold) {
            collector.offer(CanonicalForm::basis_state(n, t), a);
        }
    }

    BranchSource source(n);
    std::mutex stats_mu;
    SearchStats total_stats;
    const PruneFloor floor{budget.threshold, &collector.floor()};

    auto worker = [&]() {
        PhaseSearch search(n);
        std::vector<cplx> p(v.size());
        std::vector<std::uint32_t> idx(v.size());
        std::vector<BranchTask> batch;
        CanonicalForm form;
        form.n = n;
        const LeafFn on_leaf = [&](std::uint64_t q, std::uint32_t c, cplx value) {
            form.q = q;
            form.c = c;
            collector.offer(form, std::abs(value));
        };
        while (source.next_batch(batch, 8)) {
            for (const BranchTask& task : batch) {
                const int k = task.k;
                form.k = k;
                form.r = {};
                std::uint64_t pivots = 0;
                for (int j = 0; j < k; ++j) {
                    form.r[j] = static_cast<std::uint16_t>(task.cols[j]);
                    pivots |= std::uint64_t{1} << std::countr_zero(task.cols[j]);
                }
                const double scale = std::pow(2.0, -0.5 * k);
                const std::size_t size = std::size_t{1} << k;
                for (std::uint64_t ti = 0; ti < (std::uint64_t{1} << (n - k)); ++ti) {
                    form.t = static_cast<std::uint32_t>(quotient_rep_bits(n, pivots, ti));
                    idx[0] = form.t;
                    for (std::size_t x = 1; x < size; ++x) {
                        idx[x] = idx[x & (x - 1)] ^ form.r[std::countr_zero(x)];
                    }
                    for (std::size_t x = 0; x < size; ++x) {
                        p[x] = std::conj(v[idx[x]]) * scale;
                    }
                    search.run(std::span(p.data(), size), floor, budget.real_only, on_leaf,
                               options.prune);
                }
            }
        }
        std::lock_guard lock(stats_mu);
        total_stats.nodes += search.stats().nodes;
        total_stats.leaves += search.stats().leaves;
        total_stats.cuts += search.stats().cuts;
    };

    const int threads = std::max(1, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (options.stats != nullptr) {
        *options.stats = total_stats;
    }

    auto entries = collector.take();
    std::vector<std::pair<OverlapHit, u128>> ranked;
    ranked.reserve(entries.size());
    for (const auto& e : entries) {
        ranked.push_back({OverlapHit{e.form, inner_product(e.form, v)}, e.rank});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a.first.overlap);
        const double mb = std::abs(b.first.overlap);
        if (ma != mb) {
            return ma > mb;
        }
        return a.second < b.second;
    });
    std::vector<OverlapHit> hits;
    hits.reserve(ranked.size());
    for (auto& r : ranked) {
        hits.push_back(r.first);
    }
    return hits;
}

std::vector<OverlapHit> scan(const StateVector& b, const SearchBudget& budget,
                             const SearchOptions& options) {
    if (!b.is_normalized()) {
        throw std::invalid_argument("scan requires a normalized state vector");
    }
    return search_overlaps(b.amps, b.n, budget, options);
}

FidelityResult fidelity(const StateVector& b, bool real_only, const SearchOptions& options) {
    if (real_only && b.max_abs_imag() > 1e-12) {
        throw std::invalid_argument("real-only fidelity requires a real state vector");
    }
    const auto hits = scan(b, SearchBudget{1, 0.0, real_only}, options);
    if (hits.empty()) {
        throw std::logic_error("fidelity search returned no stabilizer state");
    }
    return FidelityResult{std::norm(hits.front().overlap), hits.front().form, hits.front().overlap};
}

std::vector<OverlapHit> violations(const StateVector& y, double eps, bool real_only,
                                   std::size_t cap, const SearchOptions& options) {
    return search_overlaps(y.amps, y.n, SearchBudget{cap, 1.0 + eps, real_only}, options);
}

}  // namespace stabex
