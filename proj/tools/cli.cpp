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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stabex/overlap.hpp"
#include "stabex/states.hpp"

namespace stabex::cli {

namespace {

constexpr double kFeasibilityTol = 1e-8;
constexpr double kValueTol = 1e-8;
constexpr double kGapTol = 1e-7;
constexpr double kDualTol = 1e-7;
constexpr double kFidelityTol = 1e-9;

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json cplx_pair(cplx z) { return json::array({z.real(), z.imag()}); }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit(const json& doc, const std::string& path) {
    if (path.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << doc.dump(2) << '\n';
}

}  // namespace

StateVector parse_state(std::istream& in, bool allow_unnormalized) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("empty state file");
    }
    int n = -1;
    char format[32] = {};
    if (std::sscanf(line.c_str(), "n=%d format=%31s", &n, format) != 2 ||
        std::string(format) != "relist") {
        throw InputError("state header must read 'n=<qubits> format=relist'");
    }
    if (n < 1 || n > kMaxQubits) {
        throw InputError("state files support 1 to 10 qubits");
    }
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> amps;
    amps.reserve(dim);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const char* p = line.c_str();
        char* end = nullptr;
        const double re = std::strtod(p, &end);
        if (end == p) {
            throw InputError("bad amplitude on line " + std::to_string(amps.size() + 2));
        }
        p = end;
        const double im = std::strtod(p, &end);
        if (end == p || std::string_view(end).find_first_not_of(" \t\r") != std::string_view::npos) {
            throw InputError("bad amplitude on line " + std::to_string(amps.size() + 2));
        }
        amps.emplace_back(re, im);
    }
    if (amps.size() != dim) {
        throw InputError("expected " + std::to_string(dim) + " amplitude lines, found " +
                         std::to_string(amps.size()));
    }
    StateVector s(n, std::move(amps));
    if (!allow_unnormalized && !s.is_normalized()) {
        throw InputError("state is not normalized (norm " + std::to_string(s.norm()) + ")");
    }
    return s;
}

StateVector read_state_file(const std::string& path, bool allow_unnormalized) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return parse_state(in, allow_unnormalized);
}

void write_state(std::ostream& out, const StateVector& s) {
    out << "n=" << s.n << " format=relist\n";
    char buf[64];
    for (const cplx& a : s.amps) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a.real(), a.imag());
        out << buf;
    }
}

int default_threads() {
    const char* env = std::getenv("STABEX_THREADS");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) {
        throw InputError("STABEX_THREADS must be a positive integer");
    }
    return static_cast<int>(v);
}

void cmd_count(int n, std::ostream& out) {
    if (n < 1 || n > 20) {
        throw InputError("count supports 1 <= n <= 20");
    }
    const StateCounts c = count_states(n);
    out << "n=" << n << '\n' << "total " << c.total << '\n';
    for (std::size_t k = 0; k < c.per_k.size(); ++k) {
        out << "k=" << k << ' ' << c.per_k[k] << '\n';
    }
}

StateVector cmd_gen(const std::string& kind, int n, std::uint64_t seed) {
    if (n < 1 || n > kMaxQubits) {
        throw InputError("gen supports 1 to 10 qubits");
    }
    Rng rng(seed);
    if (kind == "haar") return haar_state(n, rng);
    if (kind == "real") return real_gaussian_state(n, rng);
    if (kind == "ghz") return ghz_state(n);
    if (kind == "w") return w_state(n);
    if (kind == "t-tensor") return t_tensor_state(n);
    if (kind == "stab") return synthesize(random_form(n, rng));
    throw InputError("unknown state kind '" + kind + "'");
}

json cmd_fidelity(const StateVector& b, RealMode real, int threads) {
    const auto start = std::chrono::steady_clock::now();
    const bool is_real = b.max_abs_imag() < 1e-12;
    if (real == RealMode::On && !is_real) {
        throw InputError("--real on requires real amplitudes");
    }
    const bool real_only = real == RealMode::On || (real == RealMode::Auto && is_real);
    StateVector target = b;
    if (real_only) {
        for (cplx& a : target.amps) {
            a = {a.real(), 0.0};
        }
    }
    const FidelityResult f = fidelity(target, real_only, SearchOptions{threads, true, nullptr});
    json doc;
    doc["command"] = "fidelity";
    doc["n"] = b.n;
    doc["value"] = f.fidelity;
    doc["sqrt_value"] = std::sqrt(f.fidelity);
    doc["form"] = to_token(f.form);
    doc["overlap"] = cplx_pair(f.overlap);
    doc["real_path"] = real_only;
    doc["config"] = {{"real", to_string(real)}, {"threads", threads}};
    doc["timings"] = {{"total_seconds", elapsed(start)}};
    return doc;
}

json extent_document(const ExtentResult& r, const json& config) {
    json doc;
    doc["command"] = "extent";
    doc["n"] = r.n;
    doc["value"] = r.extent;
    doc["sqrt_value"] = r.sqrt_extent;
    doc["certified"] = r.certified;
    doc["status"] = r.status;
    doc["real_path"] = r.real_path;
    json terms = json::array();
    for (const Term& t : r.decomposition) {
        terms.push_back({{"form", to_token(t.form)},
                         {"re", t.coefficient.real()},
                         {"im", t.coefficient.imag()}});
    }
    doc["decomposition"] = std::move(terms);
    json y = json::array();
    for (const cplx& v : r.y) {
        y.push_back(cplx_pair(v));
    }
    doc["certificate"] = {{"max_abs_ay", r.max_abs_ay},
                          {"dual_gap", r.dual_gap},
                          {"primal_residual", r.primal_residual},
                          {"y", std::move(y)}};
    json trace = json::array();
    json seconds = json::array();
    for (const IterationRecord& rec : r.trace) {
        trace.push_back({{"iteration", rec.iteration},
                         {"columns", rec.columns},
                         {"xi_hat", rec.xi_hat},
                         {"violations", rec.violations}});
        seconds.push_back(rec.seconds);
    }
    doc["trace"] = std::move(trace);
    doc["config"] = config;
    doc["timings"] = {{"total_seconds", r.total_seconds}, {"iterations", std::move(seconds)}};
    return doc;
}

ExtentResult extent_from_document(const json& doc) {
    try {
        if (doc.at("command") != "extent") {
            throw InputError("not an extent result document");
        }
        ExtentResult r;
        r.n = doc.at("n").get<int>();
        if (r.n < 1 || r.n > kMaxQubits) {
            throw InputError("result document has an unsupported register size");
        }
        r.extent = doc.at("value").get<double>();
        r.sqrt_extent = doc.at("sqrt_value").get<double>();
        r.certified = doc.at("certified").get<bool>();
        r.status = doc.value("status", "");
        r.real_path = doc.value("real_path", false);
        for (const json& t : doc.at("decomposition")) {
            r.decomposition.push_back({parse_token(t.at("form").get<std::string>(), r.n),
                                       cplx(t.at("re").get<double>(), t.at("im").get<double>())});
        }
        const json& cert = doc.at("certificate");
        r.max_abs_ay = cert.value("max_abs_ay", 0.0);
        r.dual_gap = cert.value("dual_gap", 0.0);
        r.primal_residual = cert.value("primal_residual", 0.0);
        if (cert.contains("y")) {
            for (const json& v : cert.at("y")) {
                r.y.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
            }
        }
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed result document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("malformed result document: ") + e.what());
    }
}

CommandOutcome cmd_extent(const StateVector& b, const ExtentRequest& req) {
    CGConfig cfg = CGConfig::defaults_for(b.n);
    cfg.real_mode = req.real;
    cfg.threads = req.threads;
    if (req.eps) cfg.eps_violation = *req.eps;
    if (req.max_iters) cfg.max_iters = *req.max_iters;

    std::optional<WarmStart> warm;
    if (!req.warm_start_files.empty()) {
        std::vector<ExtentResult> factors;
        for (const std::string& path : req.warm_start_files) {
            factors.push_back(extent_from_document(read_json_file(path)));
        }
        try {
            warm = product_warm_start(factors);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        if (warm->n != b.n) {
            throw InputError("warm-start factors cover " + std::to_string(warm->n) +
                             " qubits, state has " + std::to_string(b.n));
        }
        cfg.init_size = 0;
    }
    if (req.init_size) cfg.init_size = *req.init_size;
    if (b.is_normalized() && cfg.real_mode == RealMode::On && b.max_abs_imag() >= 1e-12) {
        throw InputError("--real on requires real amplitudes");
    }

    json config = {{"init_size", cfg.init_size},
                   {"eps_violation", cfg.eps_violation},
                   {"max_iters", cfg.max_iters},
                   {"feas_tol", cfg.feas_tol},
                   {"dual_tol", cfg.dual_tol},
                   {"gap_tol", cfg.gap_tol},
                   {"real", to_string(cfg.real_mode)},
                   {"violation_cap", cfg.violation_cap},
                   {"threads", cfg.threads},
                   {"warm_start", req.warm_start_files}};
    if (warm) {
        config["warm_start_value"] = warm->value;
        config["warm_start_optimal"] = warm->optimal;
    }

    CommandOutcome out;
    try {
        const ExtentResult r = compute_extent(b, cfg, warm ? &*warm : nullptr);
        out.document = extent_document(r, config);
        out.exit_code = r.certified ? kOk : kNotCertified;
    } catch (const SolverError& e) {
        json trace = json::array();
        for (const IterationRecord& rec : e.trace) {
            trace.push_back({{"iteration", rec.iteration},
                             {"columns", rec.columns},
                             {"xi_hat", rec.xi_hat},
                             {"violations", rec.violations}});
        }
        out.document = {{"command", "extent"},
                        {"n", b.n},
                        {"error", e.what()},
                        {"primal_residual", e.primal_residual},
                        {"dual_gap", e.dual_gap},
                        {"trace", std::move(trace)},
                        {"config", config}};
        out.exit_code = kSolverError;
    } catch (const InfeasibleError& e) {
        out.document = {{"command", "extent"}, {"n", b.n}, {"error", e.what()}, {"config", config}};
        out.exit_code = kSolverError;
    }
    return out;
}

bool VerifyReport::pass() const {
    for (const Check& c : checks) {
        if (!c.pass) return false;
    }
    return !checks.empty();
}

namespace {

Check make_check(std::string name, double measured, double tol) {
    return {std::move(name), measured, tol, std::isfinite(measured) && measured <= tol};
}

VerifyReport verify_extent(const json& doc, const StateVector& b, int threads) {
    const ExtentResult r = extent_from_document(doc);
    if (r.n != b.n) {
        throw InputError("result has n=" + std::to_string(r.n) + " but the state has n=" +
                         std::to_string(b.n));
    }
    VerifyReport rep;
    std::vector<cplx> recon(b.dim());
    double l1 = 0;
    for (const Term& t : r.decomposition) {
        const StateVector a = synthesize(t.form);
        for (std::size_t i = 0; i < b.dim(); ++i) {
            recon[i] += t.coefficient * a.amps[i];
        }
        l1 += std::abs(t.coefficient);
    }
    double res = 0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        res += std::norm(recon[i] - b.amps[i]);
    }
    rep.checks.push_back(make_check("feasibility ||sum x_j a_j - b||_2", std::sqrt(res), kFeasibilityTol));
    rep.checks.push_back(make_check("value |(sum |x_j|)^2 - value|", std::abs(l1 * l1 - r.extent),
                                    kValueTol * std::max(1.0, r.extent)));

    if (r.y.size() != b.dim()) {
        rep.checks.push_back({"dual vector present", 0, 0, false});
        return rep;
    }
    cplx by{};
    for (std::size_t i = 0; i < b.dim(); ++i) {
        by += std::conj(b.amps[i]) * r.y[i];
    }
    rep.checks.push_back(make_check("gap |sum |x_j| - Re(b^H y)|", std::abs(l1 - by.real()), kGapTol));
    const auto top = search_overlaps(r.y, b.n, SearchBudget{1, 0.0, false},
                                     SearchOptions{threads, true, nullptr});
    const double max_ay = top.empty() ? 0.0 : std::abs(top.front().overlap);
    rep.checks.push_back(make_check("dual max_a |a^H y| - 1", max_ay - 1.0, kDualTol));
    return rep;
}

VerifyReport verify_fidelity(const json& doc, const StateVector& b) {
    VerifyReport rep;
    try {
        if (doc.at("n").get<int>() != b.n) {
            throw InputError("result register size does not match the state");
        }
        const CanonicalForm f = parse_token(doc.at("form").get<std::string>(), b.n);
        const double value = doc.at("value").get<double>();
        const double recomputed = std::norm(inner_product(f, b.amps));
        rep.checks.push_back(make_check("fidelity |<phi|psi>|^2 - value", std::abs(recomputed - value),
                                        kFidelityTol));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed result document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("malformed result document: ") + e.what());
    }
    return rep;
}

}  // namespace

VerifyReport cmd_verify(const json& doc, const StateVector& b, int threads) {
    const std::string command = doc.value("command", "");
    if (command == "extent") return verify_extent(doc, b, threads);
    if (command == "fidelity") return verify_fidelity(doc, b);
    throw InputError("result document has no verifiable command");
}

void print_report(const VerifyReport& r, std::ostream& out) {
    char buf[256];
    for (const Check& c : r.checks) {
        std::snprintf(buf, sizeof buf, "%-40s %.3e <= %.1e  %s\n", c.name.c_str(), c.measured,
                      c.tolerance, c.pass ? "PASS" : "FAIL");
        out << buf;
    }
    out << (r.pass() ? "verify: PASS" : "verify: FAIL") << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"Stabilizer extent and fidelity toolkit"};
    app.require_subcommand(1);

    int n = 0;
    auto* count = app.add_subcommand("count", "Print the number of n-qubit stabilizer states");
    count->add_option("n", n, "Number of qubits")->required();

    std::string kind;
    std::uint64_t seed = 0;
    std::string output;
    auto* gen = app.add_subcommand("gen", "Write a state file");
    gen->add_option("kind", kind, "haar | real | ghz | w | t-tensor | stab")->required();
    gen->add_option("n", n, "Number of qubits")->required();
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("-o,--output", output, "Output path (stdout when omitted)");

    std::string state_path;
    std::string real = "auto";
    int threads = 0;
    bool allow_unnormalized = false;
    auto* fid = app.add_subcommand("fidelity", "Stabilizer fidelity of a state");
    fid->add_option("state", state_path, "State file")->required();
    fid->add_option("--real", real, "auto | on | off");
    fid->add_option("--threads", threads, "Worker threads (default STABEX_THREADS or 1)");
    fid->add_option("-o,--output", output, "Output path (stdout when omitted)");
    fid->add_flag("--allow-unnormalized", allow_unnormalized, "Accept amplitudes whose norm is not 1");

    ExtentRequest req;
    std::size_t init_size = 0;
    double eps = 0;
    int max_iters = 0;
    auto* ext = app.add_subcommand("extent", "Stabilizer extent by column generation");
    ext->add_option("state", state_path, "State file")->required();
    auto* init_opt = ext->add_option("--init-size", init_size, "Initial column count");
    auto* eps_opt = ext->add_option("--eps", eps, "Violation tolerance");
    auto* iters_opt = ext->add_option("--max-iters", max_iters, "Iteration limit");
    ext->add_option("--real", real, "auto | on | off");
    ext->add_option("--threads", threads, "Worker threads (default STABEX_THREADS or 1)");
    ext->add_option("--warm-start", req.warm_start_files, "Extent results of tensor factors, lowest qubits first");
    ext->add_option("-o,--output", output, "Output path (stdout when omitted)");

    std::string result_path;
    auto* ver = app.add_subcommand("verify", "Check a result document against its input state");
    ver->add_option("result", result_path, "Result document")->required();
    ver->add_option("state", state_path, "State file")->required();
    ver->add_option("--threads", threads, "Worker threads (default STABEX_THREADS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (threads <= 0) {
            threads = default_threads();
        }
        if (count->parsed()) {
            cmd_count(n, std::cout);
            return kOk;
        }
        if (gen->parsed()) {
            const StateVector s = cmd_gen(kind, n, seed);
            if (output.empty()) {
                write_state(std::cout, s);
            } else {
                std::ofstream out(output);
                if (!out) throw InputError("cannot write " + output);
                write_state(out, s);
            }
            return kOk;
        }
        if (fid->parsed()) {
            const StateVector b = read_state_file(state_path, allow_unnormalized);
            if (!b.is_normalized()) throw InputError("fidelity requires a normalized state");
            emit(cmd_fidelity(b, parse_real_mode(real), threads), output);
            return kOk;
        }
        if (ext->parsed()) {
            const StateVector b = read_state_file(state_path);
            req.real = parse_real_mode(real);
            req.threads = threads;
            if (init_opt->count()) req.init_size = init_size;
            if (eps_opt->count()) req.eps = eps;
            if (iters_opt->count()) req.max_iters = max_iters;
            const CommandOutcome res = cmd_extent(b, req);
            emit(res.document, output);
            return res.exit_code;
        }
        if (ver->parsed()) {
            const json doc = read_json_file(result_path);
            const StateVector b = read_state_file(state_path);
            const VerifyReport rep = cmd_verify(doc, b, threads);
            print_report(rep, std::cout);
            return rep.pass() ? kOk : kNotCertified;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverError;
    }
    return kInputError;
}

}  // namespace stabex::cli
