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

#include <gtest/gtest.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles/frozen_values.hpp"

using namespace stabex;
using namespace stabex::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
   public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("stabex_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

   private:
    fs::path path_;
    static inline int counter_ = 0;
};

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "stabex");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    testing::internal::CaptureStdout();
    testing::internal::CaptureStderr();
    const int code = run(static_cast<int>(argv.size()), argv.data());
    testing::internal::GetCapturedStdout();
    testing::internal::GetCapturedStderr();
    return code;
}

void save(const StateVector& s, const std::string& path) {
    std::ofstream out(path);
    write_state(out, s);
}

void save(const json& doc, const std::string& path) { std::ofstream(path) << doc.dump(2); }

json strip_timings(json doc) {
    doc.erase("timings");
    return doc;
}

}  // namespace

TEST(StateFile, RoundTripIsBitExact) {
    for (const char* kind : {"haar", "real", "ghz", "w", "t-tensor", "stab"}) {
        const StateVector s = cmd_gen(kind, 4, 77);
        std::stringstream ss;
        write_state(ss, s);
        const StateVector back = parse_state(ss);
        ASSERT_EQ(back.n, s.n);
        for (std::size_t i = 0; i < s.dim(); ++i) {
            EXPECT_EQ(back.amps[i].real(), s.amps[i].real()) << kind;
            EXPECT_EQ(back.amps[i].imag(), s.amps[i].imag()) << kind;
        }
    }
}

TEST(StateFile, RejectsMalformedInput) {
    auto parse = [](const std::string& text, bool allow = false) {
        std::istringstream in(text);
        return parse_state(in, allow);
    };
    EXPECT_THROW(parse(""), InputError);
    EXPECT_THROW(parse("n=1 format=binary\n1 0\n0 0\n"), InputError);
    EXPECT_THROW(parse("n=1 format=relist\n1 0\n"), InputError);
    EXPECT_THROW(parse("n=1 format=relist\n1 0\n0 0\n0 0\n"), InputError);
    EXPECT_THROW(parse("n=1 format=relist\n1 0\nx 0\n"), InputError);
    EXPECT_THROW(parse("n=1 format=relist\n1 1\n0 0\n"), InputError);
    EXPECT_NO_THROW(parse("n=1 format=relist\n1 1\n0 0\n", true));
    EXPECT_NO_THROW(parse("n=1 format=relist\n0.6 0\n0 0.8\n"));
}

TEST(Count, Examples) {
    std::ostringstream out;
    cmd_count(2, out);
    EXPECT_EQ(out.str(), "n=2\ntotal 60\nk=0 4\nk=1 24\nk=2 32\n");
    std::ostringstream five;
    cmd_count(5, five);
    EXPECT_NE(five.str().find("total 2423520\n"), std::string::npos);
    std::ostringstream one;
    cmd_count(1, one);
    EXPECT_NE(one.str().find("total 6\n"), std::string::npos);
    EXPECT_THROW(cmd_count(21, one), InputError);
}

TEST(Gen, Examples) {
    const double h = std::numbers::sqrt2 / 2;
    const StateVector ghz = cmd_gen("ghz", 3, 0);
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(std::abs(ghz.amps[i]), (i == 0 || i == 7) ? h : 0.0, 1e-15);
    }
    const StateVector w = cmd_gen("w", 2, 0);
    EXPECT_NEAR(w.amps[1].real(), h, 1e-15);
    EXPECT_NEAR(w.amps[2].real(), h, 1e-15);
    EXPECT_EQ(w.amps[0], cplx{});
    EXPECT_EQ(w.amps[3], cplx{});
    const StateVector real = cmd_gen("real", 4, 5);
    for (const cplx& a : real.amps) EXPECT_EQ(a.imag(), 0.0);
    EXPECT_THROW(cmd_gen("bogus", 2, 0), InputError);
    // Seeded kinds are deterministic.
    EXPECT_EQ(cmd_gen("haar", 3, 9).amps, cmd_gen("haar", 3, 9).amps);
    EXPECT_NE(cmd_gen("haar", 3, 9).amps, cmd_gen("haar", 3, 10).amps);
}

TEST(Fidelity, Examples) {
    EXPECT_NEAR(cmd_fidelity(cmd_gen("stab", 4, 3), RealMode::Auto, 1)["value"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(cmd_fidelity(cmd_gen("t-tensor", 1, 0), RealMode::Auto, 1)["value"].get<double>(),
                oracle::kFidelityT, 1e-12);
    EXPECT_NEAR(cmd_fidelity(cmd_gen("ghz", 2, 0), RealMode::Auto, 1)["value"].get<double>(), 1.0, 1e-12);
    EXPECT_THROW(cmd_fidelity(cmd_gen("haar", 2, 0), RealMode::On, 1), InputError);
    const json doc = cmd_fidelity(cmd_gen("haar", 3, 1), RealMode::Auto, 1);
    EXPECT_TRUE(cmd_verify(doc, cmd_gen("haar", 3, 1), 1).pass());
}

TEST(Extent, StabilizerAndTTensor) {
    const auto stab = cmd_extent(cmd_gen("stab", 3, 4), ExtentRequest{});
    EXPECT_EQ(stab.exit_code, kOk);
    EXPECT_NEAR(stab.document["value"].get<double>(), 1.0, 1e-9);
    EXPECT_EQ(stab.document["trace"].size(), 1u);

    const auto t2 = cmd_extent(cmd_gen("t-tensor", 2, 0), ExtentRequest{});
    EXPECT_EQ(t2.exit_code, kOk);
    EXPECT_NEAR(t2.document["value"].get<double>(), oracle::kExtentT * oracle::kExtentT, 1e-6);
}

TEST(Extent, DocumentRoundTrip) {
    const StateVector b = cmd_gen("haar", 3, 12);
    const auto out = cmd_extent(b, ExtentRequest{});
    const ExtentResult r = extent_from_document(out.document);
    EXPECT_EQ(r.n, 3);
    EXPECT_EQ(r.extent, out.document["value"].get<double>());
    EXPECT_TRUE(r.certified);
    EXPECT_EQ(r.y.size(), 8u);
    EXPECT_EQ(extent_document(r, out.document["config"])["decomposition"], out.document["decomposition"]);
    EXPECT_THROW(extent_from_document(json{{"command", "fidelity"}}), InputError);
}

TEST(Extent, DeterministicExceptTimings) {
    const StateVector b = cmd_gen("haar", 4, 13);
    ExtentRequest req;
    req.init_size = 40;
    req.threads = 2;
    const auto a = cmd_extent(b, req);
    const auto c = cmd_extent(b, req);
    EXPECT_EQ(strip_timings(a.document).dump(), strip_timings(c.document).dump());
}

TEST(Extent, NonCertifiedExitCode) {
    ExtentRequest req;
    req.init_size = 1;
    req.max_iters = 0;
    EXPECT_EQ(cmd_extent(cmd_gen("haar", 4, 14), req).exit_code, kNotCertified);
}

TEST(Verify, PassesOnCertifiedAndCatchesTampering) {
    const StateVector b = cmd_gen("haar", 4, 15);
    const json doc = cmd_extent(b, ExtentRequest{}).document;
    EXPECT_TRUE(cmd_verify(doc, b, 1).pass());

    json perturbed = doc;
    perturbed["decomposition"][0]["re"] = perturbed["decomposition"][0]["re"].get<double>() + 1e-3;
    const VerifyReport bad = cmd_verify(perturbed, b, 1);
    EXPECT_FALSE(bad.pass());
    EXPECT_FALSE(bad.checks[0].pass);  // feasibility

    json scaled = doc;
    for (auto& v : scaled["certificate"]["y"]) {
        v[0] = v[0].get<double>() * 1.5;
        v[1] = v[1].get<double>() * 1.5;
    }
    const VerifyReport dual = cmd_verify(scaled, b, 1);
    EXPECT_FALSE(dual.pass());
    EXPECT_FALSE(dual.checks.back().pass);  // violation scan

    EXPECT_THROW(cmd_verify(doc, cmd_gen("haar", 3, 15), 1), InputError);
}

TEST(Run, ExitCodesAndFiles) {
    TempDir dir;
    const std::string state = dir.file("s.txt");
    const std::string result = dir.file("r.json");
    EXPECT_EQ(invoke({"gen", "t-tensor", "2", "-o", state}), kOk);
    EXPECT_EQ(invoke({"extent", state, "-o", result}), kOk);
    EXPECT_EQ(invoke({"verify", result, state}), kOk);
    EXPECT_EQ(invoke({"fidelity", state, "--real", "on"}), kInputError);
    EXPECT_EQ(invoke({"fidelity", dir.file("missing.txt")}), kInputError);
    EXPECT_EQ(invoke({"count", "3"}), kOk);
    EXPECT_EQ(invoke({"bogus"}), kInputError);
    EXPECT_EQ(invoke({"extent", state, "--init-size", "1", "--max-iters", "0"}), kNotCertified);

    const std::string other = dir.file("o.txt");
    EXPECT_EQ(invoke({"gen", "haar", "3", "-o", other}), kOk);
    EXPECT_EQ(invoke({"verify", result, other}), kInputError);

    json doc;
    std::ifstream(result) >> doc;
    doc["decomposition"][0]["im"] = doc["decomposition"][0]["im"].get<double>() + 1e-3;
    save(doc, result);
    EXPECT_EQ(invoke({"verify", result, state}), kNotCertified);
}

TEST(Run, WarmStartFiles) {
    TempDir dir;
    const std::string t1 = dir.file("t1.txt");
    const std::string t2 = dir.file("t2.txt");
    const std::string r1 = dir.file("r1.json");
    const std::string r2 = dir.file("r2.json");
    save(cmd_gen("t-tensor", 1, 0), t1);
    save(cmd_gen("t-tensor", 2, 0), t2);
    EXPECT_EQ(invoke({"extent", t1, "-o", r1}), kOk);
    EXPECT_EQ(invoke({"extent", t2, "--warm-start", r1, r1, "-o", r2}), kOk);
    json doc;
    std::ifstream(r2) >> doc;
    EXPECT_NEAR(doc["value"].get<double>(), oracle::kExtentT * oracle::kExtentT, 1e-9);
    EXPECT_EQ(doc["config"]["init_size"], 0);
    EXPECT_EQ(doc["trace"].size(), 1u);
    // Three qubits of warm start for a two-qubit state.
    EXPECT_EQ(invoke({"extent", t2, "--warm-start", r1, r1, r1}), kInputError);
}

TEST(Run, ThreadsFromEnvironment) {
    ::setenv("STABEX_THREADS", "3", 1);
    EXPECT_EQ(default_threads(), 3);
    ::setenv("STABEX_THREADS", "zero", 1);
    EXPECT_THROW(default_threads(), InputError);
    ::unsetenv("STABEX_THREADS");
    EXPECT_EQ(default_threads(), 1);
}
