// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "umtk/cli.hpp"
#include "umtk/logit_file.hpp"

namespace umtk::cli {
namespace {

using umtk::testing::TempDir;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "umtk");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string synth(const TempDir& dir, const std::string& name, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"synth", "--out-dir", (dir / name).string(), "--n", "40"};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, kSuccess) << r.err;
    return (dir / name / "manifest.csv").string();
}

TEST(Cli, UmPrintsVector) {
    TempDir dir("cli_um");
    LogitFileMetadata meta;
    meta.utterance_id = "z";
    meta.model_id = "m";
    write_logit_file(LogitMatrix(2, 4, std::vector<float>(8, 0.0f)), meta, dir / "z.umlg");
    auto r = run_cli({"um", (dir / "z.umlg").string()});
    EXPECT_EQ(r.code, kSuccess);
    EXPECT_EQ(r.out, "entropy=1.386294 mean=0 max=0 sd=0\n");

    r = run_cli({"um", (dir / "z.umlg").string(), "--json"});
    EXPECT_NE(r.out.find("\"entropy\":1.38629436111989"), std::string::npos) << r.out;

    const auto missing = (dir / "nope.umlg").string();
    r = run_cli({"um", missing});
    EXPECT_EQ(r.code, kFormatError);
    EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST(Cli, SynthEvalCsv) {
    TempDir dir("cli_eval");
    const auto manifest = synth(dir, "s");
    EXPECT_TRUE(std::filesystem::exists(dir / "s" / "ground_truth.json"));
    const auto r = run_cli({"eval", manifest, "--format", "csv"});
    ASSERT_EQ(r.code, kSuccess) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "um,srcc,ci_low,ci_high,n");
    EXPECT_NE(r.out.find("\nentropy,-0.9"), std::string::npos) << r.out;
}

TEST(Cli, EvalDeterminismAcrossRunsAndWorkers) {
    TempDir dir("cli_det");
    const auto manifest = synth(dir, "s", {"--law", "noise", "--seed", "3"});
    std::vector<std::string> base{"eval", manifest, "--bootstrap", "--seed", "7", "--format", "json"};
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    const auto a = run_cli(one), b = run_cli(one), c = run_cli(four);
    ASSERT_EQ(a.code, kSuccess) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_NE(a.out.find("\"resamples\": 1000"), std::string::npos);

    const auto n = run_cli({"eval", manifest, "--bootstrap", "200", "--seed", "7", "--format", "csv"});
    ASSERT_EQ(n.code, kSuccess) << n.err;
}

TEST(Cli, EvalWritesOutFile) {
    TempDir dir("cli_out");
    const auto manifest = synth(dir, "s");
    const auto r = run_cli({"eval", manifest, "--out", (dir / "r.md").string()});
    ASSERT_EQ(r.code, kSuccess) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(slurp(dir / "r.md").find("| synthetic_temperature |"), std::string::npos);
}

TEST(Cli, EvalExitCodes) {
    TempDir dir("cli_codes");
    const auto manifest = synth(dir, "s");
    std::ifstream in(manifest);
    std::string header, l1, l2;
    std::getline(in, header);
    std::getline(in, l1);
    std::getline(in, l2);
    std::ofstream(dir / "s" / "two.csv") << header << "\n" << l1 << "\n" << l2 << "\n";
    EXPECT_EQ(run_cli({"eval", (dir / "s" / "two.csv").string()}).code, kEvaluationError);
    EXPECT_EQ(run_cli({"eval", (dir / "missing.csv").string()}).code, kFormatError);
    EXPECT_EQ(run_cli({"eval", manifest, "--bootstrap"}).code, kUsageError);
    EXPECT_EQ(run_cli({"eval", manifest, "--format", "xml"}).code, kUsageError);
    EXPECT_EQ(run_cli({"eval", manifest, "--wer"}).code, kUsageError);
    EXPECT_EQ(run_cli({"eval", manifest, "--level", "1.5", "--bootstrap", "--seed", "1"}).code, kUsageError);
    EXPECT_EQ(run_cli({"eval", manifest, "--frobnicate"}).code, kUsageError);
    EXPECT_EQ(run_cli({"--frobnicate"}).code, kUsageError);
    EXPECT_EQ(run_cli({}).code, kUsageError);
}

TEST(Cli, EvalSelectsTask) {
    TempDir dir("cli_task");
    const auto manifest = synth(dir, "s");
    EXPECT_EQ(run_cli({"eval", manifest, "--task", "synthetic_temperature"}).code, kSuccess);
    EXPECT_EQ(run_cli({"eval", manifest, "--task", "other"}).code, kEvaluationError);
}

TEST(Cli, SynthUsage) {
    TempDir dir("cli_synth");
    EXPECT_EQ(run_cli({"synth", "--q", "1", "--out-dir", (dir / "x").string()}).code, kUsageError);
    EXPECT_EQ(run_cli({"synth", "--law", "sunshine", "--out-dir", (dir / "x").string()}).code, kUsageError);
    EXPECT_EQ(run_cli({"synth"}).code, kUsageError);
    const auto r = run_cli({"synth", "--out-dir", (dir / "d").string()});
    EXPECT_EQ(r.code, kSuccess);
    EXPECT_EQ(r.out, (dir / "d" / "manifest.csv").string() + "\n");
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir / "d" / "logits"))
        files += e.path().extension() == ".umlg";
    EXPECT_EQ(files, 200u);
}

TEST(Cli, SynthTwiceIsIdentical) {
    TempDir dir("cli_synth2");
    synth(dir, "a", {"--seed", "5"});
    synth(dir, "b", {"--seed", "5"});
    EXPECT_EQ(slurp(dir / "a" / "manifest.csv"), slurp(dir / "b" / "manifest.csv"));
    EXPECT_EQ(slurp(dir / "a" / "ground_truth.json"), slurp(dir / "b" / "ground_truth.json"));
    EXPECT_EQ(slurp(dir / "a" / "logits" / "synth_00017.umlg"), slurp(dir / "b" / "logits" / "synth_00017.umlg"));
}

TEST(Cli, Sweep) {
    TempDir dir("cli_sweep");
    const auto m0 = synth(dir, "p0", {"--seed", "1"});
    const auto m1 = synth(dir, "p1", {"--seed", "2"});
    const auto m2 = synth(dir, "p2", {"--seed", "3", "--law", "noise"});
    std::ofstream(dir / "sweep.csv") << "dropout_p,manifest_path\n0.2," << m2 << "\n0," << m0 << "\n0.1,p1/manifest.csv\n";
    auto r = run_cli({"sweep", (dir / "sweep.csv").string()});
    ASSERT_EQ(r.code, kSuccess) << r.err;
    std::istringstream lines(r.out);
    std::vector<std::string> rows;
    for (std::string l; std::getline(lines, l);)
        rows.push_back(l);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "p,um_mean,um_max,um_sd,um_entropy");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
    EXPECT_EQ(rows[2].substr(0, 4), "0.1,");
    EXPECT_EQ(rows[3].substr(0, 4), "0.2,");
    EXPECT_EQ(run_cli({"sweep", (dir / "sweep.csv").string(), "--workers", "4"}).out, r.out);

    std::ofstream(dir / "nobase.csv") << "dropout_p,manifest_path\n0.1," << m1 << "\n0.2," << m2 << "\n";
    EXPECT_EQ(run_cli({"sweep", (dir / "nobase.csv").string()}).code, kEvaluationError);
}

TEST(Cli, WerFromFiles) {
    TempDir dir("cli_wer");
    std::ofstream(dir / "ref.txt") << "the cat sat\nhello\n";
    std::ofstream(dir / "hyp.txt") << "the cat sat\nhello\n";
    auto r = run_cli({"wer", "--ref", (dir / "ref.txt").string(), "--hyp", (dir / "hyp.txt").string()});
    ASSERT_EQ(r.code, kSuccess) << r.err;
    EXPECT_NE(r.out.find("corpus\t4\t0\t0\t0\t0\n"), std::string::npos) << r.out;

    // Utterance WERs 1.0 and 0.0 average to 0.5; the corpus ratio is 1/10.
    std::ofstream(dir / "r2.txt") << "a\nb c d e f g h i j\n";
    std::ofstream(dir / "h2.txt") << "x\nb c d e f g h i j\n";
    r = run_cli({"wer", "--ref", (dir / "r2.txt").string(), "--hyp", (dir / "h2.txt").string()});
    ASSERT_EQ(r.code, kSuccess) << r.err;
    EXPECT_NE(r.out.find("corpus\t10\t1\t0\t0\t0.1\n"), std::string::npos) << r.out;

    std::ofstream(dir / "h3.txt") << "x\n";
    std::ofstream(dir / "r3.txt") << "a\nb\nc\n";
    EXPECT_EQ(run_cli({"wer", "--ref", (dir / "r3.txt").string(), "--hyp", (dir / "h3.txt").string()}).code,
              kUsageError);
    EXPECT_EQ(run_cli({"wer", "--ref", (dir / "r3.txt").string()}).code, kUsageError);
    EXPECT_EQ(run_cli({"wer"}).code, kUsageError);
}

TEST(Cli, WerFromDecode) {
    TempDir dir("cli_wer_decode");
    std::ofstream(dir / "vocab.txt") << "#blank=0\n<b>\nhi\nyo\n";
    LogitFileMetadata meta;
    meta.model_id = "m";
    std::ofstream manifest(dir / "m.csv");
    manifest << "utterance_id,mos,logit_path,task_id,transcript_ref\n";
    for (int i = 0; i < 3; ++i) {
        meta.utterance_id = "u" + std::to_string(i);
        std::vector<float> v(3, 0.0f);
        v[1 + i % 2] = 2.0f;
        write_logit_file(LogitMatrix(1, 3, v), meta, dir / (meta.utterance_id + ".umlg"));
        manifest << meta.utterance_id << ",3," << meta.utterance_id << ".umlg,t,hi\n";
    }
    manifest << "u3,3,u3.umlg,t,hi\n"; // no file
    manifest.close();
    const auto r = run_cli({"wer", "--decode", (dir / "m.csv").string(), "--vocab", (dir / "vocab.txt").string()});
    ASSERT_EQ(r.code, kSuccess) << r.err;
    EXPECT_NE(r.out.find("corpus\t3\t1\t0\t0\t"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("# skipped u3"), std::string::npos) << r.out;
}

TEST(Cli, KernelFlag) {
    TempDir dir("cli_kernel");
    const auto manifest = synth(dir, "s");
    const auto a = run_cli({"--kernel", "scalar", "eval", manifest, "--format", "csv"});
    const auto b = run_cli({"--kernel", "auto", "eval", manifest, "--format", "csv"});
    ASSERT_EQ(a.code, kSuccess) << a.err;
    ASSERT_EQ(b.code, kSuccess) << b.err;
    EXPECT_EQ(run_cli({"--kernel", "neon", "eval", manifest}).code, kUsageError);
}

TEST(Cli, HelpListsFlags) {
    const auto r = run_cli({"eval", "--help"});
    EXPECT_EQ(r.code, kSuccess);
    for (const char* flag : {"--bootstrap", "--level", "--seed", "--wer", "--format", "--out", "--workers"})
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
}

} // namespace
} // namespace umtk::cli
