// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "umtk/cli.hpp"
#include "umtk/error.hpp"
#include "umtk/kernels.hpp"
#include "umtk/logit_file.hpp"
#include "umtk/stats.hpp"
#include "umtk/um.hpp"

namespace {

using namespace umtk;
using umtk::testing::TempDir;

// Tolerances and budgets.
constexpr double kEntropyTol = 1e-10;
constexpr double kShiftTol = 1e-12;
constexpr double kSrccTol = 1e-12;
constexpr double kTieCase = 0.9486833;
constexpr double kTieCaseTol = 1e-7;
constexpr double kPlantedEntropyMax = -0.9;
constexpr double kPlantedMaxMin = 0.9;
constexpr double kEntropyBudget = 5.0;
constexpr double kShiftBudget = 5.0;
constexpr double kSrccBudget = 10.0;
constexpr double kWerBudget = 10.0;
constexpr double kFormatBudget = 5.0;
constexpr double kPipelineBudget = 60.0;

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::vector<const kernels::RowKernels*> available_kernels() {
    std::vector<const kernels::RowKernels*> ks{&kernels::scalar_kernels()};
    if (const auto* k = kernels::avx2_kernels())
        ks.push_back(k);
    return ks;
}

std::string isa_list() {
    std::string s;
    for (const auto* k : available_kernels())
        s += (s.empty() ? "" : "+") + std::string(kernels::to_string(k->isa));
    return s;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome entropy_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> qd(2, 512);
    std::uniform_real_distribution<double> scale(0.01, 50.0);
    std::vector<std::vector<float>> rows(1000);
    for (auto& row : rows) {
        std::normal_distribution<double> n(0.0, scale(rng));
        row.resize(qd(rng));
        for (float& x : row)
            x = static_cast<float>(n(rng));
    }
    double worst = 0.0;
    std::size_t bound_violations = 0;
    for (const auto* k : available_kernels()) {
        kernels::select(k->isa);
        for (const auto& row : rows) {
            const double h = window_entropy(std::span<const float>(row));
            worst = std::max(worst, std::abs(h - static_cast<double>(testing::entropy_oracle(row))));
            bound_violations += !(h >= 0.0 && h <= std::log(static_cast<double>(row.size())));
        }
    }
    kernels::select(kernels::detect_isa());
    return {worst <= kEntropyTol && bound_violations == 0,
            "1000 rows x " + isa_list() + ", max |err| " + fmt("%.2e", worst) + ", bound violations " +
                std::to_string(bound_violations)};
}

Outcome shift_and_sharpening() {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::size_t> qd(2, 64);
    std::uniform_int_distribution<int> grid(-2048, 2048);
    std::uniform_int_distribution<int> shift(-1000, 1000);
    double worst_shift = 0.0;
    std::size_t non_strict = 0;
    std::size_t rows_used = 0;
    for (const auto* k : available_kernels()) {
        kernels::select(k->isa);
        std::mt19937_64 local(rng());
        for (int t = 0; t < 100; ++t) {
            // Values on a 1/64 grid, so integer shifts are exact in float.
            std::vector<float> row(qd(local));
            for (float& x : row)
                x = static_cast<float>(grid(local)) / 64.0f;
            const float c = static_cast<float>(shift(local));
            auto shifted = row;
            for (float& x : shifted)
                x += c;
            worst_shift = std::max(worst_shift, std::abs(window_entropy(std::span<const float>(row)) -
                                                         window_entropy(std::span<const float>(shifted))));
            std::vector<double> d(row.begin(), row.end()), dc(row.size());
            const double cd = std::ldexp(static_cast<double>(shift(local)), -3) + 0.1;
            for (std::size_t j = 0; j < d.size(); ++j)
                dc[j] = d[j] + cd;
            worst_shift = std::max(worst_shift, std::abs(window_entropy(std::span<const double>(d)) -
                                                         window_entropy(std::span<const double>(dc))));
        }
        for (int t = 0; t < 100; ++t) {
            std::normal_distribution<double> n;
            std::vector<double> z(qd(local));
            for (double& x : z)
                x = n(local);
            if (std::count(z.begin(), z.end(), *std::max_element(z.begin(), z.end())) != 1)
                continue;
            ++rows_used;
            double mean = 0.0;
            for (double x : z)
                mean += x;
            mean /= static_cast<double>(z.size());
            double prev_d = INFINITY;
            double prev_f = INFINITY;
            for (double s : {1.0, 2.0, 4.0, 8.0}) {
                std::vector<double> zs(z.size());
                std::vector<float> zf(z.size());
                for (std::size_t j = 0; j < z.size(); ++j) {
                    zs[j] = s * (z[j] - mean);
                    zf[j] = static_cast<float>(zs[j]);
                }
                const double hd = window_entropy(std::span<const double>(zs));
                const double hf = window_entropy(std::span<const float>(zf));
                non_strict += !(hd < prev_d) + !(hf < prev_f);
                prev_d = hd;
                prev_f = hf;
            }
        }
    }
    kernels::select(kernels::detect_isa());
    return {worst_shift <= kShiftTol && non_strict == 0 && rows_used >= 100,
            "shift max |dH| " + fmt("%.2e", worst_shift) + "; " + std::to_string(rows_used) +
                " sharpening rows x " + isa_list() + ", non-strict steps " + std::to_string(non_strict)};
}

Outcome srcc_oracle() {
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> nd(3, 100);
    std::uniform_real_distribution<double> tie(0.0, 0.5);
    double worst = 0.0;
    std::size_t series = 0;
    std::size_t with_ties = 0;
    while (series < 1000) {
        const std::size_t n = nd(rng);
        auto x = testing::tied_series(rng, n, tie(rng));
        auto y = testing::tied_series(rng, n, tie(rng));
        if (testing::is_constant(x) || testing::is_constant(y))
            continue;
        const double r = spearman(PairedSeries(x, y));
        worst = std::max(worst, std::abs(r - static_cast<double>(testing::spearman_oracle(x, y))));
        auto sx = x;
        std::sort(sx.begin(), sx.end());
        with_ties += std::adjacent_find(sx.begin(), sx.end()) != sx.end();
        ++series;
    }
    const double tie_case = spearman(PairedSeries({1, 2, 2, 4}, {1, 3, 2, 4}));
    const bool tie_ok = std::abs(tie_case - kTieCase) <= kTieCaseTol;
    return {worst <= kSrccTol && tie_ok,
            "1000 series (" + std::to_string(with_ties) + " with ties), max |err| " + fmt("%.2e", worst) +
                "; tie case " + fmt("%.10f", tie_case)};
}

Outcome wer_oracle() {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> len(0, 12);
    std::uniform_int_distribution<int> vocab(0, 4);
    std::size_t mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<std::string> ref(std::max(1, len(rng)));
        std::vector<std::string> hyp(len(rng));
        for (auto& w : ref)
            w = "w" + std::to_string(vocab(rng));
        for (auto& w : hyp)
            w = "w" + std::to_string(vocab(rng));
        const auto b = wer(std::span<const std::string>(ref), std::span<const std::string>(hyp));
        mismatches += b.errors() != testing::levenshtein(ref, hyp);
    }
    return {mismatches == 0, "1000 pairs, S+D+I != Levenshtein in " + std::to_string(mismatches)};
}

template <class F>
std::string error_name_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return std::string(e.name());
    }
    return "no error";
}

Outcome format_round_trip() {
    TempDir dir("acceptance_format");
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<std::size_t> wd(1, 40), qd(2, 300);
    std::uniform_int_distribution<std::uint32_t> bits;
    std::uniform_real_distribution<double> pd(0.001, 0.95);
    std::size_t mismatches = 0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t w = wd(rng), q = qd(rng);
        std::vector<float> v(w * q);
        for (float& x : v) {
            do {
                const std::uint32_t b = bits(rng);
                std::memcpy(&x, &b, 4);
            } while (!std::isfinite(x));
        }
        LogitFileMetadata meta;
        meta.utterance_id = "utt_" + std::to_string(t);
        meta.model_id = t % 2 ? "facebook/wav2vec2-large-960h" : "model \"q\"";
        meta.logit_source = static_cast<LogitSource>(t % 3);
        if (t % 4) {
            meta.dropout_p = pd(rng);
            meta.num_passes = 1 + static_cast<std::uint32_t>(t);
        }
        meta.sample_rate_hz = t % 5 ? 16000 : 8000;
        const auto path = dir / ("f" + std::to_string(t) + ".umlg");
        const LogitMatrix m(w, q, v);
        write_logit_file(m, meta, path);
        const auto back = read_logit_file(path);
        mismatches += !(back.matrix.windows() == w && back.matrix.vocab() == q &&
                        std::memcmp(back.matrix.values().data(), v.data(), v.size() * 4) == 0 &&
                        back.metadata == meta);
    }

    LogitFileMetadata meta;
    meta.utterance_id = "fixture";
    meta.model_id = "m";
    const auto good = encode_logit_file(LogitMatrix(2, 3, {1, 2, 3, 4, 5, 6}), meta);
    auto write = [&](const std::string& name, const std::vector<std::uint8_t>& bytes) {
        std::ofstream out(dir / name, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        return dir / name;
    };
    auto bad_magic = good;
    bad_magic[1] = 'X';
    auto short_payload = good;
    short_payload.resize(good.size() - 3);
    auto nan_payload = good;
    const float nan = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(nan_payload.data() + good.size() - 4, &nan, 4);
    auto q1 = good;
    q1[14] = 1;
    const std::vector<std::pair<std::string, std::vector<std::uint8_t>>> fixtures{
        {"MalformedHeader", bad_magic},
        {"ShapeMismatch", short_payload},
        {"NonFiniteValue", nan_payload},
        {"UnsupportedShape", q1},
    };
    std::size_t wrong = 0;
    std::string fixture_notes;
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto path = write("bad" + std::to_string(i) + ".umlg", fixtures[i].second);
        const auto got = error_name_of([&] { read_logit_file(path); });
        if (got != fixtures[i].first) {
            ++wrong;
            fixture_notes += " [" + fixtures[i].first + " -> " + got + "]";
        }
    }
    return {mismatches == 0 && wrong == 0,
            "500 round trips, " + std::to_string(mismatches) + " mismatches; 4 fixtures, " + std::to_string(wrong) +
                " wrong" + fixture_notes};
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "umtk");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::map<std::string, double> srcc_from_csv(const std::string& csv) {
    std::map<std::string, double> srcc;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const auto next = line.find(',', comma + 1);
        srcc[line.substr(0, comma)] = std::stod(line.substr(comma + 1, next - comma - 1));
    }
    return srcc;
}

Outcome planted_signal() {
    TempDir dir("acceptance_planted");
    std::string detail;
    bool ok = true;
    std::size_t sign_failures = 0;
    std::size_t threshold_misses = 0;
    double worst_entropy = -1.0;
    double worst_max = 1.0;
    for (int seed = 0; seed <= 9; ++seed) {
        const auto out_dir = (dir / ("seed" + std::to_string(seed))).string();
        const auto s = cli({"synth", "--n", "200", "--w", "16", "--q", "32", "--law", "temperature", "--seed",
                            std::to_string(seed), "--out-dir", out_dir});
        if (s.code != 0)
            return {false, "synth seed " + std::to_string(seed) + " failed: " + s.err};
        const auto e = cli({"eval", out_dir + "/manifest.csv", "--format", "csv"});
        if (e.code != 0)
            return {false, "eval seed " + std::to_string(seed) + " failed: " + e.err};
        const auto srcc = srcc_from_csv(e.out);
        const double h = srcc.at("entropy");
        const double mx = srcc.at("max");
        sign_failures += !(h * mx < 0.0);
        threshold_misses += !(h <= kPlantedEntropyMax && mx >= kPlantedMaxMin);
        worst_entropy = std::max(worst_entropy, h);
        worst_max = std::min(worst_max, mx);
        if (seed == 0) {
            ok = ok && h <= kPlantedEntropyMax && mx >= kPlantedMaxMin;
            detail = "seed 0: entropy " + fmt("%+.4f", h) + ", max " + fmt("%+.4f", mx);
        }
    }
    ok = ok && sign_failures == 0;
    detail += "; seeds 0-9: opposite signs failed " + std::to_string(sign_failures) + ", thresholds missed " +
              std::to_string(threshold_misses) + " (worst entropy " + fmt("%+.4f", worst_entropy) + ", worst max " +
              fmt("%+.4f", worst_max) + ")";
    return {ok, detail};
}

Outcome determinism() {
    TempDir dir("acceptance_determinism");
    std::vector<std::string> manifests;
    for (int i = 0; i < 3; ++i) {
        const auto out_dir = (dir / ("d" + std::to_string(i))).string();
        const auto s = cli({"synth", "--n", "60", "--law", i == 2 ? "noise" : "temperature", "--seed",
                            std::to_string(i), "--out-dir", out_dir});
        if (s.code != 0)
            return {false, "synth failed: " + s.err};
        manifests.push_back(out_dir + "/manifest.csv");
    }
    std::ofstream(dir / "sweep.csv") << "dropout_p,manifest_path\n0," << manifests[0] << "\n0.1," << manifests[1]
                                     << "\n0.2," << manifests[2] << "\n";

    std::size_t differing = 0;
    std::size_t runs = 0;
    std::string failure;
    auto check = [&](std::vector<std::string> args) {
        std::vector<std::string> outputs;
        for (const char* workers : {"1", "4", "1", "4"}) {
            auto a = args;
            a.insert(a.end(), {"--workers", workers});
            const auto r = cli(a);
            ++runs;
            if (r.code != 0)
                failure += " [" + args[0] + " exit " + std::to_string(r.code) + ": " + r.err + "]";
            outputs.push_back(r.out);
        }
        for (const auto& o : outputs)
            differing += o != outputs[0];
    };
    for (const char* format : {"csv", "markdown", "json"}) {
        check({"eval", manifests[2], "--bootstrap", "--seed", "7", "--format", format});
        check({"sweep", (dir / "sweep.csv").string(), "--format", format});
    }
    return {differing == 0 && failure.empty(),
            std::to_string(runs) + " runs (eval+sweep x 3 formats x workers {1,4} x 2), " + std::to_string(differing) +
                " differing outputs" + failure};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"entropy-oracle", kEntropyBudget, entropy_oracle},
        {"shift-sharpening", kShiftBudget, shift_and_sharpening},
        {"srcc-oracle", kSrccBudget, srcc_oracle},
        {"wer-oracle", kWerBudget, wer_oracle},
        {"format-round-trip", kFormatBudget, format_round_trip},
        {"planted-signal-e2e", kPipelineBudget, planted_signal},
        {"determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
        const bool pass = o.ok && in_time;
        failed += !pass;
        std::printf("%s  %-20s %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                    c.budget_s > 0.0 ? (" (budget " + fmt("%.0f", c.budget_s) + " s)").c_str() : "");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
