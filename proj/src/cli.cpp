// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "detail/strings.hpp"
#include "umtk/error.hpp"
#include "umtk/harness.hpp"
#include "umtk/kernels.hpp"
#include "umtk/parallel.hpp"
#include "umtk/report.hpp"

namespace umtk::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Six decimals with trailing zeros trimmed: 1.386294, 0, -2.5.
std::string short_decimal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.')
        s.pop_back();
    if (s == "-0")
        s = "0";
    return s;
}

std::string one_line(std::string_view text) {
    std::string s(detail::trim(text));
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.ends_with('\r'))
            line.pop_back();
        lines.push_back(std::move(line));
    }
    if (in.bad())
        throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    return lines;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error(ErrorCode::IoFailure, "cannot open " + out_path + " for writing");
    file << text;
    file.flush();
    if (!file)
        throw Error(ErrorCode::IoFailure, "write failed for " + out_path);
}

ReportFormat parse_format(const std::string& name) {
    auto f = report_format_from_string(name);
    if (!f)
        throw UsageError("unknown format '" + name + "'");
    return *f;
}

const std::vector<std::string> kFormats{"csv", "markdown", "md", "json"};

// ---------------------------------------------------------------------------

struct UmArgs {
    std::string logit_path;
    bool json = false;
};

int cmd_um(const UmArgs& a, std::ostream& out) {
    const auto file = read_logit_file(a.logit_path);
    const auto ums = compute_um_vector(file.matrix);
    if (a.json) {
        nlohmann::json j = {{"mean", ums.mean}, {"max", ums.max}, {"sd", ums.sd}, {"entropy", ums.entropy}};
        out << j.dump() << '\n';
    } else {
        out << "entropy=" << short_decimal(ums.entropy) << " mean=" << short_decimal(ums.mean)
            << " max=" << short_decimal(ums.max) << " sd=" << short_decimal(ums.sd) << '\n';
    }
    return kSuccess;
}

struct EvalArgs {
    std::string manifest;
    std::optional<std::size_t> bootstrap;
    double level = 0.95;
    std::optional<std::uint64_t> seed;
    bool wer = false;
    std::string vocab;
    std::string hyp;
    std::string format = "markdown";
    std::string out;
    std::string task;
    unsigned workers = default_workers();
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const ReportFormat format = parse_format(a.format);
    if (a.bootstrap && !a.seed)
        throw UsageError("--bootstrap requires --seed");
    if (a.wer && a.vocab.empty() == a.hyp.empty())
        throw UsageError("--wer needs exactly one of --vocab or --hyp");
    if (!a.wer && (!a.vocab.empty() || !a.hyp.empty()))
        throw UsageError("--vocab and --hyp are only used with --wer");

    auto records = read_manifest(a.manifest);
    std::optional<std::vector<std::string>> hypotheses;
    if (a.wer && !a.hyp.empty()) {
        hypotheses = read_lines(a.hyp);
        if (hypotheses->size() != records.size())
            throw UsageError("--hyp has " + std::to_string(hypotheses->size()) + " lines, manifest has " +
                             std::to_string(records.size()) + " rows");
    }
    if (!a.task.empty()) {
        std::vector<UtteranceRecord> kept;
        std::vector<std::string> kept_hyp;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].task_id != a.task)
                continue;
            kept.push_back(records[i]);
            if (hypotheses)
                kept_hyp.push_back((*hypotheses)[i]);
        }
        records = std::move(kept);
        if (hypotheses)
            hypotheses = std::move(kept_hyp);
    }

    EvaluationOptions options;
    options.workers = a.workers;
    if (a.bootstrap)
        options.bootstrap = BootstrapOptions{*a.bootstrap, a.level, *a.seed};
    if (a.wer) {
        if (hypotheses)
            options.wer_against = std::move(*hypotheses);
        else
            options.wer_against = read_vocabulary(a.vocab);
    }
    const auto tasks = evaluate_tasks(records, options);
    emit(render_report(tasks, format), a.out, out);
    return kSuccess;
}

struct SweepArgs {
    std::string spec;
    std::string format = "csv";
    std::string out;
    unsigned workers = default_workers();
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    const ReportFormat format = parse_format(a.format);
    std::map<double, std::vector<UtteranceRecord>> manifests;
    for (const auto& [p, path] : read_sweep_spec(a.spec))
        manifests.emplace(p, read_manifest(path));
    emit(render_report(evaluate_sweep(manifests, a.workers), format), a.out, out);
    return kSuccess;
}

struct SynthArgs {
    SyntheticSpec spec;
    std::string law = "temperature";
    std::string out_dir;
    unsigned workers = default_workers();
};

int cmd_synth(SynthArgs a, std::ostream& out) {
    auto law = quality_law_from_string(a.law);
    if (!law)
        throw UsageError("unknown --law '" + a.law + "'");
    a.spec.law = *law;
    try {
        a.spec.validate();
    } catch (const Error& e) {
        throw UsageError(e.detail());
    }
    out << generate_synthetic(a.spec, a.out_dir, a.workers).string() << '\n';
    return kSuccess;
}

struct WerArgs {
    std::string ref;
    std::string hyp;
    std::string decode;
    std::string vocab;
};

int cmd_wer(const WerArgs& a, std::ostream& out) {
    const bool pair_mode = !a.ref.empty() || !a.hyp.empty();
    const bool decode_mode = !a.decode.empty() || !a.vocab.empty();
    if (pair_mode == decode_mode)
        throw UsageError("use either --ref/--hyp or --decode/--vocab");
    if (pair_mode && (a.ref.empty() || a.hyp.empty()))
        throw UsageError("--ref and --hyp go together");
    if (decode_mode && (a.decode.empty() || a.vocab.empty()))
        throw UsageError("--decode and --vocab go together");

    std::vector<std::string> labels;
    std::vector<std::string> refs;
    std::vector<std::string> hyps;
    std::vector<std::string> notes;
    if (pair_mode) {
        refs = read_lines(a.ref);
        hyps = read_lines(a.hyp);
        if (refs.size() != hyps.size())
            throw UsageError("--ref has " + std::to_string(refs.size()) + " lines, --hyp has " +
                             std::to_string(hyps.size()));
        for (std::size_t i = 0; i < refs.size(); ++i)
            labels.push_back(std::to_string(i + 1));
    } else {
        const auto vocab = read_vocabulary(a.vocab);
        for (const auto& r : read_manifest(a.decode)) {
            if (!r.transcript_ref) {
                notes.push_back("# skipped " + r.utterance_id + ": no transcript_ref");
                continue;
            }
            std::optional<LogitFile> file;
            try {
                file = read_logit_file(r.logit_path);
            } catch (const Error& e) {
                if (!is_format_error(e.code()))
                    throw;
                notes.push_back("# skipped " + r.utterance_id + ": " + one_line(e.what()));
                continue;
            }
            const auto words = ctc_greedy_decode(file->matrix, vocab);
            std::string hyp;
            for (const auto& w : words)
                hyp += (hyp.empty() ? "" : " ") + w;
            labels.push_back(r.utterance_id);
            refs.push_back(*r.transcript_ref);
            hyps.push_back(std::move(hyp));
        }
    }

    std::vector<WerBreakdown> parts;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        try {
            parts.push_back(wer(refs[i], hyps[i]));
        } catch (const Error& e) {
            throw Error(e.code(), "utterance " + labels[i] + ": " + e.detail());
        }
    }
    const auto total = corpus_wer(parts);

    auto row = [&](const std::string& label, const WerBreakdown& b) {
        out << label << '\t' << b.ref_words << '\t' << b.substitutions << '\t' << b.deletions << '\t'
            << b.insertions << '\t' << detail::shortest(b.wer) << '\n';
    };
    out << "utterance\tref_words\tsub\tdel\tins\twer\n";
    for (std::size_t i = 0; i < parts.size(); ++i)
        row(labels[i], parts[i]);
    row("corpus", total);
    for (const auto& n : notes)
        out << n << '\n';
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Uncertainty-measure toolkit: zero-shot audio quality scores from speech-model logits", "umtk"};
    app.require_subcommand(1);
    std::string kernel = "auto";
    app.add_option("--kernel", kernel, "Row kernels: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    UmArgs um_args;
    auto* um = app.add_subcommand("um", "Print the four uncertainty measures of one logit file");
    um->add_option("logit_path", um_args.logit_path, "Logit file (.umlg)")->required();
    um->add_flag("--json", um_args.json, "Emit one JSON object");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Correlate uncertainty measures with MOS for a manifest");
    eval->add_option("manifest", eval_args.manifest, "Manifest CSV")->required();
    eval->add_option("--bootstrap", eval_args.bootstrap, "Bootstrap resamples for confidence intervals (default 1000)")
        ->expected(0, 1)
        ->default_str("1000")
        ->check(CLI::Range(std::size_t{100}, std::numeric_limits<std::size_t>::max()));
    eval->add_option("--level", eval_args.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    eval->add_option("--seed", eval_args.seed, "Bootstrap seed (required with --bootstrap)");
    eval->add_flag("--wer", eval_args.wer, "Also correlate measures with word error rate");
    eval->add_option("--vocab", eval_args.vocab, "Vocabulary for greedy CTC hypotheses");
    eval->add_option("--hyp", eval_args.hyp, "Hypothesis transcripts, one line per manifest row");
    eval->add_option("--format", eval_args.format, "csv, markdown or json")->check(CLI::IsMember(kFormats));
    eval->add_option("--out", eval_args.out, "Write the report here instead of stdout");
    eval->add_option("--task", eval_args.task, "Only evaluate rows with this task_id");
    eval->add_option("--workers", eval_args.workers, "Worker threads")->check(CLI::PositiveNumber);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "SRCC against dropout probability from a sweep spec");
    sweep->add_option("spec", sweep_args.spec, "Sweep spec CSV (dropout_p,manifest_path)")->required();
    sweep->add_option("--format", sweep_args.format, "csv, markdown or json")->check(CLI::IsMember(kFormats));
    sweep->add_option("--out", sweep_args.out, "Write the report here instead of stdout");
    sweep->add_option("--workers", sweep_args.workers, "Worker threads")->check(CLI::PositiveNumber);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with a planted quality signal");
    synth->add_option("--n", synth_args.spec.n_utterances, "Utterances (>= 10)")
        ->check(CLI::Range(std::size_t{10}, std::numeric_limits<std::size_t>::max()));
    synth->add_option("--w", synth_args.spec.windows, "Windows per utterance")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::uint32_t>::max() * std::size_t{1}));
    synth->add_option("--q", synth_args.spec.vocab, "Vocabulary size (>= 2)")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::uint32_t>::max() * std::size_t{1}));
    synth->add_option("--law", synth_args.law, "temperature or noise")
        ->check(CLI::IsMember({"temperature", "noise"}));
    synth->add_option("--seed", synth_args.spec.seed, "Generator seed");
    synth->add_option("--noise-sd-min", synth_args.spec.noise_sd_min, "Noise sd at quality 5");
    synth->add_option("--noise-sd-max", synth_args.spec.noise_sd_max, "Noise sd at quality 1");
    synth->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
    synth->add_option("--workers", synth_args.workers, "Worker threads")->check(CLI::PositiveNumber);

    WerArgs wer_args;
    auto* wer_cmd = app.add_subcommand("wer", "Word error rate per utterance and over the corpus");
    wer_cmd->add_option("--ref", wer_args.ref, "Reference transcripts, one per line");
    wer_cmd->add_option("--hyp", wer_args.hyp, "Hypothesis transcripts, one per line");
    wer_cmd->add_option("--decode", wer_args.decode, "Manifest whose logits are greedy-decoded");
    wer_cmd->add_option("--vocab", wer_args.vocab, "Vocabulary file for --decode");

    auto usage_failure = [&](const std::string& message) {
        err << "error: UsageError: " << one_line(message) << '\n';
        return kUsageError;
    };

    try {
        std::vector<std::string> reversed;
        for (std::size_t i = args.size(); i > 1; --i)
            reversed.push_back(args[i - 1]);
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        return usage_failure(e.what());
    }

    try {
        const auto isa = kernel == "auto" ? kernels::detect_isa() : *kernels::isa_from_string(kernel);
        if (!kernels::select(isa))
            throw UsageError("kernel '" + kernel + "' is not supported on this CPU");
        if (um->parsed())
            return cmd_um(um_args, out);
        if (eval->parsed())
            return cmd_eval(eval_args, out);
        if (sweep->parsed())
            return cmd_sweep(sweep_args, out);
        if (synth->parsed())
            return cmd_synth(synth_args, out);
        if (wer_cmd->parsed())
            return cmd_wer(wer_args, out);
        return usage_failure("no subcommand given");
    } catch (const UsageError& e) {
        return usage_failure(e.what());
    } catch (const Error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        if (is_format_error(e.code()))
            return kFormatError;
        return e.code() == ErrorCode::InvalidArgument ? kUsageError : kEvaluationError;
    } catch (const std::exception& e) {
        err << "error: InternalError: " << one_line(e.what()) << '\n';
        return kEvaluationError;
    }
}

} // namespace umtk::cli
