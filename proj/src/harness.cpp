// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/harness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "detail/strings.hpp"
#include "umtk/error.hpp"
#include "umtk/parallel.hpp"

namespace umtk {

namespace {

struct UtteranceResult {
    std::optional<UMVector> ums;
    std::optional<std::string> hypothesis;
    std::string skip_reason;
};

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty())
            out.push_back(' ');
        out += w;
    }
    return out;
}

std::string task_label(std::span<const UtteranceRecord> records) {
    std::string label;
    for (const auto& r : records) {
        if (label.empty())
            label = r.task_id;
        else if (label != r.task_id)
            return label + "+mixed";
    }
    return label;
}

std::vector<double> column(const std::vector<UMVector>& ums, UmKind kind) {
    std::vector<double> out;
    out.reserve(ums.size());
    for (const auto& u : ums)
        out.push_back(u.get(kind));
    return out;
}

// SRCC of every UM against `target`; collects all constant series before failing.
PerUm correlate_all(const std::vector<UMVector>& ums, const std::vector<double>& target, const char* target_name) {
    PerUm out{};
    std::string degenerate;
    const bool target_constant =
        std::all_of(target.begin(), target.end(), [&](double v) { return v == target.front(); });
    if (target_constant)
        throw Error(ErrorCode::DegenerateSeries, std::string(target_name) + " is constant");
    for (UmKind kind : kAllUms) {
        try {
            at(out, kind) = spearman(PairedSeries(column(ums, kind), target));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSeries)
                throw;
            degenerate += degenerate.empty() ? "" : ", ";
            degenerate += um_name(kind);
        }
    }
    if (!degenerate.empty())
        throw Error(ErrorCode::DegenerateSeries, "constant UM series for: " + degenerate);
    return out;
}

std::variant<Intelligibility, std::string> intelligibility(std::span<const UtteranceRecord> records,
                                                           const std::vector<UtteranceResult>& results) {
    std::vector<UMVector> ums;
    std::vector<double> wers;
    std::vector<double> mos;
    std::vector<WerBreakdown> parts;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = results[i];
        if (!r.ums || !r.hypothesis || !records[i].transcript_ref)
            continue;
        const auto ref = tokenize_words(*records[i].transcript_ref);
        if (ref.empty())
            continue;
        const auto hyp = tokenize_words(*r.hypothesis);
        parts.push_back(wer(std::span<const std::string>(ref), std::span<const std::string>(hyp)));
        wers.push_back(parts.back().wer);
        ums.push_back(*r.ums);
        mos.push_back(records[i].mos);
    }
    if (parts.size() < 3)
        return "only " + std::to_string(parts.size()) + " utterances have both reference and hypothesis transcripts";

    Intelligibility out;
    out.n = parts.size();
    out.corpus_wer = corpus_wer(parts).wer;
    try {
        out.srcc_um_vs_wer = correlate_all(ums, wers, "WER");
        out.srcc_wer_vs_mos = spearman(PairedSeries(wers, mos));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateSeries)
            throw;
        return std::string(e.what());
    }
    double sum = 0.0;
    for (double v : out.srcc_um_vs_wer)
        sum += v;
    out.mean_srcc_um_vs_wer = sum / static_cast<double>(out.srcc_um_vs_wer.size());
    return out;
}

} // namespace

TaskEvaluation evaluate_task(std::span<const UtteranceRecord> records, const EvaluationOptions& options) {
    const std::vector<std::string>* given_hypotheses = nullptr;
    const Vocabulary* vocab = nullptr;
    if (options.wer_against) {
        if (const auto* h = std::get_if<std::vector<std::string>>(&*options.wer_against)) {
            if (h->size() != records.size())
                throw Error(ErrorCode::LengthMismatch, std::to_string(h->size()) + " hypotheses for " +
                                                           std::to_string(records.size()) + " utterances");
            given_hypotheses = h;
        } else {
            vocab = &std::get<Vocabulary>(*options.wer_against);
        }
    }

    std::vector<UtteranceResult> results(records.size());
    parallel_for(records.size(), options.workers, [&](std::size_t i) {
        auto& out = results[i];
        std::optional<LogitFile> file;
        try {
            file = read_logit_file(records[i].logit_path);
        } catch (const Error& e) {
            out.skip_reason = e.what();
            return;
        }
        out.ums = compute_um_vector(file->matrix);
        if (vocab)
            out.hypothesis = join_words(ctc_greedy_decode(file->matrix, *vocab));
        else if (given_hypotheses)
            out.hypothesis = (*given_hypotheses)[i];
    });

    TaskEvaluation eval;
    eval.task_id = task_label(records);
    std::vector<UMVector> ums;
    std::vector<double> mos;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (results[i].ums) {
            ums.push_back(*results[i].ums);
            mos.push_back(records[i].mos);
        } else {
            eval.skipped.push_back({records[i].utterance_id, results[i].skip_reason});
        }
    }
    eval.n_utterances = ums.size();

    if (!records.empty() && ums.empty())
        throw Error(ErrorCode::AllFilesUnreadable,
                    "task '" + eval.task_id + "': none of " + std::to_string(records.size()) +
                        " logit files could be read; first failure: " + eval.skipped.front().reason);
    if (ums.size() < 3)
        throw Error(ErrorCode::TooFewUtterances, "task '" + eval.task_id + "' has " + std::to_string(ums.size()) +
                                                     " readable utterances, need at least 3");

    eval.srcc = correlate_all(ums, mos, "MOS");

    if (options.bootstrap) {
        BootstrapSummary summary{*options.bootstrap, {}};
        for (UmKind kind : kAllUms)
            summary.intervals[static_cast<std::size_t>(kind)] =
                bootstrap_ci(PairedSeries(column(ums, kind), mos), *options.bootstrap, options.workers);
        eval.bootstrap = summary;
    }

    if (options.wer_against) {
        auto result = intelligibility(records, results);
        if (auto* report = std::get_if<Intelligibility>(&result))
            eval.intelligibility = *report;
        else
            eval.intelligibility_note = std::get<std::string>(result);
    }
    return eval;
}

std::vector<TaskEvaluation> evaluate_tasks(std::span<const UtteranceRecord> records,
                                           const EvaluationOptions& options) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto [it, inserted] = groups.try_emplace(records[i].task_id);
        if (inserted)
            order.push_back(records[i].task_id);
        it->second.push_back(i);
    }
    if (order.empty())
        throw Error(ErrorCode::TooFewUtterances, "manifest has no utterances");

    std::vector<TaskEvaluation> out;
    for (const auto& task : order) {
        const auto& rows = groups.at(task);
        std::vector<UtteranceRecord> subset;
        subset.reserve(rows.size());
        for (std::size_t i : rows)
            subset.push_back(records[i]);

        EvaluationOptions task_options = options;
        if (options.wer_against) {
            if (const auto* h = std::get_if<std::vector<std::string>>(&*options.wer_against)) {
                if (h->size() != records.size())
                    throw Error(ErrorCode::LengthMismatch, std::to_string(h->size()) + " hypotheses for " +
                                                               std::to_string(records.size()) + " utterances");
                std::vector<std::string> picked;
                for (std::size_t i : rows)
                    picked.push_back((*h)[i]);
                task_options.wer_against = std::move(picked);
            }
        }
        out.push_back(evaluate_task(subset, task_options));
    }
    return out;
}

SweepReport evaluate_sweep(const std::map<double, std::vector<UtteranceRecord>>& manifests, unsigned workers) {
    if (!manifests.contains(0.0))
        throw Error(ErrorCode::MissingBaseline, "sweep has no dropout_p = 0 baseline point");
    if (manifests.size() < 2)
        throw Error(ErrorCode::TooFewSweepPoints, "sweep needs at least 2 points");

    EvaluationOptions options;
    options.workers = workers;
    SweepReport report;
    for (const auto& [p, records] : manifests) {
        if (!(p >= 0.0 && p < 1.0))
            throw Error(ErrorCode::InvalidArgument, "dropout_p " + detail::shortest(p) + " outside [0, 1)");
        std::vector<TaskEvaluation> tasks;
        try {
            tasks = evaluate_tasks(records, options);
        } catch (const Error& e) {
            throw Error(e.code(), "dropout_p=" + detail::shortest(p) + ": " + e.detail());
        }
        SweepPoint point;
        point.dropout_p = p;
        point.n_tasks = tasks.size();
        for (const auto& t : tasks) {
            for (std::size_t k = 0; k < point.srcc.size(); ++k)
                point.srcc[k] += t.srcc[k];
            point.n_utterances += t.n_utterances;
            point.n_skipped += t.skipped.size();
        }
        for (double& v : point.srcc)
            v /= static_cast<double>(tasks.size());
        report.points.push_back(point);
    }
    return report;
}

std::map<double, std::filesystem::path> read_sweep_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open sweep spec " + path.string());
    std::map<double, std::filesystem::path> points;
    std::string line;
    std::size_t line_number = 0;
    bool have_header = false;
    auto fail = [&](ErrorCode code, const std::string& msg) {
        throw Error(code, path.string() + ": line " + std::to_string(line_number) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_number;
        if (detail::trim(line).empty())
            continue;
        if (line.ends_with('\r'))
            line.pop_back();
        const auto fields = split_csv_line(line, line_number);
        if (!have_header) {
            if (fields.size() != 2 || fields[0] != "dropout_p" || fields[1] != "manifest_path")
                fail(ErrorCode::MissingField, "header must be dropout_p,manifest_path");
            have_header = true;
            continue;
        }
        if (fields.size() != 2)
            fail(ErrorCode::MalformedLine, "expected 2 fields");
        const auto p = detail::parse_double(fields[0]);
        if (!p || !(*p >= 0.0 && *p < 1.0))
            fail(ErrorCode::MalformedLine, "dropout_p '" + fields[0] + "' must be a number in [0, 1)");
        if (fields[1].empty())
            fail(ErrorCode::MissingField, "empty manifest_path");
        std::filesystem::path manifest(fields[1]);
        if (manifest.is_relative())
            manifest = path.parent_path() / manifest;
        if (!points.emplace(*p, manifest).second)
            fail(ErrorCode::MalformedLine, "dropout_p " + fields[0] + " listed twice");
    }
    if (!have_header)
        throw Error(ErrorCode::MissingField, path.string() + ": sweep spec has no header row");
    return points;
}

} // namespace umtk
