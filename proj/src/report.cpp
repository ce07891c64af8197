// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "detail/strings.hpp"
#include "umtk/error.hpp"
#include "umtk/manifest.hpp"

namespace umtk {

namespace {

using nlohmann::json;

json per_um_json(const PerUm& values) {
    json out = json::object();
    for (UmKind kind : kAllUms)
        out[std::string(um_name(kind))] = at(values, kind);
    return out;
}

PerUm per_um_from_json(const json& j) {
    PerUm out{};
    for (UmKind kind : kAllUms)
        at(out, kind) = j.at(std::string(um_name(kind))).get<double>();
    return out;
}

json task_json(const TaskEvaluation& t) {
    json j = {
        {"task_id", t.task_id},
        {"n_utterances", t.n_utterances},
        {"srcc", per_um_json(t.srcc)},
    };
    if (t.bootstrap) {
        json ci = json::object();
        for (UmKind kind : kAllUms) {
            const auto& interval = t.bootstrap->intervals[static_cast<std::size_t>(kind)];
            ci[std::string(um_name(kind))] = json::array({interval.low, interval.high});
        }
        j["bootstrap"] = {
            {"resamples", t.bootstrap->options.resamples},
            {"level", t.bootstrap->options.level},
            {"seed", t.bootstrap->options.seed},
            {"rng", Xorshift64Star::kAlgorithm},
            {"ci", ci},
        };
    }
    json skipped = json::array();
    for (const auto& s : t.skipped)
        skipped.push_back({{"utterance_id", s.utterance_id}, {"reason", s.reason}});
    j["skipped"] = skipped;
    if (t.intelligibility) {
        const auto& i = *t.intelligibility;
        j["intelligibility"] = {
            {"n", i.n},
            {"corpus_wer", i.corpus_wer},
            {"srcc_um_vs_wer", per_um_json(i.srcc_um_vs_wer)},
            {"mean_srcc_um_vs_wer", i.mean_srcc_um_vs_wer},
            {"srcc_wer_vs_mos", i.srcc_wer_vs_mos},
        };
    }
    if (t.intelligibility_note)
        j["intelligibility_note"] = *t.intelligibility_note;
    return j;
}

TaskEvaluation task_from_json(const json& j) {
    TaskEvaluation t;
    t.task_id = j.at("task_id").get<std::string>();
    t.n_utterances = j.at("n_utterances").get<std::size_t>();
    t.srcc = per_um_from_json(j.at("srcc"));
    if (j.contains("bootstrap")) {
        const auto& b = j.at("bootstrap");
        BootstrapSummary summary;
        summary.options.resamples = b.at("resamples").get<std::size_t>();
        summary.options.level = b.at("level").get<double>();
        summary.options.seed = b.at("seed").get<std::uint64_t>();
        for (UmKind kind : kAllUms) {
            const auto& pair = b.at("ci").at(std::string(um_name(kind)));
            summary.intervals[static_cast<std::size_t>(kind)] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
        }
        t.bootstrap = summary;
    }
    for (const auto& s : j.at("skipped"))
        t.skipped.push_back({s.at("utterance_id").get<std::string>(), s.at("reason").get<std::string>()});
    if (j.contains("intelligibility")) {
        const auto& i = j.at("intelligibility");
        Intelligibility out;
        out.n = i.at("n").get<std::size_t>();
        out.corpus_wer = i.at("corpus_wer").get<double>();
        out.srcc_um_vs_wer = per_um_from_json(i.at("srcc_um_vs_wer"));
        out.mean_srcc_um_vs_wer = i.at("mean_srcc_um_vs_wer").get<double>();
        out.srcc_wer_vs_mos = i.at("srcc_wer_vs_mos").get<double>();
        t.intelligibility = out;
    }
    if (j.contains("intelligibility_note"))
        t.intelligibility_note = j.at("intelligibility_note").get<std::string>();
    return t;
}

std::string cell(double v) { return detail::shortest(v); }

std::string md_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '|')
            out += "\\|";
        else if (c == '\n')
            out += ' ';
        else
            out.push_back(c);
    }
    return out;
}

std::string tasks_csv(std::span<const TaskEvaluation> tasks) {
    const bool multi = tasks.size() > 1;
    std::ostringstream out;
    if (multi)
        out << "task_id,";
    out << "um,srcc,ci_low,ci_high,n\n";
    for (const auto& t : tasks) {
        const std::string prefix = multi ? csv_escape(t.task_id) + "," : "";
        for (UmKind kind : kAllUms) {
            out << prefix << um_name(kind) << ',' << cell(at(t.srcc, kind)) << ',';
            if (t.bootstrap) {
                const auto& ci = t.bootstrap->intervals[static_cast<std::size_t>(kind)];
                out << cell(ci.low) << ',' << cell(ci.high);
            } else {
                out << ',';
            }
            out << ',' << t.n_utterances << '\n';
        }
        if (t.intelligibility) {
            const auto& i = *t.intelligibility;
            for (UmKind kind : kAllUms)
                out << prefix << "wer_vs_" << um_name(kind) << ',' << cell(at(i.srcc_um_vs_wer, kind)) << ",,,"
                    << i.n << '\n';
            out << prefix << "wer_vs_um_avg," << cell(i.mean_srcc_um_vs_wer) << ",,," << i.n << '\n';
            out << prefix << "wer_vs_mos," << cell(i.srcc_wer_vs_mos) << ",,," << i.n << '\n';
        }
    }
    return out.str();
}

std::string tasks_markdown(std::span<const TaskEvaluation> tasks) {
    std::ostringstream out;
    out << "| task | n | mean | max | sd | entropy |\n";
    out << "|---|---:|---:|---:|---:|---:|\n";
    for (const auto& t : tasks) {
        out << "| " << md_escape(t.task_id) << " | " << t.n_utterances;
        for (UmKind kind : kAllUms)
            out << " | " << format_percent(at(t.srcc, kind));
        out << " |\n";
    }
    out << "\nSRCC with MOS in percent. Entropy in nats.\n";

    for (const auto& t : tasks) {
        if (!t.bootstrap)
            continue;
        const auto& o = t.bootstrap->options;
        out << "\n### " << md_escape(t.task_id) << ": " << format_percent(o.level) << "% bootstrap intervals ("
            << o.resamples << " resamples, seed " << o.seed << ", " << Xorshift64Star::kAlgorithm << ")\n\n";
        out << "| um | srcc | low | high |\n|---|---:|---:|---:|\n";
        for (UmKind kind : kAllUms) {
            const auto& ci = t.bootstrap->intervals[static_cast<std::size_t>(kind)];
            out << "| " << um_name(kind) << " | " << format_percent(at(t.srcc, kind)) << " | "
                << format_percent(ci.low) << " | " << format_percent(ci.high) << " |\n";
        }
    }

    for (const auto& t : tasks) {
        if (!t.intelligibility && !t.intelligibility_note)
            continue;
        out << "\n### " << md_escape(t.task_id) << ": intelligibility\n\n";
        if (!t.intelligibility) {
            out << "Not available: " << md_escape(*t.intelligibility_note) << "\n";
            continue;
        }
        const auto& i = *t.intelligibility;
        out << "| measure | srcc |\n|---|---:|\n";
        for (UmKind kind : kAllUms)
            out << "| " << um_name(kind) << " vs WER | " << format_percent(at(i.srcc_um_vs_wer, kind)) << " |\n";
        out << "| UM average vs WER | " << format_percent(i.mean_srcc_um_vs_wer) << " |\n";
        out << "| WER vs MOS | " << format_percent(i.srcc_wer_vs_mos) << " |\n";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * i.corpus_wer);
        out << "\nCorpus WER " << buf << "% over " << i.n << " utterances.\n";
    }

    bool any_skipped = false;
    for (const auto& t : tasks)
        any_skipped |= !t.skipped.empty();
    if (any_skipped) {
        out << "\n### Skipped\n\n| task | utterance_id | reason |\n|---|---|---|\n";
        for (const auto& t : tasks)
            for (const auto& s : t.skipped)
                out << "| " << md_escape(t.task_id) << " | " << md_escape(s.utterance_id) << " | "
                    << md_escape(s.reason) << " |\n";
    }
    return out.str();
}

json sweep_json(const SweepReport& sweep) {
    json points = json::array();
    for (const auto& p : sweep.points)
        points.push_back({
            {"dropout_p", p.dropout_p},
            {"srcc", per_um_json(p.srcc)},
            {"n_tasks", p.n_tasks},
            {"n_utterances", p.n_utterances},
            {"n_skipped", p.n_skipped},
        });
    return {{"report", "sweep"}, {"entropy_unit", "nats"}, {"points", points}};
}

template <typename Fn>
auto parse_report(std::string_view text, std::string_view kind, Fn&& fn) {
    json j = json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded())
        throw Error(ErrorCode::MalformedReport, "not valid JSON");
    try {
        if (j.at("report").get<std::string>() != kind)
            throw Error(ErrorCode::MalformedReport, "expected a " + std::string(kind) + " report");
        return fn(j);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedReport, e.what());
    }
}

} // namespace

std::optional<ReportFormat> report_format_from_string(std::string_view name) noexcept {
    if (name == "csv")
        return ReportFormat::Csv;
    if (name == "markdown" || name == "md")
        return ReportFormat::Markdown;
    if (name == "json")
        return ReportFormat::Json;
    return std::nullopt;
}

std::string format_percent(double correlation) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * correlation);
    std::string s(buf);
    if (s == "-0.0")
        s = "0.0";
    return s;
}

std::string render_report(std::span<const TaskEvaluation> tasks, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: return tasks_csv(tasks);
    case ReportFormat::Markdown: return tasks_markdown(tasks);
    case ReportFormat::Json: {
        json list = json::array();
        for (const auto& t : tasks)
            list.push_back(task_json(t));
        json j = {{"report", "task_evaluation"}, {"entropy_unit", "nats"}, {"tasks", list}};
        return j.dump(2) + "\n";
    }
    }
    return {};
}

std::string render_report(const SweepReport& sweep, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
    case ReportFormat::Csv:
        out << "p,um_mean,um_max,um_sd,um_entropy\n";
        for (const auto& p : sweep.points) {
            out << cell(p.dropout_p);
            for (UmKind kind : kAllUms)
                out << ',' << cell(at(p.srcc, kind));
            out << '\n';
        }
        break;
    case ReportFormat::Markdown:
        out << "| p | mean | max | sd | entropy |\n|---:|---:|---:|---:|---:|\n";
        for (const auto& p : sweep.points) {
            out << "| " << cell(p.dropout_p);
            for (UmKind kind : kAllUms)
                out << " | " << format_percent(at(p.srcc, kind));
            out << " |\n";
        }
        out << "\nSRCC with MOS in percent, averaged over tasks at each dropout probability.\n";
        break;
    case ReportFormat::Json: out << sweep_json(sweep).dump(2) << '\n'; break;
    }
    return out.str();
}

std::vector<TaskEvaluation> parse_task_report(std::string_view text) {
    return parse_report(text, "task_evaluation", [](const json& j) {
        std::vector<TaskEvaluation> tasks;
        for (const auto& t : j.at("tasks"))
            tasks.push_back(task_from_json(t));
        return tasks;
    });
}

SweepReport parse_sweep_report(std::string_view text) {
    return parse_report(text, "sweep", [](const json& j) {
        SweepReport sweep;
        for (const auto& p : j.at("points")) {
            SweepPoint point;
            point.dropout_p = p.at("dropout_p").get<double>();
            point.srcc = per_um_from_json(p.at("srcc"));
            point.n_tasks = p.at("n_tasks").get<std::size_t>();
            point.n_utterances = p.at("n_utterances").get<std::size_t>();
            point.n_skipped = p.at("n_skipped").get<std::size_t>();
            sweep.points.push_back(point);
        }
        return sweep;
    });
}

} // namespace umtk
