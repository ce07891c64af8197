// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "umtk/manifest.hpp"
#include "umtk/stats.hpp"
#include "umtk/um.hpp"

namespace umtk {

/// One value per UM, indexed in kAllUms order.
using PerUm = std::array<double, 4>;

inline double& at(PerUm& values, UmKind kind) { return values[static_cast<std::size_t>(kind)]; }
inline double at(const PerUm& values, UmKind kind) { return values[static_cast<std::size_t>(kind)]; }

struct SkippedUtterance {
    std::string utterance_id;
    std::string reason;

    friend bool operator==(const SkippedUtterance&, const SkippedUtterance&) = default;
};

/// WER-based intelligibility checks over utterances that have both a
/// reference and a hypothesis transcript.
struct Intelligibility {
    std::size_t n = 0;
    PerUm srcc_um_vs_wer{};
    double mean_srcc_um_vs_wer = 0.0;
    double srcc_wer_vs_mos = 0.0;
    double corpus_wer = 0.0;

    friend bool operator==(const Intelligibility&, const Intelligibility&) = default;
};

struct BootstrapSummary {
    BootstrapOptions options;
    std::array<ConfidenceInterval, 4> intervals{};

    friend bool operator==(const BootstrapSummary& a, const BootstrapSummary& b) {
        return a.options.resamples == b.options.resamples && a.options.level == b.options.level &&
               a.options.seed == b.options.seed && a.intervals == b.intervals;
    }
};

struct TaskEvaluation {
    std::string task_id;
    std::size_t n_utterances = 0;
    PerUm srcc{};
    std::optional<BootstrapSummary> bootstrap;
    std::vector<SkippedUtterance> skipped;
    std::optional<Intelligibility> intelligibility;
    /// Set when WER analysis was requested but could not be computed.
    std::optional<std::string> intelligibility_note;

    friend bool operator==(const TaskEvaluation&, const TaskEvaluation&) = default;
};

/// Hypotheses come from greedy CTC decoding of each logit file, or from one
/// transcript per manifest row.
using HypothesisSource = std::variant<Vocabulary, std::vector<std::string>>;

struct EvaluationOptions {
    std::optional<BootstrapOptions> bootstrap;
    std::optional<HypothesisSource> wer_against;
    unsigned workers = 1;
};

/// SRCC of every UM against MOS over the given records, treated as one task.
/// Unreadable logit files are skipped with a reason. Throws TooFewUtterances,
/// AllFilesUnreadable, or DegenerateSeries naming every constant series.
TaskEvaluation evaluate_task(std::span<const UtteranceRecord> records, const EvaluationOptions& options);

/// evaluate_task per task_id, in order of first appearance.
std::vector<TaskEvaluation> evaluate_tasks(std::span<const UtteranceRecord> records,
                                           const EvaluationOptions& options);

struct SweepPoint {
    double dropout_p = 0.0;
    /// Mean over tasks of each task's SRCC with MOS.
    PerUm srcc{};
    std::size_t n_tasks = 0;
    std::size_t n_utterances = 0;
    std::size_t n_skipped = 0;

    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepReport {
    std::vector<SweepPoint> points; // ascending dropout_p

    friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Throws MissingBaseline without a p = 0 point, TooFewSweepPoints with fewer
/// than two points; task errors are rethrown prefixed with their p.
SweepReport evaluate_sweep(const std::map<double, std::vector<UtteranceRecord>>& manifests, unsigned workers = 1);

/// Sweep-spec CSV with header dropout_p,manifest_path. Relative manifest
/// paths resolve against the spec's directory.
std::map<double, std::filesystem::path> read_sweep_spec(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic data with a planted quality signal

enum class QualityLaw { Temperature, Noise };

std::string_view to_string(QualityLaw law) noexcept;
std::optional<QualityLaw> quality_law_from_string(std::string_view name) noexcept;

struct SyntheticSpec {
    std::size_t n_utterances = 200;
    std::size_t windows = 16;
    std::size_t vocab = 32;
    QualityLaw law = QualityLaw::Temperature;
    std::uint64_t seed = 0;
    /// Noise law: logit noise sd falls linearly from max at quality 1 to min at 5.
    double noise_sd_min = 0.1;
    double noise_sd_max = 3.0;

    /// Throws InvalidArgument.
    void validate() const;
};

/// Temperature law scale for quality s.
inline double synthetic_temperature(double quality) { return 0.5 + quality; }

/// Logit margin of the target token under the noise law, before noise.
inline constexpr double kNoisePeakMargin = 8.0;

/// Writes out_dir/logits/*.umlg, out_dir/manifest.csv and
/// out_dir/ground_truth.json; returns the manifest path.
std::filesystem::path generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir,
                                         unsigned workers = 1);

} // namespace umtk
