// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "umtk/harness.hpp"

namespace umtk {

enum class ReportFormat { Csv, Markdown, Json };

std::optional<ReportFormat> report_format_from_string(std::string_view name) noexcept;

/// Correlation as a signed percentage with one decimal, e.g. -0.699 -> "-69.9".
std::string format_percent(double correlation);

/// CSV: um,srcc,ci_low,ci_high,n (a leading task_id column when more than
/// one task is rendered). Markdown: percentages in a table per task.
/// JSON: full precision, readable by parse_task_report.
std::string render_report(std::span<const TaskEvaluation> tasks, ReportFormat format);

/// CSV columns p,um_mean,um_max,um_sd,um_entropy for direct plotting.
std::string render_report(const SweepReport& sweep, ReportFormat format);

/// Inverse of the JSON renderings. Throws MalformedReport.
std::vector<TaskEvaluation> parse_task_report(std::string_view json);
SweepReport parse_sweep_report(std::string_view json);

} // namespace umtk
