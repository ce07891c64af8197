// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace umtk {

inline constexpr double kMosMin = 1.0;
inline constexpr double kMosMax = 5.0;

struct UtteranceRecord {
    std::string utterance_id;
    double mos = 0.0;
    std::filesystem::path logit_path;
    std::string task_id;
    std::optional<std::string> transcript_ref;
    std::optional<std::string> system_id;

    friend bool operator==(const UtteranceRecord&, const UtteranceRecord&) = default;
};

/// Splits one CSV record. Double-quoted fields may contain commas and
/// doubled quotes. Throws MalformedLine on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string csv_escape(std::string_view field);

/// Parses manifest CSV text. The header row must name utterance_id, mos,
/// logit_path and task_id; transcript_ref and system_id are optional.
/// Relative logit paths are resolved against `base_dir`. Errors carry the
/// 1-based line number.
std::vector<UtteranceRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});

std::vector<UtteranceRecord> read_manifest(const std::filesystem::path& path);

/// Writes records with logit paths relative to the manifest directory
/// when they live below it.
void write_manifest(const std::vector<UtteranceRecord>& records, const std::filesystem::path& path);

} // namespace umtk
