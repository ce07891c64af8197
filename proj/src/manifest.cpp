// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/manifest.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "detail/strings.hpp"
#include "umtk/error.hpp"

namespace umtk {

namespace {

std::string at_line(std::size_t line_number, const std::string& message) {
    return "line " + std::to_string(line_number) + ": " + message;
}

enum class Column { UtteranceId, Mos, LogitPath, TaskId, TranscriptRef, SystemId };

const std::map<std::string_view, Column>& known_columns() {
    static const std::map<std::string_view, Column> columns{
        {"utterance_id", Column::UtteranceId}, {"mos", Column::Mos},
        {"logit_path", Column::LogitPath},     {"task_id", Column::TaskId},
        {"transcript_ref", Column::TranscriptRef}, {"system_id", Column::SystemId},
    };
    return columns;
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (true) {
        std::string field;
        // skip leading blanks before a possible opening quote
        std::size_t j = i;
        while (j < line.size() && (line[j] == ' ' || line[j] == '\t'))
            ++j;
        if (j < line.size() && line[j] == '"') {
            i = j + 1;
            bool closed = false;
            while (i < line.size()) {
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    closed = true;
                    ++i;
                    break;
                }
                field.push_back(line[i++]);
            }
            if (!closed)
                throw Error(ErrorCode::MalformedLine, at_line(line_number, "unterminated quoted field"));
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
                ++i;
            if (i < line.size() && line[i] != ',')
                throw Error(ErrorCode::MalformedLine, at_line(line_number, "text after closing quote"));
        } else {
            const std::size_t end = std::min(line.find(',', i), line.size());
            field = std::string(detail::trim(line.substr(i, end - i)));
            i = end;
        }
        fields.push_back(std::move(field));
        if (i >= line.size())
            break;
        ++i; // comma
    }
    return fields;
}

std::string csv_escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"") != std::string_view::npos ||
                              (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<UtteranceRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::vector<UtteranceRecord> records;
    std::vector<Column> layout;
    std::unordered_set<std::string> seen_ids;
    bool have_header = false;
    std::size_t line_number = 0;
    std::size_t pos = 0;

    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_number;
        if (line.ends_with('\r'))
            line.remove_suffix(1);
        if (detail::trim(line).empty())
            continue;

        auto fields = split_csv_line(line, line_number);
        if (!have_header) {
            std::unordered_set<int> present;
            for (const auto& name : fields) {
                auto it = known_columns().find(name);
                if (it == known_columns().end())
                    throw Error(ErrorCode::MalformedLine, at_line(line_number, "unknown column '" + name + "'"));
                if (!present.insert(static_cast<int>(it->second)).second)
                    throw Error(ErrorCode::MalformedLine, at_line(line_number, "repeated column '" + name + "'"));
                layout.push_back(it->second);
            }
            for (auto required : {"utterance_id", "mos", "logit_path", "task_id"})
                if (!present.contains(static_cast<int>(known_columns().at(required))))
                    throw Error(ErrorCode::MissingField,
                                at_line(line_number, std::string("header lacks column '") + required + "'"));
            have_header = true;
            continue;
        }

        if (fields.size() != layout.size())
            throw Error(ErrorCode::MalformedLine,
                        at_line(line_number, "expected " + std::to_string(layout.size()) + " fields, found " +
                                                 std::to_string(fields.size())));
        UtteranceRecord rec;
        for (std::size_t c = 0; c < layout.size(); ++c) {
            std::string& value = fields[c];
            switch (layout[c]) {
            case Column::UtteranceId:
                if (value.empty())
                    throw Error(ErrorCode::MissingField, at_line(line_number, "empty utterance_id"));
                rec.utterance_id = std::move(value);
                break;
            case Column::Mos: {
                if (value.empty())
                    throw Error(ErrorCode::MissingField, at_line(line_number, "empty mos"));
                auto mos = detail::parse_double(value);
                if (!mos || !std::isfinite(*mos))
                    throw Error(ErrorCode::MalformedLine, at_line(line_number, "mos '" + value + "' is not a number"));
                if (!(*mos >= kMosMin && *mos <= kMosMax))
                    throw Error(ErrorCode::MosOutOfRange,
                                at_line(line_number, "mos " + value + " outside [1, 5]"));
                rec.mos = *mos;
                break;
            }
            case Column::LogitPath:
                if (value.empty())
                    throw Error(ErrorCode::MissingField, at_line(line_number, "empty logit_path"));
                rec.logit_path = std::filesystem::path(value);
                if (rec.logit_path.is_relative() && !base_dir.empty())
                    rec.logit_path = base_dir / rec.logit_path;
                break;
            case Column::TaskId:
                if (value.empty())
                    throw Error(ErrorCode::MissingField, at_line(line_number, "empty task_id"));
                rec.task_id = std::move(value);
                break;
            case Column::TranscriptRef:
                if (!value.empty())
                    rec.transcript_ref = std::move(value);
                break;
            case Column::SystemId:
                if (!value.empty())
                    rec.system_id = std::move(value);
                break;
            }
        }
        if (!seen_ids.insert(rec.utterance_id).second)
            throw Error(ErrorCode::DuplicateUtteranceId,
                        at_line(line_number, "utterance_id '" + rec.utterance_id + "' repeated"));
        records.push_back(std::move(rec));
    }
    if (!have_header)
        throw Error(ErrorCode::MissingField, "line 1: manifest has no header row");
    return records;
}

std::vector<UtteranceRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open manifest " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_manifest(buf.str(), path.parent_path());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

void write_manifest(const std::vector<UtteranceRecord>& records, const std::filesystem::path& path) {
    bool with_transcript = false;
    bool with_system = false;
    for (const auto& r : records) {
        with_transcript |= r.transcript_ref.has_value();
        with_system |= r.system_id.has_value();
    }

    std::ostringstream out;
    out << "utterance_id,mos,logit_path,task_id";
    if (with_transcript)
        out << ",transcript_ref";
    if (with_system)
        out << ",system_id";
    out << '\n';

    const auto dir = path.parent_path();
    for (const auto& r : records) {
        std::filesystem::path logit = r.logit_path;
        if (!dir.empty() && logit.is_absolute() == dir.is_absolute()) {
            auto rel = logit.lexically_relative(dir);
            if (!rel.empty() && *rel.begin() != "..")
                logit = rel;
        }
        out << csv_escape(r.utterance_id) << ',' << detail::shortest(r.mos) << ','
            << csv_escape(logit.generic_string()) << ',' << csv_escape(r.task_id);
        if (with_transcript)
            out << ',' << csv_escape(r.transcript_ref.value_or(""));
        if (with_system)
            out << ',' << csv_escape(r.system_id.value_or(""));
        out << '\n';
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    file << out.str();
    file.flush();
    if (!file)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

} // namespace umtk
