// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace umtk {

enum class ErrorCode {
    // logit files and manifests
    IoFailure,
    MalformedHeader,
    MalformedMetadata,
    UnsupportedDtype,
    UnsupportedShape,
    ShapeMismatch,
    NonFiniteValue,
    MalformedLine,
    MissingField,
    MosOutOfRange,
    DuplicateUtteranceId,
    MalformedVocab,
    VocabSizeMismatch,
    MalformedReport,
    // numerics and evaluation
    NonFiniteInput,
    LengthMismatch,
    TooFewPairs,
    DegenerateSeries,
    EmptyReference,
    TooFewUtterances,
    AllFilesUnreadable,
    MissingBaseline,
    TooFewSweepPoints,
    InvalidArgument,
};

/// Stable identifier used in diagnostics, e.g. "ShapeMismatch".
std::string_view error_name(ErrorCode code) noexcept;

/// True for errors caused by unreadable or malformed input files.
bool is_format_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }
    /// Message without the error-name prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace umtk
