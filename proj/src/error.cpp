// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/error.hpp"

namespace umtk {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedMetadata: return "MalformedMetadata";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::MosOutOfRange: return "MosOutOfRange";
    case ErrorCode::DuplicateUtteranceId: return "DuplicateUtteranceId";
    case ErrorCode::MalformedVocab: return "MalformedVocab";
    case ErrorCode::VocabSizeMismatch: return "VocabSizeMismatch";
    case ErrorCode::MalformedReport: return "MalformedReport";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::TooFewUtterances: return "TooFewUtterances";
    case ErrorCode::AllFilesUnreadable: return "AllFilesUnreadable";
    case ErrorCode::MissingBaseline: return "MissingBaseline";
    case ErrorCode::TooFewSweepPoints: return "TooFewSweepPoints";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_format_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::IoFailure:
    case ErrorCode::MalformedHeader:
    case ErrorCode::MalformedMetadata:
    case ErrorCode::UnsupportedDtype:
    case ErrorCode::UnsupportedShape:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::MalformedLine:
    case ErrorCode::MissingField:
    case ErrorCode::MosOutOfRange:
    case ErrorCode::DuplicateUtteranceId:
    case ErrorCode::MalformedVocab:
    case ErrorCode::VocabSizeMismatch:
    case ErrorCode::MalformedReport:
        return true;
    default:
        return false;
    }
}

} // namespace umtk
