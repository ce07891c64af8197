// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>

#include "umtk/error.hpp"
#include "umtk/stats.hpp"

namespace umtk {

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty())
                words.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (!current.empty())
        words.push_back(std::move(current));
    return words;
}

WerBreakdown wer(std::span<const std::string> reference, std::span<const std::string> hypothesis) {
    if (reference.empty())
        throw Error(ErrorCode::EmptyReference, "reference has no words");

    const std::size_t rows = reference.size() + 1;
    const std::size_t cols = hypothesis.size() + 1;
    std::vector<std::size_t> cost(rows * cols);
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * cols + j]; };
    for (std::size_t i = 0; i < rows; ++i)
        at(i, 0) = i;
    for (std::size_t j = 0; j < cols; ++j)
        at(0, j) = j;
    for (std::size_t i = 1; i < rows; ++i)
        for (std::size_t j = 1; j < cols; ++j) {
            const std::size_t diagonal = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
            at(i, j) = std::min({diagonal, at(i - 1, j) + 1, at(i, j - 1) + 1});
        }

    WerBreakdown out;
    out.ref_words = reference.size();
    std::size_t i = rows - 1;
    std::size_t j = cols - 1;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0) {
            const bool same = reference[i - 1] == hypothesis[j - 1];
            if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
                if (!same)
                    ++out.substitutions;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            ++out.deletions;
            --i;
        } else {
            ++out.insertions;
            --j;
        }
    }
    out.wer = static_cast<double>(out.errors()) / static_cast<double>(out.ref_words);
    return out;
}

WerBreakdown wer(std::string_view reference, std::string_view hypothesis) {
    const auto ref = tokenize_words(reference);
    const auto hyp = tokenize_words(hypothesis);
    return wer(std::span<const std::string>(ref), std::span<const std::string>(hyp));
}

WerBreakdown corpus_wer(std::span<const WerBreakdown> utterances) {
    WerBreakdown total;
    for (const auto& u : utterances) {
        total.substitutions += u.substitutions;
        total.deletions += u.deletions;
        total.insertions += u.insertions;
        total.ref_words += u.ref_words;
    }
    if (total.ref_words == 0)
        throw Error(ErrorCode::EmptyReference, "corpus has no reference words");
    total.wer = static_cast<double>(total.errors()) / static_cast<double>(total.ref_words);
    return total;
}

} // namespace umtk
