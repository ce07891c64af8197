// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <sstream>

#include "detail/strings.hpp"
#include "umtk/error.hpp"
#include "umtk/stats.hpp"

namespace umtk {

namespace {

std::size_t parse_index(std::string_view text, std::size_t line_number) {
    std::size_t value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw Error(ErrorCode::MalformedVocab,
                    "line " + std::to_string(line_number) + ": bad index '" + std::string(text) + "'");
    return value;
}

} // namespace

Vocabulary parse_vocabulary(std::string_view text) {
    Vocabulary vocab;
    std::optional<std::size_t> blank;
    bool in_directives = true;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_number;
        if (line.ends_with('\r'))
            line.remove_suffix(1);

        if (in_directives && line.starts_with("#blank=")) {
            blank = parse_index(line.substr(7), line_number);
            continue;
        }
        if (in_directives && line.starts_with("#word_delim=")) {
            vocab.word_delimiter = parse_index(line.substr(12), line_number);
            continue;
        }
        in_directives = false;
        vocab.tokens.emplace_back(line);
    }
    if (!blank)
        throw Error(ErrorCode::MalformedVocab, "missing #blank=<index> directive");
    vocab.blank = *blank;
    if (vocab.tokens.size() < 2)
        throw Error(ErrorCode::MalformedVocab, "vocabulary needs at least 2 tokens");
    if (vocab.blank >= vocab.tokens.size())
        throw Error(ErrorCode::MalformedVocab, "blank index " + std::to_string(vocab.blank) + " out of range");
    if (vocab.word_delimiter && *vocab.word_delimiter >= vocab.tokens.size())
        throw Error(ErrorCode::MalformedVocab,
                    "word delimiter index " + std::to_string(*vocab.word_delimiter) + " out of range");
    if (vocab.word_delimiter == vocab.blank)
        throw Error(ErrorCode::MalformedVocab, "blank and word delimiter must differ");
    return vocab;
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open vocabulary " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_vocabulary(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

std::vector<std::size_t> ctc_greedy_tokens(const LogitMatrix& matrix, const Vocabulary& vocab) {
    if (matrix.vocab() != vocab.tokens.size())
        throw Error(ErrorCode::VocabSizeMismatch, "logits have " + std::to_string(matrix.vocab()) +
                                                      " columns, vocabulary has " +
                                                      std::to_string(vocab.tokens.size()) + " tokens");
    std::vector<std::size_t> out;
    std::optional<std::size_t> previous;
    for (std::size_t w = 0; w < matrix.windows(); ++w) {
        const auto row = matrix.row(w);
        std::size_t best = 0;
        for (std::size_t j = 1; j < row.size(); ++j)
            if (row[j] > row[best])
                best = j;
        if (best != previous && best != vocab.blank)
            out.push_back(best);
        previous = best;
    }
    return out;
}

std::vector<std::string> ctc_greedy_decode(const LogitMatrix& matrix, const Vocabulary& vocab) {
    std::vector<std::string> words;
    std::string current;
    for (std::size_t id : ctc_greedy_tokens(matrix, vocab)) {
        if (!vocab.word_delimiter) {
            words.push_back(vocab.tokens[id]);
            continue;
        }
        if (id == *vocab.word_delimiter) {
            if (!current.empty())
                words.push_back(std::move(current));
            current.clear();
        } else {
            current += vocab.tokens[id];
        }
    }
    if (!current.empty())
        words.push_back(std::move(current));
    return words;
}

} // namespace umtk
