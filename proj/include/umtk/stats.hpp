// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "umtk/logit_file.hpp"

namespace umtk {

// ---------------------------------------------------------------------------
// Rank correlation

/// Two equally long finite series with n >= 3.
class PairedSeries {
public:
    /// Throws LengthMismatch, TooFewPairs or NonFiniteInput.
    PairedSeries(std::vector<double> x, std::vector<double> y);

    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> y() const noexcept { return y_; }
    std::size_t size() const noexcept { return x_.size(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

/// 1-based ranks; ties share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks. Throws DegenerateSeries when
/// either side is constant.
double spearman(const PairedSeries& series);

// ---------------------------------------------------------------------------
// Pseudorandom numbers

/// xorshift64* generator (Vigna). Fully specified so seeded streams are
/// reproducible across implementations.
class Xorshift64Star {
public:
    static constexpr std::string_view kAlgorithm = "xorshift64*";

    /// State = splitmix64(seed); a zero state is replaced by a fixed constant.
    explicit Xorshift64Star(std::uint64_t seed) noexcept;

    /// Independent stream `stream` derived from `seed`.
    static Xorshift64Star for_stream(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next() noexcept;
    /// Unbiased integer in [0, bound) by multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via Box-Muller.
    double normal() noexcept;

private:
    std::uint64_t state_;
    std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// ---------------------------------------------------------------------------
// Bootstrap

struct BootstrapOptions {
    std::size_t resamples = 1000;
    double level = 0.95;
    std::uint64_t seed = 0;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;

    friend bool operator==(const ConfidenceInterval&, const ConfidenceInterval&) = default;
};

/// Bounded redraws for a resample whose x or y comes out constant.
inline constexpr int kBootstrapMaxRedraws = 64;

/// Percentile interval of spearman over paired resamples with replacement.
/// Resample b draws from Xorshift64Star::for_stream(seed, b), so the result
/// does not depend on `workers`.
ConfidenceInterval bootstrap_ci(const PairedSeries& series, const BootstrapOptions& options,
                                unsigned workers = 1);

// ---------------------------------------------------------------------------
// Word error rate

struct WerBreakdown {
    std::size_t substitutions = 0;
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::size_t ref_words = 0;
    double wer = 0.0;

    std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

    friend bool operator==(const WerBreakdown&, const WerBreakdown&) = default;
};

/// Whitespace split with ASCII case folding; punctuation is kept.
std::vector<std::string> tokenize_words(std::string_view text);

/// Minimum edit alignment with unit costs. Among equal-cost alignments the
/// backtrace prefers substitutions, then deletions, then insertions.
/// Throws EmptyReference.
WerBreakdown wer(std::span<const std::string> reference, std::span<const std::string> hypothesis);

WerBreakdown wer(std::string_view reference, std::string_view hypothesis);

/// Corpus WER as total errors over total reference words.
WerBreakdown corpus_wer(std::span<const WerBreakdown> utterances);

// ---------------------------------------------------------------------------
// Greedy CTC decoding

struct Vocabulary {
    std::vector<std::string> tokens;
    std::size_t blank = 0;
    std::optional<std::size_t> word_delimiter;
};

/// One token per line after "#blank=<i>" and optional "#word_delim=<i>"
/// directive lines. Throws MalformedVocab.
Vocabulary parse_vocabulary(std::string_view text);
Vocabulary read_vocabulary(const std::filesystem::path& path);

/// Per-window argmax (ties to the lowest index), consecutive repeats
/// collapsed, blanks dropped. Throws VocabSizeMismatch.
std::vector<std::size_t> ctc_greedy_tokens(const LogitMatrix& matrix, const Vocabulary& vocab);

/// Greedy tokens joined into words at the delimiter token. Without a
/// delimiter every token is its own word.
std::vector<std::string> ctc_greedy_decode(const LogitMatrix& matrix, const Vocabulary& vocab);

} // namespace umtk
