// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace umtk {

/// Per-window logits of one utterance: `windows` rows of `vocab` float32
/// values, row-major. Always holds w >= 1, q >= 2 and finite values.
class LogitMatrix {
public:
    /// Throws UnsupportedShape, ShapeMismatch or NonFiniteValue.
    LogitMatrix(std::size_t windows, std::size_t vocab, std::vector<float> values);

    std::size_t windows() const noexcept { return windows_; }
    std::size_t vocab() const noexcept { return vocab_; }

    std::span<const float> row(std::size_t window) const noexcept {
        return {values_.data() + window * vocab_, vocab_};
    }
    std::span<const float> values() const noexcept { return values_; }

    /// Rows of `*this` followed by rows of `other`; vocab sizes must agree.
    LogitMatrix concatenated(const LogitMatrix& other) const;

    friend bool operator==(const LogitMatrix&, const LogitMatrix&) = default;

private:
    std::size_t windows_;
    std::size_t vocab_;
    std::vector<float> values_;
};

enum class LogitSource { Contrastive, AsrHead, EncoderRaw };

std::string_view to_string(LogitSource source) noexcept;
/// Throws MalformedMetadata on unknown names.
LogitSource logit_source_from_string(std::string_view name);

struct LogitFileMetadata {
    std::string utterance_id;
    std::string model_id;
    LogitSource logit_source = LogitSource::EncoderRaw;
    double dropout_p = 0.0;
    std::uint32_t num_passes = 1;
    std::uint32_t sample_rate_hz = 16000;

    /// Throws MalformedMetadata when p is outside [0, 1), k == 0, the
    /// sample rate is 0, or p == 0 with k != 1.
    void validate() const;

    friend bool operator==(const LogitFileMetadata&, const LogitFileMetadata&) = default;
};

struct LogitFile {
    LogitMatrix matrix;
    LogitFileMetadata metadata;
};

namespace format {
inline constexpr std::array<std::uint8_t, 4> kMagic{'U', 'M', 'L', 'G'};
inline constexpr std::uint8_t kVersionMajor = 0x01;
inline constexpr std::uint8_t kVersionMinor = 0x00;
inline constexpr std::uint8_t kDtypeFloat32LE = 0x01;
inline constexpr std::uint8_t kOrderRowMajor = 0x01;
inline constexpr std::size_t kHeaderSize = 22;
} // namespace format

/// Serializes to the UMLG exchange layout.
std::vector<std::uint8_t> encode_logit_file(const LogitMatrix& matrix, const LogitFileMetadata& meta);
LogitFile decode_logit_file(std::span<const std::uint8_t> bytes);

LogitFile read_logit_file(const std::filesystem::path& path);
void write_logit_file(const LogitMatrix& matrix, const LogitFileMetadata& meta,
                      const std::filesystem::path& path);

} // namespace umtk
