// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/logit_file.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "umtk/error.hpp"

namespace umtk {

namespace {

std::string position(std::size_t row, std::size_t col) {
    return "(" + std::to_string(row) + ", " + std::to_string(col) + ")";
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
    return v;
}

std::uint32_t float_bits(float f) { return std::bit_cast<std::uint32_t>(f); }

nlohmann::json metadata_to_json(const LogitFileMetadata& meta) {
    return nlohmann::json{
        {"utterance_id", meta.utterance_id},
        {"model_id", meta.model_id},
        {"logit_source", std::string(to_string(meta.logit_source))},
        {"dropout_p", meta.dropout_p},
        {"num_passes", meta.num_passes},
        {"sample_rate_hz", meta.sample_rate_hz},
    };
}

LogitFileMetadata metadata_from_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(ErrorCode::MalformedMetadata, "metadata block is not a JSON object");
    LogitFileMetadata meta;
    try {
        meta.utterance_id = j.at("utterance_id").get<std::string>();
        meta.model_id = j.at("model_id").get<std::string>();
        meta.logit_source = logit_source_from_string(j.at("logit_source").get<std::string>());
        meta.dropout_p = j.at("dropout_p").get<double>();
        meta.num_passes = j.at("num_passes").get<std::uint32_t>();
        meta.sample_rate_hz = j.at("sample_rate_hz").get<std::uint32_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedMetadata, e.what());
    }
    meta.validate();
    return meta;
}

} // namespace

LogitMatrix::LogitMatrix(std::size_t windows, std::size_t vocab, std::vector<float> values)
    : windows_(windows), vocab_(vocab), values_(std::move(values)) {
    if (windows_ < 1 || vocab_ < 2)
        throw Error(ErrorCode::UnsupportedShape,
                    "shape (" + std::to_string(windows_) + ", " + std::to_string(vocab_) +
                        ") requires w >= 1 and q >= 2");
    if (values_.size() != windows_ * vocab_)
        throw Error(ErrorCode::ShapeMismatch, std::to_string(values_.size()) + " values for shape (" +
                                                  std::to_string(windows_) + ", " +
                                                  std::to_string(vocab_) + ")");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw Error(ErrorCode::NonFiniteValue, "non-finite logit at " + position(i / vocab_, i % vocab_));
}

LogitMatrix LogitMatrix::concatenated(const LogitMatrix& other) const {
    if (other.vocab_ != vocab_)
        throw Error(ErrorCode::ShapeMismatch, "cannot concatenate matrices with different vocab sizes");
    std::vector<float> joined(values_);
    joined.insert(joined.end(), other.values_.begin(), other.values_.end());
    return LogitMatrix(windows_ + other.windows_, vocab_, std::move(joined));
}

std::string_view to_string(LogitSource source) noexcept {
    switch (source) {
    case LogitSource::Contrastive: return "contrastive";
    case LogitSource::AsrHead: return "asr_head";
    case LogitSource::EncoderRaw: return "encoder_raw";
    }
    return "encoder_raw";
}

LogitSource logit_source_from_string(std::string_view name) {
    if (name == "contrastive") return LogitSource::Contrastive;
    if (name == "asr_head") return LogitSource::AsrHead;
    if (name == "encoder_raw") return LogitSource::EncoderRaw;
    throw Error(ErrorCode::MalformedMetadata, "unknown logit_source '" + std::string(name) + "'");
}

void LogitFileMetadata::validate() const {
    if (!(dropout_p >= 0.0 && dropout_p < 1.0))
        throw Error(ErrorCode::MalformedMetadata, "dropout_p must lie in [0, 1)");
    if (num_passes == 0)
        throw Error(ErrorCode::MalformedMetadata, "num_passes must be positive");
    if (dropout_p == 0.0 && num_passes != 1)
        throw Error(ErrorCode::MalformedMetadata, "dropout_p = 0 requires num_passes = 1");
    if (sample_rate_hz == 0)
        throw Error(ErrorCode::MalformedMetadata, "sample_rate_hz must be positive");
}

std::vector<std::uint8_t> encode_logit_file(const LogitMatrix& matrix, const LogitFileMetadata& meta) {
    meta.validate();
    const std::string json = metadata_to_json(meta).dump();
    const auto payload = matrix.values();

    std::vector<std::uint8_t> out;
    out.reserve(format::kHeaderSize + json.size() + payload.size() * 4);
    out.insert(out.end(), format::kMagic.begin(), format::kMagic.end());
    out.push_back(format::kVersionMajor);
    out.push_back(format::kVersionMinor);
    out.push_back(0); // reserved
    out.push_back(0);
    out.push_back(format::kDtypeFloat32LE);
    out.push_back(format::kOrderRowMajor);
    put_u32(out, static_cast<std::uint32_t>(matrix.windows()));
    put_u32(out, static_cast<std::uint32_t>(matrix.vocab()));
    put_u32(out, static_cast<std::uint32_t>(json.size()));
    out.insert(out.end(), json.begin(), json.end());
    for (float v : payload)
        put_u32(out, float_bits(v));
    return out;
}

LogitFile decode_logit_file(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < format::kHeaderSize)
        throw Error(ErrorCode::MalformedHeader, "file shorter than the 22-byte header");
    if (!std::equal(format::kMagic.begin(), format::kMagic.end(), bytes.begin()))
        throw Error(ErrorCode::MalformedHeader, "bad magic");
    if (bytes[4] != format::kVersionMajor || bytes[5] != format::kVersionMinor)
        throw Error(ErrorCode::MalformedHeader, "unsupported version " + std::to_string(bytes[4]) + "." +
                                                    std::to_string(bytes[5]));
    if (bytes[6] != 0 || bytes[7] != 0)
        throw Error(ErrorCode::MalformedHeader, "reserved header bytes must be zero");
    if (bytes[8] != format::kDtypeFloat32LE)
        throw Error(ErrorCode::UnsupportedDtype, "dtype code " + std::to_string(bytes[8]));
    if (bytes[9] != format::kOrderRowMajor)
        throw Error(ErrorCode::MalformedHeader, "unsupported order code " + std::to_string(bytes[9]));

    const std::uint64_t windows = get_u32(bytes, 10);
    const std::uint64_t vocab = get_u32(bytes, 14);
    const std::uint64_t meta_len = get_u32(bytes, 18);
    if (windows < 1 || vocab < 2)
        throw Error(ErrorCode::UnsupportedShape, "shape (" + std::to_string(windows) + ", " +
                                                     std::to_string(vocab) + ") requires w >= 1 and q >= 2");
    if (bytes.size() - format::kHeaderSize < meta_len)
        throw Error(ErrorCode::MalformedHeader, "metadata block runs past end of file");

    const auto* meta_begin = reinterpret_cast<const char*>(bytes.data() + format::kHeaderSize);
    LogitFileMetadata meta = metadata_from_json(std::string_view(meta_begin, meta_len));

    const std::uint64_t payload_offset = format::kHeaderSize + meta_len;
    const std::uint64_t payload_bytes = bytes.size() - payload_offset;
    if (payload_bytes != windows * vocab * 4)
        throw Error(ErrorCode::ShapeMismatch, "payload has " + std::to_string(payload_bytes) +
                                                  " bytes, header declares " +
                                                  std::to_string(windows * vocab * 4));

    std::vector<float> values(windows * vocab);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::bit_cast<float>(get_u32(bytes, payload_offset + 4 * i));
        if (!std::isfinite(values[i]))
            throw Error(ErrorCode::NonFiniteValue, "non-finite logit at " + position(i / vocab, i % vocab));
    }
    return LogitFile{LogitMatrix(windows, vocab, std::move(values)), std::move(meta)};
}

LogitFile read_logit_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    try {
        return decode_logit_file(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.detail());
    }
}

void write_logit_file(const LogitMatrix& matrix, const LogitFileMetadata& meta,
                      const std::filesystem::path& path) {
    const auto bytes = encode_logit_file(matrix, meta);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

} // namespace umtk
