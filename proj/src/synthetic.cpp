// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "umtk/error.hpp"
#include "umtk/harness.hpp"
#include "umtk/parallel.hpp"

namespace umtk {

namespace {

struct Planted {
    double quality = 0.0;
    nlohmann::json law_params;
    std::vector<float> logits;
};

std::string utterance_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "synth_%05zu", i);
    return buf;
}

// Centered standard-normal logits scaled by a quality-dependent temperature.
void temperature_law(const SyntheticSpec& spec, Xorshift64Star& rng, Planted& out) {
    const double t = synthetic_temperature(out.quality);
    std::vector<double> row(spec.vocab);
    for (std::size_t w = 0; w < spec.windows; ++w) {
        double sum = 0.0;
        for (double& v : row) {
            v = rng.normal();
            sum += v;
        }
        const double mean = sum / static_cast<double>(spec.vocab);
        for (double v : row)
            out.logits.push_back(static_cast<float>(t * (v - mean)));
    }
    out.law_params = {{"law", "temperature"}, {"temperature", t}};
}

// One target token per window sits kNoisePeakMargin above the rest; Gaussian
// noise with quality-dependent sd is added and the row is emitted as
// log-probabilities.
void noise_law(const SyntheticSpec& spec, Xorshift64Star& rng, Planted& out) {
    const double fraction = (out.quality - kMosMin) / (kMosMax - kMosMin);
    const double sd = spec.noise_sd_max - fraction * (spec.noise_sd_max - spec.noise_sd_min);
    std::vector<double> row(spec.vocab);
    for (std::size_t w = 0; w < spec.windows; ++w) {
        const std::size_t target = rng.below(spec.vocab);
        double top = -INFINITY;
        for (std::size_t j = 0; j < spec.vocab; ++j) {
            row[j] = (j == target ? kNoisePeakMargin : 0.0) + sd * rng.normal();
            top = std::max(top, row[j]);
        }
        double z = 0.0;
        for (double v : row)
            z += std::exp(v - top);
        const double log_z = top + std::log(z);
        for (double v : row)
            out.logits.push_back(static_cast<float>(v - log_z));
    }
    out.law_params = {{"law", "noise"}, {"noise_sd", sd}, {"peak_margin", kNoisePeakMargin}};
}

} // namespace

std::string_view to_string(QualityLaw law) noexcept {
    return law == QualityLaw::Noise ? "noise" : "temperature";
}

std::optional<QualityLaw> quality_law_from_string(std::string_view name) noexcept {
    if (name == "temperature")
        return QualityLaw::Temperature;
    if (name == "noise")
        return QualityLaw::Noise;
    return std::nullopt;
}

void SyntheticSpec::validate() const {
    if (n_utterances < 10)
        throw Error(ErrorCode::InvalidArgument, "synthetic sets need at least 10 utterances");
    if (windows < 1)
        throw Error(ErrorCode::InvalidArgument, "window count must be positive");
    if (vocab < 2)
        throw Error(ErrorCode::InvalidArgument, "vocab size must be at least 2");
    if (!(noise_sd_min > 0.0 && noise_sd_min <= noise_sd_max && std::isfinite(noise_sd_max)))
        throw Error(ErrorCode::InvalidArgument, "noise sd range must satisfy 0 < min <= max");
}

std::filesystem::path generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir,
                                         unsigned workers) {
    spec.validate();
    const auto logit_dir = out_dir / "logits";
    std::error_code ec;
    std::filesystem::create_directories(logit_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create " + logit_dir.string() + ": " + ec.message());

    const std::string task_id = "synthetic_" + std::string(to_string(spec.law));
    std::vector<UtteranceRecord> records(spec.n_utterances);
    std::vector<Planted> planted(spec.n_utterances);

    parallel_for(spec.n_utterances, workers, [&](std::size_t i) {
        auto rng = Xorshift64Star::for_stream(spec.seed, i);
        Planted& p = planted[i];
        p.quality = kMosMin + (kMosMax - kMosMin) * rng.uniform();
        p.logits.reserve(spec.windows * spec.vocab);
        if (spec.law == QualityLaw::Temperature)
            temperature_law(spec, rng, p);
        else
            noise_law(spec, rng, p);

        const std::string id = utterance_id(i);
        LogitFileMetadata meta;
        meta.utterance_id = id;
        meta.model_id = "synthetic-" + std::string(to_string(spec.law));
        meta.logit_source = LogitSource::EncoderRaw;
        const auto path = logit_dir / (id + ".umlg");
        write_logit_file(LogitMatrix(spec.windows, spec.vocab, std::move(p.logits)), meta, path);
        records[i] = UtteranceRecord{id, p.quality, path, task_id, std::nullopt, std::nullopt};
    });

    const auto manifest = out_dir / "manifest.csv";
    write_manifest(records, manifest);

    nlohmann::json truth = nlohmann::json::object();
    for (std::size_t i = 0; i < records.size(); ++i)
        truth[records[i].utterance_id] = {{"quality", planted[i].quality}, {"law_params", planted[i].law_params}};

    const auto truth_path = out_dir / "ground_truth.json";
    std::ofstream out(truth_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot open " + truth_path.string() + " for writing");
    out << truth.dump(2) << '\n';
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + truth_path.string());
    return manifest;
}

} // namespace umtk
