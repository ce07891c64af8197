// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <span>
#include <string_view>

#include "umtk/logit_file.hpp"

namespace umtk {

/// Audio-level uncertainty measures, in reporting order.
enum class UmKind { Mean, Max, Sd, Entropy };

inline constexpr std::array<UmKind, 4> kAllUms{UmKind::Mean, UmKind::Max, UmKind::Sd, UmKind::Entropy};

/// "mean", "max", "sd" or "entropy".
std::string_view um_name(UmKind kind) noexcept;

/// Per-window reduction applied to raw logits.
enum class Reduction { Mean, Max, Sd };

/// The four measures of one utterance. Entropy is in nats.
struct UMVector {
    double mean = 0.0;
    double max = 0.0;
    double sd = 0.0;
    double entropy = 0.0;

    double get(UmKind kind) const noexcept;

    friend bool operator==(const UMVector&, const UMVector&) = default;
};

/// Entropy (nats) of softmax(row), clamped to [0, ln q].
/// Throws InvalidArgument for q < 2 and NonFiniteInput for NaN/Inf entries.
double window_entropy(std::span<const float> row);

/// Scalar double-precision variant, same contract.
double window_entropy(std::span<const double> row);

/// Mean of the per-window entropies.
double um_entropy(const LogitMatrix& matrix);

/// Applies `r` to each window's raw logits and averages over windows.
/// Sd is the population standard deviation.
double um_reduce(const LogitMatrix& matrix, Reduction r);

/// All four measures in one pass; bit-identical to the individual calls.
UMVector compute_um_vector(const LogitMatrix& matrix);

} // namespace umtk
