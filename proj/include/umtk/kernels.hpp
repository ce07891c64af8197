// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Per-window row kernels behind the uncertainty measures. Every kernel has a
// scalar reference implementation; an AVX2 variant is selected at runtime
// when the CPU supports it. Inputs are float32 logits, results are double.
//
// Scalar kernels accumulate strictly left to right. AVX2 kernels accumulate
// in fixed lane order, so each ISA is deterministic on its own but the two
// may differ in the last bits. Set UMTK_KERNEL=scalar to pin the reference.

#include <optional>
#include <span>
#include <string_view>

namespace umtk::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;
std::optional<Isa> isa_from_string(std::string_view name) noexcept;

struct RowKernels {
    Isa isa;
    /// Sum of the row.
    double (*sum)(std::span<const float> row);
    /// Largest element.
    float (*max)(std::span<const float> row);
    /// Sum of squared deviations from `mean`.
    double (*squared_deviation)(std::span<const float> row, double mean);
    /// Entropy in nats of softmax(row), unclamped. Uses ln Z - sum(p*d)
    /// with d = row - max(row), Z = sum(exp(d)).
    double (*softmax_entropy)(std::span<const float> row);
};

const RowKernels& scalar_kernels() noexcept;

/// nullptr when the build or the CPU lacks AVX2+FMA.
const RowKernels* avx2_kernels() noexcept;

/// Best supported ISA, overridden by UMTK_KERNEL=scalar|avx2 when set.
Isa detect_isa() noexcept;

/// Kernels used by the uncertainty measures.
const RowKernels& active() noexcept;

/// Returns false, leaving the selection unchanged, if `isa` is unsupported.
bool select(Isa isa) noexcept;

/// exp(x) for x <= 0, four lanes at a time; results below exp(-708) flush to 0.
/// Exposed for accuracy tests. Requires avx2_kernels() != nullptr.
void exp_nonpositive_avx2(std::span<const double> in, std::span<double> out);

} // namespace umtk::kernels
