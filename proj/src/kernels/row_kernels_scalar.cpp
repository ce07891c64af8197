// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include "umtk/kernels.hpp"

namespace umtk::kernels {

namespace {

double sum_scalar(std::span<const float> row) {
    double acc = 0.0;
    for (float v : row)
        acc += static_cast<double>(v);
    return acc;
}

float max_scalar(std::span<const float> row) {
    float best = row[0];
    for (float v : row.subspan(1))
        best = v > best ? v : best;
    return best;
}

double squared_deviation_scalar(std::span<const float> row, double mean) {
    double acc = 0.0;
    for (float v : row) {
        const double d = static_cast<double>(v) - mean;
        acc += d * d;
    }
    return acc;
}

double softmax_entropy_scalar(std::span<const float> row) {
    const double top = max_scalar(row);
    double z = 0.0;
    double weighted = 0.0;
    for (float v : row) {
        const double d = static_cast<double>(v) - top;
        const double e = std::exp(d);
        z += e;
        weighted += e * d;
    }
    return std::log(z) - weighted / z;
}

} // namespace

const RowKernels& scalar_kernels() noexcept {
    static const RowKernels k{Isa::Scalar, &sum_scalar, &max_scalar, &squared_deviation_scalar,
                              &softmax_entropy_scalar};
    return k;
}

} // namespace umtk::kernels
