// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "umtk/um.hpp"

#include <algorithm>
#include <cmath>

#include "umtk/error.hpp"
#include "umtk/kernels.hpp"

namespace umtk {

namespace {

template <typename T>
void check_row(std::span<const T> row) {
    if (row.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "entropy needs at least 2 logits per window");
    for (std::size_t i = 0; i < row.size(); ++i)
        if (!std::isfinite(row[i]))
            throw Error(ErrorCode::NonFiniteInput, "non-finite logit at index " + std::to_string(i));
}

double clamp_entropy(double h, std::size_t q) { return std::clamp(h, 0.0, std::log(static_cast<double>(q))); }

// Matrix rows are validated on construction, so these skip the checks.
double row_mean(const kernels::RowKernels& k, std::span<const float> row) {
    return k.sum(row) / static_cast<double>(row.size());
}

double row_sd(const kernels::RowKernels& k, std::span<const float> row, double mean) {
    return std::sqrt(k.squared_deviation(row, mean) / static_cast<double>(row.size()));
}

double row_entropy(const kernels::RowKernels& k, std::span<const float> row) {
    return clamp_entropy(k.softmax_entropy(row), row.size());
}

} // namespace

std::string_view um_name(UmKind kind) noexcept {
    switch (kind) {
    case UmKind::Mean: return "mean";
    case UmKind::Max: return "max";
    case UmKind::Sd: return "sd";
    case UmKind::Entropy: return "entropy";
    }
    return "";
}

double UMVector::get(UmKind kind) const noexcept {
    switch (kind) {
    case UmKind::Mean: return mean;
    case UmKind::Max: return max;
    case UmKind::Sd: return sd;
    case UmKind::Entropy: return entropy;
    }
    return 0.0;
}

double window_entropy(std::span<const float> row) {
    check_row(row);
    return row_entropy(kernels::active(), row);
}

double window_entropy(std::span<const double> row) {
    check_row(row);
    const double top = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    double weighted = 0.0;
    for (double v : row) {
        const double d = v - top;
        const double e = std::exp(d);
        z += e;
        weighted += e * d;
    }
    return clamp_entropy(std::log(z) - weighted / z, row.size());
}

double um_entropy(const LogitMatrix& matrix) {
    const auto& k = kernels::active();
    double acc = 0.0;
    for (std::size_t i = 0; i < matrix.windows(); ++i)
        acc += row_entropy(k, matrix.row(i));
    return acc / static_cast<double>(matrix.windows());
}

double um_reduce(const LogitMatrix& matrix, Reduction r) {
    const auto& k = kernels::active();
    double acc = 0.0;
    for (std::size_t i = 0; i < matrix.windows(); ++i) {
        const auto row = matrix.row(i);
        switch (r) {
        case Reduction::Mean: acc += row_mean(k, row); break;
        case Reduction::Max: acc += k.max(row); break;
        case Reduction::Sd: acc += row_sd(k, row, row_mean(k, row)); break;
        }
    }
    return acc / static_cast<double>(matrix.windows());
}

UMVector compute_um_vector(const LogitMatrix& matrix) {
    const auto& k = kernels::active();
    UMVector sums;
    for (std::size_t i = 0; i < matrix.windows(); ++i) {
        const auto row = matrix.row(i);
        const double mean = row_mean(k, row);
        sums.mean += mean;
        sums.max += k.max(row);
        sums.sd += row_sd(k, row, mean);
        sums.entropy += row_entropy(k, row);
    }
    const auto w = static_cast<double>(matrix.windows());
    return UMVector{sums.mean / w, sums.max / w, sums.sd / w, sums.entropy / w};
}

} // namespace umtk
