// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "umtk/error.hpp"
#include "umtk/stats.hpp"

namespace umtk {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw Error(ErrorCode::NonFiniteInput,
                        std::string(what) + " has a non-finite value at index " + std::to_string(i));
}

bool is_constant(std::span<const double> values) {
    return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

} // namespace

PairedSeries::PairedSeries(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size())
        throw Error(ErrorCode::LengthMismatch,
                    "x has " + std::to_string(x_.size()) + " values, y has " + std::to_string(y_.size()));
    if (x_.size() < 3)
        throw Error(ErrorCode::TooFewPairs, "correlation needs at least 3 pairs, got " + std::to_string(x_.size()));
    require_finite(x_, "x");
    require_finite(y_, "y");
}

std::vector<double> average_ranks(std::span<const double> values) {
    require_finite(values, "series");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(values.size());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && values[order[end]] == values[order[start]])
            ++end;
        // positions start..end-1 hold 1-based ranks start+1..end
        const double shared = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t i = start; i < end; ++i)
            ranks[order[i]] = shared;
        start = end;
    }
    return ranks;
}

double spearman(const PairedSeries& series) {
    if (is_constant(series.x()))
        throw Error(ErrorCode::DegenerateSeries, "x is constant; rank correlation undefined");
    if (is_constant(series.y()))
        throw Error(ErrorCode::DegenerateSeries, "y is constant; rank correlation undefined");

    const auto rx = average_ranks(series.x());
    const auto ry = average_ranks(series.y());
    // average ranks always have mean (n + 1) / 2
    const double centre = 0.5 * static_cast<double>(series.size() + 1);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - centre;
        const double dy = ry[i] - centre;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

} // namespace umtk
