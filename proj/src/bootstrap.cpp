// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numbers>

#include "umtk/error.hpp"
#include "umtk/parallel.hpp"
#include "umtk/stats.hpp"

namespace umtk {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Xorshift64Star::Xorshift64Star(std::uint64_t seed) noexcept : state_(splitmix64(seed)) {
    if (state_ == 0)
        state_ = 0x9E3779B97F4A7C15ULL;
}

Xorshift64Star Xorshift64Star::for_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
    return Xorshift64Star(seed ^ splitmix64(stream + 0xD1B54A32D192ED03ULL));
}

std::uint64_t Xorshift64Star::next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t Xorshift64Star::below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double Xorshift64Star::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Xorshift64Star::normal() noexcept {
    if (spare_normal_) {
        const double v = *spare_normal_;
        spare_normal_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

namespace {

bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double percentile(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

ConfidenceInterval bootstrap_ci(const PairedSeries& series, const BootstrapOptions& options, unsigned workers) {
    if (options.resamples < 100)
        throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 100 resamples");
    if (!(options.level > 0.0 && options.level < 1.0))
        throw Error(ErrorCode::InvalidArgument, "confidence level must lie in (0, 1)");
    spearman(series); // degenerate base series surface here

    const std::size_t n = series.size();
    std::vector<double> stats(options.resamples);
    parallel_for(options.resamples, workers, [&](std::size_t b) {
        auto rng = Xorshift64Star::for_stream(options.seed, b);
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (int attempt = 0; attempt < kBootstrapMaxRedraws; ++attempt) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto pick = rng.below(n);
                x[i] = series.x()[pick];
                y[i] = series.y()[pick];
            }
            if (!is_constant(x) && !is_constant(y)) {
                stats[b] = spearman(PairedSeries(x, y));
                return;
            }
        }
        throw Error(ErrorCode::DegenerateSeries,
                    "bootstrap resample " + std::to_string(b) + " stayed constant after " +
                        std::to_string(kBootstrapMaxRedraws) + " redraws");
    });

    std::sort(stats.begin(), stats.end());
    const double tail = 0.5 * (1.0 - options.level);
    return ConfidenceInterval{percentile(stats, tail), percentile(stats, 1.0 - tail)};
}

} // namespace umtk
