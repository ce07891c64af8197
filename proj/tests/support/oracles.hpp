// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

// Slow, independent reference implementations used by the unit and
// acceptance suites. Nothing here calls into the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

namespace umtk::testing {

// Direct -sum p ln p in long double, no max subtraction beyond what exp needs.
inline long double entropy_oracle(std::span<const float> row) {
    long double top = row[0];
    for (float v : row)
        top = std::max<long double>(top, v);
    long double z = 0.0L;
    for (float v : row)
        z += std::exp(static_cast<long double>(v) - top);
    long double h = 0.0L;
    for (float v : row) {
        const long double p = std::exp(static_cast<long double>(v) - top) / z;
        if (p > 0.0L)
            h -= p * std::log(p);
    }
    return h;
}

// Rank by counting: (#smaller) + (#equal + 1) / 2. Quadratic on purpose.
inline std::vector<long double> counting_ranks(std::span<const double> v) {
    std::vector<long double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0;
        std::size_t equal = 0;
        for (double u : v) {
            less += u < v[i];
            equal += u == v[i];
        }
        r[i] = static_cast<long double>(less) + (static_cast<long double>(equal) + 1.0L) / 2.0L;
    }
    return r;
}

inline long double pearson(std::span<const long double> a, std::span<const long double> b) {
    const auto n = static_cast<long double>(a.size());
    long double ma = 0.0L;
    long double mb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    long double sab = 0.0L;
    long double saa = 0.0L;
    long double sbb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline long double spearman_oracle(std::span<const double> x, std::span<const double> y) {
    const auto rx = counting_ranks(x);
    const auto ry = counting_ranks(y);
    return pearson(rx, ry);
}

inline std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i)
        d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j)
        d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

// Series with a controllable share of tied values drawn from a small pool.
inline std::vector<double> tied_series(std::mt19937_64& rng, std::size_t n, double tie_mass) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    std::vector<double> v(n);
    for (double& x : v)
        x = unit(rng) < tie_mass ? std::floor(unit(rng) * 4.0) : normal(rng);
    return v;
}

inline bool is_constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("umtk_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace umtk::testing
