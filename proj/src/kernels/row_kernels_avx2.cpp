// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "umtk/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define UMTK_AVX2_BUILD 1
#include <immintrin.h>
#else
#define UMTK_AVX2_BUILD 0
#endif

namespace umtk::kernels {

#if UMTK_AVX2_BUILD

#define UMTK_AVX2 __attribute__((target("avx2,fma")))

namespace {

UMTK_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi); // (l0+h0, l1+h1)
    return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

UMTK_AVX2 inline float hmax(__m256 v) {
    __m128 m = _mm_max_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
    m = _mm_max_ps(m, _mm_movehl_ps(m, m));
    m = _mm_max_ss(m, _mm_shuffle_ps(m, m, 0x55));
    return _mm_cvtss_f32(m);
}

// Range reduction x = n*ln2 + r, |r| <= ln2/2, then a degree-13 Taylor
// polynomial for exp(r) and an exponent-field scale by 2^n.
UMTK_AVX2 inline __m256d exp_nonpositive(__m256d x) {
    const __m256d floor_x = _mm256_set1_pd(-708.0);
    const __m256d underflow = _mm256_cmp_pd(x, floor_x, _CMP_LT_OQ);
    x = _mm256_max_pd(x, floor_x);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

    static constexpr double kInvFactorial[] = {
        1.0,
        1.0,
        1.0 / 2,
        1.0 / 6,
        1.0 / 24,
        1.0 / 120,
        1.0 / 720,
        1.0 / 5040,
        1.0 / 40320,
        1.0 / 362880,
        1.0 / 3628800,
        1.0 / 39916800,
        1.0 / 479001600,
        1.0 / 6227020800.0,
    };
    __m256d p = _mm256_set1_pd(kInvFactorial[13]);
    for (int k = 12; k >= 0; --k)
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFactorial[k]));

    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i bits = _mm256_add_epi64(_mm256_cvtepi32_epi64(n32), _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    const __m256d scaled = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
    return _mm256_andnot_pd(underflow, scaled);
}

UMTK_AVX2 double sum_avx2(std::span<const float> row) {
    const float* data = row.data();
    const std::size_t size = row.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= size; i += 8) {
        const __m256 v = _mm256_loadu_ps(data + i);
        acc0 = _mm256_add_pd(acc0, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
        acc1 = _mm256_add_pd(acc1, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < size; ++i)
        acc += static_cast<double>(data[i]);
    return acc;
}

UMTK_AVX2 float max_avx2(std::span<const float> row) {
    const float* data = row.data();
    const std::size_t size = row.size();
    float best = data[0];
    std::size_t i = 0;
    if (size >= 8) {
        __m256 m = _mm256_loadu_ps(data);
        for (i = 8; i + 8 <= size; i += 8)
            m = _mm256_max_ps(m, _mm256_loadu_ps(data + i));
        best = hmax(m);
    }
    for (; i < size; ++i)
        best = data[i] > best ? data[i] : best;
    return best;
}

UMTK_AVX2 double squared_deviation_avx2(std::span<const float> row, double mean) {
    const float* data = row.data();
    const std::size_t size = row.size();
    const __m256d mu = _mm256_set1_pd(mean);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= size; i += 8) {
        const __m256 v = _mm256_loadu_ps(data + i);
        const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(v)), mu);
        const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)), mu);
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < size; ++i) {
        const double d = static_cast<double>(data[i]) - mean;
        acc += d * d;
    }
    return acc;
}

UMTK_AVX2 double softmax_entropy_avx2(std::span<const float> row) {
    const float* data = row.data();
    const std::size_t size = row.size();
    const double top = max_avx2(row);
    const __m256d top_v = _mm256_set1_pd(top);
    __m256d z_acc = _mm256_setzero_pd();
    __m256d w_acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= size; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_cvtps_pd(_mm_loadu_ps(data + i)), top_v);
        const __m256d e = exp_nonpositive(d);
        z_acc = _mm256_add_pd(z_acc, e);
        w_acc = _mm256_fmadd_pd(e, d, w_acc);
    }
    double z = hsum(z_acc);
    double weighted = hsum(w_acc);
    for (; i < size; ++i) {
        const double d = static_cast<double>(data[i]) - top;
        const double e = std::exp(d);
        z += e;
        weighted += e * d;
    }
    return std::log(z) - weighted / z;
}

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

} // namespace

const RowKernels* avx2_kernels() noexcept {
    static const RowKernels k{Isa::Avx2, &sum_avx2, &max_avx2, &squared_deviation_avx2,
                              &softmax_entropy_avx2};
    static const bool supported = cpu_has_avx2();
    return supported ? &k : nullptr;
}

UMTK_AVX2 static void exp_block(const double* in, double* out) {
    _mm256_storeu_pd(out, exp_nonpositive(_mm256_loadu_pd(in)));
}

void exp_nonpositive_avx2(std::span<const double> in, std::span<double> out) {
    double block_in[4];
    double block_out[4];
    for (std::size_t i = 0; i < in.size(); i += 4) {
        const std::size_t n = std::min<std::size_t>(4, in.size() - i);
        for (std::size_t j = 0; j < 4; ++j)
            block_in[j] = j < n ? in[i + j] : 0.0;
        exp_block(block_in, block_out);
        for (std::size_t j = 0; j < n; ++j)
            out[i + j] = block_out[j];
    }
}

#else

const RowKernels* avx2_kernels() noexcept { return nullptr; }

void exp_nonpositive_avx2(std::span<const double>, std::span<double>) {}

#endif

} // namespace umtk::kernels
