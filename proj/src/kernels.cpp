#include "lexidepth/kernels.hpp"

#include <cmath>

#if defined(LEXIDEPTH_HAVE_AVX2_KERNELS)
#include <immintrin.h>
#endif

namespace lexidepth::kernels {

SignSum2D spatial_sign_sum_2d_scalar(double qx, double qy, const double* xs, const double* ys,
                                     std::size_t n) {
    SignSum2D acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        const double d2 = dx * dx + dy * dy;
        if (d2 == 0.0) {
            ++acc.coincident;
            continue;
        }
        const double norm = std::sqrt(d2);
        acc.sx += dx / norm;
        acc.sy += dy / norm;
    }
    return acc;
}

void squared_distances_2d_scalar(double qx, double qy, const double* xs, const double* ys,
                                 std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        out[i] = dx * dx + dy * dy;
    }
}

#if defined(LEXIDEPTH_HAVE_AVX2_KERNELS)

__attribute__((target("avx2")))
SignSum2D spatial_sign_sum_2d_avx2(double qx, double qy, const double* xs, const double* ys,
                                   std::size_t n) {
    SignSum2D acc;
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    const __m256d zero = _mm256_setzero_pd();
    __m256d sum_x = zero;
    __m256d sum_y = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs + i));
        const __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys + i));
        const __m256d d2 =
            _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        const __m256d is_zero = _mm256_cmp_pd(d2, zero, _CMP_EQ_OQ);
        const int zmask = _mm256_movemask_pd(is_zero);
        acc.coincident += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(zmask)));
        const __m256d norm = _mm256_sqrt_pd(d2);
        // coincident lanes divide 0/0; blend the NaNs away
        const __m256d ux = _mm256_blendv_pd(_mm256_div_pd(dx, norm), zero, is_zero);
        const __m256d uy = _mm256_blendv_pd(_mm256_div_pd(dy, norm), zero, is_zero);
        sum_x = _mm256_add_pd(sum_x, ux);
        sum_y = _mm256_add_pd(sum_y, uy);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, sum_x);
    acc.sx = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    _mm256_store_pd(lanes, sum_y);
    acc.sy = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        const double d2 = dx * dx + dy * dy;
        if (d2 == 0.0) {
            ++acc.coincident;
            continue;
        }
        const double norm = std::sqrt(d2);
        acc.sx += dx / norm;
        acc.sy += dy / norm;
    }
    return acc;
}

__attribute__((target("avx2")))
void squared_distances_2d_avx2(double qx, double qy, const double* xs, const double* ys,
                               std::size_t n, double* out) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs + i));
        const __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys + i));
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    }
    for (; i < n; ++i) {
        const double dx = qx - xs[i];
        const double dy = qy - ys[i];
        out[i] = dx * dx + dy * dy;
    }
}

#endif  // LEXIDEPTH_HAVE_AVX2_KERNELS

namespace {

Backend detect_backend() {
#if defined(LEXIDEPTH_HAVE_AVX2_KERNELS)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend g_backend = detect_backend();

}  // namespace

Backend active_backend() { return g_backend; }

bool force_backend(Backend b) {
    if (b == Backend::scalar) {
        g_backend = b;
        return true;
    }
#if defined(LEXIDEPTH_HAVE_AVX2_KERNELS)
    if (b == Backend::avx2 && __builtin_cpu_supports("avx2")) {
        g_backend = b;
        return true;
    }
#endif
    return false;
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

SignSum2D spatial_sign_sum_2d(double qx, double qy, const double* xs, const double* ys,
                              std::size_t n) {
#if defined(LEXIDEPTH_HAVE_AVX2_KERNELS)
    if (g_backend == Backend::avx2) return spatial_sign_sum_2d_avx2(qx, qy, xs, ys, n);
#endif
    return spatial_sign_sum_2d_scalar(qx, qy, xs, ys, n);
}

void squared_distances_2d(double qx, double qy, const double* xs, const double* ys,
                          std::size_t n, double* out) {
#if defined(LEXIDEPTH_HAVE_AVX2_KERNELS)
    if (g_backend == Backend::avx2) {
        squared_distances_2d_avx2(qx, qy, xs, ys, n, out);
        return;
    }
#endif
    squared_distances_2d_scalar(qx, qy, xs, ys, n, out);
}

}  // namespace lexidepth::kernels
