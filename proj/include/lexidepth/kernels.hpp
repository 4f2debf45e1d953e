#pragma once

#include <cstddef>
#include <string>

namespace lexidepth::kernels {

// Accumulated spatial sign (unit vector) sum of a query point against a
// planar reference cloud stored as separate coordinate arrays. This is the
// inner loop of every depth evaluation; grid rendering and the outlier
// Monte Carlo spend nearly all their time here.
struct SignSum2D {
    double sx = 0.0;
    double sy = 0.0;
    std::size_t coincident = 0;  // reference points equal to the query
};

// sum over i of (qx - xs[i], qy - ys[i]) / norm; coincident points
// contribute nothing but are counted
SignSum2D spatial_sign_sum_2d(double qx, double qy, const double* xs, const double* ys,
                              std::size_t n);

// Squared Euclidean distances from (qx, qy) to each reference point.
void squared_distances_2d(double qx, double qy, const double* xs, const double* ys,
                          std::size_t n, double* out);

// scalar reference implementations, always available
SignSum2D spatial_sign_sum_2d_scalar(double qx, double qy, const double* xs, const double* ys,
                                     std::size_t n);
void squared_distances_2d_scalar(double qx, double qy, const double* xs, const double* ys,
                                 std::size_t n, double* out);

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define LEXIDEPTH_HAVE_AVX2_KERNELS 1
SignSum2D spatial_sign_sum_2d_avx2(double qx, double qy, const double* xs, const double* ys,
                                   std::size_t n);
void squared_distances_2d_avx2(double qx, double qy, const double* xs, const double* ys,
                               std::size_t n, double* out);
#endif

enum class Backend { scalar, avx2 };

// Backend selected at startup from CPU capabilities; force_backend narrows
// it (tests use this for scalar/SIMD equivalence). Returns false when the
// requested backend is not supported on this CPU.
Backend active_backend();
bool force_backend(Backend b);
std::string backend_name(Backend b);

}  // namespace lexidepth::kernels
